#include "affdbg/rootdata.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace affdbg {

namespace {

constexpr int kMaxWeylOrder = 2000;

std::pair<char, int> split_type(const std::string& t) {
  if (t.size() < 2 || !std::isalpha(static_cast<unsigned char>(t[0])))
    throw ParseError("bad Cartan type '" + t + "'");
  char c = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  int n = 0;
  try {
    size_t used = 0;
    n = std::stoi(t.substr(1), &used);
    if (used != t.size() - 1) throw ParseError("bad Cartan type '" + t + "'");
  } catch (const std::logic_error&) {
    throw ParseError("bad Cartan type '" + t + "'");
  }
  return {c, n};
}

// Euclidean simple roots, possibly scaled by 2 to stay integral.
std::vector<std::vector<long long>> euclidean_simple_roots(const std::string& t) {
  auto [c, n] = split_type(t);
  std::vector<std::vector<long long>> a;
  auto e = [](int dim, std::initializer_list<std::pair<int, long long>> ent) {
    std::vector<long long> v(dim, 0);
    for (auto [i, x] : ent) v[i] = x;
    return v;
  };
  switch (c) {
    case 'A':
      if (n < 1) break;
      for (int i = 0; i < n; ++i) a.push_back(e(n + 1, {{i, 1}, {i + 1, -1}}));
      return a;
    case 'B':
    case 'C':
      if (n < 2) break;
      for (int i = 0; i + 1 < n; ++i) a.push_back(e(n, {{i, 1}, {i + 1, -1}}));
      a.push_back(e(n, {{n - 1, c == 'B' ? 1 : 2}}));
      return a;
    case 'D':
      if (n < 4) break;
      for (int i = 0; i + 1 < n; ++i) a.push_back(e(n, {{i, 1}, {i + 1, -1}}));
      a.push_back(e(n, {{n - 2, 1}, {n - 1, 1}}));
      return a;
    case 'E': {
      if (n < 6 || n > 8) break;
      a.push_back({1, -1, -1, -1, -1, -1, -1, 1});
      a.push_back(e(8, {{0, 2}, {1, 2}}));
      a.push_back(e(8, {{0, -2}, {1, 2}}));
      for (int i = 1; i + 1 < 7 && static_cast<int>(a.size()) < n; ++i) a.push_back(e(8, {{i, -2}, {i + 1, 2}}));
      a.resize(n);
      return a;
    }
    case 'F':
      if (n != 4) break;
      a.push_back(e(4, {{1, 2}, {2, -2}}));
      a.push_back(e(4, {{2, 2}, {3, -2}}));
      a.push_back(e(4, {{3, 2}}));
      a.push_back({1, -1, -1, -1});
      return a;
    case 'G':
      if (n != 2) break;
      a.push_back({1, -1, 0});   // short
      a.push_back({-2, 1, 1});   // long
      return a;
    default:
      break;
  }
  throw ParseError("unsupported Cartan type '" + t + "'");
}

long long dot(const std::vector<long long>& x, const std::vector<long long>& y) {
  long long s = 0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

std::string lattice_name(LatticeKind k) {
  switch (k) {
    case LatticeKind::Adjoint: return "adjoint";
    case LatticeKind::SimplyConnected: return "sc";
    case LatticeKind::GL: return "gl";
    case LatticeKind::Explicit: return "explicit";
  }
  return "?";
}

std::vector<long long> json_int_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of integers");
  std::vector<long long> v;
  for (auto& x : j) {
    if (!x.is_number_integer()) throw ParseError(std::string(what) + ": expected an array of integers");
    v.push_back(x.get<long long>());
  }
  return v;
}

}  // namespace

IntMatrix cartan_pairing(const std::string& type) {
  auto a = euclidean_simple_roots(type);
  int n = static_cast<int>(a.size());
  IntMatrix p(n, std::vector<long long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long long num = 2 * dot(a[i], a[j]), den = dot(a[i], a[i]);
      AFFDBG_ASSERT(num % den == 0, "non-integral Cartan entry");
      p[i][j] = num / den;
    }
  return p;
}

// ---------------------------------------------------------------- spec / json

DatumSpec DatumSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("root datum: expected a JSON object");
  DatumSpec s;
  if (!j.contains("type")) throw ParseError("root datum: missing 'type'");
  const auto& t = j["type"];
  if (t.is_string()) {
    s.types.push_back(t.get<std::string>());
  } else if (t.is_array() && !t.empty()) {
    for (auto& x : t) {
      if (!x.is_string()) throw ParseError("root datum: 'type' entries must be strings");
      s.types.push_back(x.get<std::string>());
    }
  } else {
    throw ParseError("root datum: 'type' must be a string or a nonempty list");
  }
  for (auto& ty : s.types) {
    auto [c, n] = split_type(ty);
    ty = std::string(1, c) + std::to_string(n);
  }
  const auto lat = j.value("lattice", nlohmann::json("adjoint"));
  if (lat.is_string()) {
    auto name = lat.get<std::string>();
    if (name == "adjoint") s.lattice = LatticeKind::Adjoint;
    else if (name == "sc" || name == "simply-connected") s.lattice = LatticeKind::SimplyConnected;
    else if (name == "gl") s.lattice = LatticeKind::GL;
    else throw ParseError("root datum: unknown lattice '" + name + "'");
  } else if (lat.is_object()) {
    s.lattice = LatticeKind::Explicit;
    if (!lat.contains("simple_roots") || !lat.contains("simple_coroots"))
      throw ParseError("root datum: explicit lattice needs simple_roots and simple_coroots");
    for (auto& r : lat["simple_roots"]) s.simple_roots.push_back(Coweight::from(json_int_vector(r, "simple_roots")));
    for (auto& r : lat["simple_coroots"]) s.simple_coroots.push_back(Coweight::from(json_int_vector(r, "simple_coroots")));
    if (lat.contains("sigma_matrix"))
      for (auto& r : lat["sigma_matrix"]) s.sigma_matrix.push_back(json_int_vector(r, "sigma_matrix"));
  } else {
    throw ParseError("root datum: 'lattice' must be a string or an object");
  }
  if (j.contains("sigma")) {
    auto v = json_int_vector(j["sigma"], "sigma");
    for (long long x : v) s.sigma.push_back(static_cast<int>(x) - 1);
    bool id = true;
    for (size_t i = 0; i < s.sigma.size(); ++i) id = id && s.sigma[i] == static_cast<int>(i);
    if (id) s.sigma.clear();
  }
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "type" && it.key() != "lattice" && it.key() != "sigma" && it.key() != "name")
      throw ParseError("root datum: unknown field '" + it.key() + "'");
  return s;
}

nlohmann::json DatumSpec::to_json() const {
  nlohmann::json j;
  j["type"] = types;
  if (lattice == LatticeKind::Explicit) {
    nlohmann::json lat;
    lat["simple_roots"] = nlohmann::json::array();
    for (auto& r : simple_roots) lat["simple_roots"].push_back(r.to_vector());
    lat["simple_coroots"] = nlohmann::json::array();
    for (auto& r : simple_coroots) lat["simple_coroots"].push_back(r.to_vector());
    if (!sigma_matrix.empty()) lat["sigma_matrix"] = sigma_matrix;
    j["lattice"] = lat;
  } else {
    j["lattice"] = lattice_name(lattice);
  }
  int l = 0;
  for (auto& t : types) l += split_type(t).second;
  std::vector<int> sg;
  for (int i = 0; i < l; ++i) sg.push_back(sigma.empty() ? i + 1 : sigma[i] + 1);
  j["sigma"] = sg;
  return j;
}

bool DatumSpec::operator==(const DatumSpec& o) const {
  return types == o.types && lattice == o.lattice && sigma == o.sigma && simple_roots == o.simple_roots &&
         simple_coroots == o.simple_coroots && sigma_matrix == o.sigma_matrix;
}

// ---------------------------------------------------------------- load

RootDatum RootDatum::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open root datum file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("root datum file '" + path + "': " + e.what());
  }
  return load_json(j);
}

RootDatum RootDatum::load(const DatumSpec& spec) {
  RootDatum d;
  d.spec_ = spec;
  if (spec.types.empty()) throw PreconditionError("root datum has no Cartan type");
  // block-diagonal pairing matrix
  std::vector<IntMatrix> blocks;
  for (auto& t : spec.types) {
    blocks.push_back(cartan_pairing(t));
    d.l_ += static_cast<int>(blocks.back().size());
  }
  d.P_.assign(d.l_, std::vector<long long>(d.l_, 0));
  int off = 0;
  for (size_t b = 0; b < blocks.size(); ++b) {
    std::vector<int> comp;
    int n = static_cast<int>(blocks[b].size());
    for (int i = 0; i < n; ++i) {
      comp.push_back(off + i);
      d.comp_of_.push_back(static_cast<int>(b));
      for (int j = 0; j < n; ++j) d.P_[off + i][off + j] = blocks[b][i][j];
    }
    d.comps_.push_back(comp);
    d.comp_types_.push_back(spec.types[b]);
    off += n;
  }
  int l = d.l_;
  switch (spec.lattice) {
    case LatticeKind::Adjoint:
      d.r_ = l;
      for (int i = 0; i < l; ++i) {
        Covector a(l);
        a[i] = 1;
        d.sroots_.push_back(a);
        Coweight c(l);
        for (int k = 0; k < l; ++k) c[k] = d.P_[i][k];
        d.scoroots_.push_back(c);
      }
      break;
    case LatticeKind::SimplyConnected:
      d.r_ = l;
      for (int i = 0; i < l; ++i) {
        Coweight c(l);
        c[i] = 1;
        d.scoroots_.push_back(c);
        Covector a(l);
        for (int k = 0; k < l; ++k) a[k] = d.P_[k][i];
        d.sroots_.push_back(a);
      }
      break;
    case LatticeKind::GL: {
      if (spec.types.size() != 1 || spec.types[0][0] != 'A')
        throw PreconditionError("the gl lattice requires a single type A component");
      d.r_ = l + 1;
      for (int i = 0; i < l; ++i) {
        Coweight c(d.r_);
        c[i] = 1;
        c[i + 1] = -1;
        d.sroots_.push_back(c);
        d.scoroots_.push_back(c);
      }
      break;
    }
    case LatticeKind::Explicit: {
      if (static_cast<int>(spec.simple_roots.size()) != l || static_cast<int>(spec.simple_coroots.size()) != l)
        throw PreconditionError("explicit lattice: need one root and one coroot per simple index");
      d.r_ = spec.simple_roots[0].n;
      if (d.r_ < 1 || d.r_ > kMaxRank) throw PreconditionError("explicit lattice: unsupported rank");
      for (int i = 0; i < l; ++i)
        if (spec.simple_roots[i].n != d.r_ || spec.simple_coroots[i].n != d.r_)
          throw PreconditionError("explicit lattice: inconsistent vector lengths");
      d.sroots_ = spec.simple_roots;
      d.scoroots_ = spec.simple_coroots;
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
          if (pairing(d.scoroots_[i], d.sroots_[j]) != d.P_[i][j])
            throw PreconditionError("explicit lattice: pairings do not match the Cartan matrix of the given type");
      IntMatrix cor(d.r_, std::vector<long long>(l));
      for (int i = 0; i < d.r_; ++i)
        for (int j = 0; j < l; ++j) cor[i][j] = d.scoroots_[j][i];
      if (rank_q(cor) != l) throw PreconditionError("explicit lattice: coroots are linearly dependent");
      break;
    }
  }
  if (d.r_ > kMaxRank) throw PreconditionError("lattice rank exceeds the supported maximum");
  d.build_roots();
  d.build_weyl();
  d.build_sigma();
  d.build_quotients();
  return d;
}

void RootDatum::build_roots() {
  int l = l_;
  using V = std::vector<long long>;
  std::map<V, V> found;  // root coeffs -> coroot coeffs
  std::deque<V> q;
  for (int i = 0; i < l; ++i) {
    V e(l, 0);
    e[i] = 1;
    found[e] = e;
    q.push_back(e);
  }
  while (!q.empty()) {
    V c = q.front();
    q.pop_front();
    V dco = found[c];
    for (int j = 0; j < l; ++j) {
      long long pc = 0, pd = 0;
      for (int k = 0; k < l; ++k) {
        pc += c[k] * P_[j][k];
        pd += dco[k] * P_[k][j];
      }
      V c2 = c, d2 = dco;
      c2[j] -= pc;
      d2[j] -= pd;
      if (!found.count(c2)) {
        found[c2] = d2;
        q.push_back(c2);
      }
    }
  }
  std::vector<std::pair<V, V>> pos;
  for (auto& [c, dco] : found) {
    bool nonneg = std::all_of(c.begin(), c.end(), [](long long x) { return x >= 0; });
    if (nonneg) pos.emplace_back(c, dco);
  }
  std::sort(pos.begin(), pos.end(), [](const auto& a, const auto& b) {
    long long ha = 0, hb = 0;
    for (auto x : a.first) ha += x;
    for (auto x : b.first) hb += x;
    if (ha != hb) return ha < hb;
    return a.first > b.first;
  });
  N_ = static_cast<int>(pos.size());
  if (2 * N_ != static_cast<int>(found.size())) throw InternalError("root system is not symmetric");
  roots_.assign(2 * N_, Covector(r_));
  coroots_.assign(2 * N_, Coweight(r_));
  root_coef_.assign(2 * N_, V(l, 0));
  for (int k = 0; k < N_; ++k) {
    Covector a(r_);
    Coweight c(r_);
    for (int i = 0; i < l; ++i) {
      a += sroots_[i] * pos[k].first[i];
      c += scoroots_[i] * pos[k].second[i];
    }
    roots_[k] = a;
    roots_[k + N_] = -a;
    coroots_[k] = c;
    coroots_[k + N_] = -c;
    root_coef_[k] = pos[k].first;
    for (int i = 0; i < l; ++i) root_coef_[k + N_][i] = -pos[k].first[i];
    AFFDBG_ASSERT(pairing(c, a) == 2, "root/coroot pairing");
  }
  for (int k = 0; k < 2 * N_; ++k) {
    if (root_lookup_.count(roots_[k])) throw PreconditionError("roots are not distinct in this lattice");
    root_lookup_[roots_[k]] = k;
  }
  simple_idx_.resize(l);
  for (int i = 0; i < l; ++i) simple_idx_[i] = root_lookup_.at(sroots_[i]);
  two_rho_ = Covector(r_);
  two_rho_check_ = Coweight(r_);
  for (int k = 0; k < N_; ++k) {
    two_rho_ += roots_[k];
    two_rho_check_ += coroots_[k];
  }
  theta_.clear();
  regC_ = 0;
  for (auto& comp : comps_) {
    int best = -1;
    for (int k = 0; k < N_; ++k) {
      bool inside = true;
      for (int i = 0; i < l; ++i)
        if (root_coef_[k][i] && comp_of_[i] != comp_of_[comp[0]]) inside = false;
      if (inside && (best < 0 || height(k) > height(best))) best = k;
    }
    theta_.push_back(best);
    regC_ = std::max(regC_, 1 + height(best));
  }
}

int RootDatum::height(int k) const {
  long long h = 0;
  for (auto x : root_coef_[k]) h += x;
  return static_cast<int>(h);
}

int RootDatum::simple_of_root(int k) const {
  for (int i = 0; i < l_; ++i)
    if (simple_idx_[i] == k) return i;
  return -1;
}

int RootDatum::root_index(const Covector& a) const {
  auto it = root_lookup_.find(a);
  return it == root_lookup_.end() ? -1 : it->second;
}

void RootDatum::build_weyl() {
  int l = l_, n2 = 2 * N_;
  std::vector<std::vector<int>> sperm(l, std::vector<int>(n2));
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < n2; ++k) {
      Covector b = roots_[k] - roots_[simple_idx_[i]] * pairing(scoroots_[i], roots_[k]);
      sperm[i][k] = root_lookup_.at(b);
    }
  std::vector<IntMatrix> smat(l);
  for (int i = 0; i < l; ++i) {
    smat[i] = identity_matrix(r_);
    for (int a = 0; a < r_; ++a)
      for (int b = 0; b < r_; ++b) smat[i][a][b] -= scoroots_[i][a] * sroots_[i][b];
  }
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> perms;
  std::vector<int> idp(n2);
  for (int k = 0; k < n2; ++k) idp[k] = k;
  index[idp] = 0;
  perms.push_back(idp);
  wmat_.push_back(identity_matrix(r_));
  for (size_t h = 0; h < perms.size(); ++h) {
    for (int i = 0; i < l; ++i) {
      std::vector<int> p(n2);
      for (int k = 0; k < n2; ++k) p[k] = perms[h][sperm[i][k]];
      if (index.count(p)) continue;
      if (static_cast<int>(perms.size()) >= kMaxWeylOrder)
        throw PreconditionError("Weyl group is too large for this library (limit " + std::to_string(kMaxWeylOrder) + ")");
      index[p] = static_cast<int>(perms.size());
      perms.push_back(p);
      wmat_.push_back(mat_mul(wmat_[h], smat[i]));
    }
  }
  int W = static_cast<int>(perms.size());
  wlen_.assign(W, 0);
  act_.assign(static_cast<size_t>(W) * n2, 0);
  for (int w = 0; w < W; ++w) {
    for (int k = 0; k < N_; ++k)
      if (perms[w][k] >= N_) ++wlen_[w];
    std::copy(perms[w].begin(), perms[w].end(), act_.begin() + static_cast<size_t>(w) * n2);
  }
  rmul_.assign(static_cast<size_t>(W) * l, 0);
  lmul_.assign(static_cast<size_t>(W) * l, 0);
  inv_.assign(W, 0);
  std::vector<int> p(n2);
  for (int w = 0; w < W; ++w) {
    for (int i = 0; i < l; ++i) {
      for (int k = 0; k < n2; ++k) p[k] = perms[w][sperm[i][k]];
      rmul_[static_cast<size_t>(w) * l + i] = index.at(p);
      for (int k = 0; k < n2; ++k) p[k] = sperm[i][perms[w][k]];
      lmul_[static_cast<size_t>(w) * l + i] = index.at(p);
    }
    for (int k = 0; k < n2; ++k) p[perms[w][k]] = k;
    inv_[w] = index.at(p);
  }
  std::vector<int> order(W);
  for (int w = 0; w < W; ++w) order[w] = w;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return wlen_[a] < wlen_[b]; });
  words_.assign(W, {});
  for (int w : order) {
    if (wlen_[w] == 0) continue;
    for (int i = 0; i < l; ++i)
      if (wlen_[lmul_s(i, w)] < wlen_[w]) {
        words_[w] = {i};
        auto& rest = words_[lmul_s(i, w)];
        words_[w].insert(words_[w].end(), rest.begin(), rest.end());
        break;
      }
  }
  mul_.assign(static_cast<size_t>(W) * W, 0);
  for (int a = 0; a < W; ++a)
    for (int b = 0; b < W; ++b) {
      int x = a;
      for (int i : words_[b]) x = rmul_s(x, i);
      mul_[static_cast<size_t>(a) * W + b] = x;
    }
  w0_ = static_cast<int>(std::max_element(wlen_.begin(), wlen_.end()) - wlen_.begin());
  AFFDBG_ASSERT(wlen_[w0_] == N_, "longest element length");
  refl_.assign(N_, 0);
  for (int k = 0; k < N_; ++k) {
    for (int j = 0; j < n2; ++j) {
      Covector b = roots_[j] - roots_[k] * pairing(coroots_[k], roots_[j]);
      p[j] = root_lookup_.at(b);
    }
    refl_[k] = index.at(p);
  }
}

void RootDatum::build_sigma() {
  int l = l_;
  sigma_.resize(l);
  if (spec_.sigma.empty()) {
    for (int i = 0; i < l; ++i) sigma_[i] = i;
  } else {
    if (static_cast<int>(spec_.sigma.size()) != l) throw PreconditionError("sigma must permute all simple indices");
    std::vector<int> seen(l, 0);
    for (int x : spec_.sigma) {
      if (x < 0 || x >= l || seen[x]) throw PreconditionError("sigma is not a permutation of the simple indices");
      seen[x] = 1;
    }
    sigma_ = spec_.sigma;
  }
  sigma_trivial_ = true;
  for (int i = 0; i < l; ++i) sigma_trivial_ = sigma_trivial_ && sigma_[i] == i;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      if (P_[sigma_[i]][sigma_[j]] != P_[i][j]) throw PreconditionError("sigma does not preserve the Cartan matrix");
  // lattice automorphism
  S_ = identity_matrix(r_);
  switch (spec_.lattice) {
    case LatticeKind::Adjoint:
    case LatticeKind::SimplyConnected:
      S_.assign(r_, std::vector<long long>(r_, 0));
      for (int j = 0; j < l; ++j) S_[sigma_[j]][j] = 1;
      break;
    case LatticeKind::GL:
      if (!sigma_trivial_) {
        for (int i = 0; i < l; ++i)
          if (sigma_[i] != l - 1 - i) throw PreconditionError("gl lattice: sigma must be trivial or the diagram flip");
        S_.assign(r_, std::vector<long long>(r_, 0));
        for (int i = 0; i < r_; ++i) S_[r_ - 1 - i][i] = -1;
      }
      break;
    case LatticeKind::Explicit:
      if (!spec_.sigma_matrix.empty()) {
        S_ = spec_.sigma_matrix;
        if (static_cast<int>(S_.size()) != r_) throw PreconditionError("sigma_matrix has the wrong size");
        for (auto& row : S_)
          if (static_cast<int>(row.size()) != r_) throw PreconditionError("sigma_matrix has the wrong size");
      } else if (!sigma_trivial_) {
        throw PreconditionError("explicit lattice with nontrivial sigma needs sigma_matrix");
      }
      break;
  }
  for (int i = 0; i < l; ++i) {
    if (mat_apply(S_, scoroots_[i]) != scoroots_[sigma_[i]])
      throw PreconditionError("sigma does not map simple coroots to simple coroots");
    // alpha_{sigma i} o S = alpha_i
    Covector a(r_);
    for (int c = 0; c < r_; ++c)
      for (int k = 0; k < r_; ++k) a[c] += sroots_[sigma_[i]][k] * S_[k][c];
    if (a != sroots_[i]) throw PreconditionError("sigma does not map simple roots to simple roots");
  }
  Sinv_ = IntMatrix(r_, std::vector<long long>(r_, 0));
  for (int j = 0; j < r_; ++j) {
    std::vector<long long> e(r_, 0);
    e[j] = 1;
    auto sol = solve_integer(S_, e);
    if (!sol || !sol->kernel.empty()) throw PreconditionError("sigma is not a lattice automorphism");
    for (int i = 0; i < r_; ++i) Sinv_[i][j] = sol->particular[i];
  }
  sigma_ord_ = 1;
  IntMatrix pw = S_;
  while (!is_identity(pw)) {
    pw = mat_mul(pw, S_);
    if (++sigma_ord_ > 1000) throw PreconditionError("sigma has infinite order on the lattice");
  }
  int n2 = 2 * N_;
  sroot_.assign(n2, 0);
  for (int k = 0; k < n2; ++k) {
    // (sigma a)(mu) = a(S^{-1} mu)
    Covector a(r_);
    for (int c = 0; c < r_; ++c)
      for (int m = 0; m < r_; ++m) a[c] += roots_[k][m] * Sinv_[m][c];
    int idx = root_index(a);
    if (idx < 0 || (idx < N_) != (k < N_)) throw PreconditionError("sigma does not preserve the positive roots");
    sroot_[k] = idx;
  }
  int W = W_size();
  sw_.assign(W, 0);
  swinv_.assign(W, 0);
  for (int w = 0; w < W; ++w) {
    int x = 0;
    for (int i : words_[w]) x = rmul_s(x, sigma_[i]);
    sw_[w] = x;
  }
  for (int w = 0; w < W; ++w) swinv_[sw_[w]] = w;
}

void RootDatum::build_quotients() {
  pi1_ = LatticeQuotient(r_, scoroots_);
  std::vector<Coweight> tw;
  for (int j = 0; j < r_; ++j) {
    Coweight c(r_);
    for (int i = 0; i < r_; ++i) c[i] = S_[i][j] - (i == j ? 1 : 0);
    if (!c.is_zero()) tw.push_back(c);
  }
  xg_ = LatticeQuotient(r_, tw);
  std::vector<Coweight> both = scoroots_;
  both.insert(both.end(), tw.begin(), tw.end());
  pi1g_ = LatticeQuotient(r_, both);
  coroot_basis_q_.assign(r_, std::vector<Rational>(l_));
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < l_; ++j) coroot_basis_q_[i][j] = Rational(scoroots_[j][i]);
}

std::string RootDatum::cartan_label() const {
  std::string s;
  for (size_t i = 0; i < comp_types_.size(); ++i) s += (i ? "x" : "") + comp_types_[i];
  return s;
}

// ---------------------------------------------------------------- Weyl group

Covector RootDatum::act_covec(WIdx w, const Covector& a) const {
  const IntMatrix& mi = wmat_[inv_[w]];
  Covector out(r_);
  for (int c = 0; c < r_; ++c)
    for (int k = 0; k < r_; ++k) out[c] = add_ck(out[c], mul_ck(a[k], mi[k][c]));
  return out;
}

WIdx RootDatum::from_word(const std::vector<int>& word) const {
  WIdx x = 0;
  for (int i : word) {
    if (i < 0 || i >= l_) throw PreconditionError("simple reflection index out of range");
    x = rmul_s(x, i);
  }
  return x;
}

std::vector<int> RootDatum::support(WIdx w) const {
  std::set<int> s(words_[w].begin(), words_[w].end());
  return {s.begin(), s.end()};
}

std::string RootDatum::word_str(WIdx w) const {
  if (words_[w].empty()) return "1";
  std::string s;
  for (size_t k = 0; k < words_[w].size(); ++k) s += (k ? " s" : "s") + std::to_string(words_[w][k] + 1);
  return s;
}

std::vector<std::vector<int>> RootDatum::reduced_words(WIdx w, size_t limit) const {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(WIdx)> rec = [&](WIdx x) {
    if (out.size() >= limit) return;
    if (x == 0) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < l_; ++i)
      if (left_descent(x, i)) {
        cur.push_back(i);
        rec(lmul_s(i, x));
        cur.pop_back();
      }
  };
  rec(w);
  return out;
}

bool RootDatum::bruhat_leq(WIdx a, WIdx b) const {
  while (true) {
    if (length(a) > length(b)) return false;
    if (b == 0) return a == 0;
    int i = words_[b][0];
    WIdx sb = lmul_s(i, b);
    if (left_descent(a, i)) a = lmul_s(i, a);
    b = sb;
  }
}

// ---------------------------------------------------------------- sigma / dominance

Coweight RootDatum::sigma_pow(const Coweight& mu, int k) const {
  k = static_cast<int>(mod_pos(k, sigma_ord_));
  Coweight x = mu;
  for (int i = 0; i < k; ++i) x = sigma(x);
  return x;
}

Coweight RootDatum::sigma_orbit_sum(const Coweight& mu) const {
  Coweight s = mu, x = mu;
  for (int i = 1; i < sigma_ord_; ++i) {
    x = sigma(x);
    s += x;
  }
  return s;
}

RatVec RootDatum::sigma_average(const Coweight& mu) const { return RatVec(sigma_orbit_sum(mu), sigma_ord_); }

bool RootDatum::is_dominant(const Coweight& mu) const {
  for (int i = 0; i < l_; ++i)
    if (pairing(mu, sroots_[i]) < 0) return false;
  return true;
}

bool RootDatum::is_dominant(const RatVec& mu) const { return is_dominant(mu.num); }

std::pair<Coweight, WIdx> RootDatum::dominantize(const Coweight& mu0) const {
  Coweight mu = mu0;
  WIdx w = 0;
  while (true) {
    int bad = -1;
    for (int i = 0; i < l_ && bad < 0; ++i)
      if (pairing(mu, sroots_[i]) < 0) bad = i;
    if (bad < 0) return {mu, w};
    mu -= scoroots_[bad] * pairing(mu, sroots_[bad]);
    w = lmul_s(bad, w);
  }
}

RatVec RootDatum::dominantize(const RatVec& mu) const { return RatVec(dominantize(mu.num).first, mu.den); }

std::optional<std::vector<Rational>> RootDatum::coroot_coords(const RatVec& mu) const {
  std::vector<Rational> b(r_);
  for (int i = 0; i < r_; ++i) b[i] = mu[i];
  return solve_rational(coroot_basis_q_, b);
}

bool RootDatum::leq(const RatVec& a, const RatVec& b) const {
  auto c = coroot_coords(b - a);
  if (!c) return false;
  for (auto& x : *c)
    if (x < Rational(0)) return false;
  return true;
}

bool RootDatum::in_coroot_span(const Coweight& mu, const std::vector<int>& J) const {
  if (J.empty()) return mu.is_zero();
  IntMatrix a(r_, std::vector<long long>(J.size()));
  for (int i = 0; i < r_; ++i)
    for (size_t j = 0; j < J.size(); ++j) a[i][j] = scoroots_[J[j]][i];
  return solve_integer(a, mu.to_vector()).has_value();
}

// ---------------------------------------------------------------- reflection orders

ReflectionOrder RootDatum::reflection_order_from_word(const std::vector<int>& word) const {
  if (static_cast<int>(word.size()) != N_ || from_word(word) != w0_)
    throw PreconditionError("not a reduced word of the longest element");
  ReflectionOrder o;
  o.word = word;
  o.position.assign(N_, -1);
  WIdx p = 0;
  for (int i : word) {
    int b = act_root(p, simple_idx_[i]);
    AFFDBG_ASSERT(b < N_ && o.position[b] < 0, "reflection order root");
    o.position[b] = static_cast<int>(o.betas.size());
    o.betas.push_back(b);
    p = rmul_s(p, i);
  }
  return o;
}

WIdx RootDatum::tail_product(const ReflectionOrder& o, int n) const {
  WIdx x = 0;
  for (int k = n; k < N_; ++k) x = mul(x, refl_[o.betas[k]]);
  return x;
}

std::pair<ReflectionOrder, int> RootDatum::order_with_tail(WIdx u0) const {
  // prefix p with p*w0 = u0, suffix q with p*q = w0
  WIdx p = mul(u0, w0_);
  WIdx q = mul(mul(w0_, inv_[u0]), w0_);
  std::vector<int> word = words_[p];
  word.insert(word.end(), words_[q].begin(), words_[q].end());
  ReflectionOrder o = reflection_order_from_word(word);
  int n = length(p);
  AFFDBG_ASSERT(tail_product(o, n) == u0, "tail of constructed reflection order");
  return {o, n};
}

// ---------------------------------------------------------------- QBG

std::vector<std::pair<WIdx, int>> RootDatum::qbg_edges(WIdx w) const {
  std::vector<std::pair<WIdx, int>> e;
  for (int k = 0; k < N_; ++k) {
    WIdx x = mul(w, refl_[k]);
    if (length(x) == length(w) + 1) e.emplace_back(x, -1);
    else if (length(x) == length(w) - pairing(coroots_[k], two_rho_) + 1) e.emplace_back(x, k);
  }
  return e;
}

std::pair<int, Coweight> RootDatum::qbg_distance_weight(WIdx u, WIdx v) const {
  std::vector<int> dist(W_size(), -1);
  std::vector<Coweight> wt(W_size(), Coweight(r_));
  std::deque<WIdx> q{u};
  dist[u] = 0;
  while (!q.empty()) {
    WIdx w = q.front();
    q.pop_front();
    if (w == v) break;
    for (auto [x, k] : qbg_edges(w)) {
      if (dist[x] >= 0) continue;
      dist[x] = dist[w] + 1;
      wt[x] = wt[w];
      if (k >= 0) wt[x] += coroots_[k];
      q.push_back(x);
    }
  }
  AFFDBG_ASSERT(dist[v] >= 0, "quantum Bruhat graph is strongly connected");
  return {dist[v], wt[v]};
}

std::vector<Coweight> RootDatum::qbg_all_shortest_weights(WIdx u, WIdx v) const {
  int W = W_size();
  std::vector<int> dist(W, -1);
  std::vector<std::set<Coweight>> wts(W);
  std::deque<WIdx> q{u};
  dist[u] = 0;
  wts[u].insert(Coweight(r_));
  while (!q.empty()) {
    WIdx w = q.front();
    q.pop_front();
    for (auto [x, k] : qbg_edges(w)) {
      if (dist[x] >= 0 && dist[x] != dist[w] + 1) continue;
      if (dist[x] < 0) {
        dist[x] = dist[w] + 1;
        q.push_back(x);
      }
      for (auto& c : wts[w]) wts[x].insert(k >= 0 ? c + coroots_[k] : c);
    }
  }
  return {wts[v].begin(), wts[v].end()};
}

}  // namespace affdbg
