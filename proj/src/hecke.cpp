#include "affdbg/hecke.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace affdbg {

// ---------------------------------------------------------------- QPoly

QPoly QPoly::monomial(int deg, long long c) {
  if (deg < 0) throw InternalError("negative Q-degree");
  QPoly p;
  if (c) {
    p.c_.assign(deg + 1, 0);
    p.c_[deg] = c;
  }
  return p;
}

int QPoly::low_degree() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i]) return static_cast<int>(i);
  return -1;
}

long long QPoly::eval1() const {
  long long s = 0;
  for (auto c : c_) s = add_ck(s, c);
  return s;
}

void QPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly& QPoly::add_term(int d, long long c) {
  if (d < 0) throw InternalError("negative Q-degree");
  if (!c) return *this;
  if (d >= static_cast<int>(c_.size())) c_.resize(d + 1, 0);
  c_[d] = add_ck(c_[d], c);
  trim();
  return *this;
}

QPoly& QPoly::operator+=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = add_ck(c_[i], o.c_[i]);
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = sub_ck(c_[i], o.c_[i]);
  trim();
  return *this;
}

QPoly QPoly::operator*(const QPoly& o) const {
  QPoly r;
  if (is_zero() || o.is_zero()) return r;
  r.c_.assign(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r.c_[i + j] = add_ck(r.c_[i + j], mul_ck(c_[i], o.c_[j]));
  r.trim();
  return r;
}

QPoly QPoly::shifted(int k) const {
  QPoly r;
  if (is_zero()) return r;
  if (k < 0 && low_degree() + k < 0) throw InternalError("negative Q-degree");
  if (k >= 0) {
    r.c_.assign(k, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  } else {
    r.c_.assign(c_.begin() - k, c_.end());
  }
  return r;
}

std::string QPoly::str() const {
  if (is_zero()) return "0";
  std::string s;
  for (int d = degree(); d >= 0; --d) {
    long long c = c_[d];
    if (!c) continue;
    long long a = c < 0 ? -c : c;
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? "-" : "+";
    }
    if (d == 0) {
      s += std::to_string(a);
      continue;
    }
    if (a != 1) s += std::to_string(a);
    s += "Q";
    if (d > 1) s += "^" + std::to_string(d);
  }
  return s;
}

nlohmann::json QPoly::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (size_t d = 0; d < c_.size(); ++d)
    if (c_[d]) j[std::to_string(d)] = c_[d];
  return j;
}

QPoly QPoly::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("polynomial must be an object degree -> coefficient");
  QPoly p;
  for (auto& [k, v] : j.items()) {
    int d;
    try {
      size_t used = 0;
      d = std::stoi(k, &used);
      if (used != k.size() || d < 0) throw ParseError("bad degree '" + k + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad degree '" + k + "'");
    }
    if (!v.is_number_integer()) throw ParseError("coefficient must be an integer");
    p.add_term(d, v.get<long long>());
  }
  return p;
}

// ---------------------------------------------------------------- Hecke

namespace {

void accumulate(HeckeElement& h, const AffineElement& x, const QPoly& p) {
  if (p.is_zero()) return;
  auto [it, fresh] = h.try_emplace(x, p);
  if (!fresh) {
    it->second += p;
    if (it->second.is_zero()) h.erase(it);
  }
}

}  // namespace

void Hecke::lmul_gen(int g, HeckeElement& h) const {
  HeckeElement out;
  for (auto& [y, c] : h) {
    AffineElement sy = aw_.lmul(g, y);
    accumulate(out, sy, c);
    if (aw_.left_descent(y, g)) accumulate(out, y, c.shifted(1));
  }
  h.swap(out);
}

HeckeElement Hecke::lmul_basis(const AffineElement& x, const HeckeElement& h) const {
  auto [word, tau] = aw_.reduced_word(x);
  HeckeElement cur;
  for (auto& [y, c] : h) accumulate(cur, aw_.compose(tau, y), c);
  for (auto it = word.rbegin(); it != word.rend(); ++it) lmul_gen(*it, cur);
  return cur;
}

HeckeElement Hecke::mul(const HeckeElement& a, const HeckeElement& b) const {
  HeckeElement out;
  for (auto& [x, c] : a) {
    HeckeElement t = lmul_basis(x, b);
    for (auto& [y, p] : t) accumulate(out, y, c * p);
  }
  return out;
}

std::map<AffineElement, QPoly> Hecke::product_top(const AffineElement& x, const AffineElement& z, int c1) const {
  auto [word, tau] = aw_.reduced_word(x);
  AffineElement zinv = aw_.inverse(z);
  long long lx = static_cast<long long>(word.size());
  // track terms by y with T_{yz}; y runs over subexpressions of the word
  std::map<AffineElement, QPoly> cur{{tau, QPoly(1)}};
  long long remaining = lx;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    int g = *it;
    --remaining;
    std::map<AffineElement, QPoly> next;
    auto put = [&](const AffineElement& y, const QPoly& p) {
      if (aw_.length(y) + remaining <= lx - c1) return;
      auto [jt, fresh] = next.try_emplace(y, p);
      if (!fresh) jt->second += p;
    };
    for (auto& [y, c] : cur) {
      AffineElement yz = aw_.compose(y, z);
      AffineElement syz = aw_.lmul(g, yz);
      put(aw_.compose(syz, zinv), c);
      if (aw_.left_descent(yz, g)) put(y, c.shifted(1));
    }
    cur.swap(next);
  }
  for (auto it = cur.begin(); it != cur.end();) {
    if (it->second.is_zero() || aw_.length(it->first) <= lx - c1)
      it = cur.erase(it);
    else
      ++it;
  }
  return cur;
}

QPoly Hecke::structure_constant(const AffineElement& x, const AffineElement& z, const AffineElement& target) const {
  HeckeElement h = mul_basis(x, z);
  auto it = h.find(target);
  return it == h.end() ? QPoly() : it->second;
}

AffineElement Hecke::y_anchor(const AffineElement& x, WIdx w) const {
  const RootDatum& d = aw_.datum();
  return {w, d.two_rho_check() * aw_.length(x)};
}

YMultiset Hecke::y_multiset(const AffineElement& x, WIdx w) const {
  AffineElement z = y_anchor(x, w);
  int lx = aw_.length(x);
  YMultiset out;
  for (auto& [y, p] : product_top(x, z, lx + 1))
    for (int e = 0; e <= p.degree(); ++e)
      if (p.coeff(e)) out[{y, e}] += p.coeff(e);
  return out;
}

std::map<AffineElement, long long> Hecke::at_q0(const HeckeElement& h) {
  std::map<AffineElement, long long> out;
  for (auto& [x, p] : h)
    if (p.at_zero()) out[x] = p.at_zero();
  return out;
}

nlohmann::json hecke_to_json(const AffineWeyl& aw, const HeckeElement& h) {
  nlohmann::json j = nlohmann::json::array();
  for (auto& [x, p] : h) j.push_back({{"element", aw.format_wmu(x)}, {"poly", p.to_json()}});
  return j;
}

HeckeElement hecke_from_json(const AffineWeyl& aw, const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("Hecke element must be a list");
  HeckeElement h;
  for (auto& t : j) {
    if (!t.is_object() || !t.contains("element") || !t.contains("poly") || !t["element"].is_string())
      throw ParseError("Hecke term needs element and poly");
    accumulate(h, aw.parse(t["element"].get<std::string>()), QPoly::from_json(t["poly"]));
  }
  return h;
}

// ---------------------------------------------------------------- class polynomials

ClassPolyEngine::ClassPolyEngine(const AffineWeyl& aw, int cut, std::optional<unsigned long long> seed)
    : aw_(aw), cut_(cut), seed_(seed), rng_state_(seed.value_or(0)) {}

AffineElement ClassPolyEngine::cyc(int g, const AffineElement& x) const {
  return aw_.compose(aw_.compose(aw_.gen(g), x), aw_.gen(aw_.sigma_gen(g)));
}

ClassPolyEngine::Step ClassPolyEngine::find_step(const AffineElement& x) {
  int lx = aw_.length(x);
  int ng = aw_.num_gens();
  std::vector<int> order(ng);
  for (int g = 0; g < ng; ++g) order[g] = g;
  std::mt19937_64 rng;
  if (seed_) {
    std::lock_guard<std::mutex> lk(mu_);
    rng.seed(rng_state_++);
  }
  ElementSet seen{x};
  std::deque<AffineElement> q{x};
  std::vector<std::pair<AffineElement, int>> found;
  // with a seed, collect a few candidates and pick one at random
  size_t want = seed_ ? 4 : 1;
  while (!q.empty()) {
    AffineElement y = q.front();
    q.pop_front();
    if (seed_) std::shuffle(order.begin(), order.end(), rng);
    for (int g : order) {
      AffineElement y2 = cyc(g, y);
      int l2 = aw_.length(y2);
      if (l2 < lx) {
        AFFDBG_ASSERT(l2 == lx - 2, "cyclic shift changes the length by 0 or 2");
        found.emplace_back(y, g);
        if (found.size() >= want) break;
      } else if (l2 == lx && seen.insert(y2).second) {
        q.push_back(y2);
      }
    }
    if (found.size() >= want) break;
    for (const auto& tau : aw_.omega_generators()) {
      AffineElement y2 = aw_.compose(aw_.compose(tau, y), aw_.inverse(aw_.sigma(tau)));
      if (seen.insert(y2).second) q.push_back(y2);
    }
  }
  Step st;
  if (found.empty()) {
    st.minimal = true;
    // canonical-ish representative: least element of the cyclic-shift class
    st.reducer = *std::min_element(seen.begin(), seen.end());
    return st;
  }
  size_t pick = seed_ ? std::uniform_int_distribution<size_t>(0, found.size() - 1)(rng) : 0;
  st.reducer = found[pick].first;
  st.g = found[pick].second;
  return st;
}

ClassInfo ClassPolyEngine::info_of(const AffineElement& m) {
  ClassInfo ci;
  ci.key = aw_.class_key(m);
  ci.min_rep = m;
  ci.min_len = aw_.length(m);
  ci.nu = aw_.newton_point(m);
  ci.kappa = aw_.kappa_gamma(m);
  return ci;
}

std::shared_ptr<const ClassPolys> ClassPolyEngine::compute(const AffineElement& x) {
  static const auto empty = std::make_shared<const ClassPolys>();
  if (aw_.length(x) < cut_) return empty;
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
  }
  Step st = find_step(x);
  std::shared_ptr<const ClassPolys> res;
  if (st.minimal) {
    ClassInfo ci = info_of(st.reducer);
    ClassPolys f{{ci.key, QPoly(1)}};
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = infos_.find(ci.key);
      if (it == infos_.end())
        infos_.emplace(ci.key, ci);
      else if (ci.min_rep < it->second.min_rep)
        it->second.min_rep = ci.min_rep;
    }
    res = std::make_shared<const ClassPolys>(std::move(f));
  } else {
    const AffineElement& y = st.reducer;
    auto a = compute(cyc(st.g, y));
    auto b = compute(aw_.lmul(st.g, y));
    ClassPolys f = *a;
    for (auto& [k, p] : *b) {
      auto [it, fresh] = f.try_emplace(k, p.shifted(1));
      if (!fresh) it->second += p.shifted(1);
    }
    res = std::make_shared<const ClassPolys>(std::move(f));
  }
  std::lock_guard<std::mutex> lk(mu_);
  memo_.emplace(x, res);
  if (st.reducer != x) memo_.emplace(st.reducer, res);
  return res;
}

ClassPolys ClassPolyEngine::class_polynomials(const AffineElement& x) { return *compute(x); }

bool ClassPolyEngine::is_min_length(const AffineElement& x) { return find_step(x).minimal; }

const ClassInfo& ClassPolyEngine::info(const ClassKey& k) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = infos_.find(k);
  if (it == infos_.end()) throw PreconditionError("unknown class " + k.str());
  return it->second;
}

size_t ClassPolyEngine::memo_size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return memo_.size();
}

namespace {

unsigned long long fnv1a(const std::string& s) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string ClassPolyEngine::cache_path(const AffineElement& x) const {
  const char* dir = std::getenv("AFFDBG_CACHE_DIR");
  if (!dir || !*dir) return {};
  std::string id = aw_.datum().to_json().dump() + "|" + std::to_string(cut_) + "|" + aw_.format_wmu(x);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", fnv1a(id));
  return (std::filesystem::path(dir) / ("cp-" + std::string(buf) + ".json")).string();
}

ClassPolys ClassPolyEngine::class_polynomials_cached(const AffineElement& x) {
  std::string path = cache_path(x);
  if (path.empty()) return class_polynomials(x);
  std::string id = aw_.datum().to_json().dump();
  {
    std::ifstream in(path);
    if (in) {
      try {
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.at("datum").get<std::string>() == id && j.at("cut").get<int>() == cut_ &&
            j.at("x").get<std::string>() == aw_.format_wmu(x)) {
          ClassPolys f;
          for (auto& c : j.at("classes")) {
            AffineElement rep = aw_.parse(c.at("min_rep").get<std::string>());
            ClassInfo ci = info_of(rep);
            {
              std::lock_guard<std::mutex> lk(mu_);
              infos_.try_emplace(ci.key, ci);
            }
            f[ci.key] = QPoly::from_json(c.at("poly"));
          }
          return f;
        }
      } catch (const std::exception&) {
        // unreadable entry: recompute and overwrite
      }
    }
  }
  ClassPolys f = class_polynomials(x);
  nlohmann::json j;
  j["datum"] = id;
  j["cut"] = cut_;
  j["x"] = aw_.format_wmu(x);
  j["classes"] = nlohmann::json::array();
  for (auto& [k, p] : f) j["classes"].push_back({{"min_rep", aw_.format_wmu(info(k).min_rep)}, {"poly", p.to_json()}});
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
  std::string tmp = path + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp);
    out << j.dump() << "\n";
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
  return f;
}

QPoly ClassPolyEngine::f_x_b(const AffineElement& x, const BGPoint& b) {
  if (Rational(cut_) > b.nu.pair(aw_.datum().two_rho()))
    throw PreconditionError("class polynomial cut is above <nu(b), 2rho>");
  QPoly out;
  if (b.kappa != aw_.kappa_gamma(x)) return out;
  for (auto& [k, p] : class_polynomials(x)) {
    const ClassInfo& ci = info(k);
    if (ci.nu == b.nu && ci.kappa == b.kappa) out += p.shifted(ci.min_len);
  }
  return out;
}

std::map<BGPoint, QPoly> ClassPolyEngine::f_x_all(const AffineElement& x) {
  std::map<BGPoint, QPoly> out;
  for (auto& [k, p] : class_polynomials(x)) {
    const ClassInfo& ci = info(k);
    BGPoint b;
    b.nu = ci.nu;
    b.kappa = ci.kappa;
    out[b] += p.shifted(ci.min_len);
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

void write_class_poly_csv(std::ostream& os, const AffineWeyl& aw, const AffineElement& x, ClassPolyEngine& eng,
                          const ClassPolys& f, bool header) {
  if (header) os << "x,min_rep,nu,kappa,poly\n";
  for (auto& [k, p] : f) {
    const ClassInfo& ci = eng.info(k);
    os << '"' << aw.format_wmu(x) << "\",\"" << aw.format_wmu(ci.min_rep) << "\",\"" << ci.nu.str() << "\",\""
       << kappa_str(ci.kappa) << "\"," << p.str() << "\n";
  }
}

// ---------------------------------------------------------------- predictions

long long structure_c2(const RootDatum& d, long long c1) { return mul_ck(add_ck(mul_ck(8, d.num_pos()), 4), c1); }

namespace {

WIdx single_lp(const AffineWeyl& aw, const AffineElement& x, const char* what) {
  auto lp = aw.lp_set(x);
  if (lp.size() != 1) throw PreconditionError(std::string("LP(") + what + ") is not a singleton");
  return lp[0];
}

}  // namespace

StructurePrediction predicted_structure_constant(const Dbg& dbg, const AffineWeyl& aw, const AffineElement& x,
                                                 const AffineElement& z, const AffineElement& y, int c1,
                                                 bool allow_outside) {
  const RootDatum& d = aw.datum();
  WIdx vx = single_lp(aw, x, "x"), vy = single_lp(aw, y, "y"), vz = single_lp(aw, z, "z");
  StructurePrediction out;
  long long lx = aw.length(x);
  std::string bad;
  if (lx - aw.length(y) >= c1) bad = "l(x) - l(y) >= C1";
  else if (aw.regularity(x) < structure_c2(d, c1)) bad = "x is not C2-regular";
  else if (aw.regularity(z) < 2 * lx) bad = "z is not 2l(x)-regular";
  if (!bad.empty()) {
    if (!allow_outside) throw PreconditionError(bad);
    out.in_proven_range = false;
    out.note = "outside proven range: " + bad;
  }
  WIdx wx = x.w, wy = y.w, wz = z.w, w0 = d.w0();
  Coweight ax = d.act(d.inv(vx), x.mu), ay = d.act(d.inv(vy), y.mu);
  long long T = d.pair_2rho(ax - ay);
  if (T < 0) return out;
  WIdx u2 = d.mul(d.mul(wx, vx), w0), v2 = d.mul(d.mul(wy, vy), w0), v2p = d.mul(d.mul(wy, wz), vz);
  WtsSlice s2 = dbg.wts_window(u2, v2, v2p, 0, T);
  WIdx v1p = d.mul(wz, vz);
  for (auto& [key, m2] : s2.entries) {
    const auto& [om2, l2] = key;
    Coweight om1 = ax - ay + d.act(w0, om2);
    for (auto& [l1, m1] : dbg.wts_bounded_at(vx, vy, v1p, om1)) out.poly.add_term(l1 + l2, mul_ck(m1, m2));
  }
  return out;
}

QPoly predicted_class_polynomial(const Dbg& dbg, const AffineWeyl& aw, const AffineElement& x, const RatVec& nu,
                                 const std::vector<long long>& kappa) {
  const RootDatum& d = aw.datum();
  WIdx v = single_lp(aw, x, "x");
  QPoly out;
  if (kappa != aw.kappa_gamma(x)) return out;
  Coweight a = d.act(d.inv(v), x.mu);
  Rational h = Rational(d.pair_2rho(a)) - nu.pair(d.two_rho());
  if (!h.is_integer() || h.num < 0) return out;
  WIdx target = d.sigma_w(d.mul(x.w, v));
  WtsSlice s = dbg.wts_window(v, target, target, h.num, h.num);
  for (auto& [key, m] : s.entries) {
    const auto& [om, e] = key;
    if (d.sigma_average(a - om) == nu) out.add_term(e, m);
  }
  return out;
}

}  // namespace affdbg
