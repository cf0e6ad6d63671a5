#include "affdbg/dbg.hpp"

#include <algorithm>

#include "json.hpp"

namespace affdbg {

WIdx LabelledPath::end(const RootDatum& d) const {
  WIdx w = start;
  for (auto& [b, m] : edges) w = d.mul(w, d.reflection(b));
  return w;
}

Coweight LabelledPath::weight(const RootDatum& d) const {
  Coweight c = d.zero();
  for (auto& [b, m] : edges) c += d.coroot(b) * m;
  return c;
}

bool LabelledPath::valid(const RootDatum& d, const ReflectionOrder* order) const {
  WIdx w = start;
  int last = -1;
  for (auto& [b, m] : edges) {
    if (!d.is_pos(b)) return false;
    WIdx nx = d.mul(w, d.reflection(b));
    long long lb = d.length(nx) < d.length(w) ? 1 : 0;
    if (m < lb) return false;
    if (order) {
      int pos = order->position[b];
      if (pos <= last) return false;
      last = pos;
    }
    w = nx;
  }
  return true;
}

long long WtsSlice::total() const {
  long long t = 0;
  for (auto& [k, m] : entries) t = add_ck(t, m);
  return t;
}

std::map<int, long long> WtsSlice::at(const Coweight& omega) const {
  std::map<int, long long> out;
  for (auto it = entries.lower_bound({omega, -1}); it != entries.end() && it->first.first == omega; ++it)
    out[it->first.second] += it->second;
  return out;
}

void WtsSlice::add(const Coweight& omega, int e, long long mult) {
  if (!mult) return;
  auto& m = entries[{omega, e}];
  m = add_ck(m, mult);
  if (!m) entries.erase({omega, e});
}

WtsSlice WtsSlice::shifted(const Coweight& delta, int de) const {
  WtsSlice s = *this;
  s.entries.clear();
  for (auto& [k, m] : entries) s.entries[{k.first + delta, k.second + de}] = m;
  return s;
}

Dbg::Dbg(const RootDatum& d) : d_(d) {
  default_ = d.reflection_order_from_word(d.word(d.w0()));
  for (int b = 0; b < d.num_pos(); ++b) {
    h_.push_back(d.pair_2rho(d.coroot(b)));
    AFFDBG_ASSERT(h_.back() >= 2, "coroot height");
  }
}

const std::pair<ReflectionOrder, int>& Dbg::tail_order(WIdx u0) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto& slot = tails_[u0];
  if (!slot) slot = std::make_unique<std::pair<ReflectionOrder, int>>(d_.order_with_tail(u0));
  return *slot;
}

std::vector<UPath> Dbg::increasing_paths(WIdx u, WIdx v, const ReflectionOrder& o, int n) const {
  if (n < 0 || n > d_.num_pos()) throw PreconditionError("path bound out of range");
  std::vector<UPath> out;
  UPath cur;
  cur.start = u;
  cur.vertices.push_back(u);
  std::function<void(int)> rec = [&](int from) {
    WIdx w = cur.vertices.back();
    if (w == v) out.push_back(cur);
    for (int i = from; i < n; ++i) {
      int b = o.betas[i];
      WIdx nx = d_.mul(w, d_.reflection(b));
      cur.roots.push_back(b);
      cur.vertices.push_back(nx);
      cur.lower.push_back(d_.length(nx) < d_.length(w) ? 1 : 0);
      rec(i + 1);
      cur.roots.pop_back();
      cur.vertices.pop_back();
      cur.lower.pop_back();
    }
  };
  rec(0);
  return out;
}

const std::vector<UPath>& Dbg::cached_paths(WIdx u, WIdx v, WIdx vprime) const {
  WIdx u0 = d_.mul(d_.inv(v), vprime);
  const auto& [o, n] = tail_order(u0);
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = paths_.find({u, u0});
    if (it != paths_.end()) return (*it->second)[v];
  }
  // all increasing paths from u bounded by n, bucketed by end vertex
  auto buckets = std::make_unique<std::vector<std::vector<UPath>>>(d_.W_size());
  UPath cur;
  cur.start = u;
  cur.vertices.push_back(u);
  std::function<void(int)> rec = [&](int from) {
    WIdx w = cur.vertices.back();
    (*buckets)[w].push_back(cur);
    for (int i = from; i < n; ++i) {
      int b = o.betas[i];
      WIdx nx = d_.mul(w, d_.reflection(b));
      cur.roots.push_back(b);
      cur.vertices.push_back(nx);
      cur.lower.push_back(d_.length(nx) < d_.length(w) ? 1 : 0);
      rec(i + 1);
      cur.roots.pop_back();
      cur.vertices.pop_back();
      cur.lower.pop_back();
    }
  };
  rec(0);
  std::lock_guard<std::mutex> lk(mu_);
  auto& slot = paths_[{u, u0}];
  if (!slot) slot = std::move(buckets);
  return (*slot)[v];
}

long long Dbg::count_labellings(const UPath& p, const Coweight& omega) const {
  Coweight rest = omega;
  for (int i = 0; i < p.length(); ++i) rest -= d_.coroot(p.roots[i]) * p.lower[i];
  long long budget = d_.pair_2rho(rest);
  if (budget < 0) return 0;
  int e = p.length();
  if (e == 0) return rest.is_zero() ? 1 : 0;
  // nonnegative m with sum m_i beta_i^v = rest; the last label is forced
  long long count = 0;
  std::function<void(int, const Coweight&, long long)> rec = [&](int i, const Coweight& r, long long b) {
    int root = p.roots[i];
    if (i == e - 1) {
      if (b % h_[root]) return;
      long long m = b / h_[root];
      if (d_.coroot(root) * m == r) ++count;
      return;
    }
    Coweight rr = r;
    for (long long m = 0; m * h_[root] <= b; ++m) {
      rec(i + 1, rr, b - m * h_[root]);
      rr -= d_.coroot(root);
    }
  };
  rec(0, rest, budget);
  return count;
}

void Dbg::labellings_in_window(const UPath& p, long long lo, long long hi,
                               const std::function<void(const std::vector<long long>&)>& f) const {
  long long base = 0;
  for (int i = 0; i < p.length(); ++i) base += h_[p.roots[i]] * p.lower[i];
  if (base > hi) return;
  std::vector<long long> m(p.lower.begin(), p.lower.end());
  std::function<void(int, long long)> rec = [&](int i, long long used) {
    if (i == p.length()) {
      if (used >= lo) f(m);
      return;
    }
    long long h = h_[p.roots[i]];
    for (long long extra = 0; used + extra * h <= hi; ++extra) {
      m[i] = p.lower[i] + extra;
      rec(i + 1, used + extra * h);
    }
    m[i] = p.lower[i];
  };
  rec(0, base);
}

LabelledPath Dbg::label(const UPath& p, const std::vector<long long>& m) const {
  LabelledPath lp;
  lp.start = p.start;
  for (int i = 0; i < p.length(); ++i) lp.edges.emplace_back(p.roots[i], m[i]);
  return lp;
}

LengthMultiset Dbg::wts_bounded_at(WIdx u, WIdx v, WIdx vprime, const Coweight& omega) const {
  LengthMultiset out;
  for (const UPath& p : cached_paths(u, v, vprime)) {
    long long c = count_labellings(p, omega);
    if (c) out[p.length()] += c;
  }
  return out;
}

LengthMultiset Dbg::wts_at_order(WIdx u, WIdx v, const ReflectionOrder& o, int n, const Coweight& omega) const {
  LengthMultiset out;
  for (const UPath& p : increasing_paths(u, v, o, n)) {
    long long c = count_labellings(p, omega);
    if (c) out[p.length()] += c;
  }
  return out;
}

namespace {

void fill_window(const Dbg& dbg, const std::vector<UPath>& paths, WtsSlice& s) {
  const RootDatum& d = dbg.datum();
  for (const UPath& p : paths) {
    dbg.labellings_in_window(p, s.lo, s.hi, [&](const std::vector<long long>& m) {
      Coweight w = d.zero();
      for (int i = 0; i < p.length(); ++i) w += d.coroot(p.roots[i]) * m[i];
      s.add(w, p.length(), 1);
    });
  }
}

}  // namespace

WtsSlice Dbg::wts_window(WIdx u, WIdx v, WIdx vprime, long long lo, long long hi) const {
  WtsSlice s;
  s.u = u;
  s.v = v;
  s.vprime = vprime;
  s.lo = lo;
  s.hi = hi;
  fill_window(*this, cached_paths(u, v, vprime), s);
  return s;
}

WtsSlice Dbg::wts_window_order(WIdx u, WIdx v, const ReflectionOrder& o, int n, long long lo, long long hi) const {
  WtsSlice s;
  s.u = u;
  s.v = v;
  s.vprime = d_.mul(v, d_.tail_product(o, n));
  s.lo = lo;
  s.hi = hi;
  fill_window(*this, increasing_paths(u, v, o, n), s);
  return s;
}

std::vector<LabelledPath> Dbg::labelled_paths(WIdx u, WIdx v, WIdx vprime, long long hi) const {
  std::vector<LabelledPath> out;
  for (const UPath& p : cached_paths(u, v, vprime))
    labellings_in_window(p, 0, hi, [&](const std::vector<long long>& m) { out.push_back(label(p, m)); });
  return out;
}

RecursionCheck dbg_recursion_check(const Dbg& dbg, const AffineWeyl& aw, WIdx u, WIdx v, WIdx vprime, int g,
                                   long long lo, long long hi) {
  const RootDatum& d = dbg.datum();
  const AffineRoot& a = aw.gen_root(g);
  int alpha = a.alpha;
  // the shifts below hold with -k; with +k they already fail for A1 at s0
  long long k = -a.k;
  if (d.is_pos(d.act_root(d.inv(vprime), alpha)))
    throw PreconditionError("recursion needs (v')^{-1} alpha negative");
  WIdx sa = d.reflection(alpha);
  Coweight av = d.coroot(alpha);
  Coweight uinv_av = d.act(d.inv(u), av);
  Coweight vinv_av = d.act(d.inv(v), av);
  RecursionCheck rc;
  rc.down_case = !d.is_pos(d.act_root(d.inv(u), alpha));
  rc.lhs = dbg.wts_window(u, v, vprime, lo, hi);
  rc.rhs = rc.lhs;
  rc.rhs.entries.clear();

  auto add_shifted = [&](WIdx u2, WIdx v2, WIdx vp2, const Coweight& shift, int de) {
    long long sh = d.pair_2rho(shift);
    WtsSlice src = dbg.wts_window(u2, v2, vp2, lo - sh, hi - sh);
    for (auto& [key, m] : src.entries) rc.rhs.add(key.first + shift, key.second + de, m);
  };
  add_shifted(d.mul(sa, u), d.mul(sa, v), d.mul(sa, vprime), (vinv_av - uinv_av) * k, 0);
  // the second family gains one edge, the reflection by u^{-1} alpha
  if (!rc.down_case) add_shifted(d.mul(sa, u), v, vprime, -(uinv_av * k), 1);
  return rc;
}

std::vector<AffineElement> affine_path(const AffineWeyl& aw, const LabelledPath& p, const AffineElement& y) {
  const RootDatum& d = aw.datum();
  if (y.w != p.start) throw PreconditionError("base point does not lie over the path start");
  std::vector<AffineElement> ys{y};
  for (auto& [b, m] : p.edges) {
    const AffineElement& c = ys.back();
    ys.push_back({d.mul(c.w, d.reflection(b)), c.mu + d.coroot(b) * m});
  }
  return ys;
}

bool semi_infinite_step(const AffineWeyl& aw, const AffineElement& y, const AffineElement& y2) {
  const RootDatum& d = aw.datum();
  AffineElement r = aw.compose(y2, aw.inverse(y));
  // r must be s_gamma eps^{k gamma^v} for a root gamma
  if (r.w == 0) return false;
  int gamma = -1;
  for (int b = 0; b < d.num_pos(); ++b)
    if (d.reflection(b) == r.w) gamma = b;
  if (gamma < 0) return false;
  const Coweight& cv = d.coroot(gamma);
  long long k = 0;
  bool found = false;
  for (int i = 0; i < cv.n; ++i)
    if (cv[i]) {
      if (r.mu[i] % cv[i]) return false;
      k = r.mu[i] / cv[i];
      found = true;
      break;
    }
  if (!found || cv * k != r.mu) return false;
  // positive representative of +-(gamma, k)
  int alpha = gamma;
  if (!aw.is_positive({alpha, k})) {
    alpha = d.neg(gamma);
    k = -k;
  }
  if (!aw.is_positive({alpha, k})) return false;
  return d.is_pos(d.act_root(d.inv(y.w), alpha));
}

std::optional<LabelledPath> path_from_affine(const AffineWeyl& aw, const std::vector<AffineElement>& ys) {
  const RootDatum& d = aw.datum();
  if (ys.empty()) return std::nullopt;
  LabelledPath p;
  p.start = ys[0].w;
  for (size_t i = 0; i + 1 < ys.size(); ++i) {
    if (!semi_infinite_step(aw, ys[i], ys[i + 1])) return std::nullopt;
    WIdx s = d.mul(d.inv(ys[i].w), ys[i + 1].w);
    int beta = -1;
    for (int b = 0; b < d.num_pos(); ++b)
      if (d.reflection(b) == s) beta = b;
    if (beta < 0) return std::nullopt;
    Coweight diff = ys[i + 1].mu - ys[i].mu;
    const Coweight& cv = d.coroot(beta);
    long long m = 0;
    for (int j = 0; j < cv.n; ++j)
      if (cv[j]) {
        m = diff[j] / cv[j];
        break;
      }
    if (cv * m != diff) return std::nullopt;
    p.edges.emplace_back(beta, m);
  }
  if (!p.valid(d, nullptr)) return std::nullopt;
  return p;
}

void write_path_jsonl(std::ostream& os, const RootDatum& d, const LabelledPath& p) {
  nlohmann::json j;
  std::vector<std::string> verts{d.word_str(p.start)};
  WIdx w = p.start;
  nlohmann::json labels = nlohmann::json::array();
  for (auto& [b, m] : p.edges) {
    w = d.mul(w, d.reflection(b));
    verts.push_back(d.word_str(w));
    labels.push_back({{"root", d.root_coeffs(b)}, {"m", m}});
  }
  j["vertices"] = verts;
  j["labels"] = labels;
  j["weight"] = p.weight(d).to_vector();
  j["length"] = p.length();
  os << j.dump() << "\n";
}

void write_wts_csv(std::ostream& os, const RootDatum& d, const WtsSlice& s, bool header) {
  if (header) os << "u,v,vprime,omega,e,multiplicity\n";
  for (auto& [k, m] : s.entries)
    os << '"' << d.word_str(s.u) << "\",\"" << d.word_str(s.v) << "\",\"" << d.word_str(s.vprime) << "\",\""
       << k.first.str() << "\"," << k.second << "," << m << "\n";
}

}  // namespace affdbg
