#include "affdbg/adlv.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace affdbg {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::E1: return "E1";
    case Variant::E2: return "E2";
    case Variant::Superregular: return "superregular";
  }
  return "?";
}

namespace {

long long floor_rat(const Rational& r) { return floor_div(r.num, r.den); }
long long ceil_rat(const Rational& r) { return -floor_div(-r.num, r.den); }

Rational nu2rho(const RootDatum& d, const RatVec& nu) { return nu.pair(d.two_rho()); }

}  // namespace

long long residue_D(const AffineWeyl& aw, const AffineElement& x, const BGPoint& b, long long dim) {
  Rational D = Rational(2 * dim - aw.length(x) + b.defect) + nu2rho(aw.datum(), b.nu);
  AFFDBG_ASSERT(D.is_integer(), "dimension residue D is an integer");
  return D.num;
}

bool nu_regular(const RootDatum& d, const RatVec& nu, const Rational& bound) {
  for (int k = 0; k < d.num_pos(); ++k)
    if (nu.pair(d.root(k)) < bound) return false;
  return true;
}

AdlvReport Adlv::report(const AffineElement& x, const BGPoint& b0) {
  AdlvReport t;
  t.x = x;
  t.b = bt_.point(b0.nu, b0.kappa);
  if (!t.b.resolved) throw PreconditionError("not a point of B(G): " + b0.key_str());
  t.f = eng_.f_x_b(x, t.b);
  t.nonempty = !t.f.is_zero();
  if (t.nonempty) {
    Rational dim = Rational(aw_.length(x) + t.f.degree(), 2) - nu2rho(aw_.datum(), t.b.nu);
    AFFDBG_ASSERT(dim.is_integer(), "dimension is an integer");
    t.dim = dim.num;
    t.components = t.f.leading();
    t.D = residue_D(aw_, x, t.b, dim.num);
  }
  return t;
}

std::vector<BGPoint> Adlv::bg_x(const AffineElement& x) {
  std::vector<BGPoint> out;
  for (auto& [b, p] : eng_.f_x_all(x)) out.push_back(bt_.point(b.nu, b.kappa));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BGPoint> Adlv::candidates(const AffineElement& x) {
  const RootDatum& d = aw_.datum();
  auto have = bg_x(x);
  AFFDBG_ASSERT(!have.empty(), "B(G)_x is nonempty");
  const BGPoint* gen = &have[0];
  for (auto& b : have)
    if (nu2rho(d, b.nu) > nu2rho(d, gen->nu)) gen = &b;
  for (auto& b : have) AFFDBG_ASSERT(d.leq(b.nu, gen->nu), "generic Newton point is the maximum");
  RatVec nug = gen->nu;
  std::vector<BGPoint> out = have;
  for (auto& p : bt_.catalog(aw_.kappa_gamma(x), floor_rat(nu2rho(d, nug)))) {
    if (!d.leq(p.nu, nug)) continue;
    bool dup = false;
    for (auto& q : out) dup = dup || q.same(p);
    if (!dup) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PredictionReport Adlv::predict_regular(const AffineElement& x, const BGPoint& b, Variant var) {
  auto lp = aw_.lp_set(x);
  if (lp.size() != 1) throw PreconditionError("LP(x) is not a singleton");
  return predict_with_v(x, b, var, lp[0]);
}

PredictionReport Adlv::predict_with_v(const AffineElement& x, const BGPoint& b0, Variant var, WIdx v) {
  const RootDatum& d = aw_.datum();
  BGPoint b = bt_.point(b0.nu, b0.kappa);
  PredictionReport p;
  p.variant = var;
  p.v = v;
  Coweight a = d.act(d.inv(v), x.mu);
  WIdx target = d.sigma_w(d.mul(x.w, v));
  long long a2 = d.pair_2rho(a);
  Rational n2 = nu2rho(d, b.nu);
  auto scan = [&](long long lo, long long hi, const std::function<bool(const Coweight&)>& keep) {
    lo = std::max(lo, 0LL);
    if (hi < lo) return;
    WtsSlice s = dbg_.wts_window(v, target, target, lo, hi);
    for (auto& [key, m] : s.entries)
      if (keep(a - key.first)) p.E[key.second] += m;
  };
  switch (var) {
    case Variant::E1: {
      if (!b.lambda) throw PreconditionError("lambda(b) unavailable for " + b.key_str());
      long long h = d.pair_2rho(a - *b.lambda);
      auto cls = d.x_gamma().class_of(*b.lambda);
      scan(h, h, [&](const Coweight& c) { return d.x_gamma().class_of(c) == cls; });
      break;
    }
    case Variant::E2: {
      // conv(a - omega) = nu needs a - omega <= nu, so <omega,2rho> >= <a - nu, 2rho>
      auto keep = [&](const Coweight& c) { return aw_.conv(c) == b.nu; };
      long long lo = ceil_rat(Rational(a2) - n2);
      long long hi = floor_rat(Rational(a2) - n2) + e2_cap_;
      scan(lo, hi - 2, keep);
      LengthMultiset before = p.E;
      scan(std::max(lo, hi - 1), hi, keep);
      p.e2_capped = p.E != before;
      break;
    }
    case Variant::Superregular: {
      Rational h = Rational(a2) - n2;
      if (h.is_integer()) scan(h.num, h.num, [&](const Coweight& c) { return d.sigma_average(c) == b.nu; });
      break;
    }
  }
  bool kappa_ok = b.kappa == aw_.kappa_gamma(x);
  p.nonempty = !p.E.empty() && kappa_ok;
  if (!p.E.empty()) {
    p.maxE = p.E.rbegin()->first;
    p.max_mult = p.E.rbegin()->second;
    long long defect = var == Variant::Superregular ? 0 : b.defect;
    p.dim = (Rational(aw_.length(x) + *p.maxE - defect) - n2) * Rational(1, 2);
  }
  if (var != Variant::Superregular) {
    p.hypothesis_met = aw_.regularity(x) >= d.reg_constant();
    if (!p.hypothesis_met) p.note = "x is not C-regular";
  } else {
    p.hypothesis_met = false;
    p.note = "superregularity constant not fixed";
  }
  return p;
}

IntegralPrediction Adlv::predict_integral(const AffineElement& x, const BGPoint& b0) {
  const RootDatum& d = aw_.datum();
  BGPoint b = bt_.point(b0.nu, b0.kappa);
  if (!b.resolved || b.defect != 0 || !b.lambda) throw PreconditionError("b is not integral: " + b.key_str());
  IntegralPrediction p;
  p.lp = aw_.lp_set(x);
  p.nu_regular = nu_regular(d, b.nu, Rational(1));
  auto cls = d.x_gamma().class_of(*b.lambda);
  std::optional<int> best;
  bool any = false;
  p.E.resize(d.W_size());
  for (WIdx u = 0; u < d.W_size(); ++u) {
    Coweight a = d.act(d.inv(u), x.mu);
    long long h = d.pair_2rho(a - *b.lambda);
    WIdx tu = d.sigma_w(d.mul(x.w, u));
    std::optional<int> mn;
    bool mn_set = false, neg_inf = false;
    for (WIdx v : p.lp) {
      LengthMultiset E;
      if (h >= 0) {
        WtsSlice s = dbg_.wts_window(u, tu, d.sigma_w(d.mul(x.w, v)), h, h);
        for (auto& [key, m] : s.entries)
          if (d.x_gamma().class_of(a - key.first) == cls) E[key.second] += m;
      }
      if (E.empty()) {
        neg_inf = true;
      } else {
        int mx = E.rbegin()->first;
        if (!mn_set || mx < *mn) mn = mx;
        mn_set = true;
      }
      p.E[u].push_back(std::move(E));
    }
    if (neg_inf) continue;
    if (!any || *mn > *best) best = mn;
    any = true;
  }
  p.d = best;
  if (p.d) {
    for (WIdx u = 0; u < d.W_size(); ++u) {
      long long m = -1;
      for (auto& E : p.E[u]) {
        auto it = E.find(*p.d);
        long long c = it == E.end() ? 0 : it->second;
        if (m < 0 || c < m) m = c;
      }
      p.c += std::max(m, 0LL);
    }
  }
  return p;
}

std::vector<std::string> check_shrunken(const AdlvReport& t, const PredictionReport& p, bool kappa_ok) {
  std::vector<std::string> v;
  bool pred = !p.E.empty() && kappa_ok;
  if (t.nonempty != pred) v.push_back("a");
  if (t.nonempty && p.maxE && *p.maxE != *t.D) v.push_back("b");
  if (t.nonempty && t.D) {
    auto it = p.E.find(static_cast<int>(*t.D));
    long long m = it == p.E.end() ? 0 : it->second;
    if (*t.components > m) v.push_back("c");
  }
  return v;
}

std::vector<std::string> check_integral(const AdlvReport& t, const IntegralPrediction& p) {
  std::vector<std::string> v;
  if (!p.d && t.nonempty) v.push_back("a");
  if (t.nonempty && p.d && *t.D > *p.d) v.push_back("b");
  if (t.nonempty && p.d && *t.D == *p.d && *t.components > p.c) v.push_back("c");
  // (a) and (d) together only make sense when d is finite; see the ledger
  if (p.nu_regular && p.d && (!t.nonempty || *t.D != *p.d)) v.push_back("d");
  return v;
}

std::vector<std::string> check_regular(const AdlvReport& t, const PredictionReport& p) {
  std::vector<std::string> v;
  if (t.nonempty != p.nonempty) v.push_back("nonempty");
  if (t.nonempty && p.nonempty && (!p.dim || *p.dim != Rational(*t.dim))) v.push_back("dim");
  return v;
}

std::vector<AffineElement> elements_up_to(const AffineWeyl& aw, int min_len, int max_len,
                                          const std::vector<std::vector<long long>>& kappas0) {
  const RootDatum& d = aw.datum();
  auto kappas = kappas0;
  if (kappas.empty()) {
    if (!d.pi1().finite()) throw PreconditionError("pi_1(G) is infinite; list the Kottwitz classes to scan");
    kappas = d.pi1().elements();
  }
  std::vector<AffineElement> out;
  for (auto& k : kappas) {
    std::vector<AffineElement> layer{aw.omega_of_pi1(k)};
    for (int len = 0; len <= max_len; ++len) {
      if (len >= min_len) out.insert(out.end(), layer.begin(), layer.end());
      if (len == max_len) break;
      ElementSet next;
      for (auto& y : layer)
        for (int g = 0; g < aw.num_gens(); ++g)
          if (!aw.left_descent(y, g)) next.insert(aw.lmul(g, y));
      layer.assign(next.begin(), next.end());
      std::sort(layer.begin(), layer.end());
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const AffineElement& a, const AffineElement& b) {
    int la = aw.length(a), lb = aw.length(b);
    return la != lb ? la < lb : a < b;
  });
  return out;
}

// ---------------------------------------------------------------- scan

nlohmann::json bg_json(const BGPoint& b) {
  nlohmann::json j{{"nu", b.nu.str()}, {"kappa", kappa_str(b.kappa)}, {"defect", b.defect}};
  if (b.lambda) j["lambda"] = b.lambda->str();
  return j;
}

nlohmann::json lengths_json(const LengthMultiset& E) {
  nlohmann::json j = nlohmann::json::object();
  for (auto& [e, m] : E) j[std::to_string(e)] = m;
  return j;
}

ScanConfig ScanConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("scan config must be an object");
  static const std::vector<std::string> known{"datum", "max_length", "min_length", "predictions", "workers",
                                              "regularity", "max_elements", "kappas"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ParseError("scan config: unknown field '" + it.key() + "'");
  ScanConfig c;
  if (!j.contains("datum") || !j.contains("max_length")) throw ParseError("scan config needs datum and max_length");
  c.datum = j["datum"];
  try {
    c.max_length = j.at("max_length").get<int>();
    c.min_length = j.value("min_length", 0);
    c.workers = j.value("workers", 1);
    c.regularity = j.value("regularity", -1LL);
    c.max_elements = j.value("max_elements", 200000LL);
    c.predictions = j.value("predictions", std::vector<std::string>{"shrunken", "integral"});
    if (j.contains("kappas")) c.kappas = j["kappas"].get<std::vector<std::vector<long long>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scan config: ") + e.what());
  }
  for (auto& p : c.predictions)
    if (p != "shrunken" && p != "integral" && p != "regular")
      throw ParseError("scan config: unknown prediction '" + p + "'");
  if (c.workers < 1 || c.max_length < 0 || c.min_length < 0) throw ParseError("scan config: bad bounds");
  return c;
}

nlohmann::json ScanConfig::to_json() const {
  nlohmann::json j{{"datum", datum},           {"min_length", min_length}, {"max_length", max_length},
                   {"predictions", predictions}, {"workers", workers},     {"regularity", regularity},
                   {"max_elements", max_elements}};
  if (!kappas.empty()) j["kappas"] = kappas;
  return j;
}

namespace {

nlohmann::json truth_json(const AdlvReport& t) {
  nlohmann::json j{{"nonempty", t.nonempty}};
  j["dim"] = t.dim ? nlohmann::json(*t.dim) : nlohmann::json(nullptr);
  j["components"] = t.components ? nlohmann::json(*t.components) : nlohmann::json(nullptr);
  j["D"] = t.D ? nlohmann::json(*t.D) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json pred_json(const RootDatum& d, const PredictionReport& p) {
  nlohmann::json j{{"variant", variant_name(p.variant)}, {"v", d.word_str(p.v)}, {"E", lengths_json(p.E)},
                   {"nonempty", p.nonempty}};
  j["maxE"] = p.maxE ? nlohmann::json(*p.maxE) : nlohmann::json(nullptr);
  j["dim"] = p.dim ? nlohmann::json(p.dim->str()) : nlohmann::json(nullptr);
  j["component_bound"] = p.maxE ? nlohmann::json(p.max_mult) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json record(const AffineWeyl& aw, const AdlvReport& t, const std::string& kind, nlohmann::json pred,
                      const std::vector<std::string>& viol, bool unmet, const std::string& note) {
  nlohmann::json r;
  r["x"] = aw.format_word(t.x);
  r["length"] = aw.length(t.x);
  r["b"] = bg_json(t.b);
  r["prediction_kind"] = kind;
  r["truth"] = truth_json(t);
  r["prediction"] = std::move(pred);
  r["verdict"] = unmet ? "hypothesis_unmet" : viol.empty() ? "match" : "mismatch";
  r["violations"] = viol;
  if (!note.empty()) r["note"] = note;
  return r;
}

std::vector<nlohmann::json> scan_one(Adlv& ad, const ScanConfig& cfg, const AffineElement& x) {
  const AffineWeyl& aw = ad.affine();
  const RootDatum& d = aw.datum();
  std::vector<nlohmann::json> out;
  auto want = [&](const char* k) { return std::find(cfg.predictions.begin(), cfg.predictions.end(), k) != cfg.predictions.end(); };
  auto lp = aw.lp_set(x);
  long long C = cfg.regularity >= 0 ? cfg.regularity : d.reg_constant();
  bool regular = aw.regularity(x) >= C;
  auto kx = aw.kappa_gamma(x);
  for (auto& b : ad.candidates(x)) {
    AdlvReport t = ad.report(x, b);
    bool kappa_ok = t.b.kappa == kx;
    if (want("shrunken") || want("regular")) {
      std::optional<PredictionReport> e1, e2;
      if (lp.size() == 1) {
        e2 = ad.predict_regular(x, t.b, Variant::E2);
        if (t.b.lambda) e1 = ad.predict_regular(x, t.b, Variant::E1);
      }
      if (want("shrunken")) {
        for (auto* pp : {&e1, &e2}) {
          std::string kind = std::string("shrunken_") + (pp == &e1 ? "E1" : "E2");
          if (lp.size() != 1)
            out.push_back(record(aw, t, kind, nullptr, {}, true, "LP(x) is not a singleton"));
          else if (!*pp)
            out.push_back(record(aw, t, kind, nullptr, {}, true, "lambda(b) unavailable"));
          else
            out.push_back(record(aw, t, kind, pred_json(d, **pp), check_shrunken(t, **pp, kappa_ok), false, ""));
        }
      }
      if (want("regular") && regular && lp.size() == 1) {
        for (auto* pp : {&e1, &e2}) {
          if (!*pp) continue;
          auto viol = check_regular(t, **pp);
          if (pp == &e2 && e1 && e1->maxE != e2->maxE) viol.push_back("maxE1!=maxE2");
          out.push_back(record(aw, t, std::string("regular_") + (pp == &e1 ? "E1" : "E2"), pred_json(d, **pp), viol,
                               false, ""));
        }
      }
    }
    if (want("integral")) {
      if (t.b.defect != 0 || !t.b.lambda) {
        out.push_back(record(aw, t, "integral", nullptr, {}, true, "b is not integral"));
      } else {
        auto ip = ad.predict_integral(x, t.b);
        nlohmann::json pj{{"d", ip.d ? nlohmann::json(*ip.d) : nlohmann::json("-inf")},
                          {"c", ip.c},
                          {"nu_regular", ip.nu_regular}};
        out.push_back(record(aw, t, "integral", pj, check_integral(t, ip), false, ""));
      }
    }
  }
  return out;
}

}  // namespace

ScanResult run_scan(const ScanConfig& cfg) {
  RootDatum d = RootDatum::load_json(cfg.datum);
  AffineWeyl aw(d);
  Dbg dbg(d);
  BGTable bt(aw);
  ClassPolyEngine eng(aw);
  Adlv ad(aw, dbg, bt, eng);
  ScanResult res;
  auto xs = elements_up_to(aw, cfg.min_length, cfg.max_length, cfg.kappas);
  if (static_cast<long long>(xs.size()) > cfg.max_elements) {
    xs.resize(cfg.max_elements);
    res.partial = true;
  }
  std::vector<std::vector<nlohmann::json>> per(xs.size());
  std::vector<std::string> errors(xs.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < xs.size();) {
      try {
        per[i] = scan_one(ad, cfg, xs[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < cfg.workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < xs.size(); ++i)
    if (!errors[i].empty()) throw InternalError("scan failed at " + aw.format_word(xs[i]) + ": " + errors[i]);

  nlohmann::json counts = nlohmann::json::object();
  std::map<std::string, std::map<long long, long long>> slack;
  for (auto& v : per) {
    for (auto& r : v) {
      std::string kind = r["prediction_kind"];
      std::string verdict = r["verdict"];
      auto& cnt = counts[kind][verdict];
      cnt = cnt.is_null() ? 1 : cnt.get<long long>() + 1;
      if (verdict == "mismatch") ++res.violations;
      if (verdict != "hypothesis_unmet" && r["truth"]["nonempty"].get<bool>()) {
        long long C = r["truth"]["components"];
        if (kind.rfind("shrunken", 0) == 0 && r["prediction"]["maxE"] == r["truth"]["D"])
          ++slack[kind][r["prediction"]["component_bound"].get<long long>() - C];
        if (kind == "integral" && r["prediction"]["d"] == r["truth"]["D"])
          ++slack[kind][r["prediction"]["c"].get<long long>() - C];
      }
      res.records.push_back(std::move(r));
    }
  }
  nlohmann::json sl = nlohmann::json::object();
  for (auto& [k, h] : slack)
    for (auto& [s, n] : h) sl[k][std::to_string(s)] = n;
  res.summary = {{"elements", xs.size()},           {"records", res.records.size()}, {"violations", res.violations},
                 {"partial", res.partial},           {"counts", counts},              {"component_slack", sl},
                 {"config", cfg.to_json()}};
  return res;
}

void write_jsonl(std::ostream& os, const std::vector<nlohmann::json>& records) {
  for (auto& r : records) os << r.dump() << "\n";
}

}  // namespace affdbg
