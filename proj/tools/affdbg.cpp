#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "affdbg/adlv.hpp"
#include "affdbg/selftest.hpp"

using namespace affdbg;
using nlohmann::json;

namespace {

struct Common {
  std::string datum;
  std::string format = "json";
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

WIdx parse_weyl(const AffineWeyl& aw, const std::string& s) {
  std::string t = s;
  if (t.find_first_not_of(" \t") == std::string::npos || t == "1" || t == "e") return 0;
  AffineElement x = aw.parse(t);
  if (!x.mu.is_zero()) throw ParseError("'" + s + "' is not in the finite Weyl group");
  return x.w;
}

Coweight parse_coweight(const RootDatum& d, const std::string& s) {
  json j;
  try {
    j = json::parse(s);
  } catch (const json::parse_error&) {
    throw ParseError("expected a coweight like [1,0], got '" + s + "'");
  }
  if (!j.is_array() || static_cast<int>(j.size()) != d.rank()) throw ParseError("coweight has the wrong length: " + s);
  std::vector<long long> v;
  for (auto& e : j) {
    if (!e.is_number_integer()) throw ParseError("coweight entries must be integers: " + s);
    v.push_back(e.get<long long>());
  }
  return Coweight::from(v);
}

// "basic" or any element; the B(G) point of its sigma-class
BGPoint parse_b(const AffineWeyl& aw, BGTable& bt, const AffineElement& x, const std::string& s) {
  if (s == "basic") return bt.basic(aw.kappa_gamma(x));
  return bt.point_of(aw.parse(s));
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json element_json(const AffineWeyl& aw, const AffineElement& x) {
  return {{"word", aw.format_word(x)}, {"wmu", aw.format_wmu(x)}, {"length", aw.length(x)}};
}

json report_json(const AffineWeyl& aw, const AdlvReport& t) {
  json j{{"x", element_json(aw, t.x)}, {"b", bg_json(t.b)}, {"f", t.f.str()}, {"nonempty", t.nonempty}};
  j["dim"] = t.dim ? json(*t.dim) : json(nullptr);
  j["components"] = t.components ? json(*t.components) : json(nullptr);
  j["D"] = t.D ? json(*t.D) : json(nullptr);
  return j;
}

json prediction_json(const RootDatum& d, const PredictionReport& p) {
  json j{{"variant", variant_name(p.variant)}, {"v", d.word_str(p.v)},       {"E", lengths_json(p.E)},
         {"nonempty", p.nonempty},             {"hypothesis_met", p.hypothesis_met}, {"e2_capped", p.e2_capped},
         {"note", p.note}};
  j["maxE"] = p.maxE ? json(*p.maxE) : json(nullptr);
  j["dim"] = p.dim ? json(p.dim->str()) : json(nullptr);
  j["component_bound"] = p.maxE ? json(p.max_mult) : json(nullptr);
  return j;
}

json class_polys_json(const AffineWeyl& aw, ClassPolyEngine& eng, const ClassPolys& f) {
  json arr = json::array();
  for (auto& [k, p] : f) {
    const ClassInfo& ci = eng.info(k);
    arr.push_back({{"min_rep", aw.format_wmu(ci.min_rep)},
                   {"min_length", ci.min_len},
                   {"nu", ci.nu.str()},
                   {"kappa", kappa_str(ci.kappa)},
                   {"poly", p.str()},
                   {"coeffs", p.to_json()}});
  }
  return arr;
}

void check_format(const std::string& f, std::initializer_list<const char*> ok) {
  for (auto* o : ok)
    if (f == o) return;
  throw PreconditionError("unsupported --format '" + f + "' for this subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affdbg: double Bruhat graph, Hecke algebra and affine Deligne-Lusztig computations"};
  app.require_subcommand(1);
  unsigned long long seed = 1;
  app.add_option("--seed", seed, "seed for randomized suites");
  Common co;
  auto add_common = [&](CLI::App* c, bool datum = true) {
    if (datum) c->add_option("--datum", co.datum, "datum json file")->required();
    c->add_option("--format", co.format, "json | csv | pretty");
  };

  // datum validate
  auto* datum_cmd = app.add_subcommand("datum", "root datum files");
  datum_cmd->require_subcommand(1);
  auto* validate = datum_cmd->add_subcommand("validate", "load and summarize a datum file");
  std::string validate_path;
  validate->add_option("file", validate_path)->required();
  add_common(validate, false);

  // wts
  auto* wts = app.add_subcommand("wts", "weight multiset slice of wts(u => v ~> v')");
  std::string wu = "1", wv = "1", wvp, womega;
  long long wlo = 0, whi = 8, wmax = 60;
  add_common(wts);
  wts->add_option("--u", wu, "Weyl element, e.g. \"s1 s2\"");
  wts->add_option("--v", wv);
  wts->add_option("--vprime", wvp, "tail bound (default v)");
  wts->add_option("--omega", womega, "exact weight, e.g. [1,1]");
  wts->add_option("--lo", wlo, "window on <omega,2rho>");
  wts->add_option("--hi", whi);
  wts->add_option("--max-window", wmax, "largest allowed hi - lo");

  // hecke
  auto* hecke = app.add_subcommand("hecke", "Iwahori-Hecke algebra");
  hecke->require_subcommand(1);
  std::string hx, hz, hy, hlhs, hrhs;
  int hcut = 0, hc1 = 1;
  long long hbound = 4;
  bool houtside = false, hcompare = false;
  auto* hmul = hecke->add_subcommand("mul", "T_x T_z, or the product of two json Hecke elements");
  add_common(hmul);
  hmul->add_option("--x", hx);
  hmul->add_option("--z", hz);
  hmul->add_option("--lhs", hlhs, "json file with a Hecke element");
  hmul->add_option("--rhs", hrhs, "json file with a Hecke element");
  auto* hcp = hecke->add_subcommand("class-poly", "class polynomials of T_x");
  add_common(hcp);
  hcp->add_option("--x", hx)->required();
  hcp->add_option("--cut", hcut, "drop elements shorter than this (exact on classes with l(O) >= cut)");
  auto* hpred = hecke->add_subcommand("predict", "double Bruhat graph predictions");
  add_common(hpred);
  hpred->add_option("--x", hx)->required();
  hpred->add_option("--z", hz, "with --y: structure constant prediction");
  hpred->add_option("--y", hy);
  hpred->add_option("--c1", hc1, "C1 for the structure constant theorem");
  hpred->add_flag("--allow-outside", houtside, "run below the regularity thresholds");
  hpred->add_option("--bound", hbound, "class polynomials: classes with <v^{-1}mu - nu,2rho> <= bound");
  hpred->add_flag("--compare", hcompare, "also compute the exact values");

  // adlv
  auto* adlv = app.add_subcommand("adlv", "affine Deligne-Lusztig varieties");
  adlv->require_subcommand(1);
  std::string ax, ab = "basic", avariant = "E2", av, aconfig, aout;
  long long acap = 12;
  int aworkers = 0;
  bool afail = false;
  auto* arep = adlv->add_subcommand("report", "ground truth from class polynomials");
  add_common(arep);
  arep->add_option("--x", ax)->required();
  arep->add_option("--b", ab, "\"basic\", \"all\" or an element of the class");
  auto* apred = adlv->add_subcommand("predict", "double Bruhat graph prediction");
  add_common(apred);
  apred->add_option("--x", ax)->required();
  apred->add_option("--b", ab);
  apred->add_option("--variant", avariant, "E1 | E2 | superregular | integral");
  apred->add_option("--v", av, "element of LP(x) (default: all of LP(x))");
  apred->add_option("--e2-cap", acap);
  auto* ascan = adlv->add_subcommand("scan", "conjecture scan");
  ascan->add_option("--config", aconfig, "scan config json")->required();
  ascan->add_option("--workers", aworkers, "overrides the config");
  ascan->add_option("--out", aout, "jsonl records (default stdout)");
  ascan->add_flag("--fail-on-violation", afail, "exit 1 if any record mismatches");

  // selftest
  auto* self = app.add_subcommand("selftest", "property suites");
  std::vector<std::string> suites;
  self->add_option("--suite", suites, "run only these suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) {
      check_format(co.format, {"json", "pretty"});
      RootDatum d = RootDatum::load_file(validate_path);
      json j{{"name", d.spec().to_json().value("name", d.cartan_label())},
             {"cartan", d.cartan_label()},
             {"rank", d.rank()},
             {"semisimple_rank", d.ss_rank()},
             {"positive_roots", d.num_pos()},
             {"weyl_order", d.W_size()},
             {"reg_constant_C", d.reg_constant()},
             {"sigma_order", d.sigma_order()},
             {"two_rho", d.two_rho().str()},
             {"pi1_order", d.pi1().order()},
             {"pi1_free_rank", d.pi1().free_rank()}};
      if (co.format == "pretty")
        std::cout << d.cartan_label() << ": |Phi+| = " << d.num_pos() << ", C = " << d.reg_constant()
                  << ", |W| = " << d.W_size() << "\n";
      else
        emit(j);
      return 0;
    }

    if (ascan->parsed()) {
      json cj = read_json_file(aconfig);
      // a datum given as a path is resolved relative to the config file
      if (cj.contains("datum") && cj["datum"].is_string()) {
        std::string dp = cj["datum"];
        auto slash = aconfig.find_last_of('/');
        if (!dp.empty() && dp[0] != '/' && slash != std::string::npos) dp = aconfig.substr(0, slash + 1) + dp;
        cj["datum"] = read_json_file(dp);
      }
      auto cfg = ScanConfig::from_json(cj);
      if (aworkers > 0) cfg.workers = aworkers;
      std::cerr << "scan: lengths " << cfg.min_length << ".." << cfg.max_length << ", " << cfg.workers << " worker(s)\n";
      auto res = run_scan(cfg);
      if (aout.empty()) {
        write_jsonl(std::cout, res.records);
      } else {
        std::ofstream out(aout);
        if (!out) throw PreconditionError("cannot write '" + aout + "'");
        write_jsonl(out, res.records);
      }
      std::cerr << res.summary.dump(2) << "\n";
      return afail && res.violations ? 1 : 0;
    }
    if (self->parsed()) {
      SelftestOptions opt;
      opt.seed = seed;
      opt.only = suites;
      auto res = run_selftest(opt, [](const SuiteResult& r) {
        std::cerr << (r.passed() ? "ok   " : "FAIL ") << r.name << " (" << r.checks << " checks, " << r.seconds
                  << "s)\n";
      });
      json arr = json::array();
      bool ok = true;
      for (auto& r : res) {
        arr.push_back(r.to_json());
        ok = ok && r.passed();
      }
      emit({{"seed", seed}, {"passed", ok}, {"suites", arr}});
      return ok ? 0 : 2;
    }
    RootDatum d = RootDatum::load_file(co.datum);
    AffineWeyl aw(d);
    Dbg dbg(d);

    if (wts->parsed()) {
      check_format(co.format, {"json", "csv"});
      WIdx u = parse_weyl(aw, wu), v = parse_weyl(aw, wv), vp = wvp.empty() ? v : parse_weyl(aw, wvp);
      WtsSlice s;
      if (!womega.empty()) {
        Coweight om = parse_coweight(d, womega);
        long long h = d.pair_2rho(om);
        s = dbg.wts_window(u, v, vp, h, h);
        std::erase_if(s.entries, [&](const auto& kv) { return kv.first.first != om; });
      } else {
        if (whi < wlo) throw PreconditionError("empty window");
        if (whi - wlo > wmax) throw PreconditionError("window exceeds --max-window");
        s = dbg.wts_window(u, v, vp, wlo, whi);
      }
      if (co.format == "csv") {
        write_wts_csv(std::cout, d, s, true);
      } else {
        json arr = json::array();
        for (auto& [k, m] : s.entries) arr.push_back({{"omega", k.first.str()}, {"e", k.second}, {"multiplicity", m}});
        emit({{"u", d.word_str(u)}, {"v", d.word_str(v)}, {"vprime", d.word_str(vp)}, {"entries", arr}});
      }
      return 0;
    }

    if (hmul->parsed()) {
      check_format(co.format, {"json"});
      Hecke H(aw);
      HeckeElement a, b;
      json echo = json::object();
      if (!hlhs.empty() || !hrhs.empty()) {
        if (hlhs.empty() || hrhs.empty()) throw PreconditionError("--lhs and --rhs go together");
        a = hecke_from_json(aw, read_json_file(hlhs));
        b = hecke_from_json(aw, read_json_file(hrhs));
      } else {
        if (hx.empty() || hz.empty()) throw PreconditionError("need --x and --z (or --lhs and --rhs)");
        auto x = aw.parse(hx), z = aw.parse(hz);
        echo = {{"x", element_json(aw, x)}, {"z", element_json(aw, z)}};
        a = Hecke::basis(x);
        b = Hecke::basis(z);
      }
      echo["product"] = hecke_to_json(aw, H.mul(a, b));
      emit(echo);
      return 0;
    }

    if (hcp->parsed()) {
      check_format(co.format, {"json", "csv"});
      auto x = aw.parse(hx);
      ClassPolyEngine eng(aw, hcut);
      auto f = eng.class_polynomials_cached(x);
      if (co.format == "csv")
        write_class_poly_csv(std::cout, aw, x, eng, f, true);
      else
        emit({{"x", element_json(aw, x)}, {"cut", hcut}, {"classes", class_polys_json(aw, eng, f)}});
      return 0;
    }

    if (hpred->parsed()) {
      check_format(co.format, {"json"});
      auto x = aw.parse(hx);
      if (!hz.empty() || !hy.empty()) {
        if (hz.empty() || hy.empty()) throw PreconditionError("--z and --y go together");
        auto z = aw.parse(hz), y = aw.parse(hy);
        auto pr = predicted_structure_constant(dbg, aw, x, z, y, hc1, houtside);
        json j{{"x", element_json(aw, x)},       {"z", element_json(aw, z)},
               {"y", element_json(aw, y)},       {"c1", hc1},
               {"c2", structure_c2(d, hc1)},           {"predicted", pr.poly.str()},
               {"in_proven_range", pr.in_proven_range}, {"note", pr.note}};
        if (hcompare) {
          Hecke H(aw);
          auto exact = H.structure_constant(x, z, aw.compose(y, z));
          j["exact"] = exact.str();
          j["match"] = exact == pr.poly;
        }
        emit(j);
        return 0;
      }
      auto lp = aw.lp_set(x);
      if (lp.size() != 1) throw PreconditionError("LP(x) is not a singleton");
      WIdx v = lp[0];
      Coweight a = d.act(d.inv(v), x.mu);
      long long a2 = d.pair_2rho(a);
      auto kx = aw.kappa_gamma(x);
      WIdx target = d.sigma_w(d.mul(x.w, v));
      std::set<RatVec> nus;
      for (auto& [k, m] : dbg.wts_window(v, target, target, 0, hbound).entries) nus.insert(d.sigma_average(a - k.first));
      std::map<RatVec, std::pair<QPoly, std::optional<QPoly>>> rows;
      for (auto& nu : nus) rows[nu].first = predicted_class_polynomial(dbg, aw, x, nu, kx);
      std::optional<ClassPolyEngine> eng;
      if (hcompare) {
        eng.emplace(aw, static_cast<int>(std::max(0LL, a2 - hbound)));
        for (auto& [k, p] : eng->class_polynomials(x)) {
          const ClassInfo& ci = eng->info(k);
          if (Rational(a2) - ci.nu.pair(d.two_rho()) > Rational(hbound)) continue;
          auto& row = rows[ci.nu];
          row.second = p;
          if (!nus.count(ci.nu)) row.first = predicted_class_polynomial(dbg, aw, x, ci.nu, kx);
        }
      }
      json arr = json::array();
      bool all = true;
      for (auto& [nu, row] : rows) {
        json r{{"nu", nu.str()}, {"kappa", kappa_str(kx)}, {"predicted", row.first.str()}};
        if (hcompare) {
          QPoly ex = row.second.value_or(QPoly());
          r["exact"] = ex.str();
          r["match"] = ex == row.first;
          all = all && ex == row.first;
        }
        arr.push_back(r);
      }
      json j{{"x", element_json(aw, x)}, {"v", d.word_str(v)}, {"bound", hbound}, {"classes", arr}};
      if (hcompare) j["all_match"] = all;
      emit(j);
      return 0;
    }

    BGTable bt(aw);
    ClassPolyEngine eng(aw);
    Adlv ad(aw, dbg, bt, eng);

    if (arep->parsed()) {
      check_format(co.format, {"json", "pretty"});
      auto x = aw.parse(ax);
      std::vector<BGPoint> bs = ab == "all" ? ad.bg_x(x) : std::vector<BGPoint>{parse_b(aw, bt, x, ab)};
      json arr = json::array();
      for (auto& b : bs) {
        auto t = ad.report(x, b);
        if (co.format == "pretty") {
          std::cout << aw.format_word(t.x) << "  b: " << t.b.key_str() << "  f = " << t.f.str();
          if (t.nonempty)
            std::cout << "  dim " << *t.dim << "  components " << *t.components << "  D " << *t.D << "\n";
          else
            std::cout << "  empty\n";
        }
        arr.push_back(report_json(aw, t));
      }
      if (co.format == "json") emit(ab == "all" ? json{{"reports", arr}} : arr[0]);
      return 0;
    }

    if (apred->parsed()) {
      check_format(co.format, {"json"});
      ad.set_e2_cap(acap);
      auto x = aw.parse(ax);
      BGPoint b = parse_b(aw, bt, x, ab);
      json j{{"x", element_json(aw, x)}, {"b", bg_json(bt.point(b.nu, b.kappa))}};
      if (avariant == "integral") {
        auto ip = ad.predict_integral(x, b);
        json E = json::object();
        for (WIdx u = 0; u < d.W_size(); ++u)
          for (size_t i = 0; i < ip.lp.size(); ++i)
            if (!ip.E[u][i].empty()) E[d.word_str(u) + " | " + d.word_str(ip.lp[i])] = lengths_json(ip.E[u][i]);
        json lp = json::array();
        for (auto v : ip.lp) lp.push_back(d.word_str(v));
        j["variant"] = "integral";
        j["lp"] = lp;
        j["E"] = E;
        j["d"] = ip.d ? json(*ip.d) : json("-inf");
        j["c"] = ip.c;
        j["nu_regular"] = ip.nu_regular;
      } else {
        Variant var;
        if (avariant == "E1") var = Variant::E1;
        else if (avariant == "E2") var = Variant::E2;
        else if (avariant == "superregular") var = Variant::Superregular;
        else throw PreconditionError("unknown variant '" + avariant + "'");
        std::vector<WIdx> vs = av.empty() ? aw.lp_set(x) : std::vector<WIdx>{parse_weyl(aw, av)};
        auto lp = aw.lp_set(x);
        json arr = json::array();
        for (auto v : vs) {
          if (std::find(lp.begin(), lp.end(), v) == lp.end()) throw PreconditionError(d.word_str(v) + " is not in LP(x)");
          arr.push_back(prediction_json(d, ad.predict_with_v(x, b, var, v)));
        }
        j["variant"] = variant_name(var);
        j["predictions"] = arr;
      }
      emit(j);
      return 0;
    }
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }

  return 0;
}
