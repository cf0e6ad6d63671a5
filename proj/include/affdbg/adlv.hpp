#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "affdbg/affine.hpp"
#include "affdbg/dbg.hpp"
#include "affdbg/hecke.hpp"

namespace affdbg {

struct AdlvReport {
  AffineElement x;
  BGPoint b;
  QPoly f;  // f_{x,[b]}
  bool nonempty = false;
  std::optional<long long> dim, components, D;
};

enum class Variant { E1, E2, Superregular };
std::string variant_name(Variant v);

struct PredictionReport {
  Variant variant = Variant::E2;
  WIdx v = 0;  // the element of LP(x) used
  LengthMultiset E;
  bool nonempty = false;
  std::optional<Rational> dim;
  std::optional<int> maxE;
  long long max_mult = 0;  // multiplicity of max E: component bound
  bool hypothesis_met = true;  // C-regularity for E1/E2
  bool e2_capped = false;      // E2 multiplicities still grew in the last cap step
  std::string note;
};

struct IntegralPrediction {
  // E(u, v) for u in W (outer) and v in LP(x) (inner)
  std::vector<WIdx> lp;
  std::vector<std::vector<LengthMultiset>> E;
  std::optional<int> d;  // nullopt = -infinity
  long long c = 0;
  bool nu_regular = false;  // <nu(b), alpha> >= 1 for all positive alpha
};

class Adlv {
 public:
  Adlv(const AffineWeyl& aw, const Dbg& dbg, BGTable& bt, ClassPolyEngine& eng)
      : aw_(aw), dbg_(dbg), bt_(bt), eng_(eng) {}

  // E2 is unbounded in omega; it is enumerated for
  // <omega,2rho> <= <v^{-1}mu - nu, 2rho> + e2_cap
  void set_e2_cap(long long c) { e2_cap_ = c; }
  long long e2_cap() const { return e2_cap_; }

  const AffineWeyl& affine() const { return aw_; }
  BGTable& bg() { return bt_; }

  AdlvReport report(const AffineElement& x, const BGPoint& b);
  // points with nonempty X_x(b), sorted
  std::vector<BGPoint> bg_x(const AffineElement& x);
  // bg_x plus every kappa-compatible point whose Newton point lies below the
  // generic one
  std::vector<BGPoint> candidates(const AffineElement& x);

  // uses the unique element of LP(x); throws otherwise
  PredictionReport predict_regular(const AffineElement& x, const BGPoint& b, Variant var);
  // same multisets, any v in LP(x)
  PredictionReport predict_with_v(const AffineElement& x, const BGPoint& b, Variant var, WIdx v);
  // E(u,v), d, c
  IntegralPrediction predict_integral(const AffineElement& x, const BGPoint& b);

 private:
  const AffineWeyl& aw_;
  const Dbg& dbg_;
  BGTable& bt_;
  ClassPolyEngine& eng_;
  long long e2_cap_ = 12;
};

// residue D from dim = (l(x) + D - <nu,2rho> - defect) / 2
long long residue_D(const AffineWeyl& aw, const AffineElement& x, const BGPoint& b, long long dim);
bool nu_regular(const RootDatum& d, const RatVec& nu, const Rational& bound);

// conjecture checks; empty result means no violation
std::vector<std::string> check_shrunken(const AdlvReport& t, const PredictionReport& p, bool kappa_ok);
std::vector<std::string> check_integral(const AdlvReport& t, const IntegralPrediction& p);
std::vector<std::string> check_regular(const AdlvReport& t, const PredictionReport& p);

// all x with min_len <= l(x) <= max_len and kappa(x) in kappas (all classes if
// empty and pi_1 is finite), sorted by (length, element)
std::vector<AffineElement> elements_up_to(const AffineWeyl& aw, int min_len, int max_len,
                                          const std::vector<std::vector<long long>>& kappas = {});

struct ScanConfig {
  nlohmann::json datum;
  int min_length = 0;
  int max_length = 0;
  std::vector<std::string> predictions;  // shrunken, integral, regular
  int workers = 1;
  long long regularity = -1;       // regular: C (default: the regularity constant)
  long long max_elements = 200000; // resource limit
  std::vector<std::vector<long long>> kappas;

  static ScanConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ScanResult {
  std::vector<nlohmann::json> records;  // canonical order
  nlohmann::json summary;
  long long violations = 0;
  bool partial = false;
};

ScanResult run_scan(const ScanConfig& cfg);
void write_jsonl(std::ostream& os, const std::vector<nlohmann::json>& records);

nlohmann::json bg_json(const BGPoint& b);
nlohmann::json lengths_json(const LengthMultiset& E);

}  // namespace affdbg
