#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "affdbg/affine.hpp"
#include "affdbg/dbg.hpp"

namespace affdbg {

// Element of Z[Q]; dense, trailing zeros trimmed.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(long long c) {
    if (c) c_.push_back(c);
  }
  static QPoly monomial(int deg, long long c = 1);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1;  }  // -1 for zero
  int low_degree() const;  // -1 for zero
  long long coeff(int d) const { return d >= 0 && d < static_cast<int>(c_.size()) ? c_[d] : 0; }
  long long leading() const { return c_.empty() ? 0 : c_.back(); }
  long long at_zero() const { return coeff(0); }
  long long eval1() const;
  const std::vector<long long>& coeffs() const { return c_; }

  QPoly& add_term(int d, long long c);
  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  QPoly operator+(const QPoly& o) const { QPoly r = *this; return r += o; }
  QPoly operator-(const QPoly& o) const { QPoly r = *this; return r -= o; }
  QPoly operator*(const QPoly& o) const;
  QPoly shifted(int k) const;  // Q^k * this
  bool operator==(const QPoly& o) const { return c_ == o.c_; }
  bool operator!=(const QPoly& o) const { return c_ != o.c_; }

  std::string str() const;  // "Q^3+2Q", "0"
  nlohmann::json to_json() const;  // {"3":1,"1":2}
  static QPoly from_json(const nlohmann::json& j);

 private:
  void trim();
  std::vector<long long> c_;
};

using HeckeElement = std::map<AffineElement, QPoly>;

// (y, e) -> multiplicity
using YMultiset = std::map<std::pair<AffineElement, int>, long long>;

class Hecke {
 public:
  explicit Hecke(const AffineWeyl& aw) : aw_(aw) {}
  const AffineWeyl& affine() const { return aw_; }

  static HeckeElement basis(const AffineElement& x) { return {{x, QPoly(1)}}; }
  // T_s h for the affine generator g
  void lmul_gen(int g, HeckeElement& h) const;
  // T_x h
  HeckeElement lmul_basis(const AffineElement& x, const HeckeElement& h) const;
  HeckeElement mul(const HeckeElement& a, const HeckeElement& b) const;
  HeckeElement mul_basis(const AffineElement& x, const AffineElement& z) const {
    return lmul_basis(x, basis(z));
  }
  // Coefficients of T_{yz} in T_x T_z keyed by y, restricted to l(y) > l(x) - c1.
  std::map<AffineElement, QPoly> product_top(const AffineElement& x, const AffineElement& z, int c1) const;
  QPoly structure_constant(const AffineElement& x, const AffineElement& z, const AffineElement& target) const;

  YMultiset y_multiset(const AffineElement& x, WIdx w) const;
  // the 2 rho^v l(x) translate of w used by y_multiset
  AffineElement y_anchor(const AffineElement& x, WIdx w) const;

  // Q = 0
  static std::map<AffineElement, long long> at_q0(const HeckeElement& h);

 private:
  const AffineWeyl& aw_;
};

nlohmann::json hecke_to_json(const AffineWeyl& aw, const HeckeElement& h);
HeckeElement hecke_from_json(const AffineWeyl& aw, const nlohmann::json& j);

// A sigma-conjugacy class together with its cocenter data.
struct ClassInfo {
  ClassKey key;
  AffineElement min_rep;
  int min_len = 0;
  RatVec nu;
  std::vector<long long> kappa;  // in pi_1(G)_Gamma
};

using ClassPolys = std::map<ClassKey, QPoly>;

// Deligne-Lusztig reduction.  With cut > 0 every element of length < cut is
// dropped, so the result is exact on classes O with l(O) >= cut.
class ClassPolyEngine {
 public:
  explicit ClassPolyEngine(const AffineWeyl& aw, int cut = 0, std::optional<unsigned long long> seed = {});

  int cut() const { return cut_; }
  ClassPolys class_polynomials(const AffineElement& x);
  // class polynomials with the disk cache in AFFDBG_CACHE_DIR (if set)
  ClassPolys class_polynomials_cached(const AffineElement& x);
  const ClassInfo& info(const ClassKey& k);
  ClassInfo info_of(const AffineElement& minimal);
  bool is_min_length(const AffineElement& x);
  // f_{x,[b]}
  QPoly f_x_b(const AffineElement& x, const BGPoint& b);
  // all classes that occur, with their polynomials, grouped by B(G) point
  std::map<BGPoint, QPoly> f_x_all(const AffineElement& x);

  size_t memo_size() const;

 private:
  struct Step {
    bool minimal = false;
    AffineElement reducer;  // x' in the closure
    int g = -1;             // s with l(s x' sigma(s)) = l(x') - 2
  };
  Step find_step(const AffineElement& x);
  std::shared_ptr<const ClassPolys> compute(const AffineElement& x);
  AffineElement cyc(int g, const AffineElement& x) const;  // s x sigma(s)
  std::string cache_path(const AffineElement& x) const;

  const AffineWeyl& aw_;
  int cut_;
  std::optional<unsigned long long> seed_;
  unsigned long long rng_state_ = 0;
  mutable std::mutex mu_;
  std::unordered_map<AffineElement, std::shared_ptr<const ClassPolys>, AffineElementHash> memo_;
  std::map<ClassKey, ClassInfo> infos_;
};

// Structure constant predicted from the double Bruhat graph (sum over M).
struct StructurePrediction {
  QPoly poly;
  bool in_proven_range = true;
  std::string note;
};
// Throws PreconditionError if the LP sets are not singletons, or if the
// regularity hypotheses fail and allow_outside is false.
StructurePrediction predicted_structure_constant(const Dbg& dbg, const AffineWeyl& aw, const AffineElement& x,
                                                 const AffineElement& z, const AffineElement& y, int c1,
                                                 bool allow_outside = false);
long long structure_c2(const RootDatum& d, long long c1);

// Class polynomial predicted from wts(v => sigma(wv)) for a class with Newton
// point nu and Kottwitz point kappa (in pi_1(G)_Gamma).
QPoly predicted_class_polynomial(const Dbg& dbg, const AffineWeyl& aw, const AffineElement& x, const RatVec& nu,
                                 const std::vector<long long>& kappa);

void write_class_poly_csv(std::ostream& os, const AffineWeyl& aw, const AffineElement& x, ClassPolyEngine& eng,
                          const ClassPolys& f, bool header);

}  // namespace affdbg
