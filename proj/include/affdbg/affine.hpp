#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "affdbg/rootdata.hpp"

namespace affdbg {

// x = w eps^mu
struct AffineElement {
  WIdx w = 0;
  Coweight mu;

  bool operator==(const AffineElement& o) const { return w == o.w && mu == o.mu; }
  bool operator!=(const AffineElement& o) const { return !(*this == o); }
  bool operator<(const AffineElement& o) const { return w != o.w ? w < o.w : mu < o.mu; }
};

struct AffineElementHash {
  size_t operator()(const AffineElement& x) const noexcept {
    return hash_mix(CoweightHash{}(x.mu), static_cast<size_t>(x.w));
  }
};

using ElementSet = std::unordered_set<AffineElement, AffineElementHash>;

struct AffineRoot {
  int alpha = 0;  // root index
  long long k = 0;
  bool operator==(const AffineRoot& o) const { return alpha == o.alpha && k == o.k; }
};

// Complete invariant of a sigma-conjugacy class of the extended affine Weyl
// group: the least (w', class of mu' modulo (sigma - w'^{-1})X) over the
// conjugates of x by the finite Weyl group.
struct ClassKey {
  WIdx w = 0;
  std::vector<long long> cls;
  bool operator==(const ClassKey& o) const { return w == o.w && cls == o.cls; }
  bool operator!=(const ClassKey& o) const { return !(*this == o); }
  bool operator<(const ClassKey& o) const { return w != o.w ? w < o.w : cls < o.cls; }
  std::string str() const;
};

struct ClassKeyHash {
  size_t operator()(const ClassKey& k) const noexcept {
    size_t h = static_cast<size_t>(k.w);
    for (auto c : k.cls) h = hash_mix(h, static_cast<size_t>(c));
    return h;
  }
};

class AffineWeyl {
 public:
  explicit AffineWeyl(const RootDatum& d);
  AffineWeyl(const AffineWeyl&) = delete;
  AffineWeyl& operator=(const AffineWeyl&) = delete;

  const RootDatum& datum() const { return d_; }

  AffineElement identity() const { return {0, d_.zero()}; }
  AffineElement translation(const Coweight& mu) const { return {0, mu}; }
  AffineElement finite(WIdx w) const { return {w, d_.zero()}; }
  AffineElement compose(const AffineElement& a, const AffineElement& b) const;
  AffineElement inverse(const AffineElement& a) const;
  AffineElement sigma(const AffineElement& a) const;
  AffineElement sigma_inv(const AffineElement& a) const;
  // y^{-1} x sigma(y)
  AffineElement sigma_conjugate(const AffineElement& x, const AffineElement& y) const;

  AffineRoot act(const AffineElement& x, const AffineRoot& a) const;
  bool is_positive(const AffineRoot& a) const { return a.k >= (d_.is_pos(a.alpha) ? 0 : 1); }
  int length(const AffineElement& x) const;

  // generators 0..l-1 are s_1..s_l, l..l+c-1 the affine s_0 of each component
  int num_gens() const { return static_cast<int>(gens_.size()); }
  const AffineElement& gen(int g) const { return gens_[g]; }
  const AffineRoot& gen_root(int g) const { return gen_roots_[g]; }
  int sigma_gen(int g) const { return sigma_gen_[g]; }
  std::string gen_name(int g) const;
  bool left_descent(const AffineElement& x, int g) const;
  bool right_descent(const AffineElement& x, int g) const;
  AffineElement lmul(int g, const AffineElement& x) const { return compose(gens_[g], x); }
  AffineElement rmul(const AffineElement& x, int g) const { return compose(x, gens_[g]); }
  // x = s_{g_1} ... s_{g_k} tau with tau of length zero; lex-least left-greedy word
  std::pair<std::vector<int>, AffineElement> reduced_word(const AffineElement& x) const;
  // reflection r_a = s_alpha eps^{k alpha^v}
  AffineElement reflection(const AffineRoot& a) const;

  // Omega (length-zero elements)
  const std::vector<AffineElement>& omega_generators() const { return omega_gens_; }  // with inverses
  AffineElement omega_of_pi1(const std::vector<long long>& cls) const;
  AffineElement omega_part(const AffineElement& x) const { return reduced_word(x).second; }

  bool bruhat_leq(const AffineElement& y, const AffineElement& x) const;
  AffineElement demazure(const AffineElement& x, const AffineElement& y) const;

  std::vector<WIdx> lp_set(const AffineElement& x) const;
  long long lp_value(const AffineElement& x, WIdx v) const;
  long long regularity(const AffineElement& x) const;
  bool is_regular(const AffineElement& x, long long C) const { return regularity(x) >= C; }

  RatVec newton_point(const AffineElement& x) const;
  std::vector<long long> kappa(const AffineElement& x) const { return d_.pi1().class_of(x.mu); }
  std::vector<long long> kappa_gamma(const AffineElement& x) const { return d_.pi1_gamma().class_of(x.mu); }
  bool is_straight(const AffineElement& x) const;
  // least dominant rational coweight >= avg_sigma(mu) in the dominance order
  RatVec conv(const Coweight& mu) const { return dominant_majorant(d_.sigma_average(mu)); }
  RatVec dominant_majorant(const RatVec& xi) const;
  RatVec pi_J(const Coweight& mu, const std::vector<int>& J) const;
  // dim V^sigma - dim V^{w sigma}
  int defect_of_straight(const AffineElement& x) const;

  ClassKey class_key(const AffineElement& x) const;
  bool same_sigma_class(const AffineElement& x, const AffineElement& y) const {
    return class_key(x) == class_key(y);
  }
  const LatticeQuotient& conj_quotient(WIdx w) const { return conjq_[w]; }

  // text formats
  AffineElement parse(const std::string& s) const;
  std::string format_word(const AffineElement& x) const;  // "s1 s2 t[1,0]"
  std::string format_wmu(const AffineElement& x) const;   // "w:[1,2] mu:[1,0]"
  std::string format_affine_word(const AffineElement& x) const;  // word over S_af and Omega

 private:
  AffineElement reduce_to_omega(AffineElement x) const;

  const RootDatum& d_;
  std::vector<AffineElement> gens_;
  std::vector<AffineRoot> gen_roots_;
  std::vector<int> sigma_gen_;
  std::vector<AffineElement> omega_gens_;
  std::vector<LatticeQuotient> conjq_;
};

// A point of B(G): Newton point and Kottwitz point in pi_1(G)_Gamma.
struct BGPoint {
  RatVec nu;
  std::vector<long long> kappa;
  int defect = 0;
  std::optional<Coweight> lambda;  // dominant, eps^lambda in the class
  std::optional<AffineElement> straight;
  bool resolved = false;  // defect known

  bool same(const BGPoint& o) const { return nu == o.nu && kappa == o.kappa; }
  bool operator<(const BGPoint& o) const { return nu != o.nu ? nu < o.nu : kappa < o.kappa; }
  std::string key_str() const;
};

// Resolves B(G) points (defect, lambda, straight representatives) with caches.
// Thread-safe.
class BGTable {
 public:
  explicit BGTable(const AffineWeyl& aw) : aw_(aw) {}

  BGPoint point_of(const AffineElement& x);
  BGPoint point(const RatVec& nu, const std::vector<long long>& kappa_gamma);
  std::optional<Coweight> find_lambda(const RatVec& nu, const std::vector<long long>& kappa_gamma) const;
  // all points with the given kappa and <nu,2rho> <= bound
  std::vector<BGPoint> catalog(const std::vector<long long>& kappa_gamma, long long bound);
  // the basic point with this kappa
  BGPoint basic(const std::vector<long long>& kappa_gamma);

 private:
  struct Layers {
    std::vector<std::vector<AffineElement>> layers;
    std::map<std::pair<RatVec, std::vector<long long>>, AffineElement> straight;
  };
  void grow(Layers& L, const std::vector<long long>& kappa_gamma, long long upto);

  const AffineWeyl& aw_;
  std::mutex mu_;
  std::map<std::vector<long long>, Layers> layers_;
  std::map<std::pair<RatVec, std::vector<long long>>, BGPoint> cache_;
};

std::string kappa_str(const std::vector<long long>& k);

}  // namespace affdbg
