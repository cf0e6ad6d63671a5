#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "affdbg/core.hpp"
#include "affdbg/lattice.hpp"

namespace affdbg {

enum class LatticeKind { Adjoint, SimplyConnected, GL, Explicit };

struct DatumSpec {
  std::vector<std::string> types;  // "A2", "G2", ...
  LatticeKind lattice = LatticeKind::Adjoint;
  std::vector<int> sigma;  // 0-based permutation of simple indices; empty = id
  // Explicit lattice only.
  std::vector<Covector> simple_roots;
  std::vector<Coweight> simple_coroots;
  IntMatrix sigma_matrix;

  static DatumSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  bool operator==(const DatumSpec& o) const;
};

// Weyl group elements are small integers; 0 is the identity.
using WIdx = int;

struct ReflectionOrder {
  std::vector<int> word;       // reduced word of w0, 0-based simple indices
  std::vector<int> betas;      // positive root indices, beta_1 first
  std::vector<int> position;   // position[k] for positive root k
};

class RootDatum {
 public:
  static RootDatum load(const DatumSpec& spec);
  static RootDatum load_json(const nlohmann::json& j) { return load(DatumSpec::from_json(j)); }
  static RootDatum load_file(const std::string& path);
  const DatumSpec& spec() const { return spec_; }
  nlohmann::json to_json() const { return spec_.to_json(); }

  int rank() const { return r_; }          // lattice rank
  int ss_rank() const { return l_; }       // number of simple roots
  int num_pos() const { return N_; }       // |Phi+|
  const IntMatrix& pairing_matrix() const { return P_; }  // P[i][j] = <a_i^v, a_j>

  // roots are indexed 0..N-1 (positive) and N..2N-1 (negatives, -root(k-N))
  const Covector& root(int k) const { return roots_[k]; }
  const Coweight& coroot(int k) const { return coroots_[k]; }
  const std::vector<long long>& root_coeffs(int k) const { return root_coef_[k]; }
  int height(int k) const;
  bool is_pos(int k) const { return k < N_; }
  int neg(int k) const { return k < N_ ? k + N_ : k - N_; }
  int simple(int i) const { return simple_idx_[i]; }
  int simple_of_root(int k) const;  // -1 if not simple
  int root_index(const Covector& a) const;  // -1 if not a root
  const Covector& two_rho() const { return two_rho_; }
  const Coweight& two_rho_check() const { return two_rho_check_; }
  long long pair_2rho(const Coweight& mu) const { return pairing(mu, two_rho_); }

  const std::vector<std::vector<int>>& components() const { return comps_; }
  const std::vector<int>& highest_roots() const { return theta_; }
  int component_of(int simple_i) const { return comp_of_[simple_i]; }
  int reg_constant() const { return regC_; }
  std::string cartan_label() const;

  // Weyl group
  int W_size() const { return static_cast<int>(wlen_.size()); }
  WIdx w0() const { return w0_; }
  int length(WIdx w) const { return wlen_[w]; }
  WIdx mul(WIdx a, WIdx b) const { return mul_[static_cast<size_t>(a) * W_size() + b]; }
  WIdx inv(WIdx a) const { return inv_[a]; }
  WIdx lmul_s(int i, WIdx w) const { return lmul_[static_cast<size_t>(w) * l_ + i]; }
  WIdx rmul_s(WIdx w, int i) const { return rmul_[static_cast<size_t>(w) * l_ + i]; }
  int act_root(WIdx w, int k) const { return act_[static_cast<size_t>(w) * 2 * N_ + k]; }
  Coweight act(WIdx w, const Coweight& mu) const { return mat_apply(wmat_[w], mu); }
  Covector act_covec(WIdx w, const Covector& a) const;  // a o w^{-1}
  const IntMatrix& matrix(WIdx w) const { return wmat_[w]; }
  const std::vector<int>& word(WIdx w) const { return words_[w]; }  // lex-least reduced
  WIdx from_word(const std::vector<int>& word) const;
  WIdx reflection(int k) const { return refl_[k < N_ ? k : k - N_]; }
  WIdx s(int i) const { return rmul_s(0, i); }
  bool left_descent(WIdx w, int i) const { return length(lmul_s(i, w)) < length(w); }
  bool right_descent(WIdx w, int i) const { return length(rmul_s(w, i)) < length(w); }
  std::vector<int> support(WIdx w) const;
  std::string word_str(WIdx w) const;  // "s1 s2" or "1"
  // all reduced words of w (up to limit)
  std::vector<std::vector<int>> reduced_words(WIdx w, size_t limit = 100000) const;
  bool bruhat_leq(WIdx a, WIdx b) const;

  // sigma
  bool sigma_trivial() const { return sigma_trivial_; }
  int sigma_simple(int i) const { return sigma_[i]; }
  const IntMatrix& sigma_matrix() const { return S_; }
  int sigma_order() const { return sigma_ord_; }
  Coweight sigma(const Coweight& mu) const { return sigma_trivial_ ? mu : mat_apply(S_, mu); }
  Coweight sigma_inv(const Coweight& mu) const { return sigma_trivial_ ? mu : mat_apply(Sinv_, mu); }
  Coweight sigma_pow(const Coweight& mu, int k) const;
  int sigma_root(int k) const { return sroot_[k]; }
  WIdx sigma_w(WIdx w) const { return sw_[w]; }
  WIdx sigma_w_inv(WIdx w) const { return swinv_[w]; }
  RatVec sigma_average(const Coweight& mu) const;
  // sum of S^i mu over one sigma period
  Coweight sigma_orbit_sum(const Coweight& mu) const;

  // dominance
  bool is_dominant(const Coweight& mu) const;
  bool is_dominant(const RatVec& mu) const;
  // (mu_dom, w) with w mu = mu_dom and w of minimal length
  std::pair<Coweight, WIdx> dominantize(const Coweight& mu) const;
  RatVec dominantize(const RatVec& mu) const;
  // coefficients in simple coroots; nullopt if outside the rational span
  std::optional<std::vector<Rational>> coroot_coords(const RatVec& mu) const;
  // mu <= mu2: mu2 - mu is a nonnegative rational combination of positive coroots
  bool leq(const RatVec& a, const RatVec& b) const;
  bool in_coroot_lattice(const Coweight& mu) const { return pi1_.contains(mu); }
  bool in_coroot_span(const Coweight& mu, const std::vector<int>& J) const;  // Z-span of a_j^v, j in J

  // X / Z Phi^v, X / (Z Phi^v + (sigma-1) X), X / (sigma-1) X
  const LatticeQuotient& pi1() const { return pi1_; }
  const LatticeQuotient& pi1_gamma() const { return pi1g_; }
  const LatticeQuotient& x_gamma() const { return xg_; }

  // reflection orders
  ReflectionOrder reflection_order_from_word(const std::vector<int>& word) const;
  // order and n with s_{beta_{n+1}} ... s_{beta_N} = u0 and n = N - l(u0)
  std::pair<ReflectionOrder, int> order_with_tail(WIdx u0) const;
  // s_{beta_{n+1}} ... s_{beta_N}
  WIdx tail_product(const ReflectionOrder& o, int n) const;

  // quantum Bruhat graph
  std::pair<int, Coweight> qbg_distance_weight(WIdx u, WIdx v) const;
  // weights of all shortest paths (for checking path independence)
  std::vector<Coweight> qbg_all_shortest_weights(WIdx u, WIdx v) const;

  std::string coweight_str(const Coweight& mu) const { return mu.str(); }
  Coweight zero() const { return Coweight(r_); }

 private:
  void build_roots();
  void build_weyl();
  void build_sigma();
  void build_quotients();
  std::vector<std::pair<WIdx, int>> qbg_edges(WIdx w) const;

  DatumSpec spec_;
  int r_ = 0, l_ = 0, N_ = 0;
  IntMatrix P_;
  std::vector<std::string> comp_types_;
  std::vector<Covector> sroots_;
  std::vector<Coweight> scoroots_;
  std::vector<Covector> roots_;
  std::vector<Coweight> coroots_;
  std::vector<std::vector<long long>> root_coef_;
  std::unordered_map<Covector, int, CoweightHash> root_lookup_;
  std::vector<int> simple_idx_;
  Covector two_rho_;
  Coweight two_rho_check_;
  std::vector<std::vector<int>> comps_;
  std::vector<int> comp_of_;
  std::vector<int> theta_;
  int regC_ = 0;

  std::vector<int> wlen_;
  std::vector<WIdx> mul_, inv_, lmul_, rmul_, refl_;
  std::vector<int> act_;
  std::vector<IntMatrix> wmat_;
  std::vector<std::vector<int>> words_;
  WIdx w0_ = 0;

  bool sigma_trivial_ = true;
  std::vector<int> sigma_;
  IntMatrix S_, Sinv_;
  int sigma_ord_ = 1;
  std::vector<int> sroot_;
  std::vector<WIdx> sw_, swinv_;

  LatticeQuotient pi1_, pi1g_, xg_;
  std::vector<std::vector<Rational>> coroot_basis_q_;  // r x l
};

// Cartan data for one irreducible type: pairing matrix P[i][j] = <a_i^v, a_j>.
IntMatrix cartan_pairing(const std::string& type);

}  // namespace affdbg
