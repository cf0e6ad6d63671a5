#pragma once

#include <optional>
#include <vector>

#include "affdbg/core.hpp"

namespace affdbg {

using IntMatrix = std::vector<std::vector<long long>>;  // row-major

IntMatrix identity_matrix(int n);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& a);
Coweight mat_apply(const IntMatrix& a, const Coweight& x);
bool is_identity(const IntMatrix& a);

// U * A * V = diag(d_0, ..., d_{rank-1}, 0, ...) with U, V unimodular and
// d_i | d_{i+1}, d_i > 0.
struct SmithForm {
  IntMatrix U, V;
  std::vector<long long> d;
  int rank = 0;
};
SmithForm smith_normal_form(const IntMatrix& a);

struct IntSolution {
  std::vector<long long> particular;
  std::vector<std::vector<long long>> kernel;  // basis of {x : Ax = 0}
};
// Integer solutions of A x = b, or nullopt.
std::optional<IntSolution> solve_integer(const IntMatrix& a, const std::vector<long long>& b);

int rank_q(const IntMatrix& a);
// Unique rational solution of A x = b for A of full column rank, or nullopt
// when b is not in the column span.
std::optional<std::vector<Rational>> solve_rational(const std::vector<std::vector<Rational>>& a,
                                                    const std::vector<Rational>& b);

// Z^r / L for L generated by the given vectors, presented through the Smith
// normal form.  class_of returns canonical coordinates: torsion coordinates
// reduced into [0, d_i), followed by the free coordinates.
class LatticeQuotient {
 public:
  LatticeQuotient() = default;
  LatticeQuotient(int r, const std::vector<Coweight>& generators);

  std::vector<long long> class_of(const Coweight& x) const;
  bool same_class(const Coweight& a, const Coweight& b) const { return class_of(a - b) == class_of(Coweight(a.n)); }
  bool contains(const Coweight& x) const;
  const std::vector<long long>& torsion() const { return torsion_; }
  int free_rank() const { return free_rank_; }
  int ambient_rank() const { return r_; }
  bool finite() const { return free_rank_ == 0; }
  long long order() const;  // 0 when infinite
  // Some lattice vector whose class has the given canonical coordinates.
  Coweight lift(const std::vector<long long>& cls) const;
  // All classes (requires finite()).
  std::vector<std::vector<long long>> elements() const;

 private:
  int r_ = 0;
  IntMatrix U_, Uinv_;
  std::vector<int> torsion_rows_;
  std::vector<long long> torsion_;
  std::vector<int> free_rows_;
  int free_rank_ = 0;
};

}  // namespace affdbg
