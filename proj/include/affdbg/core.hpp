#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace affdbg {

constexpr int kMaxRank = 8;

// Bad input or an unmet mathematical hypothesis (CLI exit status 1).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Broken invariant inside the library (CLI exit status 2).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

[[noreturn]] void fail_assert(const char* cond, const std::string& msg, const char* file, int line);

#define AFFDBG_ASSERT(cond, msg)                                   \
  do {                                                             \
    if (!(cond)) ::affdbg::fail_assert(#cond, (msg), __FILE__, __LINE__); \
  } while (0)

inline long long add_ck(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw InternalError("integer overflow (add)");
  return r;
}
inline long long sub_ck(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw InternalError("integer overflow (sub)");
  return r;
}
inline long long mul_ck(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw InternalError("integer overflow (mul)");
  return r;
}
long long gcd_ll(long long a, long long b);
long long lcm_ll(long long a, long long b);
// floor division and nonnegative remainder
long long floor_div(long long a, long long b);
long long mod_pos(long long a, long long b);

// Fixed-capacity integer vector; used both for coweights (vectors on Z^r) and
// roots (covectors).  Entries past n are kept zero so hashing and comparison
// may look at the whole array.
struct Coweight {
  std::array<long long, kMaxRank> v{};
  int n = 0;

  Coweight() = default;
  explicit Coweight(int size) : n(size) {}
  Coweight(std::initializer_list<long long> xs);
  static Coweight from(const std::vector<long long>& xs);
  std::vector<long long> to_vector() const { return {v.begin(), v.begin() + n}; }

  int size() const { return n; }
  long long& operator[](int i) { return v[i]; }
  long long operator[](int i) const { return v[i]; }

  Coweight& operator+=(const Coweight& o);
  Coweight& operator-=(const Coweight& o);
  Coweight operator+(const Coweight& o) const { Coweight r = *this; return r += o; }
  Coweight operator-(const Coweight& o) const { Coweight r = *this; return r -= o; }
  Coweight operator-() const;
  Coweight operator*(long long c) const;
  bool is_zero() const;

  bool operator==(const Coweight& o) const { return n == o.n && v == o.v; }
  bool operator!=(const Coweight& o) const { return !(*this == o); }
  bool operator<(const Coweight& o) const;
  std::string str() const;  // "[a,b,c]"
};
using Covector = Coweight;

long long pairing(const Coweight& mu, const Covector& alpha);

struct CoweightHash {
  size_t operator()(const Coweight& c) const noexcept;
};

inline size_t hash_mix(size_t h, size_t x) {
  return h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n) {}  // NOLINT(implicit)
  Rational(long long n, long long d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num, den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return !(*this < o); }
  bool is_integer() const { return den == 1; }
  std::string str() const;
};

// Rational coweight num/den kept in lowest terms with den > 0.
struct RatVec {
  Coweight num;
  long long den = 1;

  RatVec() = default;
  explicit RatVec(const Coweight& c) : num(c), den(1) {}
  RatVec(const Coweight& c, long long d);

  int size() const { return num.n; }
  Rational operator[](int i) const { return Rational(num[i], den); }
  Rational pair(const Covector& a) const { return Rational(pairing(num, a), den); }
  bool is_integral() const { return den == 1; }
  RatVec operator+(const RatVec& o) const;
  RatVec operator-(const RatVec& o) const;
  bool operator==(const RatVec& o) const { return den == o.den && num == o.num; }
  bool operator!=(const RatVec& o) const { return !(*this == o); }
  bool operator<(const RatVec& o) const;
  std::string str() const;  // "[1/2,1/2]"
};

struct RatVecHash {
  size_t operator()(const RatVec& r) const noexcept {
    return hash_mix(CoweightHash{}(r.num), std::hash<long long>{}(r.den));
  }
};

}  // namespace affdbg
