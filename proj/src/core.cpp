#include "affdbg/core.hpp"

#include <cstdlib>
#include <sstream>

namespace affdbg {

void fail_assert(const char* cond, const std::string& msg, const char* file, int line) {
  std::ostringstream os;
  os << "assertion failed: " << cond << " (" << msg << ") at " << file << ":" << line;
  throw InternalError(os.str());
}

long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long lcm_ll(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  return mul_ck(a / gcd_ll(a, b), b < 0 ? -b : b);
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long long mod_pos(long long a, long long b) {
  long long m = a % b;
  if (m < 0) m += (b < 0 ? -b : b);
  return m;
}

Coweight::Coweight(std::initializer_list<long long> xs) {
  if (xs.size() > static_cast<size_t>(kMaxRank)) throw PreconditionError("lattice rank exceeds the supported maximum");
  n = static_cast<int>(xs.size());
  int i = 0;
  for (long long x : xs) v[i++] = x;
}

Coweight Coweight::from(const std::vector<long long>& xs) {
  if (xs.size() > static_cast<size_t>(kMaxRank)) throw PreconditionError("lattice rank exceeds the supported maximum");
  Coweight c(static_cast<int>(xs.size()));
  for (int i = 0; i < c.n; ++i) c.v[i] = xs[i];
  return c;
}

Coweight& Coweight::operator+=(const Coweight& o) {
  for (int i = 0; i < n; ++i) v[i] = add_ck(v[i], o.v[i]);
  return *this;
}

Coweight& Coweight::operator-=(const Coweight& o) {
  for (int i = 0; i < n; ++i) v[i] = sub_ck(v[i], o.v[i]);
  return *this;
}

Coweight Coweight::operator-() const {
  Coweight r(n);
  for (int i = 0; i < n; ++i) r.v[i] = -v[i];
  return r;
}

Coweight Coweight::operator*(long long c) const {
  Coweight r(n);
  for (int i = 0; i < n; ++i) r.v[i] = mul_ck(v[i], c);
  return r;
}

bool Coweight::is_zero() const {
  for (int i = 0; i < n; ++i)
    if (v[i]) return false;
  return true;
}

bool Coweight::operator<(const Coweight& o) const {
  if (n != o.n) return n < o.n;
  for (int i = 0; i < n; ++i)
    if (v[i] != o.v[i]) return v[i] < o.v[i];
  return false;
}

std::string Coweight::str() const {
  std::string s = "[";
  for (int i = 0; i < n; ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

long long pairing(const Coweight& mu, const Covector& alpha) {
  long long s = 0;
  for (int i = 0; i < mu.n; ++i) s = add_ck(s, mul_ck(mu.v[i], alpha.v[i]));
  return s;
}

size_t CoweightHash::operator()(const Coweight& c) const noexcept {
  size_t h = static_cast<size_t>(c.n);
  for (int i = 0; i < c.n; ++i) h = hash_mix(h, static_cast<size_t>(c.v[i]));
  return h;
}

Rational::Rational(long long n, long long d) {
  if (d == 0) throw InternalError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = gcd_ll(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num = n;
  den = d;
}

Rational Rational::operator+(const Rational& o) const {
  long long l = lcm_ll(den, o.den);
  return Rational(add_ck(mul_ck(num, l / den), mul_ck(o.num, l / o.den)), l);
}
Rational Rational::operator-(const Rational& o) const { return *this + (-o); }
Rational Rational::operator*(const Rational& o) const {
  long long g1 = gcd_ll(num, o.den), g2 = gcd_ll(o.num, den);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(mul_ck(num / g1, o.num / g2), mul_ck(den / g2, o.den / g1));
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw InternalError("rational division by zero");
  return *this * Rational(o.den, o.num);
}
bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}
std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

RatVec::RatVec(const Coweight& c, long long d) : num(c), den(d) {
  if (d == 0) throw InternalError("rational vector with zero denominator");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  long long g = den;
  for (int i = 0; i < num.n; ++i) g = gcd_ll(g, num[i]);
  if (g > 1) {
    den /= g;
    for (int i = 0; i < num.n; ++i) num[i] /= g;
  }
}

RatVec RatVec::operator+(const RatVec& o) const {
  long long l = lcm_ll(den, o.den);
  return RatVec(num * (l / den) + o.num * (l / o.den), l);
}
RatVec RatVec::operator-(const RatVec& o) const {
  long long l = lcm_ll(den, o.den);
  return RatVec(num * (l / den) - o.num * (l / o.den), l);
}
bool RatVec::operator<(const RatVec& o) const {
  for (int i = 0; i < num.n; ++i) {
    Rational a = (*this)[i], b = o[i];
    if (a != b) return a < b;
  }
  return false;
}
std::string RatVec::str() const {
  std::string s = "[";
  for (int i = 0; i < num.n; ++i) {
    if (i) s += ",";
    s += (*this)[i].str();
  }
  return s + "]";
}

}  // namespace affdbg
