#include "cmlk/arith.hpp"

#include <cmath>
#include <stdexcept>

namespace cmlk {

namespace {

// Jacobi symbol for odd positive n.
int jacobi(long long a, long long n) {
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      long long r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

int kronecker_two(long long a) {
  if (a % 2 == 0) return 0;
  long long r = a % 8;
  if (r < 0) r += 8;
  return (r == 1 || r == 7) ? 1 : -1;
}

}  // namespace

int kronecker(long long a, long long n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  while (n % 2 == 0) {
    n /= 2;
    int k2 = kronecker_two(a);
    if (k2 == 0) return 0;
    result *= k2;
  }
  return result * jacobi(a, n);
}

bool is_prime(long long n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (long long d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

bool is_discriminant(long long d) {
  if (d >= 0) return false;
  long long r = ((d % 4) + 4) % 4;
  return r == 0 || r == 1;
}

namespace {

bool squarefree(long long n) {
  if (n % 4 == 0) return false;
  for (long long f = 3; f * f <= n; f += 2) {
    if (n % (f * f) == 0) return false;
  }
  return true;
}

}  // namespace

bool is_fundamental(long long d) {
  if (!is_discriminant(d))
    throw std::invalid_argument("is_fundamental: not a negative discriminant");
  long long n = -d;
  if (n % 4 == 3) return squarefree(n);
  // d = 4m, fundamental iff m squarefree and m = 2,3 (mod 4).
  long long m = n / 4;
  long long r = m % 4;
  if (r != 1 && r != 2) return false;  // -m = 3,2 (mod 4)
  return squarefree(m);
}

disc_parts disc_decompose(long long d) {
  if (!is_discriminant(d))
    throw std::invalid_argument("disc_decompose: not a negative discriminant");
  // |d| = s * t^2 with s squarefree, by trial division.
  long long n = -d;
  long long s = 1, t = 1;
  for (long long f = 2; f * f <= n; ++f) {
    if (n % f != 0) continue;
    int e = 0;
    while (n % f == 0) {
      n /= f;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) t *= f;
    if (e % 2) s *= f;
  }
  s *= n;
  if (s % 4 == 3) {  // -s = 1 (mod 4): -s is itself fundamental
    return {-s, t};
  }
  // -s = 2,3 (mod 4): fundamental discriminant is -4s; t is even here
  // because d = 0,1 (mod 4).
  return {-4 * s, t / 2};
}

rational hurwitz(long long n) {
  if (n <= 0 || n % 4 == 1 || n % 4 == 2)
    throw std::invalid_argument("hurwitz: need n > 0 with n = 0,3 (mod 4)");
  // Reduced forms (a,b,c), |b| <= a <= c, b^2 - 4ac = -n; enumerate b >= 0
  // and count the mirror (a,-b,c) when it is a distinct reduced form.
  long long total6 = 0;
  for (long long b = (n % 2 == 0) ? 0 : 1; 3 * b * b <= n; b += 2) {
    long long ac = (n + b * b) / 4;
    for (long long a = std::max<long long>(b, 1); a * a <= ac; ++a) {
      if (ac % a != 0) continue;
      long long c = ac / a;
      if (a == b && a == c) total6 += 2;        // k(x^2+xy+y^2): weight 1/3
      else if (b == 0 && a == c) total6 += 3;   // k(x^2+y^2): weight 1/2
      else if (b == 0 || a == b || a == c) total6 += 6;
      else total6 += 12;                        // (a,b,c) and (a,-b,c)
    }
  }
  return rational(total6, 6);
}

hurwitz_table::hurwitz_table(long long bound) : bound_(bound) {
  if (bound < 0) throw std::invalid_argument("hurwitz_table: negative bound");
  sixths_.assign(static_cast<size_t>(bound) + 1, 0);
  // Sweep all reduced (a,b,c) with 4ac - b^2 <= bound.
  for (long long a = 1; 3 * a * a <= bound; ++a) {
    for (long long b = 0; b <= a; ++b) {
      for (long long c = a;; ++c) {
        long long n = 4 * a * c - b * b;
        if (n > bound) break;
        if (n <= 0) continue;
        int32_t w;
        if (a == b && a == c) w = 2;
        else if (b == 0 && a == c) w = 3;
        else if (b == 0 || a == b || a == c) w = 6;
        else w = 12;
        sixths_[static_cast<size_t>(n)] += w;
      }
    }
  }
}

rational hurwitz_table::at(long long n) const {
  if (n <= 0 || n > bound_)
    throw std::invalid_argument("hurwitz_table: index out of range");
  return rational(sixths_[static_cast<size_t>(n)], 6);
}

int valuation(long long n, long long p) {
  if (n == 0) throw std::invalid_argument("valuation of 0");
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

}  // namespace cmlk
