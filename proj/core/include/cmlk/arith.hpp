#pragma once

#include <cstdint>
#include <vector>

#include "cmlk/rational.hpp"

// Exact elementary number theory: Kronecker symbols, discriminant
// decomposition, Hurwitz class numbers.  Everything here is a pure function
// of its inputs; the Hurwitz table is write-once after construction.

namespace cmlk {

// Kronecker symbol (a/n), defined for all integer pairs.
// Convention at 2: (a/2) = 0, +1, -1 for a even, a = +-1 (mod 8), a = +-3 (mod 8).
int kronecker(long long a, long long n);

bool is_prime(long long n);

// true iff d is a valid negative discriminant: d < 0 and d = 0,1 (mod 4).
bool is_discriminant(long long d);

// true iff d is a fundamental discriminant.  Throws std::invalid_argument
// unless is_discriminant(d).
bool is_fundamental(long long d);

struct disc_parts {
  long long fundamental;  // D0 < 0, fundamental
  long long conductor;    // f >= 1, d = D0 * f^2
};

// Unique decomposition d = D0 * f^2 with D0 fundamental.
disc_parts disc_decompose(long long d);

// Hurwitz class number H(n) for n > 0, n = 0,3 (mod 4): the class count of
// positive definite binary forms of discriminant -n, with classes of
// multiples of x^2+y^2 weighted 1/2 and of x^2+xy+y^2 weighted 1/3.
// Reference implementation by reduced-form enumeration.
rational hurwitz(long long n);

// Batch table of H(n) for all 0 < n <= bound (zero at n = 1,2 mod 4),
// stored as integers 6*H(n).
class hurwitz_table {
 public:
  explicit hurwitz_table(long long bound);

  long long bound() const { return bound_; }
  rational at(long long n) const;
  // 6*H(n) without the rational wrapper; n must be in range.
  int32_t sixths(long long n) const { return sixths_[static_cast<size_t>(n)]; }

 private:
  long long bound_;
  std::vector<int32_t> sixths_;
};

// v_p(n): exponent of the prime p in n (n != 0).
int valuation(long long n, long long p);

}  // namespace cmlk
