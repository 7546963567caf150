#pragma once

#include <string>
#include <vector>

#include "cmlk/arith.hpp"
#include "cmlk/quadform.hpp"
#include "cmlk/rational.hpp"

// The modular-forms side: the weight-3/2 Eisenstein series of the Gross
// theta family, cuspidal parts, Shimura lifts, the level-11 eta-product
// newform, twisted central L-values with rigorous tails, and the
// Kohnen-Zagier constant.

namespace cmlk {

// Exact-rational coefficient series indexed by n = |d| >= 0.
struct rational_series {
  std::vector<rational> a;

  long long limit() const { return static_cast<long long>(a.size()) - 1; }
  const rational& at(long long n) const { return a[static_cast<size_t>(n)]; }
};

// Coefficient at q^|d| of the Eisenstein series normalized to constant term 1:
//   (24/(p-1)) * (1 - chi_p(d'))/2 * H(|d'|),   d' = d / p^(2e),
// where p^e is the power of p in the conductor of d.  The character is
// evaluated at d' (equivalently at the fundamental part of d): that is the
// unique normalization for which theta minus Eisenstein is cuspidal at
// indices divisible by p^2 as well.
rational eisenstein_coefficient(long long p, long long d);
rational eisenstein_coefficient(long long p, long long d, const hurwitz_table&);

// Series of the above with a(0) = 1, up to n = limit.
rational_series eisenstein_series(long long p, long long limit);

// g = theta - Eisenstein; g(0) = 0.
rational_series cusp_part(const theta_series&, long long p);

// a_lift(n) = sum_{d | n} kronecker(-t, d) * g(t (n/d)^2) for n <= n_max;
// requires g known up to t * n_max^2.
rational_series shimura_lift(const rational_series& g, long long t, long long n_max);

struct newform_coefficients {
  long long level = 0;
  std::vector<long long> a;  // 1-indexed; a[0] = 0 unused
  enum class source_kind { eta_product, file } source = source_kind::eta_product;

  long long n_max() const { return static_cast<long long>(a.size()) - 1; }
  long long at(long long n) const { return a[static_cast<size_t>(n)]; }
};

// q-expansion of eta(z)^2 eta(11z)^2, the weight-2 level-11 newform.
newform_coefficients eta_product_level11(long long n_max);

// Plain text, line n holds a_L(n), 1-indexed and contiguous.
newform_coefficients load_newform_coefficients(const std::string& path, long long level);

// Central value of the chi_D-twist via the exponentially convergent series
//   L = sum_n 2 (a_L(n)/n) chi_D(n) exp(-2 pi n / (m sqrt p)),
// cut at the smallest X whose tail bound (integral comparison with
// |2 a_L(n) chi(n)/n| <= 4 e^{-cn}, Deligne) is below epsilon.
struct lvalue {
  double value = 0;
  double error_bound = 0;
  long long cutoff = 0;
  long long d = 0;    // twisting discriminant
  double scale = 0;   // m in exp(-2 pi n/(m sqrt p))

  double lo() const { return value - error_bound; }
  double hi() const { return value + error_bound; }
};

lvalue twisted_l_value(const newform_coefficients&, long long D, double m,
                       long long p, double epsilon);

// c = |g(m)|^2 / (L(G, -m, 1) sqrt(m)) at the smallest m with g(m) != 0 and
// gcd(m, p) = 1; interval propagated from the L-value error bound.
struct c_constant {
  long long m = 0;
  bool m_fundamental = false;  // whether -m is fundamental (reported, not required)
  rational g_m;
  double value = 0, lo = 0, hi = 0;
  lvalue l;
};
c_constant compute_c(const rational_series& g, long long p,
                     const newform_coefficients&, double epsilon);

// |g(|D|)|^2 / (sqrt(|D|) L(G, D, 1)) for fundamental D with chi_D(p) = -1;
// independent of D up to the numerical error.
struct kz_ratio {
  long long d = 0;
  rational g_d;
  double value = 0, lo = 0, hi = 0;
  lvalue l;
};
kz_ratio kohnen_zagier_ratio(const rational_series& g, const newform_coefficients&,
                             long long D, long long p, double epsilon);

}  // namespace cmlk
