#include "cmlk/modforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "cmlk/errors.hpp"

namespace cmlk {

namespace {

// d with the p-square part of its conductor removed: d / p^(2 v_p(f)).
long long strip_p_square(long long p, long long d) {
  long long n = -d;
  long long pp = p * p;
  while (n % pp == 0) n /= pp;
  return -n;
}

rational eisenstein_impl(long long p, long long d, const hurwitz_table* table) {
  if (!is_discriminant(d))
    throw std::invalid_argument("eisenstein_coefficient: d must be a negative discriminant");
  long long dd = strip_p_square(p, d);
  int chi = kronecker(dd, p);
  if (chi == 1) return rational(0);
  rational h = table ? table->at(-dd) : hurwitz(-dd);
  return rational(24, p - 1) * rational(1 - chi, 2) * h;
}

}  // namespace

rational eisenstein_coefficient(long long p, long long d) {
  return eisenstein_impl(p, d, nullptr);
}

rational eisenstein_coefficient(long long p, long long d, const hurwitz_table& table) {
  return eisenstein_impl(p, d, &table);
}

rational_series eisenstein_series(long long p, long long limit) {
  if (limit < 0) throw std::invalid_argument("eisenstein_series: negative limit");
  rational_series s;
  s.a.assign(static_cast<size_t>(limit) + 1, rational(0));
  s.a[0] = rational(1);
  hurwitz_table table(limit);
  for (long long n = 3; n <= limit; ++n) {
    long long r = n % 4;
    if (r == 1 || r == 2) continue;
    s.a[static_cast<size_t>(n)] = eisenstein_coefficient(p, -n, table);
  }
  return s;
}

rational_series cusp_part(const theta_series& theta, long long p) {
  rational_series g;
  g.a.assign(static_cast<size_t>(theta.limit) + 1, rational(0));
  hurwitz_table table(theta.limit);
  for (long long n = 3; n <= theta.limit; ++n) {
    long long r = n % 4;
    if (r == 1 || r == 2) continue;
    g.a[static_cast<size_t>(n)] =
        rational(theta.at(n)) - eisenstein_coefficient(p, -n, table);
  }
  return g;
}

rational_series shimura_lift(const rational_series& g, long long t, long long n_max) {
  if (n_max < 1) throw std::invalid_argument("shimura_lift: need n_max >= 1");
  if (!(t % 4 == 0 || (t % 4 == 3 && is_fundamental(-t))))
    throw std::invalid_argument(
        "shimura_lift: t must satisfy 4 | t, or t = 3 (mod 4) with -t fundamental");
  if (g.limit() < t * n_max * n_max)
    throw computation_error(computation_error::kind::inconsistent_input,
                            "shimura_lift: g must be known up to t*n_max^2 = " +
                                std::to_string(t * n_max * n_max));
  rational_series out;
  out.a.assign(static_cast<size_t>(n_max) + 1, rational(0));
  for (long long n = 1; n <= n_max; ++n) {
    rational sum(0);
    for (long long d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      int chi = kronecker(-t, d);
      if (chi == 0) continue;
      long long m = n / d;
      sum += rational(chi) * g.at(t * m * m);
    }
    out.a[static_cast<size_t>(n)] = sum;
  }
  return out;
}

newform_coefficients eta_product_level11(long long n_max) {
  if (n_max < 1) throw std::invalid_argument("eta_product_level11: need n_max >= 1");
  if (n_max > 2'000'000)
    throw computation_error(computation_error::kind::memory_budget,
                            "eta_product_level11: n_max too large");
  const long long nn = n_max;  // product series needed up to q^(n_max - 1)
  // Euler function by the pentagonal number theorem, as (exponent, sign).
  std::vector<std::pair<long long, long long>> pent{{0, 1}};
  for (long long k = 1;; ++k) {
    long long g1 = k * (3 * k - 1) / 2;
    long long g2 = k * (3 * k + 1) / 2;
    if (g1 > nn && g2 > nn) break;
    long long s = (k % 2 == 0) ? 1 : -1;
    if (g1 <= nn) pent.push_back({g1, s});
    if (g2 <= nn) pent.push_back({g2, s});
  }
  // E(q)^2 as a dense array (sparse x sparse convolution).
  std::vector<long long> esq(static_cast<size_t>(nn) + 1, 0);
  for (const auto& [i, si] : pent)
    for (const auto& [j, sj] : pent) {
      if (i + j > nn) continue;
      esq[static_cast<size_t>(i + j)] += si * sj;
    }
  // Multiply by E(q^11)^2: the second factor is esq read at multiples of 11.
  std::vector<long long> prod(static_cast<size_t>(nn) + 1, 0);
  for (long long k = 0; 11 * k <= nn; ++k) {
    long long w = esq[static_cast<size_t>(k)];
    if (w == 0) continue;
    long long base = 11 * k;
    for (long long i = 0; i + base <= nn; ++i) {
      if (esq[static_cast<size_t>(i)] == 0) continue;
      prod[static_cast<size_t>(i + base)] += w * esq[static_cast<size_t>(i)];
    }
  }
  newform_coefficients out;
  out.level = 11;
  out.source = newform_coefficients::source_kind::eta_product;
  out.a.assign(static_cast<size_t>(n_max) + 1, 0);
  for (long long n = 1; n <= n_max; ++n)
    out.a[static_cast<size_t>(n)] = prod[static_cast<size_t>(n - 1)];  // leading q
  // Deligne: |a(n)| <= sigma_0(n) sqrt(n)
  for (long long n = 1; n <= n_max; ++n) {
    long long divisors = 0;
    for (long long d = 1; d * d <= n; ++d)
      if (n % d == 0) divisors += (d * d == n) ? 1 : 2;
    double bound = static_cast<double>(divisors) * std::sqrt(static_cast<double>(n));
    if (std::llabs(out.a[static_cast<size_t>(n)]) > bound + 1e-9)
      throw std::logic_error("eta product violates the Deligne bound");
  }
  return out;
}

newform_coefficients load_newform_coefficients(const std::string& path,
                                               long long level) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open newform coefficient file: " + path);
  newform_coefficients out;
  out.level = level;
  out.source = newform_coefficients::source_kind::file;
  out.a.push_back(0);
  long long v;
  while (in >> v) out.a.push_back(v);
  if (out.n_max() < 1 || out.at(1) != 1)
    throw std::invalid_argument("newform file must start with a(1) = 1");
  for (long long n = 1; n <= out.n_max(); ++n) {
    long long divisors = 0;
    for (long long d = 1; d * d <= n; ++d)
      if (n % d == 0) divisors += (d * d == n) ? 1 : 2;
    if (std::llabs(out.at(n)) >
        static_cast<double>(divisors) * std::sqrt(static_cast<double>(n)) + 1e-9)
      throw std::invalid_argument("newform file violates the Deligne bound at n=" +
                                  std::to_string(n));
  }
  return out;
}

namespace {

// Tail of sum_{n > X} 4 e^{-cn} by integral comparison: 4 e^{-cX} / c.
double tail_bound(double c, long long x) {
  return 4.0 * std::exp(-c * static_cast<double>(x)) / c;
}

}  // namespace

lvalue twisted_l_value(const newform_coefficients& coeffs, long long D, double m,
                       long long p, double epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("twisted_l_value: epsilon must be > 0");
  if (m <= 0) throw std::invalid_argument("twisted_l_value: scale m must be > 0");
  const double c = 2.0 * M_PI / (m * std::sqrt(static_cast<double>(p)));
  // smallest cutoff with tail < epsilon
  long long x = static_cast<long long>(std::ceil(std::log(4.0 / (c * epsilon)) / c));
  x = std::max<long long>(x, 1);
  while (tail_bound(c, x) >= epsilon) ++x;
  while (x > 1 && tail_bound(c, x - 1) < epsilon) --x;
  if (x > coeffs.n_max())
    throw computation_error(
        computation_error::kind::tolerance_unreachable,
        "twisted_l_value: epsilon needs coefficients up to n_max >= " +
            std::to_string(x) + " (have " + std::to_string(coeffs.n_max()) + ")");
  double sum = 0;
  for (long long n = 1; n <= x; ++n) {
    int chi = kronecker(D, n);
    if (chi == 0) continue;
    sum += 2.0 * static_cast<double>(coeffs.at(n)) * chi *
           std::exp(-c * static_cast<double>(n)) / static_cast<double>(n);
  }
  lvalue out;
  out.value = sum;
  out.error_bound = tail_bound(c, x);
  out.cutoff = x;
  out.d = D;
  out.scale = m;
  return out;
}

c_constant compute_c(const rational_series& g, long long p,
                     const newform_coefficients& coeffs, double epsilon) {
  long long m = 0;
  for (long long n = 1; n <= g.limit(); ++n) {
    if (n % p == 0) continue;
    if (!g.at(n).is_zero()) {
      m = n;
      break;
    }
  }
  if (m == 0)
    throw computation_error(computation_error::kind::inconsistent_input,
                            "compute_c: g vanishes at every index coprime to p");
  lvalue l = twisted_l_value(coeffs, -m, static_cast<double>(m), p, epsilon);
  if (l.lo() <= 0)
    throw computation_error(computation_error::kind::tolerance_unreachable,
                            "compute_c: L-value indistinguishable from 0 at epsilon");
  c_constant out;
  out.m = m;
  out.m_fundamental = is_fundamental(-m);
  out.g_m = g.at(m);
  double num = out.g_m.to_double();
  num *= num;
  double root = std::sqrt(static_cast<double>(m));
  out.value = num / (l.value * root);
  out.lo = num / (l.hi() * root);
  out.hi = num / (l.lo() * root);
  out.l = l;
  return out;
}

kz_ratio kohnen_zagier_ratio(const rational_series& g,
                             const newform_coefficients& coeffs, long long D,
                             long long p, double epsilon) {
  if (!is_fundamental(D))
    throw std::invalid_argument("kohnen_zagier_ratio: D must be fundamental");
  if (kronecker(D, p) != -1)
    throw std::invalid_argument("kohnen_zagier_ratio: need kronecker(D, p) = -1");
  long long n = -D;
  if (g.limit() < n)
    throw computation_error(computation_error::kind::inconsistent_input,
                            "kohnen_zagier_ratio: g not known at |D|");
  lvalue l = twisted_l_value(coeffs, D, static_cast<double>(n), p, epsilon);
  kz_ratio out;
  out.d = D;
  out.g_d = g.at(n);
  out.l = l;
  if (out.g_d.is_zero()) {
    // exception discriminant: the half-integral coefficient vanishes
    out.value = out.lo = out.hi = 0;
    return out;
  }
  if (l.lo() <= 0)
    throw computation_error(computation_error::kind::tolerance_unreachable,
                            "kohnen_zagier_ratio: L-value indistinguishable from 0");
  double num = out.g_d.to_double();
  num *= num;
  double root = std::sqrt(static_cast<double>(n));
  out.value = num / (root * l.value);
  out.lo = num / (root * l.hi());
  out.hi = num / (root * l.lo());
  return out;
}

}  // namespace cmlk
