#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "cmlk/errors.hpp"
#include "cmlk/modforms.hpp"
#include "cmlk/quatorders.hpp"

using namespace cmlk;

namespace {

theta_series theta11a() {
  static theta_series t = compute_theta(ternary_form{{4, 11, 12, 0, 4, 0}}, 8000);
  return t;
}
theta_series theta11b() {
  static theta_series t = compute_theta(ternary_form{{3, 15, 15, -2, 2, 14}}, 8000);
  return t;
}

}  // namespace

TEST_SUITE("modforms") {

TEST_CASE("Eisenstein coefficients at p = 11") {
  CHECK(eisenstein_coefficient(11, -3) == rational(4, 5));
  CHECK(eisenstein_coefficient(11, -4) == rational(6, 5));
  CHECK(eisenstein_coefficient(11, -11) == rational(6, 5));
  CHECK(eisenstein_coefficient(11, -12) == rational(16, 5));
  // p^2 | d: the character acts through d / p^(2e)
  CHECK(eisenstein_coefficient(11, -363) == rational(4, 5));
  CHECK(eisenstein_coefficient(11, -847) == rational(0));  // -847/121 = -7, split
  CHECK_THROWS_AS(eisenstein_coefficient(11, -5), std::invalid_argument);
  CHECK_THROWS_AS(eisenstein_coefficient(11, 3), std::invalid_argument);
}

TEST_CASE("Eisenstein vanishes exactly at split discriminants") {
  for (long long n = 3; n <= 2000; ++n) {
    if (n % 4 == 1 || n % 4 == 2) continue;
    long long m = n;
    while (m % 121 == 0) m /= 121;
    bool vanish = eisenstein_coefficient(11, -n).is_zero();
    CHECK(vanish == (kronecker(-m, 11) == 1));
  }
}

TEST_CASE("Eisenstein equals the mass-weighted theta average at p = 11") {
  theta_series t1 = theta11a(), t2 = theta11b();
  // weights w = 4 and 6; sum 1/w = 5/12
  for (long long n = 1; n <= 4000; ++n) {
    rational avg = (rational(t1.at(n), 4) + rational(t2.at(n), 6)) / rational(5, 12);
    rational e = (n % 4 == 0 || n % 4 == 3) ? eisenstein_coefficient(11, -n)
                                            : rational(0);
    CHECK(avg == e);
  }
}

TEST_CASE("cusp parts at p = 11") {
  rational_series g1 = cusp_part(theta11a(), 11);
  rational_series g2 = cusp_part(theta11b(), 11);
  CHECK(g1.at(0) == rational(0));
  CHECK(g2.at(3) == rational(6, 5));
  CHECK(g2.at(4) == rational(-6, 5));
  CHECK(g2.at(11) == rational(-6, 5));
  CHECK(g2.at(12) == rational(-6, 5));
  CHECK(g1.at(3) == rational(-4, 5));
  CHECK(g1.at(4) == rational(4, 5));
  // exact proportionality g1 = (-2/3) g2
  for (long long n = 0; n <= g1.limit(); ++n)
    CHECK(g1.at(n) * rational(3) == g2.at(n) * rational(-2));
}

TEST_CASE("eta product") {
  newform_coefficients eta = eta_product_level11(200);
  CHECK(eta.at(1) == 1);
  CHECK(eta.at(2) == -2);
  CHECK(eta.at(3) == -1);
  CHECK(eta.at(4) == 2);
  CHECK(eta.at(5) == 1);
  CHECK(eta.at(11) == 1);
  // multiplicative on coprime pairs
  for (long long m = 1; m <= 14; ++m)
    for (long long n = 1; n <= 14; ++n) {
      if (std::gcd(m, n) != 1 || m * n > 200) continue;
      CHECK(eta.at(m * n) == eta.at(m) * eta.at(n));
    }
}

TEST_CASE("shimura lift at p = 11, t = 3") {
  rational_series g2 = cusp_part(theta11b(), 11);
  // normalize so g(3) = 1
  rational scale = rational(1) / g2.at(3);
  rational_series gn;
  gn.a.reserve(g2.a.size());
  for (const rational& v : g2.a) gn.a.push_back(v * scale);

  rational_series lift = shimura_lift(gn, 3, 51);  // needs g to 3*51^2 = 7803
  CHECK(lift.at(1) == rational(1));
  CHECK(lift.at(2) == rational(-2));
  CHECK(lift.at(3) == rational(-1));
  CHECK(lift.at(4) == rational(2));
  CHECK(lift.at(5) == rational(1));

  newform_coefficients eta = eta_product_level11(60);
  for (long long n = 1; n <= 51; ++n) {
    if (n % 11 == 0) {
      // single-t correspondence gives the newform minus its 11-oldform shift
      CHECK(lift.at(n) == rational(eta.at(n) - eta.at(n / 11)));
    } else {
      CHECK(lift.at(n) == rational(eta.at(n)));
    }
  }

  CHECK_THROWS_AS(shimura_lift(gn, 5, 10), std::invalid_argument);
  CHECK_THROWS_AS(shimura_lift(gn, 3, 1000), computation_error);
}

TEST_CASE("L-value tail bound honored under cutoff doubling") {
  newform_coefficients eta = eta_product_level11(4000);
  lvalue l = twisted_l_value(eta, -3, 3.0, 11, 1e-10);
  CHECK(l.value > 0);
  CHECK(l.error_bound < 1e-10);
  // doubling the cutoff moves the value by less than the reported bound
  double c = 2.0 * M_PI / (3.0 * std::sqrt(11.0));
  double doubled = 0;
  for (long long n = 1; n <= 2 * l.cutoff; ++n) {
    int chi = kronecker(-3, n);
    if (chi == 0) continue;
    doubled += 2.0 * static_cast<double>(eta.at(n)) * chi * std::exp(-c * n) / n;
  }
  CHECK(std::abs(doubled - l.value) < l.error_bound);
}

TEST_CASE("loose epsilon needs only a short sum") {
  newform_coefficients eta = eta_product_level11(50);
  lvalue l = twisted_l_value(eta, -3, 3.0, 11, 1000.0);
  CHECK(l.cutoff == 1);
  CHECK(l.error_bound < 1000.0);
}

TEST_CASE("unreachable epsilon reports the required length") {
  newform_coefficients eta = eta_product_level11(10);
  CHECK_THROWS_WITH_AS(twisted_l_value(eta, -3, 3.0, 11, 1e-12),
                       doctest::Contains("n_max"), computation_error);
}

TEST_CASE("compute_c at p = 11") {
  rational_series g1 = cusp_part(theta11a(), 11);
  rational_series g2 = cusp_part(theta11b(), 11);
  newform_coefficients eta = eta_product_level11(4000);
  c_constant c1 = compute_c(g1, 11, eta, 1e-10);
  CHECK(c1.m == 3);
  CHECK(c1.g_m == rational(-4, 5));
  CHECK(c1.m_fundamental);
  c_constant c2 = compute_c(g2, 11, eta, 1e-10);
  CHECK(c2.m == 3);
  CHECK(c2.g_m == rational(6, 5));
  CHECK(c2.lo <= c2.value);
  CHECK(c2.value <= c2.hi);
  // |a_g(m)|^2 homogeneity: scaling g by 2 scales c by 4
  rational_series doubled;
  for (const rational& v : g2.a) doubled.a.push_back(v * rational(2));
  c_constant c4 = compute_c(doubled, 11, eta, 1e-10);
  CHECK(c4.value == doctest::Approx(4.0 * c2.value).epsilon(1e-12));
  // and |b|^2 c is invariant: b halves when g doubles
  CHECK(doctest::Approx(c4.value / 4.0).epsilon(1e-12) == c2.value);

  rational_series zero;
  zero.a.assign(100, rational(0));
  CHECK_THROWS_AS(compute_c(zero, 11, eta, 1e-10), computation_error);
}

TEST_CASE("Kohnen-Zagier ratio is constant across discriminants") {
  rational_series g2 = cusp_part(theta11b(), 11);
  newform_coefficients eta = eta_product_level11(6000);
  kz_ratio r3 = kohnen_zagier_ratio(g2, eta, -3, 11, 1e-10);
  kz_ratio r4 = kohnen_zagier_ratio(g2, eta, -4, 11, 1e-10);
  CHECK(r3.value == doctest::Approx(0.49355073).epsilon(1e-6));
  CHECK(r4.value == doctest::Approx(r3.value).epsilon(1e-8));
  // scaling g by lambda scales the ratio by lambda^2
  rational_series scaled;
  for (const rational& v : g2.a) scaled.a.push_back(v * rational(3));
  kz_ratio r3s = kohnen_zagier_ratio(scaled, eta, -3, 11, 1e-10);
  CHECK(r3s.value == doctest::Approx(9.0 * r3.value).epsilon(1e-12));
  rational_series g1 = cusp_part(theta11a(), 11);
  CHECK(kohnen_zagier_ratio(g1, eta, -3, 11, 1e-10).value != 0);
  CHECK_THROWS_AS(kohnen_zagier_ratio(g2, eta, -5, 11, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(kohnen_zagier_ratio(g2, eta, -7, 11, 1e-10), std::invalid_argument);
}

TEST_CASE("ratio 0 at a vanishing coefficient") {
  // 3 is an exception of [4,11,12,0,4,0]: g1(3) + Eisenstein(3) = 0 + e, so
  // build the ratio from a series that vanishes at 3
  rational_series v;
  v.a.assign(10, rational(0));
  newform_coefficients eta = eta_product_level11(2000);
  kz_ratio r = kohnen_zagier_ratio(v, eta, -3, 11, 1e-6);
  CHECK(r.value == 0);
  CHECK(r.lo == 0);
  CHECK(r.hi == 0);
}

TEST_CASE("newform coefficient file round-trip") {
  newform_coefficients eta = eta_product_level11(64);
  std::string path = "newform_test.txt";
  {
    std::ofstream out(path);
    for (long long n = 1; n <= eta.n_max(); ++n) out << eta.at(n) << "\n";
  }
  newform_coefficients loaded = load_newform_coefficients(path, 11);
  CHECK(loaded.a == eta.a);
  CHECK(loaded.source == newform_coefficients::source_kind::file);
  std::remove(path.c_str());
}

}  // TEST_SUITE
