// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion.  Exit status is nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cmlk/arith.hpp"
#include "cmlk/modforms.hpp"
#include "cmlk/quadform.hpp"
#include "cmlk/quatorders.hpp"
#include "cmlk/sieve.hpp"
#include "cmlk/tables.hpp"

using namespace cmlk;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& label, const std::string& detail) {
  std::printf("%s  C%-2d %s%s%s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int pick_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

gross_form minimal_gross(long long p, order_type t) {
  long long q = find_q(p);
  return make_gross_form(build_order(p, q, find_r(q, p, t == order_type::I ? 1 : 4), t));
}

// Sieve parameters for an F_p appendix form, by search.
gross_form params_for(long long p, const ternary_form& target) {
  auto g = find_gross_params(p, target);
  if (!g) throw std::runtime_error("no (q,r,type) parameters found for " + target.str());
  return *g;
}

std::vector<long long> oracle_exceptions(const gross_form& g, long long n) {
  eligibility elig(g.p);
  std::vector<long long> out;
  for (long long v = 1; v <= n; ++v) {
    if (!elig(v)) continue;
    bool rep = g.parity ? is_represented(g.constrained(), v) : is_represented(g.base, v);
    if (!rep) out.push_back(v);
  }
  return out;
}

// --- criteria -------------------------------------------------------------

void c1_form_generation() {
  auto t0 = clock_type::now();
  bool ok = true;
  std::string detail;
  for (long long p : {11, 17, 19, 23}) {
    auto rows = tables::forms_for_prime(p);
    std::vector<gross_form> generated;
    generated.push_back(minimal_gross(p, order_type::I));
    if (p % 4 == 3) generated.push_back(minimal_gross(p, order_type::II));
    for (const auto& g : generated) {
      if (g.expanded_determinant() != rational(4 * p * p)) {
        ok = false;
        detail = "determinant mismatch at p=" + std::to_string(p);
        continue;
      }
      bool matched = false;
      for (const auto& row : rows) {
        if (row.over_p2) continue;
        if (theta_agree(g.base, g.parity, ternary_form{row.coeffs}, false, 10000)) {
          matched = true;
          break;
        }
      }
      if (!matched) {
        ok = false;
        detail = "no theta match for generated type " +
                 std::string(order_type_name(g.type)) + " at p=" + std::to_string(p);
      }
    }
  }
  double dt = seconds_since(t0);
  if (dt >= 60.0) {
    ok = false;
    detail += " runtime " + std::to_string(dt) + "s >= 60s";
  }
  std::ostringstream os;
  os << "generated forms, det 4p^2, theta match to 1e4, " << dt << "s";
  report(1, ok, "form generation p in {11,17,19,23}", os.str() + (detail.empty() ? "" : "; " + detail));
}

void c2_exceptions_11_ii() {
  auto t0 = clock_type::now();
  gross_form g = minimal_gross(11, order_type::II);
  exception_report r =
      compute_exceptions(g, 1000000, 100000, exception_filter::all_eligible, pick_workers());
  double dt = seconds_since(t0);
  bool ok = r.exceptions == std::vector<long long>{3, 67, 235, 427} && dt < 60.0;
  std::ostringstream os;
  os << "N=1e6 M=1e5 -> {3,67,235,427}, " << dt << "s";
  report(2, ok, "exceptions p=11 type II", os.str());
}

void c3_exceptions_11_i() {
  gross_form g = minimal_gross(11, order_type::I);
  exception_report r = compute_exceptions(g, 100000, 10000);
  const auto& fixture = tables::exception_rows();
  std::vector<long long> expected;
  for (const auto& row : fixture)
    if (row.p == 11 && row.coeffs == std::array<long long, 6>{3, 15, 15, -2, 2, 14})
      expected = row.values;
  bool ok = r.exceptions == expected && expected.size() == 21 &&
            expected.back() == 11803;
  report(3, ok, "exceptions p=11 type I", "N=1e5 -> the 21 published values, max 11803");
}

ep_report ep_for(long long p, long long n_limit, long long m_limit, int workers) {
  std::vector<exception_report> reports;
  for (const auto& row : tables::forms_for_prime(p)) {
    ternary_form f{row.coeffs};
    if (row.over_p2) {
      reports.push_back(compute_exceptions_generic(f, p, n_limit,
                                                   exception_filter::all_eligible,
                                                   workers));
    } else {
      reports.push_back(compute_exceptions(params_for(p, f), n_limit, m_limit,
                                           exception_filter::all_eligible, workers));
    }
  }
  return aggregate_ep(std::move(reports), p);
}

void c4_e11() {
  ep_report ep = ep_for(11, 100000, 10000, pick_workers());
  const auto* row = tables::ep_for_prime(11);
  bool ok = row && ep.ep == row->values && ep.ep.size() == 25;
  report(4, ok, "E_11 reproduction", "25 fundamental values, max 11803");
}

void c5_e17_e19() {
  ep_report e17 = ep_for(17, 100000, 10000, pick_workers());
  bool ok17 = e17.ep.size() == 91 && !e17.ep.empty() && e17.ep.back() == 89563;
  ep_report e19 = ep_for(19, 100000, 10000, pick_workers());
  bool ok19 = e19.ep.size() == 45 && !e19.ep.empty() && e19.ep.back() == 27955;
  // per-form lists for p = 19 against the fixture
  bool ok_forms = true;
  for (const auto& row : tables::exception_rows()) {
    if (row.p != 19 || row.values.empty()) continue;
    gross_form g = params_for(19, ternary_form{row.coeffs});
    exception_report r = compute_exceptions(g, 100000, 10000,
                                            exception_filter::all_eligible,
                                            pick_workers());
    std::vector<long long> expected;
    for (long long v : row.values)
      if (v <= 100000) expected.push_back(v);
    if (r.exceptions != expected) ok_forms = false;
  }
  std::ostringstream os;
  os << "#E_17=" << e17.ep.size() << " max=" << (e17.ep.empty() ? 0 : e17.ep.back())
     << ", #E_19=" << e19.ep.size() << " max=" << (e19.ep.empty() ? 0 : e19.ep.back());
  report(5, ok17 && ok19 && ok_forms, "E_17 and E_19 at N=1e5", os.str());
}

void c6_p23_form() {
  gross_form g = params_for(23, ternary_form{{8, 12, 23, 4, 0, 0}});
  exception_report r = compute_exceptions(g, 10000, 1000);
  std::vector<long long> expected{3, 4, 27, 115, 123, 163, 403, 427, 443, 667,
                                  1467, 2787, 3523};
  bool ok = r.exceptions == expected;
  report(6, ok, "exceptions p=23 [8,12,23,4,0,0]",
         "N=1e4 -> 13 published values ending 3523");
}

void c7_sieve_oracle() {
  bool ok = true;
  std::string detail;
  for (long long p : {11, 17, 19, 23}) {
    for (const auto& row : tables::forms_for_prime(p)) {
      if (row.over_p2) continue;
      gross_form g = params_for(p, ternary_form{row.coeffs});
      auto expected = oracle_exceptions(g, 10000);
      for (long long m : {100LL, 1000LL, 10000LL}) {
        exception_report r = compute_exceptions(g, 10000, m);
        if (r.exceptions != expected) {
          ok = false;
          detail = "mismatch p=" + std::to_string(p) + " M=" + std::to_string(m);
        }
      }
    }
  }
  report(7, ok, "sieve equals brute-force oracle, M-independent",
         detail.empty() ? "p in {11,17,19,23}, N=1e4, M in {1e2,1e3,1e4}" : detail);
}

void c8_eisenstein_cusp() {
  bool ok = eisenstein_coefficient(11, -3) == rational(4, 5) &&
            eisenstein_coefficient(11, -4) == rational(6, 5) &&
            eisenstein_coefficient(11, -11) == rational(6, 5) &&
            eisenstein_coefficient(11, -12) == rational(16, 5);
  theta_series t1 = compute_theta(ternary_form{{4, 11, 12, 0, 4, 0}}, 10000);
  theta_series t2 = compute_theta(ternary_form{{3, 15, 15, -2, 2, 14}}, 10000);
  rational_series g1 = cusp_part(t1, 11);
  rational_series g2 = cusp_part(t2, 11);
  for (long long n = 0; n <= 10000 && ok; ++n) {
    if (g1.at(n) * rational(3) != g2.at(n) * rational(-2)) ok = false;
  }
  report(8, ok, "Eisenstein/cusp consistency at p=11",
         "coefficients 4/5, 6/5, 6/5, 16/5; g1 = (-2/3) g2 exactly to 1e4");
}

void c9_shimura() {
  // (a) normalized lift against the eta product through n = 50.  The
  // single-t correspondence produces the newform minus its p-oldform shift,
  // so at 11 | n the pinned value is a(n) - a(n/11); elsewhere a(n).
  theta_series t2 = compute_theta(ternary_form{{3, 15, 15, -2, 2, 14}}, 3 * 50 * 50);
  rational_series g2 = cusp_part(t2, 11);
  rational scale = rational(1) / g2.at(3);
  rational_series gn;
  gn.a.reserve(g2.a.size());
  for (const rational& v : g2.a) gn.a.push_back(v * scale);
  rational_series lift = shimura_lift(gn, 3, 50);
  newform_coefficients eta = eta_product_level11(64);
  bool ok = lift.at(2) == rational(-2) && lift.at(3) == rational(-1) &&
            lift.at(4) == rational(2) && lift.at(5) == rational(1);
  for (long long n = 1; n <= 50 && ok; ++n) {
    rational expect = (n % 11 == 0) ? rational(eta.at(n) - eta.at(n / 11))
                                    : rational(eta.at(n));
    if (lift.at(n) != expect) ok = false;
  }

  // (b) Hecke multiplicativity for coprime m, n <= 50.  The lift at products
  // reaches indices 3(mn)^2 ~ 1.8e7, far beyond a full sweep; it is assembled
  // from the integer cuspidal difference theta_2 - theta_1 (the Eisenstein
  // part cancels), with section-count theta evaluation at exactly the needed
  // indices.  Normalization: (theta_2 - theta_1)(3) = 2.
  const long long j_max = 50 * 49;  // largest coprime product
  std::vector<long long> indices;
  indices.reserve(static_cast<size_t>(j_max));
  for (long long j = 1; j <= j_max; ++j) indices.push_back(3 * j * j);
  gross_form ga = minimal_gross(11, order_type::II);  // [4,11,12,0,4,0] class
  gross_form gb = minimal_gross(11, order_type::I);   // [3,15,15,-2,2,14] class
  auto va = theta_at_indices(ga, indices);
  auto vb = theta_at_indices(gb, indices);
  std::vector<long long> diff(static_cast<size_t>(j_max) + 1, 0);
  for (long long j = 1; j <= j_max; ++j)
    diff[static_cast<size_t>(j)] =
        vb[static_cast<size_t>(j - 1)] - va[static_cast<size_t>(j - 1)];
  if (diff[1] != 2) ok = false;
  auto lift2 = [&](long long n) {  // 2x the normalized lift
    long long sum = 0;
    for (long long d = 1; d <= n; ++d) {
      if (n % d) continue;
      sum += kronecker(-3, d) * diff[static_cast<size_t>(n / d)];
    }
    return sum;
  };
  // cross-check the two lift routes where both apply
  for (long long n = 1; n <= 50 && ok; ++n) {
    if (lift.at(n) * rational(2) != rational(lift2(n))) ok = false;
  }
  std::vector<long long> lift2_memo(static_cast<size_t>(j_max) + 1, 0);
  for (long long n = 1; n <= j_max; ++n) lift2_memo[static_cast<size_t>(n)] = lift2(n);
  for (long long m = 1; m <= 50 && ok; ++m) {
    for (long long n = 1; n <= 50 && ok; ++n) {
      if (std::gcd(m, n) != 1) continue;
      // a(mn) a(1) = a(m) a(n) with a = lift2/2: 2 lift2(mn) == lift2(m) lift2(n)
      if (2 * lift2_memo[static_cast<size_t>(m * n)] !=
          lift2_memo[static_cast<size_t>(m)] * lift2_memo[static_cast<size_t>(n)])
        ok = false;
    }
  }
  report(9, ok, "Shimura lift at p=11, t=3",
         "normalized lift vs eta product (p-oldform shift at 11|n); "
         "Hecke multiplicativity for coprime m,n <= 50");
}

void c10_lvalues() {
  newform_coefficients eta = eta_product_level11(8000);
  lvalue l = twisted_l_value(eta, -3, 3.0, 11, 1e-10);
  // stability under cutoff doubling within the reported error
  double c = 2.0 * M_PI / (3.0 * std::sqrt(11.0));
  double doubled = 0;
  for (long long n = 1; n <= 2 * l.cutoff; ++n) {
    int chi = kronecker(-3, n);
    if (chi == 0) continue;
    doubled += 2.0 * static_cast<double>(eta.at(n)) * chi *
               std::exp(-c * static_cast<double>(n)) / static_cast<double>(n);
  }
  bool ok = l.value > 0 && std::abs(doubled - l.value) < l.error_bound;

  // Kohnen-Zagier ratios across fundamental D with kronecker(D, 11) = -1
  theta_series t2 = compute_theta(ternary_form{{3, 15, 15, -2, 2, 14}}, 100);
  rational_series g2 = cusp_part(t2, 11);
  std::vector<long long> ds{-3, -4, -23, -31, -56};
  std::vector<kz_ratio> ratios;
  for (long long d : ds) {
    if (kronecker(d, 11) != -1 || !is_fundamental(d)) { ok = false; continue; }
    ratios.push_back(kohnen_zagier_ratio(g2, eta, d, 11, 1e-10));
  }
  for (size_t i = 0; i < ratios.size() && ok; ++i) {
    for (size_t j = i + 1; j < ratios.size(); ++j) {
      double slack =
          1e-6 * 0.5 * (std::abs(ratios[i].value) + std::abs(ratios[j].value));
      double gap = std::abs(ratios[i].value - ratios[j].value);
      double allowed = (ratios[i].hi - ratios[i].lo) + (ratios[j].hi - ratios[j].lo) + slack;
      if (gap > allowed) ok = false;
    }
  }
  std::ostringstream os;
  os << "L(-3)=" << l.value << " stable within " << l.error_bound
     << "; KZ ratio agrees across " << ratios.size() << " discriminants";
  report(10, ok, "twisted L-values and Kohnen-Zagier ratios", os.str());
}

void c11_units() {
  long long w1 = count_units(build_order(11, 3, 1, order_type::II));
  long long w2 = count_units(build_order(11, 3, 1, order_type::I));
  measure_set m = measures({w1, w2});
  bool ok = w1 == 4 && w2 == 6 &&
            rational(1, w1) + rational(1, w2) == rational(5, 12) &&
            rational(5, 12) == rational(11 - 1, 24) &&
            m.mu == std::vector<rational>{rational(3, 5), rational(2, 5)};
  report(11, ok, "units and measures at p=11",
         "w = {4, 6}, sum 1/w = 5/12 = (p-1)/24, mu = {3/5, 2/5}");
}

void c12_performance() {
  gross_form g = minimal_gross(11, order_type::II);
  int workers = pick_workers();
  auto t0 = clock_type::now();
  exception_report r7 = compute_exceptions(g, 10000000, 1000000,
                                           exception_filter::all_eligible, workers);
  double dt7 = seconds_since(t0);
  t0 = clock_type::now();
  exception_report r8 = compute_exceptions(g, 100000000, 1000000,
                                           exception_filter::all_eligible, workers);
  double dt8 = seconds_since(t0);
  // complete sets at these bounds are still {3, 67, 235, 427}
  bool sets_ok = r7.exceptions == std::vector<long long>{3, 67, 235, 427} &&
                 r8.exceptions == r7.exceptions;
  bool time_ok = dt8 < 600.0;
  bool scaling_ok = dt8 <= 3.0 * 10.0 * std::max(dt7, 1e-3);
  std::ostringstream os;
  os << "N=1e7: " << dt7 << "s, N=1e8: " << dt8 << "s (workers=" << workers << ")";
  report(12, sets_ok && time_ok && scaling_ok, "performance contract", os.str());
}

}  // namespace

int main() {
  struct entry {
    void (*fn)();
    int id;
    const char* label;
  };
  const entry entries[] = {
      {c1_form_generation, 1, "form generation"},
      {c2_exceptions_11_ii, 2, "exceptions p=11 II"},
      {c3_exceptions_11_i, 3, "exceptions p=11 I"},
      {c4_e11, 4, "E_11"},
      {c5_e17_e19, 5, "E_17 / E_19"},
      {c6_p23_form, 6, "p=23 form"},
      {c7_sieve_oracle, 7, "sieve vs oracle"},
      {c8_eisenstein_cusp, 8, "Eisenstein/cusp"},
      {c9_shimura, 9, "Shimura lift"},
      {c10_lvalues, 10, "L-values"},
      {c11_units, 11, "units/measures"},
      {c12_performance, 12, "performance"},
  };
  for (const auto& e : entries) {
    try {
      e.fn();
    } catch (const std::exception& ex) {
      report(e.id, false, e.label, std::string("exception: ") + ex.what());
    }
  }
  if (g_failures == 0) {
    std::printf("all %zu criteria passed\n", std::size(entries));
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
