#pragma once

#include <array>
#include <string>
#include <vector>

// Bundled fixture: the Gross-lattice forms for 11 <= p <= 113 with their good
// bounds, the published per-form exception sets, the aggregated exceptional
// discriminant sets for p = 11, 17, 19, and the per-prime good bounds.
// Golden tests compare computed output against these rows.

namespace cmlk::tables {

struct form_row {
  long long p = 0;
  bool over_p2 = false;  // curve defined over F_{p^2} (else F_p)
  std::array<long long, 6> coeffs{};
  double d0 = 0;  // good bound when (D, p) = 1
  double d1 = 0;  // good bound including p | D
};

struct exception_row {
  long long p = 0;
  std::array<long long, 6> coeffs{};
  double n0 = 0;
  double n1 = 0;         // 0 when the table lists a single bound
  bool complete = false;  // asterisked rows: the set is the full exception set
  // Eligible unrepresented values absent from the published list.  The two
  // F_{p^2} rows omit exactly the Frobenius discriminants {p, 4p} (those
  // never lift off the F_p locus) while keeping other p-divisible entries.
  std::vector<long long> omitted;
  std::vector<long long> values;  // empty when only count/max were published
  long long count = 0;
  long long max_value = 0;
};

struct ep_row {
  long long p = 0;
  long long count = 0;
  long long max_value = 0;
  std::vector<long long> values;  // full set where published
};

struct dp_row {
  long long p = 0;
  double dp = 0;
};

const std::vector<form_row>& form_rows();
const std::vector<exception_row>& exception_rows();
const std::vector<ep_row>& ep_rows();
const std::vector<dp_row>& dp_rows();

std::vector<form_row> forms_for_prime(long long p);
const ep_row* ep_for_prime(long long p);  // nullptr if absent

// The raw fixture text (JSON).
const char* raw_json();

}  // namespace cmlk::tables
