#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "cmlk/modforms.hpp"
#include "cmlk/quatorders.hpp"
#include "cmlk/sieve.hpp"

// JSON and CSV wire formats, plus the binary cache format for section
// bitsets.  All JSON emission is deterministic (nlohmann sorts keys).

namespace cmlk {

nlohmann::json form_to_json(const ternary_form&, bool parity = false);

// {p, q, r, type, basis: 4x4 rationals as "num/den", gross_form: 6-tuple,
//  parity, determinant}
nlohmann::json order_to_json(const ibukiyama_order&, const gross_form&);

nlohmann::json theta_to_json(const theta_series&);
std::string theta_to_csv(const theta_series&);

// "n,numerator,denominator" lines for 0 <= n <= limit.
std::string rational_series_to_csv(const rational_series&);

nlohmann::json exception_report_to_json(const exception_report&);
exception_report exception_report_from_json(const nlohmann::json&);

nlohmann::json ep_report_to_json(const ep_report&);

nlohmann::json lvalue_to_json(const lvalue&);
nlohmann::json c_constant_to_json(const c_constant&);

// Length-prefixed binary bitsets keyed by (p, q, r, type, M).
void save_sections(const std::string& path, const section_sets&);
std::optional<section_sets> load_sections(const std::string& path,
                                          const gross_form& expected,
                                          long long m_limit);

}  // namespace cmlk
