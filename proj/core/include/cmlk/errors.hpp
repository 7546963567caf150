#pragma once

#include <stdexcept>
#include <string>

namespace cmlk {

// Runtime failures that a caller may want to distinguish from usage errors:
// the CLI maps computation_error to exit code 2 with a machine-readable
// payload, and std::invalid_argument (bad preconditions) to exit code 1.
class computation_error : public std::runtime_error {
 public:
  enum class kind {
    overflow,               // exact-integer budget exceeded
    no_solution,            // e.g. r'^2 + p = 0 (mod 4q) unsolvable
    search_limit,           // q-search cap hit
    tolerance_unreachable,  // L-value tail cannot reach epsilon with given coefficients
    memory_budget,          // section bitset would exceed the configured budget
    inconsistent_input,     // mixed primes in aggregation, short series, ...
  };

  computation_error(kind k, const std::string& what)
      : std::runtime_error(what), kind_(k) {}

  kind error_kind() const { return kind_; }

  const char* kind_name() const {
    switch (kind_) {
      case kind::overflow: return "overflow";
      case kind::no_solution: return "no-solution";
      case kind::search_limit: return "search-limit";
      case kind::tolerance_unreachable: return "tolerance-unreachable";
      case kind::memory_budget: return "memory-budget";
      case kind::inconsistent_input: return "inconsistent-input";
    }
    return "unknown";
  }

 private:
  kind kind_;
};

}  // namespace cmlk
