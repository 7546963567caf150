#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cmlk/quatorders.hpp"

// The specialized representability sieve for Gross forms of curves over F_p:
// precompute the value sets of the binary section, assemble T_{N,M} by
// scanning the z-window per candidate, re-verify stragglers directly, and
// emit exact exception sets.

namespace cmlk {

class bitvec {
 public:
  bitvec() = default;
  explicit bitvec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  void set(size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }
  size_t count() const;

  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }
  void resize_bits(size_t n) { n_ = n; w_.assign((n + 63) / 64, 0); }

 private:
  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// n is a representation candidate iff n = 0,3 (mod 4), p^2 does not divide n,
// and kronecker(-n, p) != 1.  The mod-p test is a precomputed residue table.
class eligibility {
 public:
  explicit eligibility(long long p);
  long long p() const { return p_; }
  bool operator()(long long n) const {
    long long r4 = n & 3;
    if (n <= 0 || (r4 == 1 || r4 == 2)) return false;
    if (!ok_mod_p_[static_cast<size_t>(n % p_)]) return false;
    return n % p2_ != 0;
  }

 private:
  long long p_, p2_;
  std::vector<uint8_t> ok_mod_p_;
};

// Values of the binary section of a Gross form, as membership bitsets over
// [0, M].  Type I splits by the parity of y (SE: even, SO: odd); type II has
// a single set (stored in `even`).
struct section_sets {
  long long p = 0, q = 0, r = 0;
  order_type type = order_type::I;
  long long m_limit = -1;
  bitvec even, odd;

  bool split() const { return type == order_type::I; }
};

section_sets precompute_sections(const gross_form&, long long m_limit,
                                 size_t memory_budget_bytes = size_t(1) << 31);

enum class exception_filter { all_eligible, coprime_only, p_divisible_only };

const char* exception_filter_name(exception_filter f);
exception_filter exception_filter_from_name(const std::string& name);

struct exception_report {
  long long p = 0;
  std::array<long long, 6> form{};  // printed 6-tuple (base form if parity)
  bool parity = false;
  long long n_limit = 0;  // N
  long long m_limit = 0;  // M (0: generic engine, no section window)
  exception_filter filter = exception_filter::all_eligible;
  std::vector<long long> exceptions;  // sorted ascending
  std::string engine;                 // "sections" or "theta-sweep"
  std::string timestamp;              // empty unless explicitly stamped
  std::string tool_version;
};

// Exact exceptions of a Gross form by the windowed section scan with direct
// re-verification of every straggler: the result equals
// { eligible n <= N : a_form(n) = 0 } for any M in [1, N].
exception_report compute_exceptions(const gross_form&, long long n_limit,
                                    long long m_limit,
                                    exception_filter = exception_filter::all_eligible,
                                    int workers = 1,
                                    const section_sets* cached = nullptr);

// Same output contract for an arbitrary positive definite form of
// characteristic p (used for curves over F_{p^2}): one theta sweep to N.
exception_report compute_exceptions_generic(
    const ternary_form&, long long p, long long n_limit,
    exception_filter = exception_filter::all_eligible, int workers = 1);

struct ep_report {
  long long p = 0;
  long long n_limit = 0;  // min over the per-form reports
  std::vector<exception_report> reports;
  std::vector<long long> ep;  // sorted fundamental |D| missed by some form
};

// E_p' from per-form reports: |D| <= min N, -|D| fundamental,
// kronecker(-|D|, p) != 1, missed by at least one form.  The caller is
// responsible for passing one report per supersingular curve of p.
ep_report aggregate_ep(std::vector<exception_report> reports, long long p);

// Theta coefficients of a Gross form at chosen indices, from binary-section
// representation counts (suits indices far beyond a full sweep's reach).
std::vector<int64_t> theta_at_indices(const gross_form&,
                                      std::span<const long long> indices,
                                      size_t memory_budget_bytes = size_t(1) << 31);

}  // namespace cmlk
