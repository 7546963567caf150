#include "cmlk/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "cmlk/arith.hpp"
#include "cmlk/errors.hpp"
#include "internal_util.hpp"

namespace cmlk {

using detail::isqrt_ll;

size_t bitvec::count() const {
  size_t c = 0;
  for (uint64_t w : w_) c += static_cast<size_t>(std::popcount(w));
  return c;
}

eligibility::eligibility(long long p) : p_(p), p2_(p * p) {
  ok_mod_p_.assign(static_cast<size_t>(p), 0);
  for (long long s = 0; s < p; ++s)
    ok_mod_p_[static_cast<size_t>(s)] = kronecker(-s, p) != 1 ? 1 : 0;
}

const char* exception_filter_name(exception_filter f) {
  switch (f) {
    case exception_filter::all_eligible: return "all-eligible";
    case exception_filter::coprime_only: return "coprime-only";
    case exception_filter::p_divisible_only: return "p-divisible-only";
  }
  return "?";
}

exception_filter exception_filter_from_name(const std::string& name) {
  if (name == "all-eligible" || name == "all") return exception_filter::all_eligible;
  if (name == "coprime-only" || name == "coprime") return exception_filter::coprime_only;
  if (name == "p-divisible-only" || name == "p-divisible")
    return exception_filter::p_divisible_only;
  throw std::invalid_argument("unknown exception filter: " + name);
}

namespace {

constexpr const char* kToolVersion = "cmlk 0.1.0";

// With x fixed, the minimum of the type-I section q x^2 + B y^2 + 2 r x y
// over real y is (q p / (p + r^2)) x^2, so the x loop runs while
// p q x^2 <= M (p + r^2).  Both sides exact in 128 bits.
void fill_sections_type1(long long p, long long q, long long r, long long M,
                         bitvec& se, bitvec& so) {
  const long long B = (r * r + p) / q;
  for (long long x = 0;; ++x) {
    __int128 lhs = static_cast<__int128>(p) * q * x * x;
    __int128 rhs = static_cast<__int128>(M) * (p + r * r);
    if (lhs > rhs) break;
    // B y^2 + 2 r x y + (q x^2 - M) <= 0:
    // y in [(-r x - s)/B, (-r x + s)/B], s = sqrt(B M - p x^2)
    __int128 disc = static_cast<__int128>(B) * M - static_cast<__int128>(p) * x * x;
    if (disc < 0) continue;
    long long s = static_cast<long long>(detail::isqrt_128(disc));
    long long y_lo = static_cast<long long>((-r * x - s) / B) - 2;
    long long y_hi = static_cast<long long>((-r * x + s) / B) + 2;
    if (x == 0) y_lo = 0;  // (x,y) ~ (-x,-y): keep y >= 0 on the x = 0 line
    for (long long y = y_lo; y <= y_hi; ++y) {
      long long v = q * x * x + B * y * y + 2 * r * x * y;
      if (v < 0 || v > M) continue;
      if (y & 1)
        so.set(static_cast<size_t>(v));
      else
        se.set(static_cast<size_t>(v));
    }
  }
}

// Type II section 4 q y^2 + B z^2 + 4 r' y z (B = (r'^2+p)/q); minimum over
// real z at fixed y is (4 p / B) y^2.
void fill_sections_type2(long long p, long long q, long long r, long long M,
                         bitvec& s_set) {
  const long long B = (r * r + p) / q;
  for (long long y = 0;; ++y) {
    __int128 lhs = static_cast<__int128>(4) * p * y * y;
    __int128 rhs = static_cast<__int128>(M) * B;
    if (lhs > rhs) break;
    __int128 disc = static_cast<__int128>(B) * M - static_cast<__int128>(4) * p * y * y;
    if (disc < 0) continue;
    long long s = static_cast<long long>(detail::isqrt_128(disc));
    long long z_lo = static_cast<long long>((-2 * r * y - s) / B) - 2;
    long long z_hi = static_cast<long long>((-2 * r * y + s) / B) + 2;
    if (y == 0) z_lo = 0;
    for (long long z = z_lo; z <= z_hi; ++z) {
      long long v = 4 * q * y * y + B * z * z + 4 * r * y * z;
      if (v < 0 || v > M) continue;
      s_set.set(static_cast<size_t>(v));
    }
  }
}

long long floor_sqrt_quotient(long long n, long long p) {
  // largest z with p z^2 <= n
  long long z = isqrt_ll(n / p);
  while (p * (z + 1) * (z + 1) <= n) ++z;
  while (z > 0 && p * z * z > n) --z;
  return z;
}

long long ceil_sqrt_quotient(long long n, long long p) {
  // smallest z >= 0 with p z^2 >= n
  if (n <= 0) return 0;
  long long z = isqrt_ll(n / p);
  while (p * z * z < n) ++z;
  while (z > 0 && p * (z - 1) * (z - 1) >= n) --z;
  return z;
}

bool filter_accepts(exception_filter f, long long n, long long p) {
  switch (f) {
    case exception_filter::all_eligible: return true;
    case exception_filter::coprime_only: return n % p != 0;
    case exception_filter::p_divisible_only: return n % p == 0;
  }
  return false;
}

// Deterministic parallel map over [1, N] in fixed-size chunks concatenated
// in index order.
template <typename Body>
std::vector<long long> scan_chunks(long long n_limit, int workers, const Body& body) {
  constexpr long long kChunk = 1 << 20;
  const long long n_chunks = (n_limit + kChunk - 1) / kChunk;
  if (workers <= 1 || n_chunks <= 1) {
    std::vector<long long> out;
    body(1, n_limit, out);
    return out;
  }
  std::vector<std::vector<long long>> parts(static_cast<size_t>(n_chunks));
  std::atomic<long long> next{0};
  auto run = [&] {
    for (;;) {
      long long c = next.fetch_add(1);
      if (c >= n_chunks) return;
      long long lo = c * kChunk + 1;
      long long hi = std::min(n_limit, (c + 1) * kChunk);
      body(lo, hi, parts[static_cast<size_t>(c)]);
    }
  };
  std::vector<std::thread> threads;
  int n_threads = static_cast<int>(std::min<long long>(workers, n_chunks));
  threads.reserve(static_cast<size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) threads.emplace_back(run);
  for (auto& t : threads) t.join();
  std::vector<long long> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

}  // namespace

section_sets precompute_sections(const gross_form& g, long long m_limit,
                                 size_t memory_budget_bytes) {
  if (m_limit < 0) throw std::invalid_argument("precompute_sections: negative M");
  section_sets s;
  s.p = g.p;
  s.q = g.q;
  s.r = g.r;
  s.type = g.type;
  s.m_limit = m_limit;
  size_t bits = static_cast<size_t>(m_limit) + 1;
  size_t bytes = (bits + 7) / 8 * (g.type == order_type::I ? 2 : 1);
  if (bytes > memory_budget_bytes)
    throw computation_error(computation_error::kind::memory_budget,
                            "section bitsets for M=" + std::to_string(m_limit) +
                                " exceed the memory budget");
  if (m_limit == 0) return s;  // degenerate: empty sets
  if (g.type == order_type::I) {
    s.even.resize_bits(bits);
    s.odd.resize_bits(bits);
    fill_sections_type1(g.p, g.q, g.r, m_limit, s.even, s.odd);
  } else {
    s.even.resize_bits(bits);
    fill_sections_type2(g.p, g.q, g.r, m_limit, s.even);
  }
  return s;
}

exception_report compute_exceptions(const gross_form& g, long long n_limit,
                                    long long m_limit, exception_filter filter,
                                    int workers, const section_sets* cached) {
  if (n_limit < 1 || m_limit < 1 || m_limit > n_limit)
    throw std::invalid_argument("compute_exceptions: need N >= M >= 1");

  section_sets local;
  const section_sets* sec = nullptr;
  if (cached && cached->p == g.p && cached->q == g.q && cached->r == g.r &&
      cached->type == g.type && cached->m_limit == m_limit) {
    sec = cached;
  } else {
    local = precompute_sections(g, m_limit);
    sec = &local;
  }

  const eligibility elig(g.p);
  const long long p = g.p;
  const bool split = sec->split();
  const bitvec& even = sec->even;
  const bitvec& odd = sec->odd;

  auto body = [&](long long lo, long long hi, std::vector<long long>& out) {
    for (long long n = lo; n <= hi; ++n) {
      if (!elig(n)) continue;
      if (!filter_accepts(filter, n, p)) continue;
      long long z_hi = floor_sqrt_quotient(n, p);
      long long z_lo = ceil_sqrt_quotient(n - m_limit, p);
      bool found = false;
      // descending z: smallest section values first
      for (long long z = z_hi; z >= z_lo; --z) {
        long long m = n - p * z * z;
        if (split) {
          if ((z & 1) ? odd.test(static_cast<size_t>(m))
                      : even.test(static_cast<size_t>(m))) {
            found = true;
            break;
          }
        } else if (even.test(static_cast<size_t>(m))) {
          found = true;
          break;
        }
      }
      if (found) continue;
      // straggler: settle membership in T_N directly
      bool rep = g.parity ? is_represented(g.constrained(), n)
                          : is_represented(g.base, n);
      if (!rep) out.push_back(n);
    }
  };

  exception_report rep;
  rep.p = g.p;
  rep.form = g.base.coeffs;
  rep.parity = g.parity;
  rep.n_limit = n_limit;
  rep.m_limit = m_limit;
  rep.filter = filter;
  rep.engine = "sections";
  rep.tool_version = kToolVersion;
  rep.exceptions = scan_chunks(n_limit, workers, body);
  return rep;
}

exception_report compute_exceptions_generic(const ternary_form& f, long long p,
                                            long long n_limit,
                                            exception_filter filter, int workers) {
  if (n_limit < 1)
    throw std::invalid_argument("compute_exceptions_generic: need N >= 1");
  theta_series th = compute_theta(f, n_limit, workers);
  const eligibility elig(p);
  exception_report rep;
  rep.p = p;
  rep.form = f.coeffs;
  rep.parity = false;
  rep.n_limit = n_limit;
  rep.m_limit = 0;
  rep.filter = filter;
  rep.engine = "theta-sweep";
  rep.tool_version = kToolVersion;
  for (long long n = 1; n <= n_limit; ++n) {
    if (!elig(n)) continue;
    if (!filter_accepts(filter, n, p)) continue;
    if (th.at(n) == 0) rep.exceptions.push_back(n);
  }
  return rep;
}

ep_report aggregate_ep(std::vector<exception_report> reports, long long p) {
  if (reports.empty())
    throw std::invalid_argument("aggregate_ep: no reports");
  long long n_min = reports.front().n_limit;
  for (const auto& r : reports) {
    if (r.p != p)
      throw computation_error(computation_error::kind::inconsistent_input,
                              "aggregate_ep: report for p=" + std::to_string(r.p) +
                                  " mixed into aggregation for p=" + std::to_string(p));
    if (r.filter != exception_filter::all_eligible)
      throw computation_error(computation_error::kind::inconsistent_input,
                              "aggregate_ep: reports must use the all-eligible filter");
    n_min = std::min(n_min, r.n_limit);
  }
  // canonical report order: the aggregate is independent of caller order
  std::sort(reports.begin(), reports.end(),
            [](const exception_report& a, const exception_report& b) {
              return std::tie(a.form, a.parity, a.n_limit, a.m_limit) <
                     std::tie(b.form, b.parity, b.n_limit, b.m_limit);
            });
  std::vector<long long> merged;
  for (const auto& r : reports)
    for (long long v : r.exceptions)
      if (v <= n_min) merged.push_back(v);
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  ep_report out;
  out.p = p;
  out.n_limit = n_min;
  for (long long v : merged) {
    if (!is_fundamental(-v)) continue;
    if (kronecker(-v, p) == 1) continue;  // cannot happen for eligible v; keep the contract explicit
    out.ep.push_back(v);
  }
  out.reports = std::move(reports);
  return out;
}

std::vector<int64_t> theta_at_indices(const gross_form& g,
                                      std::span<const long long> indices,
                                      size_t memory_budget_bytes) {
  long long max_index = 0;
  for (long long n : indices) {
    if (n < 0) throw std::invalid_argument("theta_at_indices: negative index");
    max_index = std::max(max_index, n);
  }
  const long long p = g.p, q = g.q, r = g.r;
  const long long B = (r * r + p) / q;
  size_t slots = static_cast<size_t>(max_index) + 1;
  size_t bytes = slots * sizeof(uint16_t) * (g.type == order_type::I ? 2 : 1);
  if (bytes > memory_budget_bytes)
    throw computation_error(computation_error::kind::memory_budget,
                            "section count arrays exceed the memory budget");

  // Full-plane representation counts of the binary section, split by y
  // parity for type I.
  std::vector<uint16_t> cnt_even(slots, 0), cnt_odd;
  if (g.type == order_type::I) cnt_odd.assign(slots, 0);

  if (g.type == order_type::I) {
    for (long long x = 0;; ++x) {
      __int128 lhs = static_cast<__int128>(p) * q * x * x;
      if (lhs > static_cast<__int128>(max_index) * (p + r * r)) break;
      __int128 disc =
          static_cast<__int128>(B) * max_index - static_cast<__int128>(p) * x * x;
      if (disc < 0) continue;
      long long s = static_cast<long long>(detail::isqrt_128(disc));
      long long y_lo = static_cast<long long>((-r * x - s) / B) - 2;
      long long y_hi = static_cast<long long>((-r * x + s) / B) + 2;
      for (long long y = y_lo; y <= y_hi; ++y) {
        long long v = q * x * x + B * y * y + 2 * r * x * y;
        if (v < 0 || v > max_index) continue;
        // count (x,y) and, when x > 0, the mirror (-x,-y)
        uint16_t add = (x == 0) ? 1 : 2;
        auto& cnt = (y & 1) ? cnt_odd : cnt_even;
        cnt[static_cast<size_t>(v)] = static_cast<uint16_t>(cnt[static_cast<size_t>(v)] + add);
      }
    }
  } else {
    for (long long y = 0;; ++y) {
      __int128 lhs = static_cast<__int128>(4) * p * y * y;
      if (lhs > static_cast<__int128>(max_index) * B) break;
      __int128 disc = static_cast<__int128>(B) * max_index -
                      static_cast<__int128>(4) * p * y * y;
      if (disc < 0) continue;
      long long s = static_cast<long long>(detail::isqrt_128(disc));
      long long z_lo = static_cast<long long>((-2 * r * y - s) / B) - 2;
      long long z_hi = static_cast<long long>((-2 * r * y + s) / B) + 2;
      for (long long z = z_lo; z <= z_hi; ++z) {
        long long v = 4 * q * y * y + B * z * z + 4 * r * y * z;
        if (v < 0 || v > max_index) continue;
        uint16_t add = (y == 0) ? 1 : 2;
        cnt_even[static_cast<size_t>(v)] =
            static_cast<uint16_t>(cnt_even[static_cast<size_t>(v)] + add);
      }
    }
  }

  std::vector<int64_t> out;
  out.reserve(indices.size());
  const bool split = g.type == order_type::I;
  for (long long n : indices) {
    int64_t total = cnt_even[static_cast<size_t>(n)];  // z = 0 term
    for (long long z = 1;; ++z) {
      long long m = n - p * z * z;
      if (m < 0) break;
      if (split) {
        total += 2 * static_cast<int64_t>((z & 1) ? cnt_odd[static_cast<size_t>(m)]
                                                  : cnt_even[static_cast<size_t>(m)]);
      } else {
        total += 2 * static_cast<int64_t>(cnt_even[static_cast<size_t>(m)]);
      }
    }
    out.push_back(total);
  }
  return out;
}

}  // namespace cmlk
