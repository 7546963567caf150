#include "cmlk/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cmlk/errors.hpp"
#include "internal_util.hpp"

namespace cmlk {

using detail::isqrt_128;

namespace {

// Desk-scale guards: the exact evaluation path uses __int128 and is safe far
// beyond these, but a loud error beats an hour-long accidental sweep.
constexpr long long kMaxCoeff = 100'000'000;
constexpr long long kMaxThetaLimit = 200'000'000;  // ~1.6 GB histogram
constexpr size_t kParallelBufferBudget = size_t(1) << 31;

void validate_form(const ternary_form& f) {
  for (long long v : f.coeffs) {
    if (std::llabs(v) > kMaxCoeff)
      throw computation_error(computation_error::kind::overflow,
                              "ternary form coefficient exceeds supported range");
  }
  if (!f.positive_definite())
    throw std::invalid_argument("ternary form is not positive definite: " + f.str());
}

// Completed-squares data for the pruned sweep:
//   Q(x,y,z) = q1 (x + u12 y + u13 z)^2 + q2 (y + u23 z)^2 + q3 z^2.
struct square_completion {
  double q1, q2, q3, u12, u13, u23;
};

square_completion complete_squares(const ternary_form& f) {
  double a = static_cast<double>(f[0]);
  double b = static_cast<double>(f[1]);
  double c = static_cast<double>(f[2]);
  double d = static_cast<double>(f[3]);
  double e = static_cast<double>(f[4]);
  double g = static_cast<double>(f[5]);
  square_completion s{};
  s.q1 = a;
  s.u12 = d / (2 * a);
  s.u13 = e / (2 * a);
  s.q2 = b - d * d / (4 * a);
  s.u23 = (g - d * e / (2 * a)) / (2 * s.q2);
  s.q3 = c - e * e / (4 * a) - s.q2 * s.u23 * s.u23;
  return s;
}

// Sweep all z in [z_lo, z_hi]; exact acceptance against 0 <= Q <= limit.
void sweep_range(const ternary_form& f, bool parity, long long limit,
                 long long z_lo, long long z_hi, const square_completion& s,
                 std::vector<int64_t>& hist) {
  const double budget = static_cast<double>(limit) + 0.5;
  for (long long z = z_lo; z <= z_hi; ++z) {
    double rem_z = budget - s.q3 * static_cast<double>(z) * static_cast<double>(z);
    if (rem_z < 0) continue;
    double yc = -s.u23 * static_cast<double>(z);
    double yr = std::sqrt(rem_z / s.q2);
    long long y_lo = static_cast<long long>(std::floor(yc - yr)) - 1;
    long long y_hi = static_cast<long long>(std::ceil(yc + yr)) + 1;
    if (parity) {
      // keep y = z (mod 2)
      if (((y_lo ^ z) & 1) != 0) ++y_lo;
    }
    const long long y_step = parity ? 2 : 1;
    for (long long y = y_lo; y <= y_hi; y += y_step) {
      double ys = static_cast<double>(y) + s.u23 * static_cast<double>(z);
      double rem_y = rem_z - s.q2 * ys * ys;
      if (rem_y < 0) continue;
      double xc = -s.u12 * static_cast<double>(y) - s.u13 * static_cast<double>(z);
      double xr = std::sqrt(rem_y / s.q1);
      long long x_lo = static_cast<long long>(std::floor(xc - xr)) - 1;
      long long x_hi = static_cast<long long>(std::ceil(xc + xr)) + 1;
      for (long long x = x_lo; x <= x_hi; ++x) {
        __int128 v = f.evaluate(x, y, z);
        if (v >= 0 && v <= limit) ++hist[static_cast<size_t>(static_cast<long long>(v))];
      }
    }
  }
}

theta_series theta_impl(const ternary_form& f, bool parity, long long limit,
                        int workers) {
  if (limit < 0) throw std::invalid_argument("theta: negative limit");
  if (limit > kMaxThetaLimit)
    throw computation_error(computation_error::kind::memory_budget,
                            "theta limit exceeds the histogram memory budget");
  validate_form(f);
  square_completion s = complete_squares(f);
  long long z_max = static_cast<long long>(std::ceil(
                        std::sqrt((static_cast<double>(limit) + 0.5) / s.q3))) +
                    1;

  theta_series out;
  out.form = f;
  out.constrained = parity;
  out.limit = limit;

  // Per-worker private histograms keep the merge deterministic; cap the
  // worker count so the extra buffers stay within budget.
  size_t hist_bytes = (static_cast<size_t>(limit) + 1) * sizeof(int64_t);
  int mem_cap = static_cast<int>(std::max<size_t>(1, kParallelBufferBudget / hist_bytes));
  workers = std::min(workers, mem_cap);

  if (workers <= 1) {
    out.coeff.assign(static_cast<size_t>(limit) + 1, 0);
    sweep_range(f, parity, limit, -z_max, z_max, s, out.coeff);
    return out;
  }

  int n = std::min<int>(workers, static_cast<int>(2 * z_max + 1));
  n = std::max(n, 1);
  std::vector<std::vector<int64_t>> parts(
      static_cast<size_t>(n), std::vector<int64_t>(static_cast<size_t>(limit) + 1, 0));
  std::vector<std::thread> threads;
  long long total = 2 * z_max + 1;
  for (int i = 0; i < n; ++i) {
    long long lo = -z_max + total * i / n;
    long long hi = -z_max + total * (i + 1) / n - 1;
    threads.emplace_back([&, i, lo, hi] {
      sweep_range(f, parity, limit, lo, hi, s, parts[static_cast<size_t>(i)]);
    });
  }
  for (auto& t : threads) t.join();
  out.coeff.assign(static_cast<size_t>(limit) + 1, 0);
  for (const auto& part : parts)
    for (size_t k = 0; k < part.size(); ++k) out.coeff[k] += part[k];
  return out;
}

// Count or detect representations of a single n by looping over the (y,z)
// ellipse and solving the quadratic in x exactly.
int64_t count_impl(const ternary_form& f, bool parity, long long n, bool early_exit) {
  if (n < 0) return 0;
  validate_form(f);
  if (n == 0) return 1;  // origin
  const long long a = f[0], b = f[1], c = f[2], d = f[3], e = f[4], g = f[5];

  // z range from the dual metric: z^2 <= n * 2*adj(2G)_zz / det(2G).
  auto gram2 = f.doubled_gram();
  __int128 det2 = 0;
  {
    const auto& m = gram2;
    det2 = static_cast<__int128>(m[0][0]) * (static_cast<__int128>(m[1][1]) * m[2][2] -
                                             static_cast<__int128>(m[1][2]) * m[2][1]) -
           static_cast<__int128>(m[0][1]) * (static_cast<__int128>(m[1][0]) * m[2][2] -
                                             static_cast<__int128>(m[1][2]) * m[2][0]) +
           static_cast<__int128>(m[0][2]) * (static_cast<__int128>(m[1][0]) * m[2][1] -
                                             static_cast<__int128>(m[1][1]) * m[2][0]);
  }
  __int128 adj_zz = static_cast<__int128>(gram2[0][0]) * gram2[1][1] -
                    static_cast<__int128>(gram2[0][1]) * gram2[1][0];
  __int128 z2_bound = (static_cast<__int128>(n) * 2 * adj_zz) / det2 + 1;
  long long z_max = static_cast<long long>(isqrt_128(z2_bound)) + 1;

  int64_t count = 0;
  const __int128 lead_y = 4 * static_cast<__int128>(a) * b - static_cast<__int128>(d) * d;
  for (long long z = -z_max; z <= z_max; ++z) {
    // x-discriminant as a quadratic in y:
    //   disc(y)/1 = (d y + e z)^2 - 4 a (b y^2 + c z^2 + g y z - n)
    // has negative leading coefficient d^2-4ab; solve disc >= 0 for the y range.
    __int128 lin = 2 * (static_cast<__int128>(d) * e - 2 * static_cast<__int128>(a) * g) * z;
    __int128 cst = (static_cast<__int128>(e) * e - 4 * static_cast<__int128>(a) * c) * z * z +
                   4 * static_cast<__int128>(a) * n;
    // disc(y) = -lead_y y^2 + lin y + cst >= 0
    __int128 ydisc = lin * lin + 4 * lead_y * cst;
    if (ydisc < 0) continue;
    __int128 sq = isqrt_128(ydisc);
    long long y_lo =
        static_cast<long long>((lin - sq) / (2 * lead_y)) - 2;
    long long y_hi =
        static_cast<long long>((lin + sq) / (2 * lead_y)) + 2;
    for (long long y = y_lo; y <= y_hi; ++y) {
      if (parity && ((y ^ z) & 1)) continue;
      __int128 B = static_cast<__int128>(d) * y + static_cast<__int128>(e) * z;
      __int128 C = static_cast<__int128>(b) * y * y + static_cast<__int128>(c) * z * z +
                   static_cast<__int128>(g) * y * z - n;
      __int128 disc = B * B - 4 * a * C;
      if (disc < 0) continue;
      __int128 s = isqrt_128(disc);
      if (s * s != disc) continue;
      for (int sign : {-1, 1}) {
        __int128 num = -B + sign * s;
        if (num % (2 * a) != 0) continue;
        count += 1;
        if (early_exit) return count;
        if (s == 0) break;  // double root: count once
      }
    }
  }
  return count;
}

}  // namespace

std::array<std::array<long long, 3>, 3> ternary_form::doubled_gram() const {
  const auto& v = coeffs;
  return {{{2 * v[0], v[3], v[4]}, {v[3], 2 * v[1], v[5]}, {v[4], v[5], 2 * v[2]}}};
}

bool ternary_form::positive_definite() const {
  auto m = doubled_gram();
  if (m[0][0] <= 0) return false;
  __int128 m2 = static_cast<__int128>(m[0][0]) * m[1][1] -
                static_cast<__int128>(m[0][1]) * m[0][1];
  if (m2 <= 0) return false;
  __int128 det = static_cast<__int128>(m[0][0]) *
                     (static_cast<__int128>(m[1][1]) * m[2][2] -
                      static_cast<__int128>(m[1][2]) * m[1][2]) -
                 static_cast<__int128>(m[0][1]) *
                     (static_cast<__int128>(m[0][1]) * m[2][2] -
                      static_cast<__int128>(m[1][2]) * m[0][2]) +
                 static_cast<__int128>(m[0][2]) *
                     (static_cast<__int128>(m[0][1]) * m[1][2] -
                      static_cast<__int128>(m[1][1]) * m[0][2]);
  return det > 0;
}

rational ternary_form::gram_determinant() const {
  auto m = doubled_gram();
  __int128 det = static_cast<__int128>(m[0][0]) *
                     (static_cast<__int128>(m[1][1]) * m[2][2] -
                      static_cast<__int128>(m[1][2]) * m[1][2]) -
                 static_cast<__int128>(m[0][1]) *
                     (static_cast<__int128>(m[0][1]) * m[2][2] -
                      static_cast<__int128>(m[1][2]) * m[0][2]) +
                 static_cast<__int128>(m[0][2]) *
                     (static_cast<__int128>(m[0][1]) * m[1][2] -
                      static_cast<__int128>(m[1][1]) * m[0][2]);
  if (det > INT64_MAX || det < INT64_MIN)
    throw computation_error(computation_error::kind::overflow,
                            "Gram determinant exceeds 64 bits");
  return rational(static_cast<long long>(det), 8);
}

__int128 ternary_form::evaluate(long long x, long long y, long long z) const {
  const auto& v = coeffs;
  return static_cast<__int128>(v[0]) * x * x + static_cast<__int128>(v[1]) * y * y +
         static_cast<__int128>(v[2]) * z * z + static_cast<__int128>(v[3]) * x * y +
         static_cast<__int128>(v[4]) * x * z + static_cast<__int128>(v[5]) * y * z;
}

ternary_form ternary_form::parse(const std::string& text) {
  std::string cleaned;
  for (char ch : text) {
    if (ch == '[' || ch == ']' || ch == ' ' || ch == '\t') continue;
    cleaned.push_back(ch);
  }
  std::istringstream in(cleaned);
  ternary_form f;
  std::string tok;
  for (int i = 0; i < 6; ++i) {
    if (!std::getline(in, tok, ',') || tok.empty())
      throw std::invalid_argument("form parse: expected 6 comma-separated integers");
    size_t pos = 0;
    f.coeffs[static_cast<size_t>(i)] = std::stoll(tok, &pos);
    if (pos != tok.size())
      throw std::invalid_argument("form parse: bad integer '" + tok + "'");
  }
  if (std::getline(in, tok, ','))
    throw std::invalid_argument("form parse: more than 6 entries");
  return f;
}

std::string ternary_form::str() const {
  std::string s = "[";
  for (int i = 0; i < 6; ++i) {
    if (i) s += ",";
    s += std::to_string(coeffs[static_cast<size_t>(i)]);
  }
  return s + "]";
}

ternary_form constrained_ternary_form::expand() const {
  const auto& v = base.coeffs;
  // z = y + 2w in a x^2 + b y^2 + c z^2 + d xy + e xz + f yz
  return ternary_form{{v[0], v[1] + v[2] + v[5], 4 * v[2], v[3] + v[4], 2 * v[4],
                       4 * v[2] + 2 * v[5]}};
}

theta_series compute_theta(const ternary_form& f, long long limit, int workers) {
  return theta_impl(f, false, limit, workers);
}

theta_series compute_theta(const constrained_ternary_form& f, long long limit,
                           int workers) {
  return theta_impl(f.base, true, limit, workers);
}

int64_t representation_count(const ternary_form& f, long long n) {
  return count_impl(f, false, n, false);
}

int64_t representation_count(const constrained_ternary_form& f, long long n) {
  return count_impl(f.base, true, n, false);
}

bool is_represented(const ternary_form& f, long long n) {
  return count_impl(f, false, n, true) > 0;
}

bool is_represented(const constrained_ternary_form& f, long long n) {
  return count_impl(f.base, true, n, true) > 0;
}

bool theta_agree(const ternary_form& f1, bool parity1, const ternary_form& f2,
                 bool parity2, long long limit, int workers) {
  theta_series t1 = theta_impl(f1, parity1, limit, workers);
  theta_series t2 = theta_impl(f2, parity2, limit, workers);
  return t1.coeff == t2.coeff;
}

bool forms_agree(const ternary_form& f1, const ternary_form& f2, long long limit,
                 int workers) {
  return theta_agree(f1, false, f2, false, limit, workers);
}

std::vector<std::array<long long, 3>> vectors_with_norm(const ternary_form& f,
                                                        long long n) {
  validate_form(f);
  std::vector<std::array<long long, 3>> out;
  if (n < 0) return out;
  if (n == 0) {
    out.push_back({0, 0, 0});
    return out;
  }
  // same exact (y,z) loop as count_impl, collecting vectors
  const long long a = f[0], b = f[1], c = f[2], d = f[3], e = f[4], g = f[5];
  auto gram2 = f.doubled_gram();
  __int128 det2 = static_cast<__int128>(gram2[0][0]) *
                      (static_cast<__int128>(gram2[1][1]) * gram2[2][2] -
                       static_cast<__int128>(gram2[1][2]) * gram2[2][1]) -
                  static_cast<__int128>(gram2[0][1]) *
                      (static_cast<__int128>(gram2[1][0]) * gram2[2][2] -
                       static_cast<__int128>(gram2[1][2]) * gram2[2][0]) +
                  static_cast<__int128>(gram2[0][2]) *
                      (static_cast<__int128>(gram2[1][0]) * gram2[2][1] -
                       static_cast<__int128>(gram2[1][1]) * gram2[2][0]);
  __int128 adj_zz = static_cast<__int128>(gram2[0][0]) * gram2[1][1] -
                    static_cast<__int128>(gram2[0][1]) * gram2[1][0];
  __int128 adj_yy = static_cast<__int128>(gram2[0][0]) * gram2[2][2] -
                    static_cast<__int128>(gram2[0][2]) * gram2[0][2];
  long long z_max =
      static_cast<long long>(isqrt_128((static_cast<__int128>(n) * 2 * adj_zz) / det2)) + 1;
  long long y_max =
      static_cast<long long>(isqrt_128((static_cast<__int128>(n) * 2 * adj_yy) / det2)) + 1;
  for (long long z = -z_max; z <= z_max; ++z) {
    for (long long y = -y_max; y <= y_max; ++y) {
      __int128 B = static_cast<__int128>(d) * y + static_cast<__int128>(e) * z;
      __int128 C = static_cast<__int128>(b) * y * y + static_cast<__int128>(c) * z * z +
                   static_cast<__int128>(g) * y * z - n;
      __int128 disc = B * B - 4 * a * C;
      if (disc < 0) continue;
      __int128 s = isqrt_128(disc);
      if (s * s != disc) continue;
      for (int sign : {-1, 1}) {
        __int128 num = -B + sign * s;
        if (num % (2 * a) != 0) continue;
        out.push_back({static_cast<long long>(num / (2 * a)), y, z});
        if (s == 0) break;
      }
    }
  }
  return out;
}

namespace {

long long bilinear2(const std::array<std::array<long long, 3>, 3>& g2,
                    const std::array<long long, 3>& u,
                    const std::array<long long, 3>& v) {
  // u^T (2G) v; for a form with integer cross coefficients this is the
  // doubled bilinear form, so B(u,v)*2.
  __int128 s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s += static_cast<__int128>(g2[static_cast<size_t>(i)][static_cast<size_t>(j)]) *
           u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
  return static_cast<long long>(s);
}

long long det3(const std::array<long long, 3>& u, const std::array<long long, 3>& v,
               const std::array<long long, 3>& w) {
  __int128 s = static_cast<__int128>(u[0]) * (static_cast<__int128>(v[1]) * w[2] -
                                              static_cast<__int128>(v[2]) * w[1]) -
               static_cast<__int128>(u[1]) * (static_cast<__int128>(v[0]) * w[2] -
                                              static_cast<__int128>(v[2]) * w[0]) +
               static_cast<__int128>(u[2]) * (static_cast<__int128>(v[0]) * w[1] -
                                              static_cast<__int128>(v[1]) * w[0]);
  return static_cast<long long>(s);
}

}  // namespace

std::optional<unimodular_matrix> find_equivalence(const ternary_form& from,
                                                  const ternary_form& to) {
  if (from.gram_determinant() != to.gram_determinant()) return std::nullopt;
  auto g2 = from.doubled_gram();
  const auto& t = to.coeffs;
  auto us = vectors_with_norm(from, t[0]);
  auto vs = vectors_with_norm(from, t[1]);
  auto ws = vectors_with_norm(from, t[2]);
  for (const auto& u : us) {
    for (const auto& v : vs) {
      if (bilinear2(g2, u, v) != t[3]) continue;  // 2*B(u,v) == d
      for (const auto& w : ws) {
        if (bilinear2(g2, u, w) != t[4]) continue;
        if (bilinear2(g2, v, w) != t[5]) continue;
        long long det = det3(u, v, w);
        if (det == 1 || det == -1) {
          unimodular_matrix m{};
          for (int i = 0; i < 3; ++i) {
            m[static_cast<size_t>(i)] = {u[static_cast<size_t>(i)],
                                         v[static_cast<size_t>(i)],
                                         w[static_cast<size_t>(i)]};
          }
          return m;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace cmlk
