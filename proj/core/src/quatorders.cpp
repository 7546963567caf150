#include "cmlk/quatorders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cmlk/arith.hpp"
#include "cmlk/errors.hpp"
#include "internal_util.hpp"

namespace cmlk {

quat quat_algebra::mul(const quat& u, const quat& v) const {
  // (1, i, j, k), i^2 = -p, j^2 = -q, ij = k = -ji, k^2 = -pq,
  // ik = -p j, ki = p j, jk = q i, kj = -q i.
  const rational P(p), Q(q), PQ(p * q);
  quat r;
  r.c[0] = u.c[0] * v.c[0] - P * u.c[1] * v.c[1] - Q * u.c[2] * v.c[2] -
           PQ * u.c[3] * v.c[3];
  r.c[1] = u.c[0] * v.c[1] + u.c[1] * v.c[0] + Q * (u.c[2] * v.c[3] - u.c[3] * v.c[2]);
  r.c[2] = u.c[0] * v.c[2] + u.c[2] * v.c[0] - P * (u.c[1] * v.c[3] - u.c[3] * v.c[1]);
  r.c[3] = u.c[0] * v.c[3] + u.c[3] * v.c[0] + u.c[1] * v.c[2] - u.c[2] * v.c[1];
  return r;
}

quat quat_algebra::conj(const quat& u) const {
  quat r;
  r.c[0] = u.c[0];
  for (int k = 1; k < 4; ++k) r.c[static_cast<size_t>(k)] = -u.c[static_cast<size_t>(k)];
  return r;
}

rational quat_algebra::nrd(const quat& u) const {
  return u.c[0] * u.c[0] + rational(p) * u.c[1] * u.c[1] +
         rational(q) * u.c[2] * u.c[2] + rational(p * q) * u.c[3] * u.c[3];
}

rational quat_algebra::trd(const quat& u) const { return rational(2) * u.c[0]; }

const char* order_type_name(order_type t) { return t == order_type::I ? "I" : "II"; }

long long find_q(long long p, long long cap) {
  for (long long q = 3; q <= cap; q += 8) {
    if (q == p) continue;
    if (!is_prime(q)) continue;
    if (kronecker(-q, p) == -1) return q;
  }
  throw computation_error(computation_error::kind::search_limit,
                          "find_q: no admissible q below cap for p=" + std::to_string(p));
}

long long find_r(long long q, long long p, int modulus_factor) {
  if (modulus_factor != 1 && modulus_factor != 4)
    throw std::invalid_argument("find_r: modulus_factor must be 1 or 4");
  if (modulus_factor == 4 && p % 4 != 3)
    throw computation_error(computation_error::kind::no_solution,
                            "find_r: type II requires p = 3 (mod 4), got p=" +
                                std::to_string(p));
  long long m = modulus_factor * q;
  for (long long r = 0; r < m; ++r) {
    if ((r * r + p) % m == 0) return r;
  }
  throw computation_error(computation_error::kind::no_solution,
                          "find_r: r^2 + p = 0 (mod " + std::to_string(m) +
                              ") has no solution");
}

namespace {

quat make_quat(rational c0, rational c1, rational c2, rational c3) {
  quat u;
  u.c = {c0, c1, c2, c3};
  return u;
}

// Solve A x = rhs for 4x4 rational A (columns = basis coordinates).
std::array<rational, 4> solve4(std::array<std::array<rational, 4>, 4> a,
                               std::array<rational, 4> rhs) {
  for (int col = 0; col < 4; ++col) {
    int pivot = -1;
    for (int row = col; row < 4; ++row) {
      if (!a[static_cast<size_t>(row)][static_cast<size_t>(col)].is_zero()) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw std::logic_error("solve4: singular matrix");
    std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(pivot)]);
    std::swap(rhs[static_cast<size_t>(col)], rhs[static_cast<size_t>(pivot)]);
    rational inv = rational(1) / a[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int j = col; j < 4; ++j)
      a[static_cast<size_t>(col)][static_cast<size_t>(j)] *= inv;
    rhs[static_cast<size_t>(col)] *= inv;
    for (int row = 0; row < 4; ++row) {
      if (row == col) continue;
      rational factor = a[static_cast<size_t>(row)][static_cast<size_t>(col)];
      if (factor.is_zero()) continue;
      for (int j = col; j < 4; ++j)
        a[static_cast<size_t>(row)][static_cast<size_t>(j)] -=
            factor * a[static_cast<size_t>(col)][static_cast<size_t>(j)];
      rhs[static_cast<size_t>(row)] -= factor * rhs[static_cast<size_t>(col)];
    }
  }
  return rhs;
}

std::array<std::array<rational, 4>, 4> coordinate_matrix(
    const std::array<quat, 4>& basis) {
  std::array<std::array<rational, 4>, 4> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          basis[static_cast<size_t>(j)].c[static_cast<size_t>(i)];
  return m;
}

void verify_ring_closure(const ibukiyama_order& o) {
  auto coords = coordinate_matrix(o.basis);
  quat_algebra alg = o.algebra();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      quat prod = alg.mul(o.basis[static_cast<size_t>(i)], o.basis[static_cast<size_t>(j)]);
      auto x = solve4(coords, prod.c);
      for (const rational& v : x) {
        if (!v.is_integer())
          throw std::logic_error("order basis is not multiplicatively closed");
      }
    }
  }
}

void verify_norm_gram(const ibukiyama_order& o) {
  // Integer-valued on the order: diagonal integral, doubled off-diagonal
  // integral; positive definite via leading minors of the rational Gram.
  for (int i = 0; i < 4; ++i) {
    if (!o.norm_gram[static_cast<size_t>(i)][static_cast<size_t>(i)].is_integer())
      throw std::logic_error("norm form not integer-valued (diagonal)");
    for (int j = i + 1; j < 4; ++j) {
      rational doubled =
          o.norm_gram[static_cast<size_t>(i)][static_cast<size_t>(j)] * rational(2);
      if (!doubled.is_integer())
        throw std::logic_error("norm form not integer-valued (cross term)");
    }
  }
  // leading principal minors by exact elimination
  std::array<std::array<rational, 4>, 4> a = o.norm_gram;
  for (int k = 0; k < 4; ++k) {
    rational piv = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
    if (!(rational(0) < piv))
      throw std::logic_error("order norm form is not positive definite");
    for (int i = k + 1; i < 4; ++i) {
      rational factor = a[static_cast<size_t>(i)][static_cast<size_t>(k)] / piv;
      for (int j = k; j < 4; ++j)
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
            factor * a[static_cast<size_t>(k)][static_cast<size_t>(j)];
    }
  }
}

}  // namespace

ibukiyama_order build_order(long long p, long long q, long long r, order_type type) {
  if (!is_prime(p) || !is_prime(q))
    throw std::invalid_argument("build_order: p and q must be prime");
  if (q % 8 != 3 || kronecker(-q, p) != -1)
    throw std::invalid_argument("build_order: q must satisfy q = 3 (mod 8), (-q/p) = -1");
  ibukiyama_order o;
  o.p = p;
  o.q = q;
  o.r = r;
  o.type = type;
  const rational half(1, 2);
  if (type == order_type::I) {
    if ((r * r + p) % q != 0)
      throw std::invalid_argument("build_order: need r^2 + p = 0 (mod q)");
    o.basis = {make_quat(1, 0, 0, 0),
               make_quat(half, 0, half, 0),                         // (1+j)/2
               make_quat(0, half, 0, half),                         // i(1+j)/2
               make_quat(0, 0, rational(r, q), rational(1, q))};    // (r+i)j/q
  } else {
    if (p % 4 != 3)
      throw std::invalid_argument("build_order: type II requires p = 3 (mod 4)");
    if ((r * r + p) % (4 * q) != 0)
      throw std::invalid_argument("build_order: need r'^2 + p = 0 (mod 4q)");
    o.basis = {make_quat(1, 0, 0, 0),
               make_quat(half, half, 0, 0),                             // (1+i)/2
               make_quat(0, 0, 1, 0),                                   // j
               make_quat(0, 0, rational(r, 2 * q), rational(1, 2 * q))};  // (r'+i)j/2q
  }
  quat_algebra alg = o.algebra();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // B(x,y) = (nrd(x+y) - nrd(x) - nrd(y)) / 2
      const quat &bi = o.basis[static_cast<size_t>(i)], &bj = o.basis[static_cast<size_t>(j)];
      rational b = (alg.nrd(bi + bj) - alg.nrd(bi) - alg.nrd(bj)) * rational(1, 2);
      o.norm_gram[static_cast<size_t>(i)][static_cast<size_t>(j)] = b;
    }
  }
  verify_ring_closure(o);
  verify_norm_gram(o);
  return o;
}

gross_form make_gross_form(const ibukiyama_order& o) {
  gross_form g;
  g.p = o.p;
  g.q = o.q;
  g.r = o.r;
  g.type = o.type;
  long long b = (o.r * o.r + o.p) / o.q;
  if (o.type == order_type::I) {
    g.base = ternary_form{{o.q, b, o.p, 2 * o.r, 0, 0}};
    g.parity = true;
  } else {
    g.base = ternary_form{{o.p, 4 * o.q, b, 0, 0, 4 * o.r}};
    g.parity = false;
  }
  return g;
}

namespace {

// Hermite reduction (row style) of an integer matrix; returns rows in
// echelon form spanning the same lattice.
void hermite_reduce(std::array<std::array<long long, 4>, 4>& m) {
  int row = 0;
  for (int col = 0; col < 4 && row < 4; ++col) {
    // gcd out the column below `row` with elementary row operations
    for (int i = row + 1; i < 4; ++i) {
      while (m[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
        long long a = m[static_cast<size_t>(row)][static_cast<size_t>(col)];
        long long b = m[static_cast<size_t>(i)][static_cast<size_t>(col)];
        if (a == 0 || (b != 0 && std::llabs(b) < std::llabs(a))) {
          std::swap(m[static_cast<size_t>(row)], m[static_cast<size_t>(i)]);
          continue;
        }
        long long f = b / a;
        for (int j = 0; j < 4; ++j)
          m[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
              f * m[static_cast<size_t>(row)][static_cast<size_t>(j)];
      }
    }
    if (m[static_cast<size_t>(row)][static_cast<size_t>(col)] != 0) ++row;
  }
}

}  // namespace

ternary_form gross_lattice_generic(const ibukiyama_order& o) {
  // Z + 2R is generated by 1 and 2*e_i; clear denominators (they divide 2q).
  const long long den = 2 * o.q;
  std::array<std::array<long long, 4>, 4> m{};
  for (int j = 0; j < 4; ++j) m[0][static_cast<size_t>(j)] = (j == 0) ? den : 0;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      rational v = o.basis[static_cast<size_t>(i)].c[static_cast<size_t>(j)] *
                   rational(2 * den);
      if (!v.is_integer()) throw std::logic_error("gross_lattice_generic: denominator");
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] = v.num();
    }
  }
  hermite_reduce(m);
  // After reduction the first row carries the only nonzero first coordinate
  // (the 1-component); rows 1..3 span the trace-zero part.
  for (int i = 1; i < 4; ++i) {
    if (m[static_cast<size_t>(i)][0] != 0)
      throw std::logic_error("gross_lattice_generic: trace reduction failed");
  }
  quat_algebra alg = o.algebra();
  std::array<quat, 3> v;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j)
      v[static_cast<size_t>(i)].c[static_cast<size_t>(j)] =
          rational(m[static_cast<size_t>(i + 1)][static_cast<size_t>(j)], den);
    if (m[static_cast<size_t>(i + 1)] == std::array<long long, 4>{0, 0, 0, 0})
      throw std::logic_error("gross_lattice_generic: rank deficiency");
  }
  auto bil = [&](const quat& x, const quat& y) {
    return (alg.nrd(x + y) - alg.nrd(x) - alg.nrd(y)) * rational(1, 2);
  };
  rational a = alg.nrd(v[0]), b = alg.nrd(v[1]), c = alg.nrd(v[2]);
  rational d = bil(v[0], v[1]) * rational(2);
  rational e = bil(v[0], v[2]) * rational(2);
  rational f = bil(v[1], v[2]) * rational(2);
  for (const rational& x : {a, b, c, d, e, f}) {
    if (!x.is_integer())
      throw std::logic_error("gross_lattice_generic: norm form not integral");
  }
  return ternary_form{{a.num(), b.num(), c.num(), d.num(), e.num(), f.num()}};
}

long long count_units(const ibukiyama_order& o) {
  // Enumerate the box given by the dual metric of the norm Gram and test
  // nrd = 1 exactly.  The bounds are tiny for definite orders.
  std::array<std::array<rational, 4>, 4> a = o.norm_gram;
  // invert by Gauss-Jordan
  std::array<std::array<rational, 4>, 4> inv{};
  for (int i = 0; i < 4; ++i) inv[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  for (int col = 0; col < 4; ++col) {
    int pivot = -1;
    for (int row = col; row < 4; ++row)
      if (!a[static_cast<size_t>(row)][static_cast<size_t>(col)].is_zero()) {
        pivot = row;
        break;
      }
    if (pivot < 0) throw std::logic_error("count_units: singular Gram");
    std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(pivot)]);
    std::swap(inv[static_cast<size_t>(col)], inv[static_cast<size_t>(pivot)]);
    rational s = rational(1) / a[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int j = 0; j < 4; ++j) {
      a[static_cast<size_t>(col)][static_cast<size_t>(j)] *= s;
      inv[static_cast<size_t>(col)][static_cast<size_t>(j)] *= s;
    }
    for (int row = 0; row < 4; ++row) {
      if (row == col) continue;
      rational f = a[static_cast<size_t>(row)][static_cast<size_t>(col)];
      if (f.is_zero()) continue;
      for (int j = 0; j < 4; ++j) {
        a[static_cast<size_t>(row)][static_cast<size_t>(j)] -=
            f * a[static_cast<size_t>(col)][static_cast<size_t>(j)];
        inv[static_cast<size_t>(row)][static_cast<size_t>(j)] -=
            f * inv[static_cast<size_t>(col)][static_cast<size_t>(j)];
      }
    }
  }
  std::array<long long, 4> bound{};
  for (int i = 0; i < 4; ++i) {
    double gi = inv[static_cast<size_t>(i)][static_cast<size_t>(i)].to_double();
    bound[static_cast<size_t>(i)] = static_cast<long long>(std::floor(std::sqrt(gi))) + 1;
  }
  auto norm_at = [&](const std::array<long long, 4>& x) {
    rational s(0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        s += o.norm_gram[static_cast<size_t>(i)][static_cast<size_t>(j)] *
             rational(x[static_cast<size_t>(i)]) * rational(x[static_cast<size_t>(j)]);
    return s;
  };
  long long count = 0;
  std::array<long long, 4> x{};
  for (x[0] = -bound[0]; x[0] <= bound[0]; ++x[0])
    for (x[1] = -bound[1]; x[1] <= bound[1]; ++x[1])
      for (x[2] = -bound[2]; x[2] <= bound[2]; ++x[2])
        for (x[3] = -bound[3]; x[3] <= bound[3]; ++x[3])
          if (norm_at(x) == rational(1)) ++count;
  return count;
}

measure_set measures(const std::vector<long long>& unit_counts) {
  if (unit_counts.empty())
    throw std::invalid_argument("measures: empty unit count list");
  rational total(0);
  for (long long w : unit_counts) {
    if (w <= 0) throw std::invalid_argument("measures: unit counts must be positive");
    total += rational(1, w);
  }
  measure_set out;
  out.mu.reserve(unit_counts.size());
  for (long long w : unit_counts) out.mu.push_back(rational(1, w) / total);
  out.mu_min = out.mu.front();
  for (const rational& m : out.mu) out.mu_min = std::min(out.mu_min, m);
  return out;
}

std::optional<gross_form> find_gross_params(long long p, const ternary_form& target,
                                            int max_q) {
  int tried = 0;
  for (long long q = 3; tried < max_q; q += 8) {
    if (!is_prime(q) || q == p) continue;
    if (kronecker(-q, p) != -1) continue;
    ++tried;
    {
      gross_form cand = make_gross_form(build_order(p, q, find_r(q, p, 1), order_type::I));
      if (find_equivalence(cand.expanded(), target)) return cand;
    }
    if (p % 4 == 3) {
      gross_form cand =
          make_gross_form(build_order(p, q, find_r(q, p, 4), order_type::II));
      if (find_equivalence(cand.expanded(), target)) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace cmlk
