#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cmlk/quadform.hpp"
#include "cmlk/rational.hpp"

// Arithmetic in the definite quaternion algebra B_p ramified at p and
// infinity, the two families of maximal orders attached to supersingular
// curves over F_p, their Gross lattices, unit counts, and measures.

namespace cmlk {

// Element coordinates over the basis (1, i, j, ij) with i^2 = -p, j^2 = -q,
// ij = -ji.
struct quat {
  std::array<rational, 4> c{};

  friend quat operator+(const quat& a, const quat& b) {
    quat r;
    for (int k = 0; k < 4; ++k)
      r.c[static_cast<size_t>(k)] =
          a.c[static_cast<size_t>(k)] + b.c[static_cast<size_t>(k)];
    return r;
  }
  friend bool operator==(const quat& a, const quat& b) { return a.c == b.c; }
};

struct quat_algebra {
  long long p = 0;
  long long q = 0;

  quat mul(const quat& u, const quat& v) const;
  quat conj(const quat& u) const;
  rational nrd(const quat& u) const;  // x0^2 + p x1^2 + q x2^2 + pq x3^2
  rational trd(const quat& u) const;  // 2 x0
};

enum class order_type { I, II };

const char* order_type_name(order_type t);  // "I" / "II"

// Maximal order R(q,r) (type I: 1, (1+j)/2, i(1+j)/2, (r+i)j/q) or
// R'(q,r') (type II: 1, (1+i)/2, j, (r'+i)j/(2q)).
struct ibukiyama_order {
  long long p = 0, q = 0, r = 0;
  order_type type = order_type::I;
  std::array<quat, 4> basis;
  // Gram matrix of the reduced norm w.r.t. the basis (bilinear form
  // B(x,y) = (nrd(x+y) - nrd(x) - nrd(y))/2).
  std::array<std::array<rational, 4>, 4> norm_gram;

  quat_algebra algebra() const { return {p, q}; }
};

// Smallest prime q = 3 (mod 8) with kronecker(-q, p) = -1.
long long find_q(long long p, long long cap = 1'000'000);

// Smallest r >= 0 with r^2 + p = 0 (mod modulus_factor * q);
// modulus_factor is 1 (type I) or 4 (type II, requires p = 3 mod 4).
long long find_r(long long q, long long p, int modulus_factor);

// Builds the basis, the norm Gram matrix, and verifies ring closure
// (products of basis elements lie in the integer span).
ibukiyama_order build_order(long long p, long long q, long long r, order_type type);

// The Gross-lattice ternary form of an order.  Type I yields the
// parity-constrained [q, (r^2+p)/q, p, 2r, 0, 0] with z = y (mod 2);
// type II the plain [p, 4q, (r'^2+p)/q, 0, 0, 4r'].
struct gross_form {
  long long p = 0, q = 0, r = 0;
  order_type type = order_type::I;
  ternary_form base;
  bool parity = false;  // true: z = y (mod 2)

  ternary_form expanded() const {
    return parity ? constrained_ternary_form{base}.expand() : base;
  }
  constrained_ternary_form constrained() const { return {base}; }
  rational expanded_determinant() const { return expanded().gram_determinant(); }
};

gross_form make_gross_form(const ibukiyama_order&);

// The same lattice from first principles: an integral basis of
// {x in Z + 2R : tr(x) = 0} by Hermite reduction, and its norm form.
// Must theta-agree with make_gross_form's result.
ternary_form gross_lattice_generic(const ibukiyama_order&);

// Number of order elements of reduced norm 1 (w_E); even and >= 2.
long long count_units(const ibukiyama_order&);

struct measure_set {
  std::vector<rational> mu;  // mu_i = (1/w_i) / sum(1/w_j), sums to 1
  rational mu_min;
};
measure_set measures(const std::vector<long long>& unit_counts);

// Searches admissible (q, r, type) in ascending q for an order whose Gross
// form is GL3(Z)-equivalent to `target` (proved by an explicit unimodular
// transform).  Tries at most max_q admissible values of q.
std::optional<gross_form> find_gross_params(long long p, const ternary_form& target,
                                            int max_q = 32);

}  // namespace cmlk
