#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmlk/rational.hpp"

// Positive definite ternary quadratic forms: Gram data, lattice point
// enumeration (Fincke-Pohst pruning with exact acceptance), theta series,
// representability tests.

namespace cmlk {

struct ternary_form {
  // Q(x,y,z) = a x^2 + b y^2 + c z^2 + d xy + e xz + f yz
  std::array<long long, 6> coeffs{};

  long long operator[](int i) const { return coeffs[static_cast<size_t>(i)]; }

  // Entries of the doubled Gram matrix 2G (integral).
  std::array<std::array<long long, 3>, 3> doubled_gram() const;

  // All leading principal minors of 2G positive.
  bool positive_definite() const;

  // det(G) = det(2G)/8, exact.
  rational gram_determinant() const;

  __int128 evaluate(long long x, long long y, long long z) const;

  // Accepts "a,b,c,d,e,f" and the bracketed table syntax "[a,b,c,d,e,f]".
  static ternary_form parse(const std::string& text);
  std::string str() const;

  friend bool operator==(const ternary_form& a, const ternary_form& b) {
    return a.coeffs == b.coeffs;
  }
};

// Ternary form with the side condition z = y (mod 2); the reduced norm on a
// type-I Gross lattice has this shape.
struct constrained_ternary_form {
  ternary_form base;

  // Substitute z = y + 2w; an honest form with 4x the Gram determinant.
  ternary_form expand() const;

  friend bool operator==(const constrained_ternary_form& a,
                         const constrained_ternary_form& b) {
    return a.base == b.base;
  }
};

struct theta_series {
  ternary_form form;        // base form when constrained
  bool constrained = false;
  long long limit = 0;
  std::vector<int64_t> coeff;  // coeff[n] for 0 <= n <= limit

  int64_t at(long long n) const { return coeff[static_cast<size_t>(n)]; }
};

// Theta coefficients a(0..limit) in a single enumeration sweep of all
// lattice vectors with Q(v) <= limit.  The sweep may be partitioned across
// workers; the result is independent of the worker count.
theta_series compute_theta(const ternary_form&, long long limit, int workers = 1);
theta_series compute_theta(const constrained_ternary_form&, long long limit,
                           int workers = 1);

// Exact number of integer vectors with Q(v) = n (both signs counted).
int64_t representation_count(const ternary_form&, long long n);
int64_t representation_count(const constrained_ternary_form&, long long n);

// Early-exits on the first vector found.
bool is_represented(const ternary_form&, long long n);
bool is_represented(const constrained_ternary_form&, long long n);

// Coefficientwise theta agreement up to `limit`.
bool forms_agree(const ternary_form&, const ternary_form&, long long limit,
                 int workers = 1);
bool theta_agree(const ternary_form& f1, bool parity1, const ternary_form& f2,
                 bool parity2, long long limit, int workers = 1);

// Explicit GL3(Z) equivalence: returns U (columns u_i) with
// u_i^T G_from u_j = (G_to)_ij and det U = +-1, if one exists among the
// (finitely many) vectors of the required norms.  A hit proves the forms
// represent exactly the same integers.
using unimodular_matrix = std::array<std::array<long long, 3>, 3>;
std::optional<unimodular_matrix> find_equivalence(const ternary_form& from,
                                                  const ternary_form& to);

// All v with Q(v) = n.
std::vector<std::array<long long, 3>> vectors_with_norm(const ternary_form&,
                                                        long long n);

}  // namespace cmlk
