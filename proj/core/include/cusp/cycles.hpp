// Cycles of integers and their arithmetic.
//
// A Cycle d = (d_1, ..., d_n) is a finite sequence considered up to rotation
// and reversal. The quantities attached to it here:
//   * charge(d)         = 12 + sum(d_i - 3);
//   * negative definite = all d_i >= 2 and at least one d_i >= 3;
//   * dual cycle        = write a rotation of d as (a_1, 2^{b_1}, ..., a_k,
//                         2^{b_k}) with all a_j >= 3 and b_j >= 0 copies of 2;
//                         the dual is (b_1 + 3, 2^{a_1 - 3}, ..., b_k + 3,
//                         2^{a_k - 3}). It is an involution up to rotation
//                         and satisfies charge(d) + charge(dual d) = 24;
//   * monodromy(d)      = product over i (left to right) of [[0,1],[-1,d_i]].
//
// For a hyperbolic matrix (trace > 2) the conjugacy class in SL2(Z) is
// encoded by a cyclic word in R = [[1,1],[0,1]] and L = [[1,0],[1,1]];
// sl2z_word computes it exactly.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cusp/geom.hpp"
#include "cusp/numeric.hpp"

namespace cusp {

struct Cycle {
  std::vector<Int> d;

  std::size_t size() const { return d.size(); }
  friend bool operator==(const Cycle& a, const Cycle& b) { return a.d == b.d; }
};

Int charge(const Cycle& c);
bool is_negative_definite(const Cycle& c);

// Requires is_negative_definite(c). The output starts at an entry >= 3.
// dual_cycle is an involution up to cyclic rotation, charges of c and its
// dual sum to 24, and the product of [[0,-1],[1,d'_i]] over the dual is
// conjugate in SL(2,Z) to monodromy(c).
Cycle dual_cycle(const Cycle& c);

Mat2 monodromy(const Cycle& c);

// Equality up to rotation and reversal.
bool cycles_equal(const Cycle& a, const Cycle& b);
// Lexicographically smallest representative over all rotations/reflections.
Cycle canonical_cycle(const Cycle& c);

// Surgeries acting on the cycle alone (the combinatorial shadow of the
// geometric operations):
//   InternalBlowup at i:   d_i -> d_i + 1
//   CornerBlowup  at (i, i+1): ... d_i + 1, 1, d_{i+1} + 1 ...
//   NodeSmoothing at (i, i+1): ... d_i + d_{i+1} - 2 ...   (entries merge)
enum class SurgeryKind { InternalBlowup, CornerBlowup, NodeSmoothing };

struct CycleSurgery {
  SurgeryKind kind{};
  std::size_t index{};  // 0-based, into the cycle as currently written
};

Cycle apply_surgery(const Cycle& c, const CycleSurgery& s);

// "4,6,5" <-> Cycle{4,6,5}; whitespace around numbers tolerated.
Cycle parse_cycle(const std::string& text);
std::string format_cycle(const Cycle& c);

// Cyclic R/L word of a matrix with det 1 and trace > 2, canonicalized to its
// lexicographically smallest rotation. Exact: no floating point is involved
// (the eigenvector slope is a quadratic surd, compared symbolically).
std::string sl2z_word(const Mat2& m);

// Evaluate a word over {R, L} back to a matrix.
Mat2 word_matrix(const std::string& word);

// Lexicographically smallest rotation of a word (cyclic canonical form).
std::string canonical_word(const std::string& word);

}  // namespace cusp
