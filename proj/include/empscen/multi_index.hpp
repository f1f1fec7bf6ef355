#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace empscen {

/// Exponent vector of a monomial x^a = x_1^{a_1} * ... * x_d^{a_d}.
struct MultiIndex {
  std::vector<int> exponents;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : exponents(std::move(e)) {}

  int dim() const { return static_cast<int>(exponents.size()); }

  /// Total degree |a|.
  int modulus() const {
    int s = 0;
    for (int e : exponents) s += e;
    return s;
  }

  bool operator==(const MultiIndex& other) const { return exponents == other.exponents; }
};

/// Graded ordering of monomials: lower total degree first; within one degree
/// the leading variable dominates, i.e. 1, x1, ..., xd, x1^2, x1 x2, ..., xd^2.
bool graded_less(const MultiIndex& a, const MultiIndex& b);

/// dim(P_degree) = binomial(degree + dim, dim). Throws OverflowError when the
/// binomial exceeds the 64-bit range.
std::int64_t basis_size(int dim, int degree);

/// All multi-indices with |a| <= degree in graded order, constant first.
std::vector<MultiIndex> enumerate_basis(int dim, int degree);

/// Ordered monomial basis with positional lookup.
class MonomialBasis {
 public:
  MonomialBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return list_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return list_[i]; }
  const std::vector<MultiIndex>& indices() const { return list_; }

  /// Position of a multi-index in the graded order, -1 if out of range.
  std::ptrdiff_t index_of(const MultiIndex& a) const;

 private:
  int dim_;
  int degree_;
  std::vector<MultiIndex> list_;
};

}  // namespace empscen
