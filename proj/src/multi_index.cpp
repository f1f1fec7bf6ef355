#include "empscen/multi_index.hpp"

#include <algorithm>
#include <limits>

#include "empscen/errors.hpp"

namespace empscen {

bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  int ma = a.modulus();
  int mb = b.modulus();
  if (ma != mb) return ma < mb;
  // within one degree the listing runs lexicographically downwards in the
  // exponents: (2,0) before (1,1) before (0,2)
  return std::lexicographical_compare(b.exponents.begin(), b.exponents.end(),
                                      a.exponents.begin(), a.exponents.end());
}

std::int64_t basis_size(int dim, int degree) {
  if (dim < 1) throw InvalidInputError("basis_size: dimension must be >= 1");
  if (degree < 0) throw InvalidInputError("basis_size: degree must be >= 0");
  // binomial(degree + dim, k) with k = min(dim, degree)
  std::int64_t n = static_cast<std::int64_t>(dim) + degree;
  std::int64_t k = std::min<std::int64_t>(dim, degree);
  unsigned __int128 result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned __int128>(n - k + i);
    result /= static_cast<unsigned __int128>(i);
    if (result > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
      throw OverflowError("basis_size: binomial overflows 64-bit range");
  }
  return static_cast<std::int64_t>(result);
}

namespace {

void enumerate_degree(int dim, int total, std::vector<int>& current, std::size_t pos,
                      std::vector<MultiIndex>& out) {
  if (pos + 1 == static_cast<std::size_t>(dim)) {
    current[pos] = total;
    out.emplace_back(current);
    return;
  }
  for (int e = total; e >= 0; --e) {
    current[pos] = e;
    enumerate_degree(dim, total - e, current, pos + 1, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_basis(int dim, int degree) {
  std::int64_t count = basis_size(dim, degree);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> current(static_cast<std::size_t>(dim), 0);
  for (int total = 0; total <= degree; ++total) enumerate_degree(dim, total, current, 0, out);
  return out;
}

MonomialBasis::MonomialBasis(int dim, int degree)
    : dim_(dim), degree_(degree), list_(enumerate_basis(dim, degree)) {}

std::ptrdiff_t MonomialBasis::index_of(const MultiIndex& a) const {
  if (a.dim() != dim_ || a.modulus() > degree_) return -1;
  auto it = std::lower_bound(list_.begin(), list_.end(), a, graded_less);
  if (it == list_.end() || !(*it == a)) return -1;
  return it - list_.begin();
}

}  // namespace empscen
