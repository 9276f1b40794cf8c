#include "fracdense/multi_index.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "fracdense/errors.hpp"

namespace fracdense {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int a : entries_) {
    if (a < 0) throw InputError("multi-index entries must be nonnegative");
  }
}

int MultiIndex::order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int a : entries_) {
    for (int i = 2; i <= a; ++i) f *= i;
  }
  return f;
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return std::lexicographical_compare(b.entries_.begin(), b.entries_.end(),
                                      a.entries_.begin(), a.entries_.end());
}

std::vector<MultiIndex> multi_indices_up_to(int n, int max_order) {
  if (n < 1) throw InputError("dimension must be >= 1");
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n - 1) {
      for (int a = 0; a <= remaining; ++a) {
        cur[static_cast<std::size_t>(pos)] = a;
        out.emplace_back(cur);
      }
      return;
    }
    for (int a = 0; a <= remaining; ++a) {
      cur[static_cast<std::size_t>(pos)] = a;
      rec(pos + 1, remaining - a);
    }
  };
  rec(0, max_order);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t derivative_count(int n, int m) {
  std::size_t total = 0;
  std::size_t term = 1;
  for (int j = 0; j <= m; ++j) {
    total += term;
    term *= static_cast<std::size_t>(n);
  }
  return total;
}

DerivativeVector::DerivativeVector(int order, std::vector<double> values)
    : order_(order), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(order_ + 1)) {
    throw InputError("DerivativeVector: expected order + 1 entries");
  }
}

double DerivativeVector::at(const MultiIndex& alpha) const {
  if (alpha.dimension() != 1) throw InputError("DerivativeVector: only n = 1 is stored");
  if (alpha.order() > order_) throw OrderTooHigh("DerivativeVector: index beyond stored order");
  return values_[static_cast<std::size_t>(alpha.order())];
}

DerivativeVector DerivativeVector::unit(int order, int beta) {
  std::vector<double> v(static_cast<std::size_t>(order + 1), 0.0);
  v.at(static_cast<std::size_t>(beta)) = 1.0;
  return DerivativeVector(order, std::move(v));
}

}  // namespace fracdense
