#include "lagrep/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace lagrep {

bool Tensor::has_symmetry(std::size_t p, std::size_t q, int sign) const {
  bool ok = true;
  for_each_index([&](const std::vector<std::size_t>& idx) {
    if (!ok) return;
    std::vector<std::size_t> swapped = idx;
    std::swap(swapped[p], swapped[q]);
    const RatFn& a = at(idx);
    const RatFn& b = at(swapped);
    if (sign > 0 ? !(a == b) : !(a == -b)) ok = false;
  });
  return ok;
}

bool Tensor::is_totally_skew() const {
  for (std::size_t p = 0; p + 1 < rank_; ++p) {
    if (!has_symmetry(p, p + 1, -1)) return false;
  }
  return true;
}

}  // namespace lagrep
