#pragma once

// Deterministic pairwise (tree) summation. The reduction tree is fixed by
// element index, so the result does not depend on chunking or threading.

#include <cstddef>

namespace hypflow {

template <class F>
double pairwise_sum(size_t lo, size_t hi, const F& term) {
  if (hi - lo <= 32) {
    double acc = 0.0;
    for (size_t i = lo; i < hi; ++i) acc += term(i);
    return acc;
  }
  size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

template <class F>
double pairwise_sum(size_t n, const F& term) {
  return n ? pairwise_sum<F>(0, n, term) : 0.0;
}

}  // namespace hypflow
