#pragma once

/// Fixed-order pairwise reductions. The summation tree depends only on the
/// index range, so results are identical however the call sites are
/// parallelized, with O(log n) ulp error growth.

#include <cstddef>
#include <utility>

namespace vogellab::detail {

inline constexpr std::size_t kPairwiseLeaf = 64;

/// Sum of f(i) for i in [lo, hi) over a fixed binary tree. T needs zero-init
/// and operator+=.
template <class T, class F>
T pairwise_sum(std::size_t lo, std::size_t hi, F&& f) {
    if (hi - lo <= kPairwiseLeaf) {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += f(i);
        return acc;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    T left = pairwise_sum<T>(lo, mid, f);
    left += pairwise_sum<T>(mid, hi, f);
    return left;
}

template <class F>
double pairwise_sum_d(std::size_t n, F&& f) {
    return n == 0 ? 0.0 : pairwise_sum<double>(0, n, std::forward<F>(f));
}

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased, n - 1 denominator
    double central4 = 0.0;  // fourth central moment, 1/n
};

template <class Container>
Moments moments(const Container& xs) {
    Moments m;
    m.n = xs.size();
    if (m.n == 0) return m;
    m.mean = pairwise_sum_d(m.n, [&](std::size_t i) { return xs[i]; }) / double(m.n);
    if (m.n < 2) return m;
    m.variance = pairwise_sum_d(m.n, [&](std::size_t i) {
                     const double d = xs[i] - m.mean;
                     return d * d;
                 }) /
                 double(m.n - 1);
    m.central4 = pairwise_sum_d(m.n, [&](std::size_t i) {
                     const double d = xs[i] - m.mean;
                     return d * d * d * d;
                 }) /
                 double(m.n);
    return m;
}

}  // namespace vogellab::detail
