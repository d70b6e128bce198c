#ifndef HFGI_SERIES_HPP
#define HFGI_SERIES_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hfgi {

namespace detail {

/// Coefficient of x^j in (1 - x)^{1/2} (half = true) or (1 - x)^{-1/2}.
template <class T>
T half_binomial(int j, bool half) {
    T r = T(1);
    for (int i = 1; i <= j; ++i) r = r * T(static_cast<long>(2 * i - 1)) / T(static_cast<long>(2 * i));
    if (half) r = r / T(static_cast<long>(1 - 2 * j));
    return r;
}

template <class T>
std::vector<T> power_series(const std::vector<T> &lambdas, int terms, bool half) {
    std::vector<T> acc(terms, T(0));
    acc[0] = T(1);
    for (const T &lj : lambdas) {
        std::vector<T> factor(terms, T(0));
        T p = T(1);
        for (int j = 0; j < terms; ++j) {
            factor[j] = half_binomial<T>(j, half) * p;
            p = p * lj;
        }
        std::vector<T> next(terms, T(0));
        for (int a = 0; a < terms; ++a) {
            for (int b = 0; a + b < terms; ++b) next[a + b] = next[a + b] + acc[a] * factor[b];
        }
        acc = std::move(next);
    }
    return acc;
}

}  // namespace detail

/// c_l for l = -1..lmax by series composition of prod_j (1 - lambda_j zeta)^{1/2}; entry l + 1 holds c_l.
template <class T>
std::vector<T> series_c(const std::vector<T> &lambdas, int lmax) {
    return detail::power_series(lambdas, lmax + 2, true);
}

/// The same for prod_j (1 - lambda_j zeta)^{-1/2}.
template <class T>
std::vector<T> series_chat(const std::vector<T> &lambdas, int lmax) {
    return detail::power_series(lambdas, lmax + 2, false);
}

/// Single coefficient c_l (half) or chat_l by explicit summation over multi-indices.
template <class T>
T series_multinomial(const std::vector<T> &lambdas, int l, bool half) {
    if (l < -1) throw std::invalid_argument("series index must be >= -1");
    const int total = l + 1;
    const int N = static_cast<int>(lambdas.size());
    T sum = T(0);
    std::vector<int> js(N, 0);
    std::function<void(int, int, T)> rec = [&](int i, int left, T acc) {
        if (i == N - 1) {
            T term = acc * detail::half_binomial<T>(left, half);
            for (int k = 0; k < left; ++k) term = term * lambdas[i];
            sum = sum + term;
            return;
        }
        T p = T(1);
        for (int j = 0; j <= left; ++j) {
            rec(i + 1, left - j, acc * detail::half_binomial<T>(j, half) * p);
            p = p * lambdas[i];
        }
    };
    if (N == 0) return total == 0 ? T(1) : T(0);
    rec(0, total, T(1));
    return sum;
}

}  // namespace hfgi

#endif  // HFGI_SERIES_HPP
