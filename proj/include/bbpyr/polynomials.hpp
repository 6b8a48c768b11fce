#pragma once

// One-dimensional Bernstein and Jacobi polynomials.
//
// Bernstein polynomials live on [0,1]:  B^N_k(x) = binom(N,k) x^k (1-x)^(N-k).
// Jacobi polynomials live on [-1,1] and use the normalization
//   P_0 = 1,  P_1(x) = ((alpha+beta+2) x + (alpha-beta)) / 2.

#include "bbpyr/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace bbpyr {

namespace detail {

inline void check_bernstein_index(int order, int index, const char* what)
{
    if (order < 0 || index < 0 || index > order) {
        throw DomainError(std::string(what) + ": index " + std::to_string(index) +
                          " outside 0.." + std::to_string(order));
    }
}

using uint128 = unsigned __int128;

inline uint128 gcd128(uint128 a, uint128 b)
{
    while (b != 0) {
        const uint128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline uint128 checked_mul(uint128 a, uint128 b)
{
    uint128 r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw DomainError("exact Bernstein integral overflows 128-bit arithmetic");
    }
    return r;
}

} // namespace detail

/// Exact binomial coefficient; throws DomainError on 128-bit overflow.
inline detail::uint128 binomial_exact(int n, int k)
{
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    detail::uint128 r = 1;
    for (int t = 1; t <= k; ++t) {
        // With g = gcd(r,t), t/g is coprime to r/g and so divides (n-k+t).
        const detail::uint128 num = static_cast<detail::uint128>(n - k + t);
        const detail::uint128 g = detail::gcd128(r, static_cast<detail::uint128>(t));
        r = detail::checked_mul(r / g, num / (static_cast<detail::uint128>(t) / g));
    }
    return r;
}

/// All N+1 Bernstein polynomials of order N at x, via the de Casteljau triangle
/// B^n_k = (1-x) B^{n-1}_k + x B^{n-1}_{k-1}. No binomials, no large powers.
inline std::vector<double> bernstein_eval_all(int order, double x)
{
    if (order < 0) {
        throw DomainError("bernstein_eval_all: negative order");
    }
    std::vector<double> b(static_cast<std::size_t>(order) + 1, 0.0);
    b[0] = 1.0;
    const double y = 1.0 - x;
    for (int n = 1; n <= order; ++n) {
        double carry = 0.0;
        for (int k = 0; k < n; ++k) {
            const double t = b[k];
            b[k] = y * t + carry;
            carry = x * t;
        }
        b[n] = carry;
    }
    return b;
}

inline double bernstein_eval(int order, int index, double x)
{
    detail::check_bernstein_index(order, index, "bernstein_eval");
    return bernstein_eval_all(order, x)[index];
}

/// d/dx B^N_k for all k: N (B^{N-1}_{k-1} - B^{N-1}_k), out-of-range terms zero.
inline std::vector<double> bernstein_deriv_all(int order, double x)
{
    if (order < 0) {
        throw DomainError("bernstein_deriv_all: negative order");
    }
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    if (order == 0) {
        return d;
    }
    const auto lower = bernstein_eval_all(order - 1, x);
    for (int k = 0; k <= order; ++k) {
        const double left = k >= 1 ? lower[k - 1] : 0.0;
        const double right = k <= order - 1 ? lower[k] : 0.0;
        d[k] = order * (left - right);
    }
    return d;
}

inline double bernstein_deriv(int order, int index, double x)
{
    detail::check_bernstein_index(order, index, "bernstein_deriv");
    return bernstein_deriv_all(order, x)[index];
}

/// Exact value of the integral over [0,1] of B^n_i(x) B^m_j(x):
///   binom(n,i) binom(m,j) / ((n+m+1) binom(n+m, i+j)),
/// reduced in 128-bit integers before the single final division.
inline double bernstein_pair_integral(int n, int i, int m, int j)
{
    detail::check_bernstein_index(n, i, "bernstein_pair_integral");
    detail::check_bernstein_index(m, j, "bernstein_pair_integral");

    detail::uint128 num_a = binomial_exact(n, i);
    detail::uint128 num_b = binomial_exact(m, j);
    detail::uint128 den_a = binomial_exact(n + m, i + j);
    detail::uint128 den_b = static_cast<detail::uint128>(n + m + 1);

    auto reduce = [](detail::uint128& p, detail::uint128& q) {
        const detail::uint128 g = detail::gcd128(p, q);
        p /= g;
        q /= g;
    };
    reduce(num_a, den_a);
    reduce(num_a, den_b);
    reduce(num_b, den_a);
    reduce(num_b, den_b);

    const detail::uint128 num = detail::checked_mul(num_a, num_b);
    const detail::uint128 den = detail::checked_mul(den_a, den_b);
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

/// One order-N Bernstein family on [0,1].
class BernsteinBasis1D {
  public:
    explicit BernsteinBasis1D(int order) : order_(order)
    {
        if (order < 0) {
            throw DomainError("BernsteinBasis1D: negative order");
        }
    }

    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(order_) + 1; }

    std::vector<double> values(double x) const { return bernstein_eval_all(order_, x); }
    std::vector<double> derivatives(double x) const { return bernstein_deriv_all(order_, x); }

  private:
    int order_;
};

struct JacobiParams {
    double alpha = 0.0;
    double beta = 0.0;
    int degree = 0;
};

inline void validate(const JacobiParams& p)
{
    if (!(p.alpha > -1.0) || !(p.beta > -1.0)) {
        throw DomainError("Jacobi parameters must satisfy alpha > -1 and beta > -1");
    }
    if (p.degree < 0) {
        throw DomainError("Jacobi degree must be nonnegative");
    }
}

/// P^{(alpha,beta)}_degree(x) on [-1,1] by the three-term recurrence.
inline double jacobi_eval(const JacobiParams& p, double x)
{
    validate(p);
    const double a = p.alpha;
    const double b = p.beta;
    double prev = 1.0;
    if (p.degree == 0) {
        return prev;
    }
    double curr = 0.5 * ((a + b + 2.0) * x + (a - b));
    for (int n = 2; n <= p.degree; ++n) {
        const double s = 2.0 * n + a + b;
        const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        const double next = (c2 * curr - c3 * prev) / c1;
        prev = curr;
        curr = next;
    }
    return curr;
}

/// d/dx P^{(a,b)}_n = (n+a+b+1)/2 * P^{(a+1,b+1)}_{n-1}.
inline double jacobi_deriv(const JacobiParams& p, double x)
{
    validate(p);
    if (p.degree == 0) {
        return 0.0;
    }
    const JacobiParams shifted{p.alpha + 1.0, p.beta + 1.0, p.degree - 1};
    return 0.5 * (p.degree + p.alpha + p.beta + 1.0) * jacobi_eval(shifted, x);
}

} // namespace bbpyr
