// quadrature.hpp — Gauss–Legendre rules and a globally adaptive integrator.
//
// Header-only and templated on the scalar type so the same kernels serve double and
// long double (the latter is used by tests as a higher-precision reference).

#pragma once

#include "hml/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace hml::quad {

template <typename Scalar>
struct Rule {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;    // on [-1, 1]
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
};

// n-point Gauss–Legendre rule by Newton iteration on P_n.
template <typename Scalar = double>
Rule<Scalar> gauss_legendre(int n) {
    Rule<Scalar> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        Scalar dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            Scalar p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
                p0 = p1;
                p1 = p2;
            }
            dp = Scalar(n) * (x * p1 - p0) / (x * x - 1);
            const Scalar dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 4 * eps) break;
        }
        // Recompute derivative at the converged node.
        Scalar p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / Scalar(k);
            p0 = p1;
            p1 = p2;
        }
        dp = Scalar(n) * (x * p1 - p0) / (x * x - 1);
        const Scalar w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes(i) = -x;
        rule.nodes(n - 1 - i) = x;
        rule.weights(i) = w;
        rule.weights(n - 1 - i) = w;
    }
    return rule;
}

template <typename Scalar, typename F>
Scalar apply_rule(const Rule<Scalar>& rule, F&& f, Scalar a, Scalar b) {
    const Scalar half = (b - a) / 2;
    const Scalar mid = (a + b) / 2;
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights(i) * f(mid + half * rule.nodes(i));
    }
    return half * sum;
}

// Composite rule: `panels` equal sub-intervals, `order` points each.
template <typename Scalar = double, typename F>
Scalar composite(F&& f, Scalar a, Scalar b, int panels, int order = 20) {
    const auto rule = gauss_legendre<Scalar>(order);
    const Scalar width = (b - a) / Scalar(panels);
    Scalar sum = 0;
    for (int p = 0; p < panels; ++p) {
        sum += apply_rule(rule, f, a + width * p, a + width * (p + 1));
    }
    return sum;
}

template <typename Scalar>
struct Result {
    Scalar value{0};
    Scalar error{0};       // estimated absolute error
    std::size_t intervals{0};
};

struct AdaptiveOptions {
    double abs_tol = 1e-9;
    std::size_t max_intervals = 4096;
    int low_order = 15;
    int high_order = 30;
};

// Globally adaptive Gauss–Legendre: the interval with the largest error estimate
// (difference between the two rule orders) is bisected until the summed estimate
// drops below abs_tol. Throws convergence_error carrying the achieved estimate when the
// interval budget runs out.
template <typename Scalar = double, typename F>
Result<Scalar> adaptive(F&& f, Scalar a, Scalar b, const AdaptiveOptions& opt = {}) {
    const auto lo = gauss_legendre<Scalar>(opt.low_order);
    const auto hi = gauss_legendre<Scalar>(opt.high_order);

    struct Piece {
        Scalar a, b, value, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    auto evaluate = [&](Scalar x0, Scalar x1) {
        const Scalar coarse = apply_rule(lo, f, x0, x1);
        const Scalar fine = apply_rule(hi, f, x0, x1);
        return Piece{x0, x1, fine, std::abs(fine - coarse)};
    };

    std::priority_queue<Piece> heap;
    heap.push(evaluate(a, b));
    Scalar total_error = heap.top().error;
    while (total_error > Scalar(opt.abs_tol)) {
        if (heap.size() >= opt.max_intervals) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge: estimated error " << double(total_error)
                << " above tolerance " << opt.abs_tol;
            throw convergence_error(msg.str(), double(total_error));
        }
        const Piece worst = heap.top();
        heap.pop();
        const Scalar mid = (worst.a + worst.b) / 2;
        const Piece left = evaluate(worst.a, mid);
        const Piece right = evaluate(mid, worst.b);
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    Result<Scalar> res;
    res.intervals = heap.size();
    // Re-sum from scratch so the running error update does not accumulate rounding.
    res.error = 0;
    while (!heap.empty()) {
        res.value += heap.top().value;
        res.error += heap.top().error;
        heap.pop();
    }
    return res;
}

} // namespace hml::quad
