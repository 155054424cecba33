// nelder_mead.hpp — Derivative-free simplex minimizer (standard reflection / expansion /
// contraction / shrink coefficients).

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace hml {

struct NelderMeadOptions {
    int max_evals = 400;
    double xtol = 1e-6;   // simplex diameter (infinity norm) below which we stop
    double ftol = 1e-12;  // spread of function values below which we stop
    double initial_step = 0.1;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f{std::numeric_limits<double>::infinity()};
    int evals{0};
    bool converged{false};
};

template <typename F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opt = {}) {
    const Eigen::Index n = x0.size();
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> vals(static_cast<std::size_t>(n + 1));
    NelderMeadResult res;

    auto eval = [&](const Eigen::VectorXd& x) {
        ++res.evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += opt.initial_step;
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(pts.size());
    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

        double diam = 0.0;
        for (const auto& p : pts) diam = std::max(diam, (p - pts[best]).cwiseAbs().maxCoeff());
        if (diam < opt.xtol || std::abs(vals[worst] - vals[best]) < opt.ftol) {
            res.converged = true;
            break;
        }
        if (res.evals >= opt.max_evals) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i != worst) centroid += pts[i];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        const double fr = eval(xr);
        if (fr < vals[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == best) continue;
            pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
            vals[i] = eval(pts[i]);
        }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    res.f = *it;
    res.x = pts[static_cast<std::size_t>(it - vals.begin())];
    return res;
}

} // namespace hml
