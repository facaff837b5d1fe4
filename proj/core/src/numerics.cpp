#include "volrough/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "volrough/error.hpp"

namespace volrough::numerics {

QuadratureRule simpson_unit(std::size_t points) {
    if (points < 3 || points % 2 == 0) {
        throw ValidationError("Simpson grid needs an odd number of points >= 3");
    }
    QuadratureRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const double h = 1.0 / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        rule.nodes[i] = static_cast<double>(i) * h;
        double w = (i == 0 || i + 1 == points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[i] = w * h / 3.0;
    }
    return rule;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) {
        throw ValidationError("Gauss-Legendre order must be positive");
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("slope fit needs at least two paired points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw NumericalError("slope fit on a degenerate abscissa");
    }
    return sxy / sxx;
}

double nearest_rank(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw ValidationError("quantile of an empty sample");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw ValidationError("quantile level must lie in (0, 1]");
    }
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
    if (rank < 1) {
        rank = 1;
    }
    return sorted[rank - 1];
}

}  // namespace volrough::numerics
