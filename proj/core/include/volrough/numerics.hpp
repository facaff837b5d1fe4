#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace volrough::numerics {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Number of points on the fixed dyadic Simpson grid over [0, 1].
inline constexpr std::size_t kSimpsonPoints = 129;

/// Composite Simpson rule on `points` equispaced nodes of [0, 1]; `points` must be odd and >= 3.
QuadratureRule simpson_unit(std::size_t points = kSimpsonPoints);

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Least-squares slope of y against x.
double ols_slope(std::span<const double> x, std::span<const double> y);

/// Nearest-rank empirical quantile of an ascending sample, p in (0, 1].
double nearest_rank(std::span<const double> sorted, double p);

}  // namespace volrough::numerics
