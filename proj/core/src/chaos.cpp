#include "volrough/chaos.hpp"

#include <algorithm>
#include <random>

#include "volrough/error.hpp"

namespace volrough {

cplx chaos_cf(const ChaosSpec& spec, double u) {
    const cplx i1(0.0, 1.0);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < spec.dimension(); ++j) {
        const double a = spec.alpha(j);
        const double b = spec.beta(j);
        const cplx z = 1.0 - 2.0 * i1 * a * u;
        acc += std::log(z) + 2.0 * i1 * a * u + b * b * u * u / z;
    }
    return std::exp(i1 * spec.mean * u - 0.5 * acc);
}

ChaosDraws chaos_sample_components(const ChaosSpec& spec, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ChaosDraws d;
    d.x.resize(n);
    d.x1.resize(n);
    d.x2.resize(n);
    const std::size_t m = spec.dimension();
    for (std::size_t i = 0; i < n; ++i) {
        double x1 = 0.0;
        double x2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double xi = normal(gen);
            x1 += spec.beta(j) * xi;
            x2 += spec.alpha(j) * (xi * xi - 1.0);
        }
        d.x1[i] = x1;
        d.x2[i] = x2;
        d.x[i] = spec.mean + x1 + x2;
    }
    return d;
}

std::vector<double> chaos_sample(const ChaosSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1) {
        throw ValidationError("sample size must be positive");
    }
    return chaos_sample_components(spec, n, seed).x;
}

std::array<double, 6> chaos_moments(const ChaosSpec& spec) {
    double b2 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double ab2 = 0.0;
    double a2b2 = 0.0;
    double a3b2 = 0.0;
    for (std::size_t j = 0; j < spec.dimension(); ++j) {
        const double a = spec.alpha(j);
        const double bb = spec.beta(j) * spec.beta(j);
        b2 += bb;
        a2 += a * a;
        a3 += a * a * a;
        ab2 += a * bb;
        a2b2 += a * a * bb;
        a3b2 += a * a * a * bb;
    }
    return {b2, 2.0 * a2, 8.0 * a3, 2.0 * ab2, 8.0 * a2b2, 48.0 * a3b2};
}

double hermite(int n, double x) {
    switch (n) {
        case 0:
            return 1.0;
        case 1:
            return x;
        case 2:
            return 0.5 * (x * x - 1.0);
        case 3:
            return x * x * x / 6.0 - 0.5 * x;
        default:
            throw ValidationError("Hermite polynomial degree must lie in 0..3");
    }
}

}  // namespace volrough
