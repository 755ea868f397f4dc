#include "crashvol/tsa/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crashvol/error.hpp"

namespace crashvol::tsa {

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients) {
    std::size_t degree = coefficients.size();
    while (degree > 0 && coefficients[degree - 1] == 0.0) --degree;
    if (degree <= 1) return {};
    const std::size_t n = degree - 1;
    const double lead = coefficients[n];

    // Monic form; evaluate with Horner.
    std::vector<std::complex<double>> a(n + 1);
    for (std::size_t i = 0; i <= n; ++i) a[i] = coefficients[i] / lead;
    const auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = a[n];
        for (std::size_t i = n; i-- > 0;) acc = acc * z + a[i];
        return acc;
    };

    // Cauchy bound for the initial circle.
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(a[i]));
    bound += 1.0;
    std::vector<std::complex<double>> roots(n);
    const std::complex<double> seed(0.4, 0.9);
    for (std::size_t i = 0; i < n; ++i) roots[i] = bound * std::pow(seed, static_cast<double>(i));

    for (int iter = 0; iter < 1000; ++iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            if (std::abs(denom) == 0.0) denom = 1e-300;
            const auto delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            change = std::max(change, std::abs(delta));
        }
        if (change < 1e-14) break;
    }
    return roots;
}

double min_root_modulus(std::span<const double> coefficients, double sign) {
    std::vector<double> poly(coefficients.size() + 1);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) poly[i + 1] = sign * coefficients[i];
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& r : polynomial_roots(poly)) smallest = std::min(smallest, std::abs(r));
    return smallest;
}

bool ar_is_stationary(std::span<const double> ar) { return min_root_modulus(ar, -1.0) > 1.0; }

bool ma_is_invertible(std::span<const double> ma) { return min_root_modulus(ma, +1.0) > 1.0; }

}  // namespace crashvol::tsa
