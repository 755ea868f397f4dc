#pragma once

#include <complex>
#include <span>
#include <vector>

namespace crashvol::tsa {

/// Roots of c[0] + c[1]·z + … + c[n]·z^n (c[n] ≠ 0) by Durand–Kerner iteration.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients);

/// True when every root of 1 − φ1·z − … − φp·z^p lies strictly outside the unit circle.
bool ar_is_stationary(std::span<const double> ar);

/// True when every root of 1 + θ1·z + … + θq·z^q lies strictly outside the unit circle.
bool ma_is_invertible(std::span<const double> ma);

/// Smallest root modulus of the AR (sign = -1) or MA (sign = +1) polynomial;
/// +inf for an empty coefficient list.
double min_root_modulus(std::span<const double> coefficients, double sign);

}  // namespace crashvol::tsa
