#pragma once

#include <cmath>

namespace gaugechain {

/// Below this |z| the series is used; 1 - e^{-z} cancels catastrophically near 0.
inline constexpr double zeta_series_threshold = 1e-4;

/// zeta(z) = z / (1 - e^{-z}), extended by zeta(0) = 1.  Always positive.
inline double zeta(double z) noexcept
{
	if (std::abs(z) < zeta_series_threshold) {
		const double z2 = z * z;
		return 1.0 + z / 2.0 + z2 / 12.0 - z2 * z2 / 720.0;
	}
	return z / -std::expm1(-z);
}

/// log zeta(z), finite for arguments where zeta itself under- or overflows.
/// Uses zeta(-z) = zeta(z) e^{-z} to reduce to z >= 0.
inline double log_zeta(double z) noexcept
{
	if (std::abs(z) < zeta_series_threshold) return std::log(zeta(z));
	if (z > 0.0) return std::log(z) - std::log1p(-std::exp(-z));
	return log_zeta(-z) + z;
}

} // namespace gaugechain
