#pragma once

// Test-side oracles: these deliberately avoid the library's kernels.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gaugechain/chain.hpp"
#include "gaugechain/rng.hpp"

namespace testing_support {

using gaugechain::ResonatorParams;

/// z / (1 - e^{-z}) in long double, with the limit at 0.
inline double zeta_oracle(double z)
{
	const long double x = z;
	if (x == 0.0L) return 1.0;
	if (std::fabs(x) < 1e-6L) return static_cast<double>(1.0L + x / 2.0L + x * x / 12.0L);
	return static_cast<double>(x / (1.0L - std::exp(-x)));
}

/// Dense C^gamma assembled gap by gap.
inline Eigen::MatrixXd capacitance_oracle(const std::vector<ResonatorParams>& r)
{
	const auto n = static_cast<Eigen::Index>(r.size());
	Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
	for (Eigen::Index i = 0; i + 1 < n; ++i) {
		const auto& a = r[static_cast<std::size_t>(i)];
		const auto& b = r[static_cast<std::size_t>(i + 1)];
		const double out_right = zeta_oracle(a.gamma * a.ell) / a.s;
		const double out_left = zeta_oracle(-b.gamma * b.ell) / a.s;
		c(i, i) += out_right;
		c(i, i + 1) -= out_right;
		c(i + 1, i + 1) += out_left;
		c(i + 1, i) -= out_left;
	}
	return c;
}

inline Eigen::VectorXd material_oracle(const std::vector<ResonatorParams>& r)
{
	Eigen::VectorXd v(static_cast<Eigen::Index>(r.size()));
	for (std::size_t i = 0; i < r.size(); ++i) v(static_cast<Eigen::Index>(i)) = r[i].v * r[i].v / r[i].ell;
	return v;
}

inline ResonatorParams random_resonator(gaugechain::Rng& rng, double gamma_lo = 0.0, double gamma_hi = 2.0)
{
	return {rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0), rng.uniform(gamma_lo, gamma_hi)};
}

inline std::vector<ResonatorParams> random_resonators(gaugechain::Rng& rng, std::size_t n, double gamma_lo = 0.0,
                                                      double gamma_hi = 2.0)
{
	std::vector<ResonatorParams> out;
	for (std::size_t i = 0; i < n; ++i) out.push_back(random_resonator(rng, gamma_lo, gamma_hi));
	return out;
}

inline std::size_t random_size(gaugechain::Rng& rng, std::size_t lo, std::size_t hi)
{
	return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

inline std::vector<double> linspace_for_test(double lo, double hi, std::size_t n)
{
	std::vector<double> out(n);
	for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
	return out;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testing_support
