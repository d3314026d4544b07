#pragma once

// Gauge capacitance matrix, its symmetrisation, and the subwavelength
// spectrum.
//
// The generalised problem V C u = lambda u is never solved directly.  C is
// similar to the symmetric J = R^{-1} C R through a positive diagonal R, and
// V^{1/2} J V^{1/2} is similar to V J, so the eigenvalues come from a
// symmetric tridiagonal solve and the gauge eigenvectors are recovered as
// u = R V^{1/2} w.  R decays like exp(-(1/2) sum gamma_k ell_k), which
// leaves the double range after a few hundred resonators at gamma = 1, so R
// and u are carried as logarithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "gaugechain/chain.hpp"
#include "gaugechain/tridiagonal.hpp"
#include "gaugechain/zeta.hpp"

namespace gaugechain {

/// C^gamma.  Off-diagonals are negative: C_{i,i+1} = -zeta(gamma_i ell_i)/s_i
/// and C_{i+1,i} = -zeta(-gamma_{i+1} ell_{i+1})/s_i, so every row sums to 0.
inline TridiagonalMatrix gauge_capacitance(const Chain& chain)
{
	const std::size_t n = chain.N();
	TridiagonalMatrix c;
	c.diag.assign(n, 0.0);
	c.lower.assign(n - 1, 0.0);
	c.upper.assign(n - 1, 0.0);
	for (std::size_t i = 0; i + 1 < n; ++i) {
		const auto& here = chain[i];
		const auto& next = chain[i + 1];
		const double right = zeta(here.decay_argument()) / here.s;
		const double left = zeta(-next.decay_argument()) / here.s;
		c.diag[i] += right;
		c.upper[i] = -right;
		c.diag[i + 1] += left;
		c.lower[i] = -left;
	}
	return c;
}

/// Diagonal of V: v_i^2 / ell_i.
inline std::vector<double> material_matrix(const Chain& chain)
{
	std::vector<double> out;
	out.reserve(chain.N());
	for (const auto& r : chain.resonators()) out.push_back(r.v * r.v / r.ell);
	return out;
}

struct SymmetrisedSystem {
	std::vector<double> q;     ///< diagonal of J (equal to diag of C)
	std::vector<double> sband; ///< positive magnitudes of J's off-diagonal
	std::vector<double> vdiag; ///< v_i^2 / ell_i
	std::vector<double> logr;  ///< log of R's diagonal

	[[nodiscard]] std::size_t size() const noexcept { return q.size(); }

	/// J^gamma with off-diagonal -sband.
	[[nodiscard]] TridiagonalMatrix matrix() const
	{
		TridiagonalMatrix j{q, {}, {}};
		for (double s : sband) {
			j.lower.push_back(-s);
			j.upper.push_back(-s);
		}
		return j;
	}
};

/// Largest discrepancy tolerated between the recursive and closed-form R.
inline constexpr double transform_closed_form_tolerance = 1e-10;

inline SymmetrisedSystem symmetrise(const Chain& chain)
{
	const std::size_t n = chain.N();
	SymmetrisedSystem sys;
	sys.q = gauge_capacitance(chain).diag;
	sys.vdiag = material_matrix(chain);
	sys.sband.resize(n - 1);
	sys.logr.resize(n);

	sys.logr[0] = 0.5 * log_zeta(-chain[0].decay_argument());
	double cumulative = 0.0; // sum_{k<=i} gamma_k ell_k
	for (std::size_t i = 0; i + 1 < n; ++i) {
		const double a_here = chain[i].decay_argument();
		const double a_next = chain[i + 1].decay_argument();
		sys.sband[i] = std::exp(0.5 * (log_zeta(a_here) + log_zeta(-a_next))) / chain[i].s;
		sys.logr[i + 1] = sys.logr[i] + 0.5 * (log_zeta(-a_next) - log_zeta(a_here));

		cumulative += a_here;
		const double closed = 0.5 * log_zeta(-a_next) - 0.5 * cumulative;
		const double scale = std::max(1.0, std::abs(closed));
		if (std::abs(closed - sys.logr[i + 1]) > transform_closed_form_tolerance * scale)
			throw NumericalError("symmetrise: transformation recursion disagrees with its closed form");
	}
	return sys;
}

/// Per-entry sign and log-magnitude of a vector too wide for doubles.
struct LogVector {
	std::vector<std::int8_t> sign;
	std::vector<double> logmag; ///< natural log of |entry|; -inf for exact zeros

	[[nodiscard]] std::size_t size() const noexcept { return sign.size(); }

	/// Linear value, flushing anything below the double range to 0.
	[[nodiscard]] double value(std::size_t j) const
	{
		if (sign[j] == 0) return 0.0;
		return sign[j] * std::exp(logmag[j]);
	}

	[[nodiscard]] double max_logmag() const
	{
		return *std::max_element(logmag.begin(), logmag.end());
	}
};

struct SpectralData {
	std::vector<double> eigenvalues;    ///< ascending
	Eigen::MatrixXd symvectors;         ///< orthonormal columns w_k of V^{1/2} J V^{1/2}
	std::vector<LogVector> gauge;       ///< u_k = R V^{1/2} w_k, sup-norm 1

	[[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
	[[nodiscard]] bool has_vectors() const noexcept { return !gauge.empty(); }
};

struct SpectrumOptions {
	bool vectors = true;
	std::optional<double> lambda_max; ///< keep only eigenvalues <= lambda_max
};

/// Diagonal and off-diagonal of V^{1/2} J V^{1/2}.
inline std::pair<std::vector<double>, std::vector<double>> symmetric_bands(const SymmetrisedSystem& sys)
{
	const std::size_t n = sys.size();
	std::vector<double> d(n);
	std::vector<double> e(n - 1);
	for (std::size_t i = 0; i < n; ++i) d[i] = sys.vdiag[i] * sys.q[i];
	for (std::size_t i = 0; i + 1 < n; ++i) e[i] = -std::sqrt(sys.vdiag[i] * sys.vdiag[i + 1]) * sys.sband[i];
	return {std::move(d), std::move(e)};
}

/// Gauge eigenvector for column w, normalised so the largest entry is 1.
inline LogVector gauge_vector(const SymmetrisedSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& w)
{
	const std::size_t n = sys.size();
	LogVector u;
	u.sign.resize(n);
	u.logmag.resize(n);
	double top = -std::numeric_limits<double>::infinity();
	for (std::size_t j = 0; j < n; ++j) {
		const double wj = w(static_cast<Eigen::Index>(j));
		u.sign[j] = static_cast<std::int8_t>((wj > 0.0) - (wj < 0.0));
		u.logmag[j] = wj == 0.0 ? -std::numeric_limits<double>::infinity()
		                        : sys.logr[j] + 0.5 * std::log(sys.vdiag[j]) + std::log(std::abs(wj));
		top = std::max(top, u.logmag[j]);
	}
	for (auto& l : u.logmag) l -= top;
	return u;
}

inline SpectralData spectrum(const SymmetrisedSystem& sys, const SpectrumOptions& options = {})
{
	if (sys.size() == 0) throw std::invalid_argument("spectrum: empty system");
	auto [d, e] = symmetric_bands(sys);
	auto solved = symmetric_tridiagonal_eigen(std::move(d), std::move(e), {options.vectors, options.lambda_max});

	SpectralData out;
	out.eigenvalues = std::move(solved.values);
	if (options.vectors) {
		out.symvectors = std::move(solved.vectors);
		out.gauge.reserve(out.size());
		for (Eigen::Index k = 0; k < out.symvectors.cols(); ++k) out.gauge.push_back(gauge_vector(sys, out.symvectors.col(k)));
	}
	return out;
}

inline SpectralData spectrum(const Chain& chain, const SpectrumOptions& options = {})
{
	return spectrum(symmetrise(chain), options);
}

/// Count of eigenvalues of V C strictly below x.
inline std::size_t eigenvalue_count_below(const SymmetrisedSystem& sys, double x)
{
	const auto [d, e] = symmetric_bands(sys);
	return sturm_count(d, e, x);
}

/// Piecewise-affine continuum mode: constant on each resonator, affine
/// across gaps, constant outside the array.  Stored by its vertices.
struct ModeProfile {
	std::vector<double> x;
	std::vector<double> u;

	[[nodiscard]] double operator()(double at) const
	{
		if (at <= x.front()) return u.front();
		if (at >= x.back()) return u.back();
		const auto it = std::upper_bound(x.begin(), x.end(), at);
		const auto hi = static_cast<std::size_t>(it - x.begin());
		const auto lo = hi - 1;
		if (x[hi] == x[lo]) return u[hi];
		const double t = (at - x[lo]) / (x[hi] - x[lo]);
		return u[lo] + t * (u[hi] - u[lo]);
	}
};

inline ModeProfile mode_profile(const Chain& chain, const LogVector& mode, double margin)
{
	if (mode.size() != chain.N()) throw std::invalid_argument("mode_profile: vector length differs from N");
	ModeProfile p;
	const std::size_t n = chain.N();
	p.x.push_back(chain.x_left(0) - margin);
	p.u.push_back(mode.value(0));
	for (std::size_t i = 0; i < n; ++i) {
		const double ui = mode.value(i);
		p.x.push_back(chain.x_left(i));
		p.u.push_back(ui);
		p.x.push_back(chain.x_right(i));
		p.u.push_back(ui);
	}
	p.x.push_back(chain.x_right(n - 1) + margin);
	p.u.push_back(mode.value(n - 1));
	return p;
}

inline ModeProfile mode_profile(const Chain& chain, const SpectralData& data, std::size_t k, double margin)
{
	if (k >= data.gauge.size()) throw std::out_of_range("mode_profile: eigen-index out of range");
	return mode_profile(chain, data.gauge[k], margin);
}

} // namespace gaugechain
