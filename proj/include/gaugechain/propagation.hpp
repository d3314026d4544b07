#pragma once

// Propagation and transfer matrices, renormalised long products, Lyapunov
// exponents and the block-level spectral region tests.
//
// P_i(lambda) advances the exterior pair (u, u') from the left edge of
// resonator i to the left edge of resonator i+1.  det P_i = e^{-gamma_i ell_i};
// the symmetrised P~_i = e^{gamma_i ell_i / 2} P_i has determinant 1.
// Products are ordered left to right along the chain: P_tot = P_N ... P_1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "gaugechain/chain.hpp"
#include "gaugechain/mat2.hpp"
#include "gaugechain/zeta.hpp"

namespace gaugechain {

using cdouble = std::complex<double>;

template <typename T>
Mat2<T> propagation_matrix(const ResonatorParams& r, T lambda)
{
	const double a = r.decay_argument();
	const double damp = std::exp(-a);
	const T k = lambda * (r.ell / (zeta(a) * r.v * r.v));
	return {T(1) - r.s * k, T(damp * r.s), -k, T(damp)};
}

template <typename T>
Mat2<T> symmetrised_propagation(const ResonatorParams& r, T lambda)
{
	const double a = r.decay_argument();
	const double up = std::exp(0.5 * a);
	const double down = std::exp(-0.5 * a);
	const T k = lambda * (r.ell / (zeta(a) * r.v * r.v));
	return {up * (T(1) - r.s * k), T(down * r.s), -up * k, T(down)};
}

/// Symmetrised transfer matrix T~_i acting on (w_i, w_{i-1}) for the
/// eigenvector w of V J.  Uses the interior diagonal of J for resonator
/// `here`, neighbours `prev` and `next`.
template <typename T>
Mat2<T> transfer_matrix(const ResonatorParams& prev, const ResonatorParams& here, const ResonatorParams& next,
                        T lambda)
{
	const double a_prev = prev.decay_argument();
	const double a = here.decay_argument();
	const double a_next = next.decay_argument();
	const double q = zeta(-a) / prev.s + zeta(a) / here.s;
	const double s_here = std::sqrt(zeta(a) * zeta(-a_next)) / here.s;
	const double s_prev = std::sqrt(zeta(a_prev) * zeta(-a)) / prev.s;
	return {(T(q) - lambda * (here.ell / (here.v * here.v))) / s_here, T(-s_prev / s_here), T(1), T(0)};
}

/// Q_i, taking symmetrised coordinates (w_{i+1}, w_i) to exterior values (u, u')
/// at the left edge of resonator i+1.
inline RealMat2 change_of_basis(const ResonatorParams& here, const ResonatorParams& next)
{
	const double rn = std::sqrt(zeta(-next.decay_argument()));
	const double a = here.decay_argument();
	return {rn, 0.0, rn / here.s, -std::exp(0.5 * a) * std::sqrt(zeta(-a)) / here.s};
}

/// Ordered product over a block, first resonator applied first.
template <typename T>
Mat2<T> block_propagation(std::span<const ResonatorParams> block, T lambda, bool symmetrised)
{
	auto m = Mat2<T>::identity();
	for (const auto& r : block)
		m = (symmetrised ? symmetrised_propagation(r, lambda) : propagation_matrix(r, lambda)) * m;
	return m;
}

template <typename T>
Mat2<T> block_propagation(const Block& block, T lambda, bool symmetrised)
{
	return block_propagation<T>(std::span<const ResonatorParams>{block.resonators}, lambda, symmetrised);
}

/// Long product kept as exp(log_norm) * direction with ||direction||_2 = 1.
template <typename T>
struct LogNormProduct {
	double log_norm = 0.0;
	Mat2<T> direction = Mat2<T>::identity();

	/// Replace the product by m * product.
	void push(const Mat2<T>& m)
	{
		direction = m * direction;
		const double n = spectral_norm(direction);
		if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("LogNormProduct: degenerate factor");
		direction *= T(1.0 / n);
		log_norm += std::log(n);
	}

	/// log of the spectral norm of the full product.
	[[nodiscard]] double log_spectral_norm() const { return log_norm + std::log(spectral_norm(direction)); }
};

struct LyapunovExponent {
	double L = 0.0;     ///< total exponent
	double Lsym = 0.0;  ///< exponent of the symmetrised product
	double decay = 0.0; ///< (1/(2N)) sum gamma_i ell_i
};

template <typename T>
LogNormProduct<T> symmetrised_total_product(const Chain& chain, T lambda)
{
	LogNormProduct<T> prod;
	for (const auto& r : chain.resonators()) prod.push(symmetrised_propagation(r, lambda));
	return prod;
}

template <typename T>
LyapunovExponent total_lyapunov(const Chain& chain, T lambda)
{
	const double n = static_cast<double>(chain.N());
	LyapunovExponent out;
	out.Lsym = symmetrised_total_product(chain, lambda).log_spectral_norm() / n;
	out.decay = chain.decay();
	out.L = out.Lsym - out.decay;
	return out;
}

enum class Region { SharedPassBand, Bandgap, Hybridisation };

inline const char* to_string(Region r)
{
	switch (r) {
	case Region::SharedPassBand: return "shared_pass_band";
	case Region::Bandgap: return "bandgap";
	case Region::Hybridisation: return "hybridisation";
	}
	return "?";
}

struct RegionLabel {
	Region region = Region::Bandgap;
	std::vector<bool> pass;     ///< per block: |tr P~_B| <= 2
	std::vector<double> traces; ///< per block trace of P~_B
};

inline RegionLabel classify(std::span<const Block> blocks, double lambda)
{
	RegionLabel out;
	std::size_t passing = 0;
	for (const auto& b : blocks) {
		const double tr = block_propagation(b, lambda, true).trace();
		const bool pass = std::abs(tr) <= 2.0;
		out.traces.push_back(tr);
		out.pass.push_back(pass);
		passing += pass ? 1 : 0;
	}
	if (passing == blocks.size()) out.region = Region::SharedPassBand;
	else if (passing == 0) out.region = Region::Bandgap;
	else out.region = Region::Hybridisation;
	return out;
}

/// Fixed points on the real projective line, as angles in [0, pi).
struct FixedPoints {
	double source = 0.0; ///< eigen-direction with |xi| < 1
	double sink = 0.0;   ///< eigen-direction with |xi| > 1
};

inline constexpr double hyperbolicity_tolerance = 1e-9;

/// Angle in [0, pi) of the eigen-direction of m for real eigenvalue xi.
inline double eigen_direction_angle(const RealMat2& m, double xi)
{
	// (m - xi I) x = 0: both rows give a candidate, take the better conditioned.
	const double x1 = m.a12, y1 = xi - m.a11;
	const double x2 = xi - m.a22, y2 = m.a21;
	const bool first = x1 * x1 + y1 * y1 >= x2 * x2 + y2 * y2;
	double angle = first ? std::atan2(y1, x1) : std::atan2(y2, x2);
	angle = std::fmod(angle, std::numbers::pi);
	if (angle < 0.0) angle += std::numbers::pi;
	if (angle >= std::numbers::pi) angle -= std::numbers::pi;
	return angle;
}

inline FixedPoints fixed_points(const RealMat2& m, double tolerance = hyperbolicity_tolerance)
{
	const double tr = m.trace();
	if (!(std::abs(tr) > 2.0 + tolerance))
		throw std::domain_error("fixed_points: matrix is not hyperbolic");
	const auto xi = eigenvalues(m); // ordered by modulus, real here
	return {eigen_direction_angle(m, xi[0].real()), eigen_direction_angle(m, xi[1].real())};
}

/// Index of the arc of [0, pi) cut at the sorted `cuts` containing `angle`;
/// -1 if the angle coincides with a cut.
inline int arc_index(const std::vector<double>& cuts, double angle)
{
	for (double c : cuts)
		if (angle == c) return -1;
	const auto it = std::upper_bound(cuts.begin(), cuts.end(), angle);
	const auto idx = static_cast<int>(it - cuts.begin());
	// Angles below the first cut and above the last share the wrap-around arc.
	return idx == static_cast<int>(cuts.size()) ? 0 : idx;
}

/// True when every block is in its bandgap at lambda and all sinks lie in one
/// connected component of the projective line with the sources removed.
inline bool saxon_hutner(std::span<const Block> blocks, double lambda)
{
	std::vector<double> sources;
	std::vector<double> sinks;
	for (const auto& b : blocks) {
		const auto m = block_propagation(b, lambda, true);
		if (!(std::abs(m.trace()) > 2.0 + hyperbolicity_tolerance)) return false;
		const auto fp = fixed_points(m);
		sources.push_back(fp.source);
		sinks.push_back(fp.sink);
	}
	std::sort(sources.begin(), sources.end());
	const int arc = arc_index(sources, sinks.front());
	if (arc < 0) return false;
	for (double s : sinks)
		if (arc_index(sources, s) != arc) return false;
	return true;
}

/// Second component of P~_tot(lambda) (1, 0)^T.  The propagated vector is
/// renormalised at every step; `value` is the component of the unit vector
/// and `log_scale` the accumulated log of the discarded norms.
struct SpectralResidual {
	double value = 0.0;
	double log_scale = 0.0;
};

namespace detail {

/// Per-resonator coefficients of P~_i(lambda) = [[up (1 - s k), down s], [-up k, down]]
/// with k = lambda * c.
struct ResidualStep {
	double up, down, s, c;
};

inline std::vector<ResidualStep> residual_steps(const Chain& chain)
{
	std::vector<ResidualStep> steps;
	steps.reserve(chain.N());
	for (const auto& r : chain.resonators()) {
		const double a = r.decay_argument();
		steps.push_back({std::exp(0.5 * a), std::exp(-0.5 * a), r.s, r.ell / (zeta(a) * r.v * r.v)});
	}
	return steps;
}

} // namespace detail

inline SpectralResidual spectral_residual(const Chain& chain, double lambda)
{
	double x0 = 1.0, x1 = 0.0;
	double log_scale = 0.0;
	for (const auto& st : detail::residual_steps(chain)) {
		const double k = lambda * st.c;
		const double y0 = st.up * ((1.0 - st.s * k) * x0) + st.down * st.s * x1;
		const double y1 = -st.up * k * x0 + st.down * x1;
		const double n = std::hypot(y0, y1);
		x0 = y0 / n;
		x1 = y1 / n;
		log_scale += std::log(n);
	}
	return {x1, log_scale};
}

/// Number of sign changes of the renormalised residual along a sorted grid.
inline std::size_t residual_sign_changes(const Chain& chain, std::span<const double> grid)
{
	const auto steps = detail::residual_steps(chain);
	std::size_t changes = 0;
	double prev = 0.0;
	for (double lambda : grid) {
		// Only the sign matters here, so rescale by the 1-norm and skip the log.
		double x0 = 1.0, x1 = 0.0;
		for (const auto& st : steps) {
			const double k = lambda * st.c;
			const double y0 = st.up * ((1.0 - st.s * k) * x0) + st.down * st.s * x1;
			const double y1 = -st.up * k * x0 + st.down * x1;
			const double n = std::abs(y0) + std::abs(y1);
			x0 = y0 / n;
			x1 = y1 / n;
		}
		if (x1 != 0.0) {
			if (prev != 0.0 && (x1 > 0.0) != (prev > 0.0)) ++changes;
			prev = x1;
		}
	}
	return changes;
}

} // namespace gaugechain
