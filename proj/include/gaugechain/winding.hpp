#pragma once

// Block symbols: eigenvalues of the quasiperiodic (Bloch) gauge capacitance
// matrix of an infinitely repeated block, traced over the Bloch phase.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gaugechain/chain.hpp"
#include "gaugechain/zeta.hpp"

namespace gaugechain {

using Polygon = std::vector<std::complex<double>>;

struct WindingCurve {
	std::vector<double> theta;
	/// bands[b][t]: band b at theta[t], after nearest-neighbour continuation.
	std::vector<std::vector<std::complex<double>>> bands;
	/// Closed loops.  A band returning to itself after one period is its own
	/// loop; bands that swap over a period are concatenated.
	std::vector<Polygon> loops;
};

/// V times the k x k quasiperiodic capacitance matrix at Bloch phase theta.
inline Eigen::MatrixXcd quasiperiodic_capacitance(const Block& block, double theta)
{
	const auto k = static_cast<Eigen::Index>(block.size());
	const auto& res = block.resonators;
	const std::complex<double> forward = std::polar(1.0, theta);
	const std::complex<double> backward = std::conj(forward);
	Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(k, k);
	for (Eigen::Index i = 0; i < k; ++i) {
		const auto& here = res[static_cast<std::size_t>(i)];
		const Eigen::Index prev_idx = (i + k - 1) % k;
		const Eigen::Index next_idx = (i + 1) % k;
		const double s_prev = res[static_cast<std::size_t>(prev_idx)].s;
		const double a = here.decay_argument();
		const double right = zeta(a) / here.s;
		const double left = zeta(-a) / s_prev;
		c(i, i) += left + right;
		c(i, next_idx) -= right * (i == k - 1 ? forward : 1.0);
		c(i, prev_idx) -= left * (i == 0 ? backward : 1.0);
		c.row(i) *= here.v * here.v / here.ell;
	}
	return c;
}

inline std::vector<std::complex<double>> bloch_eigenvalues(const Block& block, double theta)
{
	const auto c = quasiperiodic_capacitance(block, theta);
	if (c.rows() == 1) return {c(0, 0)};
	Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, false);
	if (solver.info() != Eigen::Success) throw std::runtime_error("bloch_eigenvalues: eigensolver failed");
	const auto& ev = solver.eigenvalues();
	return {ev.data(), ev.data() + ev.size()};
}

/// perm[b] = index in `next` continuing `prev[b]`; greedy on globally
/// smallest distances.
inline std::vector<std::size_t> match_nearest(const std::vector<std::complex<double>>& prev,
                                              const std::vector<std::complex<double>>& next)
{
	const std::size_t k = prev.size();
	struct Pair {
		double d;
		std::size_t a, b;
	};
	std::vector<Pair> pairs;
	pairs.reserve(k * k);
	for (std::size_t a = 0; a < k; ++a)
		for (std::size_t b = 0; b < k; ++b) pairs.push_back({std::abs(prev[a] - next[b]), a, b});
	std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
		return x.d != y.d ? x.d < y.d : (x.a != y.a ? x.a < y.a : x.b < y.b);
	});
	constexpr auto unset = std::numeric_limits<std::size_t>::max();
	std::vector<std::size_t> perm(k, unset);
	std::vector<bool> taken(k, false);
	for (const auto& p : pairs) {
		if (perm[p.a] != unset || taken[p.b]) continue;
		perm[p.a] = p.b;
		taken[p.b] = true;
	}
	return perm;
}

inline WindingCurve winding_curve(const Block& block, std::size_t theta_samples)
{
	if (theta_samples < 16) throw std::invalid_argument("winding_curve: need at least 16 theta samples");
	const std::size_t k = block.size();
	WindingCurve out;
	out.bands.assign(k, {});
	std::vector<std::complex<double>> current;
	for (std::size_t t = 0; t < theta_samples; ++t) {
		const double theta = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(theta_samples);
		out.theta.push_back(theta);
		auto ev = bloch_eigenvalues(block, theta);
		if (t == 0) {
			std::sort(ev.begin(), ev.end(), [](auto x, auto y) {
				return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
			});
			current = ev;
		} else {
			const auto perm = match_nearest(current, ev);
			for (std::size_t b = 0; b < k; ++b) current[b] = ev[perm[b]];
		}
		for (std::size_t b = 0; b < k; ++b) out.bands[b].push_back(current[b]);
	}

	// Close the period: where does each band land at theta = 2 pi?
	std::vector<std::complex<double>> starts(k);
	for (std::size_t b = 0; b < k; ++b) starts[b] = out.bands[b].front();
	const auto successor = match_nearest(current, starts);
	std::vector<bool> used(k, false);
	for (std::size_t b = 0; b < k; ++b) {
		if (used[b]) continue;
		Polygon loop;
		std::size_t c = b;
		while (!used[c]) {
			used[c] = true;
			loop.insert(loop.end(), out.bands[c].begin(), out.bands[c].end());
			c = successor[c];
		}
		out.loops.push_back(std::move(loop));
	}
	return out;
}

/// Distance from z to the segment [a, b].
inline double segment_distance(std::complex<double> z, std::complex<double> a, std::complex<double> b)
{
	const auto ab = b - a;
	const double len2 = std::norm(ab);
	if (len2 == 0.0) return std::abs(z - a);
	const double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
	return std::abs(z - (a + t * ab));
}

inline double distance_to_polygon(const Polygon& poly, std::complex<double> z)
{
	double best = std::numeric_limits<double>::infinity();
	for (std::size_t i = 0; i < poly.size(); ++i)
		best = std::min(best, segment_distance(z, poly[i], poly[(i + 1) % poly.size()]));
	return best;
}

/// Even-odd crossing test.  Points on an edge (to within 1e-12 relative to
/// the polygon extent) are reported outside.
inline bool point_in_polygon(const Polygon& poly, std::complex<double> z)
{
	if (poly.size() < 3) return false;
	double extent = 0.0;
	for (const auto& p : poly) extent = std::max(extent, std::abs(p - poly.front()));
	if (distance_to_polygon(poly, z) <= 1e-12 * std::max(extent, 1.0)) return false;

	bool inside = false;
	const double x = z.real(), y = z.imag();
	for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
		const double xi = poly[i].real(), yi = poly[i].imag();
		const double xj = poly[j].real(), yj = poly[j].imag();
		if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
	}
	return inside;
}

inline bool point_in_winding(const WindingCurve& curve, std::complex<double> z)
{
	return std::any_of(curve.loops.begin(), curve.loops.end(),
	                   [&](const Polygon& loop) { return point_in_polygon(loop, z); });
}

inline double distance_to_curve(const WindingCurve& curve, std::complex<double> z)
{
	double best = std::numeric_limits<double>::infinity();
	for (const auto& loop : curve.loops) best = std::min(best, distance_to_polygon(loop, z));
	return best;
}

/// Total polygonal length of all loops.
inline double curve_length(const WindingCurve& curve)
{
	double total = 0.0;
	for (const auto& loop : curve.loops)
		for (std::size_t i = 0; i < loop.size(); ++i) total += std::abs(loop[(i + 1) % loop.size()] - loop[i]);
	return total;
}

} // namespace gaugechain
