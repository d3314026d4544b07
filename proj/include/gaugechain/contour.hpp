#pragma once

// Lyapunov exponents on a complex frequency grid and extraction of the
// L = 0 level set by marching squares.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gaugechain/chain.hpp"
#include "gaugechain/parallel.hpp"
#include "gaugechain/propagation.hpp"

namespace gaugechain {

struct Range {
	double lo = 0.0;
	double hi = 1.0;
};

/// Values on a rectangular grid; value(ix, iy) at (re[ix], im[iy]).
struct ComplexGrid {
	std::vector<double> re;
	std::vector<double> im;
	std::vector<double> values; ///< row-major in iy

	[[nodiscard]] std::size_t nx() const noexcept { return re.size(); }
	[[nodiscard]] std::size_t ny() const noexcept { return im.size(); }
	[[nodiscard]] double value(std::size_t ix, std::size_t iy) const { return values[iy * re.size() + ix]; }
	[[nodiscard]] std::complex<double> point(std::size_t ix, std::size_t iy) const { return {re[ix], im[iy]}; }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
	std::vector<double> out(n);
	for (std::size_t i = 0; i < n; ++i)
		out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
	return out;
}

template <typename F>
ComplexGrid evaluate_grid(Range re, Range im, std::size_t nx, std::size_t ny, unsigned threads, F&& f)
{
	ComplexGrid g{linspace(re.lo, re.hi, nx), linspace(im.lo, im.hi, ny), std::vector<double>(nx * ny)};
	parallel_for(nx * ny, threads, [&](std::size_t k) { g.values[k] = f(g.point(k % nx, k / nx)); });
	return g;
}

inline ComplexGrid lyapunov_grid(const Chain& chain, Range re, Range im, std::size_t nx, std::size_t ny,
                                 unsigned threads = 1)
{
	return evaluate_grid(re, im, nx, ny, threads, [&](std::complex<double> z) { return total_lyapunov(chain, z).L; });
}

struct Polyline {
	std::vector<std::complex<double>> points;
	bool closed = false;
};

struct ContourSet {
	std::vector<Polyline> lines;
	/// Bound on |L| at any vertex: twice the largest jump between adjacent nodes.
	double vertex_tolerance = 0.0;
};

/// Zero level set of a grid by marching squares with linear interpolation
/// along cell edges.  Saddle cells are resolved by the cell-centre average.
inline ContourSet marching_squares(const ComplexGrid& g)
{
	const std::size_t nx = g.nx(), ny = g.ny();
	if (nx < 2 || ny < 2) throw std::invalid_argument("marching_squares: grid too small");

	ContourSet out;
	for (std::size_t iy = 0; iy < ny; ++iy)
		for (std::size_t ix = 0; ix < nx; ++ix) {
			if (ix + 1 < nx) out.vertex_tolerance = std::max(out.vertex_tolerance, std::abs(g.value(ix + 1, iy) - g.value(ix, iy)));
			if (iy + 1 < ny) out.vertex_tolerance = std::max(out.vertex_tolerance, std::abs(g.value(ix, iy + 1) - g.value(ix, iy)));
		}
	out.vertex_tolerance *= 2.0;

	// Edge ids: horizontal edges first, then vertical.
	const std::size_t n_horizontal = (nx - 1) * ny;
	auto h_edge = [&](std::size_t ix, std::size_t iy) { return iy * (nx - 1) + ix; };
	auto v_edge = [&](std::size_t ix, std::size_t iy) { return n_horizontal + iy * nx + ix; };
	auto positive = [&](std::size_t ix, std::size_t iy) { return g.value(ix, iy) > 0.0; };
	auto crossing = [&](std::size_t edge) {
		std::size_t ax, ay, bx, by;
		if (edge < n_horizontal) {
			ax = edge % (nx - 1);
			ay = edge / (nx - 1);
			bx = ax + 1;
			by = ay;
		} else {
			ax = (edge - n_horizontal) % nx;
			ay = (edge - n_horizontal) / nx;
			bx = ax;
			by = ay + 1;
		}
		const double fa = g.value(ax, ay), fb = g.value(bx, by);
		const double t = fa == fb ? 0.5 : fa / (fa - fb);
		return g.point(ax, ay) + t * (g.point(bx, by) - g.point(ax, ay));
	};

	std::vector<std::pair<std::size_t, std::size_t>> segments;
	for (std::size_t iy = 0; iy + 1 < ny; ++iy)
		for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
			const bool p0 = positive(ix, iy), p1 = positive(ix + 1, iy);
			const bool p2 = positive(ix + 1, iy + 1), p3 = positive(ix, iy + 1);
			const std::size_t bottom = h_edge(ix, iy), top = h_edge(ix, iy + 1);
			const std::size_t left = v_edge(ix, iy), right = v_edge(ix + 1, iy);
			std::vector<std::size_t> hits;
			if (p0 != p1) hits.push_back(bottom);
			if (p1 != p2) hits.push_back(right);
			if (p3 != p2) hits.push_back(top);
			if (p0 != p3) hits.push_back(left);
			if (hits.size() == 2) {
				segments.emplace_back(hits[0], hits[1]);
			} else if (hits.size() == 4) {
				const double centre = 0.25 * (g.value(ix, iy) + g.value(ix + 1, iy) + g.value(ix + 1, iy + 1) + g.value(ix, iy + 1));
				// Corners 0 and 2 share a sign here; join them through the centre
				// when it agrees with them, otherwise separate them.
				if ((centre > 0.0) == p0) {
					segments.emplace_back(bottom, right);
					segments.emplace_back(top, left);
				} else {
					segments.emplace_back(bottom, left);
					segments.emplace_back(top, right);
				}
			}
		}

	// Join segments sharing an edge id into polylines.
	std::map<std::size_t, std::vector<std::size_t>> incident;
	for (std::size_t s = 0; s < segments.size(); ++s) {
		incident[segments[s].first].push_back(s);
		incident[segments[s].second].push_back(s);
	}
	std::vector<bool> used(segments.size(), false);
	auto other_end = [&](std::size_t s, std::size_t e) { return segments[s].first == e ? segments[s].second : segments[s].first; };
	auto next_segment = [&](std::size_t e) -> std::ptrdiff_t {
		for (auto s : incident[e])
			if (!used[s]) return static_cast<std::ptrdiff_t>(s);
		return -1;
	};

	for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
		if (used[s0]) continue;
		// Walk backwards to an open end first, so open lines come out whole.
		std::size_t start_edge = segments[s0].first;
		{
			std::size_t e = start_edge;
			std::size_t s = s0;
			std::vector<bool> seen(segments.size(), false);
			seen[s] = true;
			while (true) {
				std::ptrdiff_t nxt = -1;
				for (auto c : incident[e])
					if (c != s && !used[c] && !seen[c]) nxt = static_cast<std::ptrdiff_t>(c);
				if (nxt < 0) break;
				s = static_cast<std::size_t>(nxt);
				seen[s] = true;
				e = other_end(s, e);
				if (s == s0) break;
			}
			start_edge = e;
		}
		Polyline line;
		std::size_t e = start_edge;
		line.points.push_back(crossing(e));
		while (true) {
			const auto s = next_segment(e);
			if (s < 0) break;
			used[static_cast<std::size_t>(s)] = true;
			e = other_end(static_cast<std::size_t>(s), e);
			line.points.push_back(crossing(e));
		}
		line.closed = e == start_edge && line.points.size() > 2;
		if (line.closed) line.points.pop_back();
		out.lines.push_back(std::move(line));
	}
	return out;
}

inline ContourSet edge_contour(const Chain& chain, Range re, Range im, std::size_t nx, std::size_t ny,
                               unsigned threads = 1)
{
	if (nx < 8 || ny < 8) throw std::invalid_argument("edge_contour: grid must be at least 8 x 8");
	return marching_squares(lyapunov_grid(chain, re, im, nx, ny, threads));
}

} // namespace gaugechain
