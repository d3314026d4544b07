#pragma once

// Density-of-states statistics and block-level Lyapunov estimates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gaugechain/capacitance.hpp"
#include "gaugechain/chain.hpp"
#include "gaugechain/parallel.hpp"
#include "gaugechain/propagation.hpp"
#include "gaugechain/rng.hpp"

namespace gaugechain {

/// D(lambda) = |{eigenvalues <= lambda}| / N.
class EmpiricalCDF {
public:
	explicit EmpiricalCDF(std::vector<double> samples) : points_{std::move(samples)}
	{
		if (points_.empty()) throw std::invalid_argument("EmpiricalCDF: no samples");
		std::sort(points_.begin(), points_.end());
	}

	[[nodiscard]] double operator()(double lambda) const
	{
		const auto it = std::upper_bound(points_.begin(), points_.end(), lambda);
		return static_cast<double>(it - points_.begin()) / static_cast<double>(points_.size());
	}

	[[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
	[[nodiscard]] std::size_t size() const noexcept { return points_.size(); }

private:
	std::vector<double> points_;
};

/// sup_lambda |F(lambda) - G(lambda)|, attained at a sample point of either.
inline double kolmogorov_distance(const EmpiricalCDF& f, const EmpiricalCDF& g)
{
	const auto& a = f.points();
	const auto& b = g.points();
	const double na = static_cast<double>(a.size());
	const double nb = static_cast<double>(b.size());
	std::size_t i = 0, j = 0;
	double worst = 0.0;
	while (i < a.size() || j < b.size()) {
		double x;
		if (j >= b.size() || (i < a.size() && a[i] <= b[j])) x = a[i];
		else x = b[j];
		while (i < a.size() && a[i] <= x) ++i;
		while (j < b.size() && b[j] <= x) ++j;
		worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
	}
	return worst;
}

struct DosConvergence {
	std::vector<std::size_t> M_list;
	std::vector<std::uint64_t> seeds;
	/// cross_seed[m] lists the distance for every seed pair (a < b), in order.
	std::vector<std::vector<double>> cross_seed;
	/// consecutive[s][m] compares M_list[m] and M_list[m+1] for seed s.
	std::vector<std::vector<double>> consecutive;

	[[nodiscard]] double mean_cross_seed(std::size_t m) const
	{
		const auto& d = cross_seed.at(m);
		return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
	}
	[[nodiscard]] double max_cross_seed(std::size_t m) const
	{
		const auto& d = cross_seed.at(m);
		return *std::max_element(d.begin(), d.end());
	}
};

inline EmpiricalCDF chain_cdf(const BlockLibrary& library, std::size_t M, std::uint64_t seed)
{
	return EmpiricalCDF{spectrum(sample_chain(library, M, seed), {.vectors = false, .lambda_max = std::nullopt}).eigenvalues};
}

inline DosConvergence dos_convergence(const BlockLibrary& library, std::span<const std::size_t> M_list,
                                      std::span<const std::uint64_t> seeds, unsigned threads = 1)
{
	if (seeds.size() < 2) throw std::invalid_argument("dos_convergence: at least two seeds required");
	if (M_list.empty()) throw std::invalid_argument("dos_convergence: empty M list");
	const std::size_t nm = M_list.size();
	const std::size_t ns = seeds.size();

	std::vector<std::vector<double>> evs(nm * ns);
	parallel_for(nm * ns, threads, [&](std::size_t k) {
		evs[k] = spectrum(sample_chain(library, M_list[k / ns], seeds[k % ns]), {.vectors = false, .lambda_max = std::nullopt}).eigenvalues;
	});
	std::vector<EmpiricalCDF> cdfs;
	cdfs.reserve(evs.size());
	for (auto& e : evs) cdfs.emplace_back(std::move(e));

	DosConvergence out{{M_list.begin(), M_list.end()}, {seeds.begin(), seeds.end()}, {}, {}};
	out.cross_seed.resize(nm);
	for (std::size_t m = 0; m < nm; ++m)
		for (std::size_t a = 0; a < ns; ++a)
			for (std::size_t b = a + 1; b < ns; ++b)
				out.cross_seed[m].push_back(kolmogorov_distance(cdfs[m * ns + a], cdfs[m * ns + b]));
	out.consecutive.resize(ns);
	for (std::size_t s = 0; s < ns; ++s)
		for (std::size_t m = 0; m + 1 < nm; ++m)
			out.consecutive[s].push_back(kolmogorov_distance(cdfs[m * ns + s], cdfs[(m + 1) * ns + s]));
	return out;
}

/// Block-statistics estimate of the total Lyapunov exponent:
/// sum_d p_d (ln rho(P~_{B_d}) - (1/2) sum_k gamma_k ell_k) / sum_d p_d len(B_d).
inline double lyapunov_estimate(const BlockLibrary& library, cdouble lambda)
{
	double num = 0.0;
	for (std::size_t d = 0; d < library.size(); ++d) {
		const double p = library.probabilities()[d];
		if (p == 0.0) continue;
		const auto& b = library.block(d);
		const double rho = spectral_radius(block_propagation(b, lambda, true));
		num += p * (std::log(rho) - 0.5 * b.total_decay_argument());
	}
	return num / library.mean_block_size();
}

} // namespace gaugechain
