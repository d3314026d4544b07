#pragma once

// Eigenvector envelopes and the critical imaginary gauge potential.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gaugechain/capacitance.hpp"
#include "gaugechain/chain.hpp"
#include "gaugechain/parallel.hpp"
#include "gaugechain/propagation.hpp"

namespace gaugechain {

/// j -> max over selected modes of log10 |u_k^(j)|, each mode sup-normalised.
struct Envelope {
	std::vector<double> log10_values;
	std::size_t modes = 0;

	[[nodiscard]] std::size_t size() const noexcept { return log10_values.size(); }

	/// Median of log10 values over sites [from, N).
	[[nodiscard]] double median_from(std::size_t from) const
	{
		std::vector<double> tail(log10_values.begin() + static_cast<std::ptrdiff_t>(from), log10_values.end());
		if (tail.empty()) throw std::invalid_argument("Envelope::median_from: empty range");
		const auto mid = tail.begin() + static_cast<std::ptrdiff_t>(tail.size() / 2);
		std::nth_element(tail.begin(), mid, tail.end());
		if (tail.size() % 2 == 1) return *mid;
		const double upper = *mid;
		const double lower = *std::max_element(tail.begin(), mid);
		return 0.5 * (lower + upper);
	}

	[[nodiscard]] double right_half_median() const { return median_from(size() / 2); }
};

/// C^gamma has zero row sums, so lambda = 0 with the constant vector is
/// always an eigenpair.  That mode is never localised and is left out of
/// envelopes and band statistics; eigenvalues below this bound are treated
/// as that mode.
inline constexpr double trivial_mode_tolerance = 1e-9;

inline bool is_trivial_mode(double lambda) noexcept { return std::abs(lambda) <= trivial_mode_tolerance; }

inline Envelope envelope(const SpectralData& data, double lambda_cut, bool include_trivial = false)
{
	if (!data.has_vectors()) throw std::invalid_argument("envelope: spectral data carries no eigenvectors");
	Envelope env;
	for (std::size_t k = 0; k < data.size(); ++k) {
		if (data.eigenvalues[k] > lambda_cut) continue;
		if (!include_trivial && is_trivial_mode(data.eigenvalues[k])) continue;
		const auto& u = data.gauge[k];
		if (env.log10_values.empty()) env.log10_values.assign(u.size(), -std::numeric_limits<double>::infinity());
		for (std::size_t j = 0; j < u.size(); ++j)
			env.log10_values[j] = std::max(env.log10_values[j], u.logmag[j] / std::log(10.0));
		++env.modes;
	}
	if (env.modes == 0) throw std::invalid_argument("envelope: no eigenvalue below the cut");
	return env;
}

inline Envelope envelope(const Chain& chain, double lambda_cut, bool include_trivial = false)
{
	return envelope(spectrum(chain, {.vectors = true, .lambda_max = lambda_cut}), lambda_cut, include_trivial);
}

/// Symmetrised Lyapunov exponents at the nontrivial eigenvalues <= lambda_cut.
struct BandLyapunov {
	std::vector<double> eigenvalues;
	std::vector<double> Lsym;
	double max_Lsym = 0.0;
	double decay_per_gamma = 0.0; ///< (1/(2N)) sum ell_i
};

inline BandLyapunov band_lyapunov(const Chain& chain, double lambda_cut)
{
	BandLyapunov out;
	for (double lambda : spectrum(chain, {.vectors = false, .lambda_max = lambda_cut}).eigenvalues)
		if (!is_trivial_mode(lambda)) out.eigenvalues.push_back(lambda);
	if (out.eigenvalues.empty()) throw std::invalid_argument("band_lyapunov: no eigenvalue below the cut");
	for (double lambda : out.eigenvalues) out.Lsym.push_back(total_lyapunov(chain, lambda).Lsym);
	out.max_Lsym = *std::max_element(out.Lsym.begin(), out.Lsym.end());
	double ell = 0.0;
	for (const auto& r : chain.resonators()) ell += r.ell;
	out.decay_per_gamma = 0.5 * ell / static_cast<double>(chain.N());
	return out;
}

/// gamma at which the decay gamma * decay_per_gamma matches max_Lsym.
inline double critical_gamma_from(double max_Lsym, double decay_per_gamma)
{
	if (!(decay_per_gamma > 0.0)) throw std::invalid_argument("critical_gamma_from: decay per gamma must be positive");
	return std::max(0.0, max_Lsym) / decay_per_gamma;
}

struct CriticalGammaOptions {
	double gamma_ref = 1e-3;
	/// Re-evaluate the band Lyapunov exponent at each trial gamma (bisection)
	/// instead of assuming it does not depend on gamma.
	bool exact = false;
	unsigned threads = 1;
	double exact_tolerance = 1e-6;
};

struct CriticalGamma {
	double gamma_c = 0.0;
	double mean_max_Lsym = 0.0;
	double mean_decay_per_gamma = 0.0;
	std::vector<std::uint64_t> seeds;
	std::vector<BandLyapunov> per_seed; ///< at gamma_ref
};

inline CriticalGamma critical_gamma(const BlockLibrary& library, double lambda_cut, std::size_t M,
                                    std::span<const std::uint64_t> seeds, const CriticalGammaOptions& options = {})
{
	if (seeds.empty()) throw std::invalid_argument("critical_gamma: no seeds");
	if (!library.has_uniform_gamma()) throw std::invalid_argument("critical_gamma: library must have a uniform gamma");

	auto mean_band = [&](double gamma, std::vector<BandLyapunov>* keep) {
		const auto lib = library.with_uniform_gamma(gamma);
		std::vector<BandLyapunov> runs(seeds.size());
		parallel_for(seeds.size(), options.threads,
		             [&](std::size_t s) { runs[s] = band_lyapunov(sample_chain(lib, M, seeds[s]), lambda_cut); });
		double m = 0.0, r = 0.0;
		for (const auto& b : runs) {
			m += b.max_Lsym;
			r += b.decay_per_gamma;
		}
		if (keep) *keep = std::move(runs);
		return std::pair{m / static_cast<double>(seeds.size()), r / static_cast<double>(seeds.size())};
	};

	CriticalGamma out;
	out.seeds.assign(seeds.begin(), seeds.end());
	const auto [m, ratio] = mean_band(options.gamma_ref, &out.per_seed);
	out.mean_max_Lsym = m;
	out.mean_decay_per_gamma = ratio;
	out.gamma_c = critical_gamma_from(m, ratio);
	if (!options.exact || out.gamma_c == 0.0) return out;

	// f(gamma) = mean max Lsym(gamma) - gamma * ratio; f(0) >= 0.
	auto f = [&](double g) { return mean_band(g, nullptr).first - g * ratio; };
	double lo = 0.0;
	double hi = std::max(2.0 * out.gamma_c, 10.0 * options.gamma_ref);
	for (int grow = 0; f(hi) > 0.0; ++grow) {
		if (grow > 30) throw NumericalError("critical_gamma: no sign change found for exact bisection");
		lo = hi;
		hi *= 2.0;
	}
	while (hi - lo > options.exact_tolerance * std::max(hi, 1e-12)) {
		const double mid = 0.5 * (lo + hi);
		(f(mid) > 0.0 ? lo : hi) = mid;
	}
	out.gamma_c = 0.5 * (lo + hi);
	return out;
}

} // namespace gaugechain
