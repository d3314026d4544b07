#pragma once

// Resonator blocks, block libraries and finite block-disordered chains.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaugechain/rng.hpp"

namespace gaugechain {

/// Wave speed, length, spacing to the next resonator, and imaginary gauge
/// potential of a single resonator.
struct ResonatorParams {
	double v = 1.0;
	double ell = 1.0;
	double s = 1.0;
	double gamma = 0.0;

	/// gamma * ell, the argument that enters every zeta evaluation.
	[[nodiscard]] double decay_argument() const noexcept { return gamma * ell; }

	friend bool operator==(const ResonatorParams&, const ResonatorParams&) = default;
};

inline void validate(const ResonatorParams& r)
{
	if (!(r.v > 0.0) || !(r.ell > 0.0) || !(r.s > 0.0) || !std::isfinite(r.gamma))
		throw std::invalid_argument("resonator requires v > 0, ell > 0, s > 0 and finite gamma");
}

struct Block {
	std::string name;
	std::vector<ResonatorParams> resonators;

	[[nodiscard]] std::size_t size() const noexcept { return resonators.size(); }

	/// Sum of gamma_k * ell_k over the block.
	[[nodiscard]] double total_decay_argument() const noexcept
	{
		double acc = 0.0;
		for (const auto& r : resonators) acc += r.decay_argument();
		return acc;
	}

	[[nodiscard]] double total_length() const noexcept
	{
		double acc = 0.0;
		for (const auto& r : resonators) acc += r.ell;
		return acc;
	}
};

inline void validate(const Block& b)
{
	if (b.resonators.empty()) throw std::invalid_argument("block '" + b.name + "' has no resonators");
	for (const auto& r : b.resonators) validate(r);
}

/// D blocks with their sampling probabilities.
class BlockLibrary {
public:
	static constexpr double probability_tolerance = 1e-12;

	BlockLibrary() = default;

	BlockLibrary(std::vector<Block> blocks, std::vector<double> probabilities)
	    : blocks_{std::move(blocks)}, probabilities_{std::move(probabilities)}
	{
		if (blocks_.empty()) throw std::invalid_argument("block library needs at least one block");
		if (probabilities_.size() != blocks_.size())
			throw std::invalid_argument("block library: one probability per block required");
		double total = 0.0;
		for (double p : probabilities_) {
			if (!(p >= 0.0)) throw std::invalid_argument("block library: probabilities must be nonnegative");
			total += p;
		}
		if (std::abs(total - 1.0) > probability_tolerance)
			throw std::invalid_argument("block library: probabilities must sum to 1");
		for (const auto& b : blocks_) validate(b);
	}

	[[nodiscard]] std::size_t size() const noexcept { return blocks_.size(); }
	[[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
	[[nodiscard]] const Block& block(std::size_t d) const { return blocks_.at(d); }
	[[nodiscard]] const std::vector<double>& probabilities() const noexcept { return probabilities_; }

	/// Same blocks, new probabilities.
	[[nodiscard]] BlockLibrary with_probabilities(std::vector<double> p) const
	{
		return BlockLibrary{blocks_, std::move(p)};
	}

	/// Same geometry with every resonator's gauge potential set to `gamma`.
	[[nodiscard]] BlockLibrary with_uniform_gamma(double gamma) const
	{
		auto blocks = blocks_;
		for (auto& b : blocks)
			for (auto& r : b.resonators) r.gamma = gamma;
		return BlockLibrary{std::move(blocks), probabilities_};
	}

	/// True when every resonator carries the same gamma.
	[[nodiscard]] bool has_uniform_gamma() const noexcept
	{
		const double g = blocks_.front().resonators.front().gamma;
		for (const auto& b : blocks_)
			for (const auto& r : b.resonators)
				if (r.gamma != g) return false;
		return true;
	}

	/// Expected number of resonators per sampled block.
	[[nodiscard]] double mean_block_size() const noexcept
	{
		double acc = 0.0;
		for (std::size_t d = 0; d < blocks_.size(); ++d)
			acc += probabilities_[d] * static_cast<double>(blocks_[d].size());
		return acc;
	}

	/// Expected nonreciprocal decay per resonator,
	/// (1/2) sum_d p_d sum_k gamma_k ell_k / sum_d p_d len(B_d).
	[[nodiscard]] double expected_decay() const noexcept
	{
		double acc = 0.0;
		for (std::size_t d = 0; d < blocks_.size(); ++d)
			acc += probabilities_[d] * blocks_[d].total_decay_argument();
		return 0.5 * acc / mean_block_size();
	}

private:
	std::vector<Block> blocks_;
	std::vector<double> probabilities_;
};

/// The monomer/dimer pair used throughout: a monomer (v=1, ell=2, s=2) and a
/// dimer with ell = (1, 1), s = (1, 2).  Both carry the same total gamma*ell.
inline BlockLibrary standard_blocks(double gamma, double p_monomer = 0.5)
{
	Block monomer{"monomer", {{1.0, 2.0, 2.0, gamma}}};
	Block dimer{"dimer", {{1.0, 1.0, 1.0, gamma}, {1.0, 1.0, 2.0, gamma}}};
	return BlockLibrary{{std::move(monomer), std::move(dimer)}, {p_monomer, 1.0 - p_monomer}};
}

/// Zero-based block indices chi(0..M-1) and the seed they were drawn with.
struct BlockSequence {
	std::vector<std::size_t> chi;
	std::uint64_t seed = 0;

	[[nodiscard]] std::size_t size() const noexcept { return chi.size(); }
};

/// Inverse-CDF draw of one block index from uniform u in [0, 1).
/// Zero-probability blocks are never returned.
inline std::size_t draw_block(std::span<const double> probabilities, double u)
{
	double cumulative = 0.0;
	std::size_t last_nonzero = 0;
	for (std::size_t d = 0; d < probabilities.size(); ++d) {
		if (probabilities[d] <= 0.0) continue;
		cumulative += probabilities[d];
		last_nonzero = d;
		if (u < cumulative) return d;
	}
	return last_nonzero;
}

inline BlockSequence sample_sequence(const BlockLibrary& library, std::size_t M, std::uint64_t seed)
{
	if (M == 0) throw std::invalid_argument("sample_sequence: M must be at least 1");
	BlockSequence seq{std::vector<std::size_t>(M), seed};
	Rng rng{seed};
	const auto& p = library.probabilities();
	for (auto& c : seq.chi) c = draw_block(p, rng.uniform());
	return seq;
}

/// A realised finite array.  Resonator arrays are zero-based; the periodic
/// extension supplies the ghost resonators at positions -1 and N.
class Chain {
public:
	Chain(BlockLibrary library, BlockSequence sequence)
	    : library_{std::move(library)}, sequence_{std::move(sequence)}
	{
		if (sequence_.chi.empty()) throw std::invalid_argument("chain needs at least one block");
		for (auto d : sequence_.chi) {
			if (d >= library_.size()) throw std::invalid_argument("block index out of range for library");
			block_offsets_.push_back(resonators_.size());
			const auto& b = library_.block(d).resonators;
			resonators_.insert(resonators_.end(), b.begin(), b.end());
		}
		block_offsets_.push_back(resonators_.size());

		x_left_.resize(resonators_.size());
		double x = 0.0;
		for (std::size_t i = 0; i < resonators_.size(); ++i) {
			x_left_[i] = x;
			x += resonators_[i].ell + resonators_[i].s;
		}
	}

	[[nodiscard]] std::size_t N() const noexcept { return resonators_.size(); }
	[[nodiscard]] std::size_t M() const noexcept { return sequence_.chi.size(); }

	[[nodiscard]] const BlockLibrary& library() const noexcept { return library_; }
	[[nodiscard]] const BlockSequence& sequence() const noexcept { return sequence_; }
	[[nodiscard]] std::span<const ResonatorParams> resonators() const noexcept { return resonators_; }
	[[nodiscard]] const ResonatorParams& operator[](std::size_t i) const { return resonators_[i]; }

	/// Resonator i for i in [-1, N], with (v, ell, gamma) of the ghosts taken
	/// from the opposite end and s_{-1} = s_{N-1}, the last spacing of the
	/// last block.
	[[nodiscard]] ResonatorParams extended(std::ptrdiff_t i) const
	{
		const auto n = static_cast<std::ptrdiff_t>(N());
		if (i < -1 || i > n) throw std::out_of_range("Chain::extended index");
		if (i == -1) return resonators_.back();
		if (i == n) return resonators_.front();
		return resonators_[static_cast<std::size_t>(i)];
	}

	/// Offsets of each block's first resonator, plus a trailing N.
	[[nodiscard]] std::span<const std::size_t> block_offsets() const noexcept { return block_offsets_; }

	[[nodiscard]] std::span<const ResonatorParams> block_slice(std::size_t j) const
	{
		return std::span<const ResonatorParams>{resonators_}.subspan(
		    block_offsets_.at(j), block_offsets_.at(j + 1) - block_offsets_.at(j));
	}

	[[nodiscard]] double x_left(std::size_t i) const { return x_left_.at(i); }
	[[nodiscard]] double x_right(std::size_t i) const { return x_left_.at(i) + resonators_.at(i).ell; }

	/// (1/(2N)) sum_i gamma_i ell_i.
	[[nodiscard]] double decay() const noexcept
	{
		double acc = 0.0;
		for (const auto& r : resonators_) acc += r.decay_argument();
		return 0.5 * acc / static_cast<double>(N());
	}

private:
	BlockLibrary library_;
	BlockSequence sequence_;
	std::vector<ResonatorParams> resonators_;
	std::vector<std::size_t> block_offsets_;
	std::vector<double> x_left_;
};

inline Chain assemble_chain(const BlockLibrary& library, const BlockSequence& sequence)
{
	return Chain{library, sequence};
}

inline Chain sample_chain(const BlockLibrary& library, std::size_t M, std::uint64_t seed)
{
	return Chain{library, sample_sequence(library, M, seed)};
}

/// Chain made of explicit resonators, treated as a single block.
inline Chain chain_from_resonators(std::vector<ResonatorParams> resonators)
{
	BlockLibrary lib{{Block{"custom", std::move(resonators)}}, {1.0}};
	return Chain{std::move(lib), BlockSequence{{0}, 0}};
}

/// Number of blocks giving roughly `n_target` resonators on average.
inline std::size_t blocks_for_target(const BlockLibrary& library, std::size_t n_target)
{
	const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n_target) / library.mean_block_size()));
	return m == 0 ? 1 : m;
}

} // namespace gaugechain
