#pragma once

// Seeded random number plumbing.
//
// Every random draw in the library goes through Rng, which wraps
// std::mt19937_64 (its output sequence is fixed by the C++ standard, so
// results are identical across compilers and platforms).  Uniform doubles
// are formed from the top 53 bits directly instead of going through
// std::uniform_real_distribution, whose algorithm is implementation defined.
//
// Independent streams for parallel trials are obtained with derive_seed,
// a SplitMix64-style hash of (seed, stream index).  Trial t of an experiment
// always sees the same stream no matter which thread runs it.

#include <cstdint>
#include <random>

namespace gaugechain {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
	x += 0x9E3779B97F4A7C15ull;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
	return x ^ (x >> 31);
}

/// Sub-seed for stream `index` of an experiment seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
	return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_{mix64(seed)} {}

	std::uint64_t next_u64() { return engine_(); }

	/// Uniform on [0, 1).
	double uniform()
	{
		return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
	}

	/// Uniform on [lo, hi).
	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
	std::mt19937_64 engine_;
};

} // namespace gaugechain
