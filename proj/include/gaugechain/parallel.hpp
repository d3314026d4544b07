#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gaugechain {

/// Runs body(i) for i in [0, count) on up to `threads` threads.  Work is split
/// into contiguous chunks and each index writes only its own output slot, so
/// results do not depend on the thread count.  The first exception thrown by
/// any worker is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body)
{
	threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
	if (threads == 1) {
		for (std::size_t i = 0; i < count; ++i) body(i);
		return;
	}
	std::exception_ptr failure;
	std::mutex failure_mutex;
	{
		std::vector<std::jthread> pool;
		const std::size_t chunk = (count + threads - 1) / threads;
		for (unsigned t = 0; t < threads; ++t) {
			const std::size_t lo = t * chunk;
			const std::size_t hi = std::min(count, lo + chunk);
			if (lo >= hi) break;
			pool.emplace_back([&, lo, hi] {
				try {
					for (std::size_t i = lo; i < hi; ++i) body(i);
				} catch (...) {
					std::lock_guard lock{failure_mutex};
					if (!failure) failure = std::current_exception();
				}
			});
		}
	}
	if (failure) std::rethrow_exception(failure);
}

} // namespace gaugechain
