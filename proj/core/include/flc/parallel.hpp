#pragma once

#include <cstddef>
#include <functional>

namespace flc {

/// Worker count used when 0 is requested: std::thread::hardware_concurrency(), at least 1.
unsigned default_workers();

/// Calls body(begin, end) on consecutive chunks of [0, n) of size `chunk`, from `workers`
/// threads (0: default_workers()). Chunks are claimed in order. The first exception thrown
/// by any chunk is rethrown after all threads join; remaining chunks are skipped.
void parallel_for(std::size_t n, std::size_t chunk, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace flc
