#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace treecorr {

using Engine = std::mt19937_64;

// Seeding contract shared by every Monte Carlo driver: the generator used for
// chunk `chunk` of a run seeded with `seed` is Engine(mix(seed, chunk)).
// Results depend only on (seed, chunk count), never on the worker count.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
Engine chunk_engine(std::uint64_t seed, std::uint64_t chunk);

// Uniform double in [0,1) from the top 53 bits.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double random_sign(Engine& engine) {
  return (engine() >> 63) != 0 ? 1.0 : -1.0;
}

// Samples [begin, end) assigned to chunk `chunk` when `total` samples are
// split into `chunks` contiguous pieces.
struct ChunkRange {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const { return end - begin; }
};
ChunkRange chunk_range(std::size_t total, std::size_t chunks, std::size_t chunk);

// Worker count for parallel loops. Defaults to the hardware concurrency, or
// TREECORR_THREADS when that environment variable holds a positive integer.
unsigned worker_count();
void set_worker_count(unsigned workers);

// Runs body(i) for i in [0, count) on worker_count() threads. The first
// exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace treecorr
