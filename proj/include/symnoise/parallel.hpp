#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace symnoise {

// SYMNOISE_WORKERS overrides; requested > 0 overrides that; else hardware.
int resolve_workers(int requested = 0);

// Deterministic chunked map-reduce over [0, count). Chunk partials are
// computed by whichever worker grabs the chunk, then folded serially in chunk
// order, so the result is independent of the worker count and scheduling.
template <class Partial, class Make, class Body, class Fold>
Partial parallel_chunked(int64_t count, int chunk_size, int workers, Make make,
                         Body body, Fold fold) {
  const int64_t n_chunks = count <= 0 ? 0 : (count + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials;
  partials.reserve(n_chunks);
  for (int64_t c = 0; c < n_chunks; ++c) partials.push_back(make());

  std::atomic<int64_t> next{0};
  auto run = [&] {
    for (;;) {
      const int64_t c = next.fetch_add(1);
      if (c >= n_chunks) break;
      Partial& p = partials[c];
      const int64_t lo = c * chunk_size;
      const int64_t hi = std::min<int64_t>(lo + chunk_size, count);
      for (int64_t i = lo; i < hi; ++i) body(p, i);
    }
  };

  const int nw = std::max(1, workers);
  if (nw == 1 || n_chunks <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  Partial total = make();
  for (int64_t c = 0; c < n_chunks; ++c) fold(total, partials[c]);
  return total;
}

}  // namespace symnoise
