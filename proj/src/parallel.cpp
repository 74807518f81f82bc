#include "landau/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace landau {
namespace {

int default_threads() {
  if (const char* env = std::getenv("LANDAU_LAB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> threads{default_threads()};
  return threads;
}

double pairwise_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_range(v, half) + pairwise_range(v + half, n - half);
}

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int threads) { thread_setting().store(threads > 0 ? threads : default_threads()); }

void parallel_for(std::size_t tasks, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) { return pairwise_range(values.data(), values.size()); }

double parallel_block_sum(std::size_t blocks, const std::function<double(std::size_t)>& partial) {
  std::vector<double> partials(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) { partials[b] = partial(b); });
  return pairwise_sum(partials);
}

std::vector<double> parallel_block_sum(std::size_t blocks, std::size_t width,
                                       const std::function<void(std::size_t, double*)>& partial) {
  std::vector<double> partials(blocks * width, 0.0);
  parallel_for(blocks, [&](std::size_t b) { partial(b, partials.data() + b * width); });
  std::vector<double> out(width);
  std::vector<double> column(blocks);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = partials[b * width + c];
    out[c] = pairwise_sum(column);
  }
  return out;
}

}  // namespace landau
