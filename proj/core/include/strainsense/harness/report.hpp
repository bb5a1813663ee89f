#pragma once

// Output plumbing shared by the report emitters: number formatting, the
// unit-tag contract for JSON reports, and the worker pool.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace strainsense::harness {

/// Environment variable holding the worker count; unset means sequential.
inline constexpr const char* kWorkersEnv = "STRAINSENSE_WORKERS";

/// Nine significant digits, scientific notation ("%.8e").
std::string format_sci(double value);

/// Worker count from STRAINSENSE_WORKERS (1 when unset). Throws ConfigError
/// on a malformed value.
unsigned worker_count_from_env();

/// Throws std::logic_error naming the first numeric JSON field that is not
/// wrapped as {"value": ..., "unit": "..."}.
void require_unit_tags(std::string_view json_text);

/// Flattens a unit-tagged JSON report to "field,value,unit" rows.
std::string flatten_report_csv(std::string_view json_text);

/// Runs fn(i) for i in [0, count) on up to `workers` threads, contiguous
/// chunks per thread. The first exception thrown is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(workers, count);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t begin = count * t / nthreads;
    const std::size_t end = count * (t + 1) / nthreads;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace strainsense::harness
