#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qg {

using Complex = std::complex<double>;

/// Input could not be parsed (malformed file, bad flag value).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally well-formed input that violates a model invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure (singular system, non-converging refinement, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit hash, used for input fingerprints in output manifests.
inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Round-trip safe decimal formatting (17 significant digits).
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. jobs == 0 means
/// hardware concurrency. Each index must be independent of the others.
inline void parallel_for(std::size_t n, unsigned jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += jobs) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qg
