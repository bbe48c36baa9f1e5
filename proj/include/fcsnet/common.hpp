#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcsnet {

inline constexpr const char* kVersion = "0.1.0";

/// Raised for bad inputs: malformed files, out-of-range parameters,
/// violated preconditions. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Seeding and random numbers.
//
// All stage seeds derive from one global seed through splitmix64 so that a
// pipeline stage re-run from its on-disk inputs is byte-reproducible. Bounded
// draws use rejection sampling on top of std::mt19937_64, whose output
// sequence is fixed by the standard; we never use std::*_distribution, whose
// results are implementation-defined.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic child seed for a named pipeline stage or indexed task.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return splitmix64(base ^ splitmix64(salt));
}

std::uint64_t hash_string(const std::string& s);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(splitmix64(seed)) {}

  std::uint64_t next_u64() {
    // xoshiro-free: splitmix64 stream is enough for our draw volumes and is
    // trivially reproducible.
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    // rejection sampling, no modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bool() { return (next_u64() >> 63) != 0; }

  bool bernoulli(double p) { return next_double() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t s_;
};

// ---------------------------------------------------------------------------
// Small dense row-major matrix of doubles.
// ---------------------------------------------------------------------------

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
};

// ---------------------------------------------------------------------------
// Deterministic task parallelism. Tasks are indexed; each task writes only
// its own slot, so the result is identical for any worker count.
// ---------------------------------------------------------------------------

void parallel_for(std::size_t n_tasks, int n_threads, const std::function<void(std::size_t)>& fn);

/// Worker count used by pipeline stages; 0 = hardware concurrency.
int resolve_threads(int requested);

// ---------------------------------------------------------------------------
// Hashing and number formatting for artifact files.
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(const void* bytes, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);

/// Shortest decimal string that round-trips the double (via to_chars).
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fcsnet
