// include/dysaug/common.h

// Copyright 2026  dysaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DYSAUG_COMMON_H_
#define DYSAUG_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dysaug {

// Error hierarchy. The CLI maps these onto exit codes:
//   ConfigError -> 2, DataError -> 3, NumericError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Dense row-major matrix of doubles. Spectrograms are stored as rows = frequency
// bins, cols = frames.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return v.size(); }
  bool empty() const { return v.empty(); }
};

double frobenius_norm(const Mat& m);
Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m);

// Deterministic RNG. Distributions are hand-rolled on top of mt19937_64 output
// so streams are bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  // [0, 1) with 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; caches the second variate.
  double gaussian();
  // [0, n)
  int uniform_int(int n);

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (size_t i = xs.size(); i > 1; --i) {
      size_t j = next_u64() % i;
      std::swap(xs[i - 1], xs[j]);
    }
  }

 private:
  uint64_t state_[4];
  bool have_cached_ = false;
  double cached_ = 0.0;
};

uint64_t splitmix64(uint64_t x);
// FNV-1a, used for config hashes and per-job seed derivation (not cryptographic).
uint64_t fnv1a64(std::string_view s);
// Seed for a named sub-stream of a root seed.
uint64_t derive_seed(uint64_t root, std::string_view stream);

std::string format_double17(double x);  // shortest exact round-trip text form

}  // namespace dysaug

#endif  // DYSAUG_COMMON_H_
