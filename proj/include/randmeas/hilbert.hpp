// Copyright 2026 The randmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace randmeas {

/// Hard ceiling on any dense dimension handled by this library. Tensor
/// spaces (k-fold copies, ancilla-extended registers) are checked against
/// the same cap before they are materialized.
inline constexpr std::int64_t kDefaultDimCap = std::int64_t{1} << 14;

/// Thrown when a requested Hilbert space (or copy space) would exceed the
/// configured dense-dimension cap. The CLI maps this to exit code 4.
class DimensionCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed external data (records, manifests, matrix JSON).
/// The CLI maps this to exit code 3.
class DataFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// base^exp with overflow guard, rejecting results above `cap`.
inline std::int64_t checked_pow(std::int64_t base, int exp, std::int64_t cap = kDefaultDimCap) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > cap / base) {
      throw DimensionCapError("dimension " + std::to_string(base) + "^" + std::to_string(exp) +
                              " exceeds cap " + std::to_string(cap));
    }
    r *= base;
  }
  if (r > cap) {
    throw DimensionCapError("dimension exceeds cap " + std::to_string(cap));
  }
  return r;
}

/// Shape of a qudit register: N sites of local dimension d, total dense
/// dimension D = d^N. Site 0 is the most significant digit of a basis
/// index, i.e. |s_0 s_1 ... s_{N-1}> maps to sum_i s_i * d^(N-1-i).
struct HilbertShape {
  int local_dim = 2;
  int num_sites = 1;
  std::int64_t total_dim = 2;

  HilbertShape() = default;

  HilbertShape(int d, int n, std::int64_t cap = kDefaultDimCap) : local_dim(d), num_sites(n) {
    if (d < 2) throw std::invalid_argument("local_dim must be >= 2");
    if (n < 1) throw std::invalid_argument("num_sites must be >= 1");
    total_dim = checked_pow(d, n, cap);
  }

  /// Index stride of `site` (0-based, site 0 most significant).
  std::int64_t stride(int site) const {
    std::int64_t s = 1;
    for (int i = num_sites - 1; i > site; --i) s *= local_dim;
    return s;
  }

  /// Digit of basis index at `site`.
  int digit(std::int64_t index, int site) const {
    return static_cast<int>((index / stride(site)) % local_dim);
  }

  std::vector<int> digits(std::int64_t index) const {
    std::vector<int> out(num_sites);
    for (int i = num_sites - 1; i >= 0; --i) {
      out[i] = static_cast<int>(index % local_dim);
      index /= local_dim;
    }
    return out;
  }

  std::int64_t index_of(const std::vector<int>& digits) const {
    std::int64_t idx = 0;
    for (int i = 0; i < num_sites; ++i) idx = idx * local_dim + digits[i];
    return idx;
  }

  bool operator==(const HilbertShape& o) const {
    return local_dim == o.local_dim && num_sites == o.num_sites;
  }
};

}  // namespace randmeas
