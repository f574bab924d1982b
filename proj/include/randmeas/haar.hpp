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
#include <vector>

#include "randmeas/rng.hpp"
#include "randmeas/states.hpp"

namespace randmeas {

/// One CUE (Haar-measure) sample: QR-decompose a complex Ginibre matrix and
/// fix the phases with diag(r_jj / |r_jj|). Exactly unitary on return
/// (re-orthonormalized in the unlikely case the QR drifts past 1e-12).
Matrix sample_cue(int dim, RngStream& rng);

/// The SO(3) rotation Q with U (v.sigma) U^dag = (Qv).sigma for a 2x2
/// unitary U; Q_ij = tr(sigma_i U sigma_j U^dag) / 2.
Eigen::Matrix3d rotation_of(const Matrix& u);

enum class UnitaryVariant { kGlobal, kLocal };

/// A drawn unitary: either one D x D matrix, or N independent d x d site
/// factors whose tensor product is never materialized unless asked for.
struct SampledUnitary {
  UnitaryVariant variant = UnitaryVariant::kGlobal;
  HilbertShape shape;
  Matrix global;                 // kGlobal only
  std::vector<Matrix> factors;   // kLocal only, one per site

  /// Dense D x D matrix (assembles the factor product for kLocal).
  Matrix assembled() const;
};

/// Identification of a reproducible set of random unitaries. Matrices are
/// not stored: get(j) re-derives unitary j as a pure function of
/// (master_seed, j, variant, shape), so batches are cheap value objects
/// and any worker can regenerate any element.
class UnitaryBatch {
 public:
  UnitaryBatch(HilbertShape shape, UnitaryVariant variant, int count, std::uint64_t master_seed);

  SampledUnitary get(int index) const;

  const HilbertShape& shape() const { return shape_; }
  UnitaryVariant variant() const { return variant_; }
  int count() const { return count_; }
  std::uint64_t master_seed() const { return master_seed_; }

  /// Two batches describe the same set of unitaries.
  bool same_manifest(const UnitaryBatch& other) const {
    return shape_ == other.shape_ && variant_ == other.variant_ && count_ == other.count_ &&
           master_seed_ == other.master_seed_;
  }

 private:
  HilbertShape shape_;
  UnitaryVariant variant_;
  int count_;
  std::uint64_t master_seed_;
};

}  // namespace randmeas
