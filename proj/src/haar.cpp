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

#include "randmeas/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace randmeas {

Matrix sample_cue(int dim, RngStream& rng) {
  if (dim < 2) throw std::invalid_argument("sample_cue requires dim >= 2");
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      auto [re, im] = rng.normal_pair();
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix u = qr.householderQ();
  Vector phases(dim);
  for (int j = 0; j < dim; ++j) {
    const Complex r = qr.matrixQR()(j, j);
    const double a = std::abs(r);
    phases(j) = a > 0.0 ? r / a : Complex(1.0, 0.0);
  }
  u = u * phases.asDiagonal();
  if ((u.adjoint() * u - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-12) {
    Eigen::HouseholderQR<Matrix> fix(u);
    u = fix.householderQ();
  }
  return u;
}

Eigen::Matrix3d rotation_of(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("rotation_of requires 2x2 input");
  if ((u.adjoint() * u - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("rotation_of requires a unitary input");
  }
  Eigen::Matrix3d q;
  for (int i = 1; i <= 3; ++i) {
    const Matrix ui = pauli(i) * u;
    for (int j = 1; j <= 3; ++j) {
      q(i - 1, j - 1) = (ui * pauli(j) * u.adjoint()).trace().real() / 2.0;
    }
  }
  return q;
}

Matrix SampledUnitary::assembled() const {
  if (variant == UnitaryVariant::kGlobal) return global;
  Matrix u = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) u = tensor_product(u, factors[i]);
  return u;
}

UnitaryBatch::UnitaryBatch(HilbertShape shape, UnitaryVariant variant, int count,
                           std::uint64_t master_seed)
    : shape_(shape), variant_(variant), count_(count), master_seed_(master_seed) {
  if (count < 1) throw std::invalid_argument("batch count must be >= 1");
}

SampledUnitary UnitaryBatch::get(int index) const {
  if (index < 0 || index >= count_) throw std::out_of_range("unitary index out of range");
  SampledUnitary out;
  out.variant = variant_;
  out.shape = shape_;
  const auto j = static_cast<std::uint64_t>(index);
  if (variant_ == UnitaryVariant::kGlobal) {
    RngStream rng(derive_seed(master_seed_, StreamDomain::kUnitary, j, 0));
    out.global = sample_cue(static_cast<int>(shape_.total_dim), rng);
  } else {
    out.factors.reserve(shape_.num_sites);
    for (int site = 0; site < shape_.num_sites; ++site) {
      RngStream rng(derive_seed(master_seed_, StreamDomain::kUnitary, j,
                                static_cast<std::uint64_t>(site) + 1));
      out.factors.push_back(sample_cue(shape_.local_dim, rng));
    }
  }
  return out;
}

}  // namespace randmeas
