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

#include "randmeas/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randmeas/rng.hpp"

namespace randmeas {

namespace {

// Eigenvalue checks cost O(D^3); above this size only Hermiticity and
// trace are validated at construction.
constexpr std::int64_t kEigenCheckMaxDim = 1024;

void check_sites(const HilbertShape& shape, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("site set must be nonempty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= shape.num_sites) {
      throw std::out_of_range("site index out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw std::invalid_argument("site set must be strictly ascending");
    }
  }
}

}  // namespace

StateVector::StateVector(HilbertShape shape, Vector amplitudes)
    : shape_(shape), amps_(std::move(amplitudes)) {
  if (amps_.size() != shape_.total_dim) {
    throw std::invalid_argument("amplitude vector length does not match shape");
  }
  const double n2 = amps_.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-12) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

StateVector StateVector::basis_state(HilbertShape shape, std::int64_t index) {
  if (index < 0 || index >= shape.total_dim) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(shape.total_dim);
  v(index) = 1.0;
  return StateVector(shape, std::move(v));
}

DensityMatrix::DensityMatrix(HilbertShape shape, Matrix elements)
    : shape_(shape), m_(std::move(elements)) {
  const std::int64_t d = shape_.total_dim;
  if (m_.rows() != d || m_.cols() != d) {
    throw std::invalid_argument("density matrix size does not match shape");
  }
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(m_.trace() - Complex(1.0, 0.0)) > 1e-12) {
    throw std::invalid_argument("density matrix trace is not one");
  }
  if (d <= kEigenCheckMaxDim) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
      throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
    const double p = m_.cwiseAbs2().sum();
    if (p < 1.0 / static_cast<double>(d) - 1e-10 || p > 1.0 + 1e-10) {
      throw std::invalid_argument("density matrix purity out of range");
    }
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return DensityMatrix(psi.shape(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(HilbertShape shape) {
  const double inv = 1.0 / static_cast<double>(shape.total_dim);
  return DensityMatrix(shape, Matrix::Identity(shape.total_dim, shape.total_dim) * inv);
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  if (a.rows() > 0 && b.rows() > 0) {
    checked_pow(a.rows() * b.rows(), 1);  // cap check on the product dimension
  }
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
  checked_pow(a.size() * b.size(), 1);
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  if (a.shape().local_dim != b.shape().local_dim) {
    throw std::invalid_argument("tensor_product requires equal local dimensions");
  }
  HilbertShape shape(a.shape().local_dim, a.shape().num_sites + b.shape().num_sites);
  return StateVector(shape, tensor_product(a.amplitudes(), b.amplitudes()));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.shape().local_dim != b.shape().local_dim) {
    throw std::invalid_argument("tensor_product requires equal local dimensions");
  }
  HilbertShape shape(a.shape().local_dim, a.shape().num_sites + b.shape().num_sites);
  return DensityMatrix(shape, tensor_product(a.elements(), b.elements()));
}

namespace {

// Enumerates full-space indices as (kept sub-index, traced sub-index).
struct TraceIndexer {
  std::vector<std::int64_t> kept_strides;
  std::vector<std::int64_t> rest_strides;
  std::int64_t kept_dim = 1;
  std::int64_t rest_dim = 1;
  int d;

  TraceIndexer(const HilbertShape& shape, const std::vector<int>& keep) : d(shape.local_dim) {
    std::vector<bool> is_kept(shape.num_sites, false);
    for (int s : keep) is_kept[s] = true;
    for (int s = 0; s < shape.num_sites; ++s) {
      if (is_kept[s]) {
        kept_strides.push_back(shape.stride(s));
        kept_dim *= d;
      } else {
        rest_strides.push_back(shape.stride(s));
        rest_dim *= d;
      }
    }
  }

  std::int64_t full_index(std::int64_t kept, std::int64_t rest) const {
    std::int64_t idx = 0;
    for (auto it = kept_strides.rbegin(); it != kept_strides.rend(); ++it) {
      idx += (kept % d) * (*it);
      kept /= d;
    }
    for (auto it = rest_strides.rbegin(); it != rest_strides.rend(); ++it) {
      idx += (rest % d) * (*it);
      rest /= d;
    }
    return idx;
  }
};

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  check_sites(rho.shape(), keep);
  TraceIndexer ix(rho.shape(), keep);
  Matrix out = Matrix::Zero(ix.kept_dim, ix.kept_dim);
  for (std::int64_t a = 0; a < ix.kept_dim; ++a) {
    for (std::int64_t b = 0; b < ix.kept_dim; ++b) {
      Complex acc(0.0, 0.0);
      for (std::int64_t r = 0; r < ix.rest_dim; ++r) {
        acc += rho.elements()(ix.full_index(a, r), ix.full_index(b, r));
      }
      out(a, b) = acc;
    }
  }
  // Symmetrize round-off so the constructor's Hermiticity check is exact.
  out = (out + out.adjoint().eval()) / 2.0;
  HilbertShape sub(rho.shape().local_dim, static_cast<int>(keep.size()));
  return DensityMatrix(sub, std::move(out));
}

DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep) {
  check_sites(psi.shape(), keep);
  TraceIndexer ix(psi.shape(), keep);
  // rho_A = M M^dagger with M the amplitude matrix (kept x traced).
  Matrix m(ix.kept_dim, ix.rest_dim);
  for (std::int64_t a = 0; a < ix.kept_dim; ++a) {
    for (std::int64_t r = 0; r < ix.rest_dim; ++r) {
      m(a, r) = psi.amplitudes()(ix.full_index(a, r));
    }
  }
  Matrix out = m * m.adjoint();
  out = (out + out.adjoint().eval()) / 2.0;
  HilbertShape sub(psi.shape().local_dim, static_cast<int>(keep.size()));
  return DensityMatrix(sub, std::move(out));
}

double purity_exact(const DensityMatrix& rho) { return rho.elements().cwiseAbs2().sum(); }

double renyi2(double purity) {
  if (purity <= 0.0) throw std::domain_error("renyi2 requires positive purity");
  return -std::log2(purity);
}

Matrix pauli(int i) {
  Matrix m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli index must be 0..3");
  }
  return m;
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  if (rho.shape().local_dim != 2 || rho.shape().num_sites != 1) {
    throw std::invalid_argument("bloch_vector requires a single qubit");
  }
  Eigen::Vector3d v;
  for (int i = 1; i <= 3; ++i) v(i - 1) = (rho.elements() * pauli(i)).trace().real();
  return {v};
}

BlochMatrix bloch_matrix(const DensityMatrix& rho) {
  if (rho.shape().local_dim != 2 || rho.shape().num_sites != 2) {
    throw std::invalid_argument("bloch_matrix requires two qubits");
  }
  BlochMatrix b;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      b.r(mu, nu) = (rho.elements() * tensor_product(pauli(mu), pauli(nu))).trace().real();
    }
  }
  return b;
}

DensityMatrix bloch_reconstruct(const BlochVector& b) {
  Matrix m = Matrix::Identity(2, 2);
  for (int i = 1; i <= 3; ++i) m += b.v(i - 1) * pauli(i);
  return DensityMatrix(HilbertShape(2, 1), m / 2.0);
}

DensityMatrix bloch_reconstruct(const BlochMatrix& b) {
  Matrix m = Matrix::Zero(4, 4);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      m += b.r(mu, nu) * tensor_product(pauli(mu), pauli(nu));
    }
  }
  return DensityMatrix(HilbertShape(2, 2), m / 4.0);
}

namespace {

Vector gaussian_unit_vector(std::int64_t dim, RngStream& rng) {
  Vector v(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    auto [re, im] = rng.normal_pair();
    v(i) = Complex(re, im);
  }
  v /= v.norm();
  return v;
}

}  // namespace

StateVector make_pure_state(StateKind kind, HilbertShape shape, std::uint64_t seed) {
  switch (kind) {
    case StateKind::kPureProduct:
      return StateVector::basis_state(shape, 0);
    case StateKind::kGhz: {
      Vector v = Vector::Zero(shape.total_dim);
      const double a = 1.0 / std::sqrt(static_cast<double>(shape.local_dim));
      std::int64_t idx = 0;
      // |aa...a> indices are a * (d^N - 1)/(d - 1).
      const std::int64_t step = (shape.total_dim - 1) / (shape.local_dim - 1);
      for (int s = 0; s < shape.local_dim; ++s, idx += step) v(idx) = a;
      return StateVector(shape, std::move(v));
    }
    case StateKind::kRandomPure: {
      RngStream rng(derive_seed(seed, StreamDomain::kStatePrep));
      return StateVector(shape, gaussian_unit_vector(shape.total_dim, rng));
    }
    default:
      throw std::invalid_argument("make_pure_state: kind is not a pure state");
  }
}

DensityMatrix make_state(StateKind kind, HilbertShape shape, std::uint64_t seed,
                         int ancilla_sites) {
  if (kind == StateKind::kRandomMixed) {
    if (ancilla_sites < 1) throw std::invalid_argument("random_mixed requires ancilla_sites >= 1");
    // Haar unitary applied to a pure product state is a Haar-random pure
    // state; sample it directly on the extended register, then reduce.
    HilbertShape full(shape.local_dim, shape.num_sites + ancilla_sites);
    StateVector psi = make_pure_state(StateKind::kRandomPure, full, seed);
    std::vector<int> keep(shape.num_sites);
    for (int i = 0; i < shape.num_sites; ++i) keep[i] = i;
    return partial_trace(psi, keep);
  }
  return DensityMatrix::from_pure(make_pure_state(kind, shape, seed));
}

StateVector evolve(const StateVector& psi, const Matrix& hamiltonian, double t) {
  if (hamiltonian.rows() != psi.dim() || hamiltonian.cols() != psi.dim()) {
    throw std::invalid_argument("Hamiltonian size does not match state");
  }
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
  Vector phases(psi.dim());
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  }
  Vector out = es.eigenvectors() *
               (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi.amplitudes()));
  out /= out.norm();
  return StateVector(psi.shape(), std::move(out));
}

Matrix random_hermitian(std::int64_t dim, std::uint64_t seed) {
  RngStream rng(derive_seed(seed, StreamDomain::kStatePrep, 1));
  Matrix g(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    for (std::int64_t j = 0; j < dim; ++j) {
      auto [re, im] = rng.normal_pair();
      g(i, j) = Complex(re, im);
    }
  }
  return (g + g.adjoint()) / 2.0;
}

double trace_norm_distance(const Matrix& a, const Matrix& b) {
  Matrix diff = a - b;
  if ((diff - diff.adjoint()).cwiseAbs().maxCoeff() < 1e-9) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((diff + diff.adjoint().eval()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(diff);
  return svd.singularValues().sum();
}

}  // namespace randmeas
