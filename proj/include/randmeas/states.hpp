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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "randmeas/hilbert.hpp"

namespace randmeas {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Pure state on (C^d)^{tensor N}. Construction checks normalization
/// (squared norm within 1e-12 of one).
class StateVector {
 public:
  StateVector(HilbertShape shape, Vector amplitudes);

  /// Computational basis state |index>.
  static StateVector basis_state(HilbertShape shape, std::int64_t index);

  const HilbertShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return amps_; }
  std::int64_t dim() const { return shape_.total_dim; }

 private:
  HilbertShape shape_;
  Vector amps_;
};

/// Density operator on (C^d)^{tensor N}. Construction checks Hermiticity
/// and unit trace (1e-12); for dimensions up to 1024 also the eigenvalue
/// floor (-1e-10) and the purity range [1/D - 1e-10, 1 + 1e-10].
class DensityMatrix {
 public:
  DensityMatrix(HilbertShape shape, Matrix elements);

  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(HilbertShape shape);

  const HilbertShape& shape() const { return shape_; }
  const Matrix& elements() const { return m_; }
  std::int64_t dim() const { return shape_.total_dim; }

 private:
  HilbertShape shape_;
  Matrix m_;
};

/// Kronecker products. Shapes multiply; the result dimension is checked
/// against the cap.
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced density matrix over the sites in `keep` (0-based, strictly
/// ascending order in the result). Throws on empty or out-of-range sets.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
/// Same reduction taken directly from a pure state, without materializing
/// the full density matrix.
DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep);

/// tr rho^2 = sum_{ij} |rho_ij|^2. Ground-truth oracle for all estimators.
double purity_exact(const DensityMatrix& rho);

/// Second Renyi entropy -log2(purity). Requires purity in (0, 1].
double renyi2(double purity);

struct BlochVector {
  Eigen::Vector3d v;
};

/// Coefficients r_{mu nu} = tr[rho sigma_mu x sigma_nu] of a two-qubit
/// state in the Pauli-string basis; r(0,0) = 1.
struct BlochMatrix {
  Eigen::Matrix4d r;

  Eigen::Vector3d v() const { return r.block<3, 1>(1, 0); }  // qubit-1 Bloch vector
  Eigen::Vector3d w() const { return r.block<1, 3>(0, 1).transpose(); }  // qubit-2
  Eigen::Matrix3d correlation() const { return r.block<3, 3>(1, 1); }
};

BlochVector bloch_vector(const DensityMatrix& rho);   // N=1, d=2
BlochMatrix bloch_matrix(const DensityMatrix& rho);   // N=2, d=2
DensityMatrix bloch_reconstruct(const BlochVector& b);
DensityMatrix bloch_reconstruct(const BlochMatrix& b);

/// Pauli matrix sigma_i, i in {0,1,2,3} = {identity, x, y, z}.
Matrix pauli(int i);

enum class StateKind { kPureProduct, kGhz, kRandomPure, kRandomMixed };

/// Reference states for experiments. kPureProduct is |0...0>; kGhz is the
/// qudit GHZ sum_a |a...a>/sqrt(d); kRandomPure draws a Haar-random pure
/// state; kRandomMixed applies a Haar unitary to a product state on
/// N + ancilla_sites sites (equivalently, draws a Haar-random pure state
/// there) and traces the ancillas out. Deterministic under `seed`.
DensityMatrix make_state(StateKind kind, HilbertShape shape, std::uint64_t seed,
                         int ancilla_sites = 0);

/// Pure-state counterpart of make_state for kinds that yield pure states.
StateVector make_pure_state(StateKind kind, HilbertShape shape, std::uint64_t seed);

/// exp(-i H t)|psi> via Hermitian eigendecomposition. H must be Hermitian
/// within 1e-10.
StateVector evolve(const StateVector& psi, const Matrix& hamiltonian, double t);

/// Random Hermitian matrix with Gaussian entries, deterministic under seed.
Matrix random_hermitian(std::int64_t dim, std::uint64_t seed);

/// Sum of singular values of (a - b); both Hermitian in all uses here.
double trace_norm_distance(const Matrix& a, const Matrix& b);

}  // namespace randmeas
