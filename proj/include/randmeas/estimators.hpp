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

#include <functional>
#include <string>
#include <vector>

#include "randmeas/measurement.hpp"

namespace randmeas {

struct EstimateMeta {
  int n_u = 0;
  std::int64_t n_m = 0;  // 0 = exact mode
  std::uint64_t seed = 0;
  std::vector<int> subsystem;
};

/// Scalar (or matrix, for tomography) estimate with a delete-one jackknife
/// standard error over the unitary ensemble. Negative purity estimates are
/// reported as-is with `warning_nonpositive` set; clamping would bias the
/// scaling studies.
struct EstimateReport {
  std::string protocol;
  double value = 0.0;
  double std_error = 0.0;
  EstimateMeta meta;
  bool warning_nonpositive = false;

  // tomography only
  Matrix matrix;
  double matrix_trace = 0.0;

  // renyi_k only: tr rho^l for l = 2..k with per-order errors
  std::vector<double> moments;
  std::vector<double> moment_errors;
};

/// Deterministic pairwise summation; reduction order is fixed by the vector
/// order, so results never depend on thread schedule.
double pairwise_sum(const std::vector<double>& x);

/// Mean with delete-one jackknife standard error (pairwise reductions).
struct MeanResult {
  double value = 0.0;
  double std_error = 0.0;
};
MeanResult jackknife_mean(const std::vector<double>& per_unitary);

/// Fixed-order streaming pairwise accumulator for matrices.
class PairwiseMatrixAccumulator {
 public:
  void push(Matrix m);
  Matrix total() const;
  std::int64_t count() const { return count_; }

 private:
  std::vector<Matrix> levels_;
  std::vector<bool> occupied_;
  std::int64_t count_ = 0;
};

/// Global-unitary purity estimate (D+1) sum_s avg_U est[P_U(s)^2] - 1,
/// evaluated as the same-run Hamming quadratic form with a single site of
/// dimension D.
EstimateReport purity_global(const std::vector<OutcomeRecord>& records, std::int64_t dim,
                             EstimateMeta meta = {});

/// Local-unitary purity of any subsystem: records are marginalized onto the
/// subsystem digits, then the same-run quadratic form is averaged over the
/// unitary ensemble.
EstimateReport purity_local(const std::vector<OutcomeRecord>& records, const HilbertShape& shape,
                            const std::vector<int>& subsystem, EstimateMeta meta = {});

/// Two-qubit decomposition of the purity into Bloch invariants estimated
/// from the same records: tr rho^2 = (1 + 3 E[Z1^2] + 3 E[Z2^2]
/// + 9 E[Z12^2]) / 4, with 9 E[Z12^2] estimating |R|^2.
struct BlochCheckReport {
  MeanResult z1_sq, z2_sq, z12_sq;   // E[Z^2] estimates
  MeanResult purity;                 // combined formula
  double v_sq = 0.0, w_sq = 0.0, r_sq = 0.0;  // exact Bloch invariants of rho
  double purity_exact_value = 0.0;
};
BlochCheckReport purity_local_bloch_check(const DensityMatrix& rho,
                                          const std::vector<OutcomeRecord>& records);

/// Overlap tr(rho1 rho2) from two record sets taken with the identical
/// unitary batch. Mismatched batch manifests are a hard error (a silent
/// mismatch would bias the estimate toward zero). Estimates are symmetric
/// in the two arguments bit-exactly.
EstimateReport overlap(const std::vector<OutcomeRecord>& records1,
                       const std::vector<OutcomeRecord>& records2, const UnitaryBatch& batch1,
                       const UnitaryBatch& batch2, EstimateMeta meta = {});

/// Loschmidt echo |<psi0| e^{i H2 t} e^{-i H1 t} |psi0>|^2 measured as the
/// overlap of the two forward-evolved states under the same unitaries.
EstimateReport loschmidt_echo(const StateVector& psi0, const Matrix& h1, const Matrix& h2,
                              double t, const UnitaryBatch& batch, std::int64_t n_m,
                              std::uint64_t shot_seed);

/// Linear-inversion tomography: rho_hat = avg_U U^dag diag(K p_U) U with K
/// the (global or local) Hamming kernel. Output is Hermitized but not
/// projected to the PSD cone; the trace is reported, not renormalized.
/// std_error is the Frobenius-norm jackknife error of the matrix mean.
EstimateReport tomography(const std::vector<OutcomeRecord>& records,
                          const std::function<SampledUnitary(int)>& unitary_of,
                          const HilbertShape& shape, UnitaryVariant variant,
                          EstimateMeta meta = {});

/// Moments tr rho^l for l = 2..k from k-th order statistics of globally
/// randomized measurements, solving D_l avg[P^l] = sum over cycle types
/// recursively upward in l.
EstimateReport renyi_k_global(const std::vector<OutcomeRecord>& records, std::int64_t dim, int k,
                              EstimateMeta meta = {});

/// Solves the moment recursion given pbar[l-2] = avg over U and s of
/// est[P_U(s)^l] for l = 2..k; returns tr rho^l for l = 2..k.
std::vector<double> solve_moment_recursion(const std::vector<double>& pbar, std::int64_t dim,
                                           int k);

enum class EntanglementVerdict { kEntangled, kInconclusive };

struct EntanglementReport {
  EntanglementVerdict verdict = EntanglementVerdict::kInconclusive;
  bool nonpositive_flag = false;
  double gap = 0.0;            // max Renyi-2 gap S2(part) - S2(joint)
  double gap_std_error = 0.0;  // propagated through the logarithm
};

/// Sufficient (not necessary) criterion: entangled if S2(rho_A) or S2(rho_B)
/// exceeds S2(rho_AB) by more than three combined standard errors.
EntanglementReport detect_entanglement(const EstimateReport& purity_a,
                                       const EstimateReport& purity_b,
                                       const EstimateReport& purity_ab);

}  // namespace randmeas
