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
#include <map>

#include "randmeas/haar.hpp"
#include "randmeas/states.hpp"

namespace randmeas {

/// Outcome of measuring one state under one random unitary: either N_M
/// projective shots (sparse counts, N_M << D in the interesting regime) or
/// the exact probability vector (N_M = 0 flags exact mode).
struct OutcomeRecord {
  int unitary_index = 0;
  std::int64_t n_m = 0;
  std::map<std::int64_t, std::int64_t> counts;
  Eigen::VectorXd exact_probs;

  bool exact() const { return n_m == 0; }
  std::int64_t dim() const {
    if (exact()) return exact_probs.size();
    std::int64_t mx = 0;
    for (const auto& [s, c] : counts) mx = std::max(mx, s + 1);
    return mx;
  }
};

/// The factorized estimator kernel o^{xN} with local factor
/// o_{ab} = (d+1) delta_{ab} - 1 = d (-d)^{-delta(a != b)}. The same type
/// covers the global-unitary kernel as the single-site case with d = D.
struct HammingKernel {
  int local_dim;
  int num_sites;

  std::int64_t dim() const { return checked_pow(local_dim, num_sites); }
  /// Full kernel entry d^N (-d)^{-Hamming distance}.
  double entry(std::int64_t s, std::int64_t t) const;
  /// Dense N-site kernel matrix o^{xN} (small N only; tests).
  Eigen::MatrixXd dense() const;
};

/// Applies o^{xN} by N mode-wise contractions, cost O(N d^N). Each site
/// fiber maps v -> (d+1) v - (sum v) 1.
Eigen::VectorXd apply_hamming_kernel(const HammingKernel& kernel, const Eigen::VectorXd& v);

/// P(s) = <s| U rho U^dag |s>. The local variant applies the d x d factors
/// mode-wise to rho (the full product is never materialized), cost
/// O(N d D^2).
Eigen::VectorXd probabilities(const DensityMatrix& rho, const SampledUnitary& u);
/// Pure-state path, cost O(N d D) local / O(D^2) global.
Eigen::VectorXd probabilities(const StateVector& psi, const SampledUnitary& u);

/// One multinomial draw of n_m shots from p; deterministic under the stream.
OutcomeRecord sample_counts(const Eigen::VectorXd& p, std::int64_t n_m, RngStream& rng,
                            int unitary_index = 0);

/// Exact-mode record carrying the probability vector itself.
OutcomeRecord exact_record(const Eigen::VectorXd& p, int unitary_index = 0);

/// Unbiased estimator of P(s)^2: n_s(n_s - 1) / (N_M (N_M - 1)) in finite
/// mode (requires N_M >= 2), P(s)^2 in exact mode.
double est_p_squared(const OutcomeRecord& rec, std::int64_t s);

/// Unbiased estimator of P(s)P(s') for s != s': n_s n_s' / (N_M (N_M - 1)).
double est_p_pair(const OutcomeRecord& rec, std::int64_t s, std::int64_t s_prime);

/// Sum over s of the unbiased P(s)^2 estimator.
double sum_est_p_squared(const OutcomeRecord& rec);

/// Unbiased estimator of the k-th power P(s)^k via falling factorials:
/// n(n-1)...(n-k+1) / (N_M (N_M-1)...(N_M-k+1)); requires N_M >= k.
double est_p_power(const OutcomeRecord& rec, std::int64_t s, int k);

/// The quadratic form sum_{s,s'} d^N (-d)^{-D[s,s']} est[P(s) P(s')].
/// same_run demands rec == rec2 and uses the diagonal-corrected U-statistic
/// (n'Kn - d^N N_M) / (N_M (N_M - 1)); independent records use
/// n'Kn' / (N_M N_M'); exact mode uses p'Kp directly.
double kernel_quadratic_form(const OutcomeRecord& rec, const OutcomeRecord& rec2,
                             const HammingKernel& kernel, bool same_run);

/// Restriction of a record to a subsystem (ascending site indices): counts
/// and probabilities are marginalized onto the kept digits.
OutcomeRecord marginalize(const OutcomeRecord& rec, const HilbertShape& full,
                          const std::vector<int>& subsystem);

/// Runs the randomized-measurement sequence for every unitary in the batch:
/// record j holds n_m multinomial shots from probabilities(state, batch[j])
/// (exact probabilities when n_m = 0). Shot streams are keyed by
/// (shot_seed, j), independent of processing order.
std::vector<OutcomeRecord> simulate_records(const DensityMatrix& rho, const UnitaryBatch& batch,
                                            std::int64_t n_m, std::uint64_t shot_seed);
std::vector<OutcomeRecord> simulate_records(const StateVector& psi, const UnitaryBatch& batch,
                                            std::int64_t n_m, std::uint64_t shot_seed);

}  // namespace randmeas
