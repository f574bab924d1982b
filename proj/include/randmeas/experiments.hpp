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

#include "randmeas/io.hpp"

namespace randmeas {

/// Parameter grid for the scaling studies. Replaying an identical config
/// (same master_seed) reproduces the output CSV byte-for-byte, regardless
/// of the worker count.
struct ExperimentConfig {
  std::string protocol = "purity-scaling";
  std::string variant = "local";            // "local" | "global"
  std::vector<std::string> states = {"pure_product"};
  int local_dim = 2;
  std::vector<int> n_sites = {4};
  std::vector<int> n_u = {256};
  std::vector<std::int64_t> n_m = {0};      // 0 = exact mode ("inf" in JSON)
  int trials = 20;
  int ancilla_sites = 4;                    // random_mixed ancilla count
  std::uint64_t master_seed = 1;
  std::string output;
  int threads = 0;                          // 0: RANDMEAS_THREADS or hardware
};

ExperimentConfig config_from_json(const Json& j);
/// Reads a JSON config file; flag overrides are applied by the CLI.
ExperimentConfig load_config(const std::string& path);

/// Runs fn(0..n-1) on a shared-queue worker pool. Output must go to
/// per-index slots; results are then independent of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

int resolve_threads(int requested);

/// Statistical error of the estimated purity over the (state, N, N_U, N_M)
/// grid: one row per cell, averaged over `trials` independent experiments.
std::vector<SweepRow> run_purity_scaling(const ExperimentConfig& config);

/// Trace distance of the reconstructed density matrix over the same grid.
std::vector<SweepRow> run_tomography_scaling(const ExperimentConfig& config);

struct BlochDemoResult {
  int num_qubits = 1;
  std::vector<double> z1, z2, z12;     // sampled Z_U statistics (z2/z12: 2 qubits)
  double v_norm = 0.0, w_norm = 0.0, r_norm = 0.0;
  double std_z1 = 0.0, std_z2 = 0.0, std_z12 = 0.0;
  double purity_truth = 0.0;
  double purity_estimate = 0.0;
  double purity_std_error = 0.0;
  double ks_statistic = 0.0;           // single qubit: Z_U vs uniform[-|v|,|v|]
};

/// Samples Z_U histograms for a 1- or 2-qubit state with exact
/// probabilities; sqrt(3) std(Z) estimates |v| (and 3 std(Z12) estimates
/// |R| for two qubits).
BlochDemoResult run_bloch_demo(const DensityMatrix& rho, int n_u, std::uint64_t seed);

void write_bloch_csv(std::ostream& out, const BlochDemoResult& result, int bins = 41);

struct PowerLawFit {
  double exponent = 0.0;
  double exponent_std_error = 0.0;
  double log_prefactor = 0.0;
};

/// Least-squares fit of log y = a + b log x; requires >= 3 strictly
/// positive points and non-degenerate x.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct ShotNoiseExponentFit {
  double b = 0.0;        // error ~ 2^(b N) / N_M exponent in the site count
  double gamma = 0.0;    // fitted N_M exponent (expected near -1)
  int cells_used = 0;
};

/// Fits the shot-noise site exponent from purity-scaling rows. For each
/// (state, N) group the exact-mode row gives the unitary-ensemble floor;
/// the shot contribution of each finite-N_M cell is isolated in quadrature
/// (rms errors) and regressed as log2 s = alpha + b N + gamma log2 N_M.
ShotNoiseExponentFit fit_shot_noise_exponent(const std::vector<SweepRow>& rows);

struct IngestOptions {
  std::string protocol = "purity";  // purity | overlap | tomography | renyi
  std::vector<int> subsystem;       // purity only; empty = full system
  std::string state;                // label filter; empty = sole state
  std::string state2;               // overlap partner label (same-file mode)
  int renyi_k = 3;
};

/// Applies the selected estimator pipeline to externally recorded data.
/// For overlap, a second records/manifest pair may be given; manifests must
/// agree or the call fails rather than silently biasing toward zero.
std::vector<EstimateReport> ingest(const std::string& records_path,
                                   const std::string& manifest_path, const IngestOptions& options,
                                   const std::string& records2_path = "",
                                   const std::string& manifest2_path = "");

}  // namespace randmeas
