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

#include "randmeas/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "randmeas/weingarten.hpp"

namespace randmeas {

namespace {

double pairwise_sum_range(const double* x, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(x, half) + pairwise_sum_range(x + half, n - half);
}

}  // namespace

double pairwise_sum(const std::vector<double>& x) {
  return x.empty() ? 0.0 : pairwise_sum_range(x.data(), x.size());
}

MeanResult jackknife_mean(const std::vector<double>& per_unitary) {
  if (per_unitary.empty()) throw std::invalid_argument("jackknife_mean: empty sample");
  const auto n = static_cast<double>(per_unitary.size());
  const double mean = pairwise_sum(per_unitary) / n;
  if (per_unitary.size() == 1) return {mean, 0.0};
  std::vector<double> sq(per_unitary.size());
  for (std::size_t i = 0; i < per_unitary.size(); ++i) {
    const double d = per_unitary[i] - mean;
    sq[i] = d * d;
  }
  // Delete-one jackknife of a plain mean reduces to the standard error of
  // the mean: sqrt(sum (x - xbar)^2 / (n (n-1))).
  return {mean, std::sqrt(pairwise_sum(sq) / (n * (n - 1.0)))};
}

void PairwiseMatrixAccumulator::push(Matrix m) {
  std::size_t level = 0;
  while (level < occupied_.size() && occupied_[level]) {
    m += levels_[level];
    occupied_[level] = false;
    levels_[level].resize(0, 0);
    ++level;
  }
  if (level == occupied_.size()) {
    occupied_.push_back(false);
    levels_.emplace_back();
  }
  levels_[level] = std::move(m);
  occupied_[level] = true;
  ++count_;
}

Matrix PairwiseMatrixAccumulator::total() const {
  Matrix acc;
  for (std::size_t level = 0; level < occupied_.size(); ++level) {
    if (!occupied_[level]) continue;
    if (acc.size() == 0) {
      acc = levels_[level];
    } else {
      acc += levels_[level];
    }
  }
  return acc;
}

namespace {

EstimateReport report_from_per_unitary(std::string protocol, const std::vector<double>& per_u,
                                       EstimateMeta meta) {
  const MeanResult m = jackknife_mean(per_u);
  EstimateReport rep;
  rep.protocol = std::move(protocol);
  rep.value = m.value;
  rep.std_error = m.std_error;
  rep.meta = std::move(meta);
  rep.meta.n_u = static_cast<int>(per_u.size());
  rep.warning_nonpositive = rep.value <= 0.0;
  return rep;
}

}  // namespace

EstimateReport purity_global(const std::vector<OutcomeRecord>& records, std::int64_t dim,
                             EstimateMeta meta) {
  if (records.empty()) throw std::invalid_argument("purity_global: empty record set");
  const HammingKernel kernel{static_cast<int>(dim), 1};
  std::vector<double> per_u;
  per_u.reserve(records.size());
  for (const auto& rec : records) {
    per_u.push_back(kernel_quadratic_form(rec, rec, kernel, /*same_run=*/true));
  }
  return report_from_per_unitary("purity_global", per_u, std::move(meta));
}

EstimateReport purity_local(const std::vector<OutcomeRecord>& records, const HilbertShape& shape,
                            const std::vector<int>& subsystem, EstimateMeta meta) {
  if (records.empty()) throw std::invalid_argument("purity_local: empty record set");
  if (subsystem.empty()) throw std::invalid_argument("purity_local: empty subsystem");
  const HammingKernel kernel{shape.local_dim, static_cast<int>(subsystem.size())};
  std::vector<double> per_u;
  per_u.reserve(records.size());
  for (const auto& rec : records) {
    const OutcomeRecord sub = marginalize(rec, shape, subsystem);
    per_u.push_back(kernel_quadratic_form(sub, sub, kernel, /*same_run=*/true));
  }
  meta.subsystem = subsystem;
  return report_from_per_unitary("purity_local", per_u, std::move(meta));
}

namespace {

// Unbiased estimate of (z . P)^2 for a +-1 sign vector z: exact mode uses
// (z.p)^2; finite shots use ((z.n)^2 - N_M) / (N_M (N_M - 1)), the
// U-statistic with the z_s^2 = 1 diagonal removed.
double est_sign_moment(const OutcomeRecord& rec, const std::vector<double>& sign) {
  if (rec.exact()) {
    if (rec.exact_probs.size() != static_cast<std::int64_t>(sign.size())) {
      throw std::invalid_argument("sign moment: record dimension mismatch");
    }
    double zp = 0.0;
    for (std::int64_t s = 0; s < rec.exact_probs.size(); ++s) zp += sign[s] * rec.exact_probs(s);
    return zp * zp;
  }
  if (rec.n_m < 2) throw std::invalid_argument("sign moment requires n_m >= 2");
  double zn = 0.0;
  for (const auto& [s, c] : rec.counts) zn += sign.at(s) * static_cast<double>(c);
  const auto nm = static_cast<double>(rec.n_m);
  return (zn * zn - nm) / (nm * (nm - 1.0));
}

}  // namespace

BlochCheckReport purity_local_bloch_check(const DensityMatrix& rho,
                                          const std::vector<OutcomeRecord>& records) {
  if (rho.shape().local_dim != 2 || rho.shape().num_sites != 2) {
    throw std::invalid_argument("purity_local_bloch_check requires two qubits");
  }
  if (records.empty()) throw std::invalid_argument("purity_local_bloch_check: empty record set");
  std::vector<double> z1(4), z2(4), z12(4);
  for (std::int64_t s = 0; s < 4; ++s) {
    const double a = (s / 2 == 0) ? 1.0 : -1.0;
    const double b = (s % 2 == 0) ? 1.0 : -1.0;
    z1[s] = a;
    z2[s] = b;
    z12[s] = a * b;
  }
  std::vector<double> m1, m2, m12, pur;
  for (const auto& rec : records) {
    const double a = est_sign_moment(rec, z1);
    const double b = est_sign_moment(rec, z2);
    const double c = est_sign_moment(rec, z12);
    m1.push_back(a);
    m2.push_back(b);
    m12.push_back(c);
    pur.push_back((1.0 + 3.0 * a + 3.0 * b + 9.0 * c) / 4.0);
  }
  BlochCheckReport rep;
  rep.z1_sq = jackknife_mean(m1);
  rep.z2_sq = jackknife_mean(m2);
  rep.z12_sq = jackknife_mean(m12);
  rep.purity = jackknife_mean(pur);
  const BlochMatrix bm = bloch_matrix(rho);
  rep.v_sq = bm.v().squaredNorm();
  rep.w_sq = bm.w().squaredNorm();
  rep.r_sq = bm.correlation().squaredNorm();
  rep.purity_exact_value = purity_exact(rho);
  return rep;
}

EstimateReport overlap(const std::vector<OutcomeRecord>& records1,
                       const std::vector<OutcomeRecord>& records2, const UnitaryBatch& batch1,
                       const UnitaryBatch& batch2, EstimateMeta meta) {
  if (!batch1.same_manifest(batch2)) {
    throw DataFormatError(
        "overlap: record sets were not taken with the same unitary batch "
        "(manifest mismatch)");
  }
  if (records1.size() != records2.size() ||
      records1.size() != static_cast<std::size_t>(batch1.count())) {
    throw DataFormatError("overlap: record count does not match batch manifest");
  }
  const HammingKernel kernel =
      batch1.variant() == UnitaryVariant::kGlobal
          ? HammingKernel{static_cast<int>(batch1.shape().total_dim), 1}
          : HammingKernel{batch1.shape().local_dim, batch1.shape().num_sites};
  std::vector<double> per_u;
  per_u.reserve(records1.size());
  for (std::size_t j = 0; j < records1.size(); ++j) {
    // Averaging both argument orders keeps the estimator bit-exactly
    // symmetric under swapping the record sets.
    const double ab = kernel_quadratic_form(records1[j], records2[j], kernel, false);
    const double ba = kernel_quadratic_form(records2[j], records1[j], kernel, false);
    per_u.push_back((ab + ba) / 2.0);
  }
  meta.seed = batch1.master_seed();
  return report_from_per_unitary("overlap", per_u, std::move(meta));
}

EstimateReport loschmidt_echo(const StateVector& psi0, const Matrix& h1, const Matrix& h2,
                              double t, const UnitaryBatch& batch, std::int64_t n_m,
                              std::uint64_t shot_seed) {
  const StateVector psi1 = evolve(psi0, h1, t);
  const StateVector psi2 = evolve(psi0, h2, t);
  const auto r1 = simulate_records(psi1, batch, n_m, derive_seed(shot_seed, 1));
  const auto r2 = simulate_records(psi2, batch, n_m, derive_seed(shot_seed, 2));
  EstimateMeta meta;
  meta.n_m = n_m;
  meta.seed = batch.master_seed();
  EstimateReport rep = overlap(r1, r2, batch, batch, meta);
  rep.protocol = "loschmidt_echo";
  return rep;
}

EstimateReport tomography(const std::vector<OutcomeRecord>& records,
                          const std::function<SampledUnitary(int)>& unitary_of,
                          const HilbertShape& shape, UnitaryVariant variant, EstimateMeta meta) {
  if (records.empty()) throw std::invalid_argument("tomography: empty record set");
  const std::int64_t dim = shape.total_dim;
  const HammingKernel kernel = variant == UnitaryVariant::kGlobal
                                   ? HammingKernel{static_cast<int>(dim), 1}
                                   : HammingKernel{shape.local_dim, shape.num_sites};
  PairwiseMatrixAccumulator acc;
  std::vector<double> frob_sq;
  frob_sq.reserve(records.size());
  for (std::size_t j = 0; j < records.size(); ++j) {
    const auto& rec = records[j];
    Eigen::VectorXd p_hat;
    if (rec.exact()) {
      if (rec.exact_probs.size() != dim) {
        throw std::invalid_argument("tomography: record dimension mismatch");
      }
      p_hat = rec.exact_probs;
    } else {
      p_hat = Eigen::VectorXd::Zero(dim);
      for (const auto& [s, c] : rec.counts) {
        if (s < 0 || s >= dim) throw std::invalid_argument("tomography: count index out of range");
        p_hat(s) = static_cast<double>(c) / static_cast<double>(rec.n_m);
      }
    }
    const Eigen::VectorXd q = apply_hamming_kernel(kernel, p_hat);
    const Matrix u = unitary_of(static_cast<int>(j)).assembled();
    Matrix rho_u = u.adjoint() * (q.asDiagonal() * u);
    frob_sq.push_back(rho_u.squaredNorm());
    acc.push(std::move(rho_u));
  }
  const auto n = static_cast<double>(records.size());
  Matrix mean = acc.total() / n;
  mean = (mean + mean.adjoint().eval()) / 2.0;

  EstimateReport rep;
  rep.protocol = "tomography";
  rep.matrix = std::move(mean);
  rep.matrix_trace = rep.matrix.trace().real();
  rep.value = rep.matrix_trace;
  if (records.size() > 1) {
    // Frobenius-norm standard error of the matrix mean.
    const double ss = pairwise_sum(frob_sq) - n * rep.matrix.squaredNorm();
    rep.std_error = std::sqrt(std::max(ss, 0.0) / (n * (n - 1.0)));
  }
  rep.meta = std::move(meta);
  rep.meta.n_u = static_cast<int>(records.size());
  return rep;
}

std::vector<double> solve_moment_recursion(const std::vector<double>& pbar, std::int64_t dim,
                                           int k) {
  if (k < 2) throw std::invalid_argument("moment recursion requires k >= 2");
  if (pbar.size() != static_cast<std::size_t>(k - 1)) {
    throw std::invalid_argument("moment recursion: need avg P^l for l = 2..k");
  }
  // traces[l-1] = tr rho^l, seeded with tr rho = 1.
  std::vector<double> traces{1.0};
  for (int l = 2; l <= k; ++l) {
    double d_l = 1.0;
    for (int i = 0; i < l; ++i) d_l *= static_cast<double>(dim + i);
    double rest = 0.0;
    double lcycle_count = 1.0;
    for (const auto& type : cycle_types(l)) {
      const bool is_l_cycle = type[l - 1] == 1;
      if (is_l_cycle) {
        lcycle_count = static_cast<double>(cycle_type_count(type));
        continue;
      }
      double prod = static_cast<double>(cycle_type_count(type));
      for (int m = 1; m < l; ++m) {
        for (int j = 0; j < type[m - 1]; ++j) prod *= traces[m - 1];
      }
      rest += prod;
    }
    traces.push_back((d_l * pbar[l - 2] - rest) / lcycle_count);
  }
  return {traces.begin() + 1, traces.end()};
}

EstimateReport renyi_k_global(const std::vector<OutcomeRecord>& records, std::int64_t dim, int k,
                              EstimateMeta meta) {
  if (records.empty()) throw std::invalid_argument("renyi_k_global: empty record set");
  if (k < 2) throw std::invalid_argument("renyi_k_global requires k >= 2");
  const auto n_u = records.size();
  // Per-unitary moment sums sum_s est[P(s)^l], l = 2..k.
  std::vector<std::vector<double>> per_order(k - 1, std::vector<double>(n_u));
  for (std::size_t j = 0; j < n_u; ++j) {
    const auto& rec = records[j];
    if (!rec.exact() && rec.n_m < k) {
      throw std::invalid_argument("renyi_k_global: n_m must be >= k in finite mode");
    }
    for (int l = 2; l <= k; ++l) {
      double acc = 0.0;
      if (rec.exact()) {
        for (std::int64_t s = 0; s < rec.exact_probs.size(); ++s) {
          acc += std::pow(rec.exact_probs(s), l);
        }
      } else {
        for (const auto& [s, c] : rec.counts) acc += est_p_power(rec, s, l);
      }
      per_order[l - 2][j] = acc;
    }
  }
  const double dd = static_cast<double>(dim);
  std::vector<double> totals(k - 1), pbar(k - 1);
  for (int l = 2; l <= k; ++l) {
    totals[l - 2] = pairwise_sum(per_order[l - 2]);
    pbar[l - 2] = totals[l - 2] / (static_cast<double>(n_u) * dd);
  }
  const std::vector<double> traces = solve_moment_recursion(pbar, dim, k);

  // Delete-one jackknife through the nonlinear recursion.
  std::vector<double> errors(k - 1, 0.0);
  if (n_u > 1) {
    std::vector<std::vector<double>> dev(k - 1, std::vector<double>(n_u));
    std::vector<double> loo(k - 1);
    for (std::size_t j = 0; j < n_u; ++j) {
      for (int l = 2; l <= k; ++l) {
        loo[l - 2] =
            (totals[l - 2] - per_order[l - 2][j]) / (static_cast<double>(n_u - 1) * dd);
      }
      const std::vector<double> t_j = solve_moment_recursion(loo, dim, k);
      for (int l = 2; l <= k; ++l) dev[l - 2][j] = t_j[l - 2];
    }
    for (int l = 2; l <= k; ++l) {
      const double m = pairwise_sum(dev[l - 2]) / static_cast<double>(n_u);
      std::vector<double> sq(n_u);
      for (std::size_t j = 0; j < n_u; ++j) {
        const double d = dev[l - 2][j] - m;
        sq[j] = d * d;
      }
      errors[l - 2] = std::sqrt(pairwise_sum(sq) * static_cast<double>(n_u - 1) /
                                static_cast<double>(n_u));
    }
  }

  EstimateReport rep;
  rep.protocol = "renyi_k";
  rep.moments = traces;
  rep.moment_errors = errors;
  rep.value = traces.back();
  rep.std_error = errors.back();
  rep.meta = std::move(meta);
  rep.meta.n_u = static_cast<int>(n_u);
  rep.warning_nonpositive = rep.value <= 0.0;
  return rep;
}

EntanglementReport detect_entanglement(const EstimateReport& purity_a,
                                       const EstimateReport& purity_b,
                                       const EstimateReport& purity_ab) {
  EntanglementReport rep;
  if (purity_a.value <= 0.0 || purity_b.value <= 0.0 || purity_ab.value <= 0.0) {
    rep.nonpositive_flag = true;
    return rep;
  }
  const double ln2 = std::log(2.0);
  auto entropy = [&](const EstimateReport& r) { return -std::log2(r.value); };
  auto entropy_se = [&](const EstimateReport& r) { return r.std_error / (r.value * ln2); };
  const double s_ab = entropy(purity_ab);
  const double se_ab = entropy_se(purity_ab);
  double best_gap = entropy(purity_a) - s_ab;
  double best_se = std::hypot(entropy_se(purity_a), se_ab);
  const double gap_b = entropy(purity_b) - s_ab;
  const double se_b = std::hypot(entropy_se(purity_b), se_ab);
  // Keep the more significant of the two one-sided gaps.
  const double denom_a = best_se > 0.0 ? best_se : 1e-300;
  const double denom_b = se_b > 0.0 ? se_b : 1e-300;
  if (gap_b / denom_b > best_gap / denom_a) {
    best_gap = gap_b;
    best_se = se_b;
  }
  rep.gap = best_gap;
  rep.gap_std_error = best_se;
  if (best_gap > 3.0 * best_se) rep.verdict = EntanglementVerdict::kEntangled;
  return rep;
}

}  // namespace randmeas
