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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "randmeas/estimators.hpp"
#include "randmeas/weingarten.hpp"

using namespace randmeas;

TEST_CASE("pairwise_sum and jackknife") {
  std::vector<double> xs;
  RngStream rng(1);
  for (int i = 0; i < 1000; ++i) xs.push_back(rng.uniform() - 0.3);
  const double direct = std::accumulate(xs.begin(), xs.end(), 0.0);
  CHECK(pairwise_sum(xs) == doctest::Approx(direct).epsilon(1e-12));

  const MeanResult m = jackknife_mean(xs);
  const double mean = direct / xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sem = std::sqrt(var / (xs.size() * (xs.size() - 1.0)));
  CHECK(m.value == doctest::Approx(mean).epsilon(1e-12));
  CHECK(m.std_error == doctest::Approx(sem).epsilon(1e-12));

  CHECK(jackknife_mean({2.5}).std_error == 0.0);
  CHECK_THROWS_AS(jackknife_mean({}), std::invalid_argument);
}

TEST_CASE("PairwiseMatrixAccumulator matches a direct sum") {
  PairwiseMatrixAccumulator acc;
  Matrix direct = Matrix::Zero(3, 3);
  RngStream rng(2);
  for (int i = 0; i < 37; ++i) {
    Matrix m(3, 3);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        auto [re, im] = rng.normal_pair();
        m(r, c) = Complex(re, im);
      }
    }
    direct += m;
    acc.push(m);
  }
  CHECK(acc.count() == 37);
  CHECK((acc.total() - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("purity_global") {
  SUBCASE("maximally mixed state is exact with zero variance") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = DensityMatrix::maximally_mixed(shape);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 50, 3);
    const auto records = simulate_records(rho, batch, 0, 0);
    const EstimateReport rep = purity_global(records, shape.total_dim);
    CHECK(rep.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.std_error < 1e-13);
  }
  SUBCASE("pure qubit recovered within three standard errors") {
    const HilbertShape shape(2, 1);
    const StateVector psi = make_pure_state(StateKind::kRandomPure, shape, 4);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 10000, 5);
    const auto records = simulate_records(psi, batch, 0, 0);
    const EstimateReport rep = purity_global(records, shape.total_dim);
    CHECK(std::abs(rep.value - 1.0) < 3.0 * rep.std_error);
  }
  SUBCASE("Haar-exact identity for diag(3/4, 1/4) via the twirl oracle") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.75;
    m(1, 1) = 0.25;
    const DensityMatrix rho(HilbertShape(2, 1), m);
    const Matrix rho2 = tensor_product(rho.elements(), rho.elements());
    const Matrix twirled = twirl_global(rho2, 2, 2);
    // avg_U P_U(s)^2 = <ss|Phi(rho x rho)|ss> = (1 + tr rho^2)/(D(D+1)).
    double sum_p2 = 0.0;
    for (std::int64_t s = 0; s < 2; ++s) {
      const double per_s = twirled(s * 2 + s, s * 2 + s).real();
      CHECK(per_s == doctest::Approx((1.0 + 0.625) / (2.0 * 3.0)).epsilon(1e-12));
      sum_p2 += per_s;
    }
    CHECK(3.0 * sum_p2 - 1.0 == doctest::Approx(0.625).epsilon(1e-12));
  }
  SUBCASE("the quadratic form equals (D+1) sum est[P^2] - 1 on finite shots") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = make_state(StateKind::kRandomMixed, shape, 6, 2);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 20, 7);
    const auto records = simulate_records(rho, batch, 16, 8);
    const EstimateReport rep = purity_global(records, shape.total_dim);
    std::vector<double> alt;
    for (const auto& rec : records) {
      alt.push_back((shape.total_dim + 1.0) * sum_est_p_squared(rec) - 1.0);
    }
    const MeanResult m = jackknife_mean(alt);
    CHECK(rep.value == doctest::Approx(m.value).epsilon(1e-12));
  }
  SUBCASE("empty record set is an error") {
    CHECK_THROWS_AS(purity_global({}, 4), std::invalid_argument);
  }
}

TEST_CASE("purity_local") {
  SUBCASE("Bell state: full system and single site") {
    const HilbertShape shape(2, 2);
    const DensityMatrix bell = make_state(StateKind::kGhz, shape, 0);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 10000, 9);
    const auto records = simulate_records(bell, batch, 0, 0);
    const EstimateReport full = purity_local(records, shape, {0, 1});
    CHECK(std::abs(full.value - 1.0) < 3.0 * full.std_error);
    // The single-site marginal of the Bell state is uniform under every
    // local unitary, so the estimate is exactly 1/2 with zero variance.
    const EstimateReport site = purity_local(records, shape, {0});
    CHECK(site.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(site.std_error < 1e-13);
    CHECK(site.meta.subsystem == std::vector<int>{0});
  }
  SUBCASE("maximally mixed two qubits give exactly 1/4") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = DensityMatrix::maximally_mixed(shape);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 25, 10);
    const auto records = simulate_records(rho, batch, 0, 0);
    const EstimateReport rep = purity_local(records, shape, {0, 1});
    CHECK(rep.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.std_error < 1e-13);
  }
  SUBCASE("single-qubit reduction matches the two-term formula") {
    const HilbertShape shape(2, 1);
    const DensityMatrix rho = make_state(StateKind::kRandomMixed, shape, 11, 1);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 200, 12);
    const auto records = simulate_records(rho, batch, 0, 0);
    const EstimateReport rep = purity_local(records, shape, {0});
    std::vector<double> direct;
    for (const auto& rec : records) {
      const double pu = rec.exact_probs(0), pd = rec.exact_probs(1);
      direct.push_back(2.0 * (pu * pu + pd * pd - pu * pd));
    }
    CHECK(rep.value == doctest::Approx(jackknife_mean(direct).value).epsilon(1e-12));
  }
  SUBCASE("subsystem reuse is bit-exact") {
    const HilbertShape shape(2, 3);
    const StateVector psi = make_pure_state(StateKind::kRandomPure, shape, 13);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 100, 14);
    const auto records = simulate_records(psi, batch, 32, 15);
    const std::vector<int> sub{0, 2};
    const EstimateReport from_full = purity_local(records, shape, sub);
    std::vector<OutcomeRecord> pre;
    for (const auto& rec : records) pre.push_back(marginalize(rec, shape, sub));
    const HilbertShape sub_shape(2, 2);
    const EstimateReport from_marginal = purity_local(pre, sub_shape, {0, 1});
    CHECK(from_full.value == from_marginal.value);
    CHECK(from_full.std_error == from_marginal.std_error);
  }
}

TEST_CASE("purity_local_bloch_check") {
  SUBCASE("product state |00>") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = make_state(StateKind::kPureProduct, shape, 0);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 20000, 16);
    const auto records = simulate_records(rho, batch, 0, 0);
    const BlochCheckReport rep = purity_local_bloch_check(rho, records);
    CHECK(rep.v_sq == doctest::Approx(1.0));
    CHECK(rep.w_sq == doctest::Approx(1.0));
    CHECK(rep.r_sq == doctest::Approx(1.0));
    CHECK(std::abs(rep.purity.value - 1.0) < 3.0 * rep.purity.std_error);
    CHECK(std::abs(3.0 * rep.z1_sq.value - rep.v_sq) < 3.0 * 3.0 * rep.z1_sq.std_error);
  }
  SUBCASE("Bell state: terms (0, 0, 3)") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = make_state(StateKind::kGhz, shape, 0);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 20000, 17);
    const auto records = simulate_records(rho, batch, 0, 0);
    const BlochCheckReport rep = purity_local_bloch_check(rho, records);
    CHECK(rep.r_sq == doctest::Approx(3.0));
    CHECK(std::abs(3.0 * rep.z1_sq.value) < 3.0 * 3.0 * rep.z1_sq.std_error + 1e-12);
    CHECK(std::abs(9.0 * rep.z12_sq.value - 3.0) < 3.0 * 9.0 * rep.z12_sq.std_error);
    CHECK(std::abs(rep.purity.value - 1.0) < 3.0 * rep.purity.std_error);
  }
  SUBCASE("maximally mixed: all terms vanish identically") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = DensityMatrix::maximally_mixed(shape);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 50, 170);
    const auto records = simulate_records(rho, batch, 0, 0);
    const BlochCheckReport rep = purity_local_bloch_check(rho, records);
    CHECK(rep.z1_sq.value == doctest::Approx(0.0));
    CHECK(rep.z12_sq.value == doctest::Approx(0.0));
    CHECK(rep.purity.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.purity.std_error < 1e-13);
  }
}

TEST_CASE("overlap") {
  const HilbertShape shape(2, 2);
  SUBCASE("self-overlap reduces to the purity") {
    const StateVector psi = make_pure_state(StateKind::kRandomPure, shape, 18);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 4000, 19);
    const auto r1 = simulate_records(psi, batch, 0, 0);
    const auto r2 = simulate_records(psi, batch, 0, 0);
    const EstimateReport rep = overlap(r1, r2, batch, batch);
    CHECK(std::abs(rep.value - 1.0) < 3.0 * rep.std_error);
  }
  SUBCASE("orthogonal states give zero") {
    const StateVector a = StateVector::basis_state(shape, 0);
    const StateVector b = StateVector::basis_state(shape, 3);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 10000, 20);
    const auto r1 = simulate_records(a, batch, 0, 0);
    const auto r2 = simulate_records(b, batch, 0, 0);
    const EstimateReport rep = overlap(r1, r2, batch, batch);
    CHECK(std::abs(rep.value) < 3.0 * rep.std_error);
  }
  SUBCASE("random pure states match the direct inner product") {
    const StateVector a = make_pure_state(StateKind::kRandomPure, shape, 21);
    const StateVector b = make_pure_state(StateKind::kRandomPure, shape, 22);
    const double truth = std::norm(a.amplitudes().dot(b.amplitudes()));
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 10000, 23);
    const auto r1 = simulate_records(a, batch, 0, 0);
    const auto r2 = simulate_records(b, batch, 0, 0);
    const EstimateReport rep = overlap(r1, r2, batch, batch);
    CHECK(std::abs(rep.value - truth) < 3.0 * rep.std_error);

    // Symmetry is bit-exact.
    const EstimateReport swapped = overlap(r2, r1, batch, batch);
    CHECK(rep.value == swapped.value);
    CHECK(rep.std_error == swapped.std_error);
  }
  SUBCASE("mismatched manifests are a hard error") {
    const StateVector a = make_pure_state(StateKind::kRandomPure, shape, 24);
    const UnitaryBatch batch1(shape, UnitaryVariant::kLocal, 10, 25);
    const UnitaryBatch batch2(shape, UnitaryVariant::kLocal, 10, 26);  // different seed
    const auto r1 = simulate_records(a, batch1, 0, 0);
    const auto r2 = simulate_records(a, batch2, 0, 0);
    CHECK_THROWS_AS(overlap(r1, r2, batch1, batch2), DataFormatError);
  }
  SUBCASE("global variant works through the D-dimensional kernel") {
    const StateVector a = make_pure_state(StateKind::kRandomPure, shape, 27);
    const StateVector b = make_pure_state(StateKind::kRandomPure, shape, 28);
    const double truth = std::norm(a.amplitudes().dot(b.amplitudes()));
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 8000, 29);
    const auto r1 = simulate_records(a, batch, 0, 0);
    const auto r2 = simulate_records(b, batch, 0, 0);
    const EstimateReport rep = overlap(r1, r2, batch, batch);
    CHECK(std::abs(rep.value - truth) < 3.0 * rep.std_error);
  }
}

TEST_CASE("loschmidt_echo") {
  const HilbertShape shape(2, 3);
  const StateVector psi0 = make_pure_state(StateKind::kPureProduct, shape, 0);
  const Matrix h1 = random_hermitian(shape.total_dim, 30);
  const Matrix h2 = random_hermitian(shape.total_dim, 31);
  const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 4000, 32);

  SUBCASE("equal Hamiltonians give unity") {
    const EstimateReport rep = loschmidt_echo(psi0, h1, h1, 1.3, batch, 0, 33);
    CHECK(std::abs(rep.value - 1.0) < 3.0 * rep.std_error);
  }
  SUBCASE("zero time gives unity") {
    const EstimateReport rep = loschmidt_echo(psi0, h1, h2, 0.0, batch, 0, 34);
    CHECK(std::abs(rep.value - 1.0) < 3.0 * std::max(rep.std_error, 1e-12));
  }
  SUBCASE("distinct Hamiltonians match the dense-evolution oracle") {
    const double t = 1.0;
    const StateVector psi1 = evolve(psi0, h1, t);
    const StateVector psi2 = evolve(psi0, h2, t);
    const double truth = std::norm(psi1.amplitudes().dot(psi2.amplitudes()));
    const EstimateReport rep = loschmidt_echo(psi0, h1, h2, t, batch, 0, 35);
    CHECK(std::abs(rep.value - truth) < 3.0 * rep.std_error);
  }
}

TEST_CASE("tomography") {
  SUBCASE("maximally mixed state is reconstructed exactly in exact mode") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = DensityMatrix::maximally_mixed(shape);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 16, 36);
    const auto records = simulate_records(rho, batch, 0, 0);
    const EstimateReport rep =
        tomography(records, [&](int j) { return batch.get(j); }, shape, UnitaryVariant::kLocal);
    CHECK(trace_norm_distance(rep.matrix, rho.elements()) < 1e-10);
    CHECK(rep.matrix_trace == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Bell state trace distance below 0.1 at N_U = 10^4") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = make_state(StateKind::kGhz, shape, 0);
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 10000, 37);
    const auto records = simulate_records(rho, batch, 0, 0);
    const EstimateReport rep =
        tomography(records, [&](int j) { return batch.get(j); }, shape, UnitaryVariant::kLocal);
    CHECK(trace_norm_distance(rep.matrix, rho.elements()) < 0.1);
    CHECK(rep.matrix_trace == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("single-qubit trace distance decays as 1/sqrt(N_U)") {
    const HilbertShape shape(2, 1);
    const DensityMatrix rho = make_state(StateKind::kPureProduct, shape, 0);
    std::vector<double> nus = {256, 1024, 4096, 16384};
    std::vector<double> errs;
    for (double nu : nus) {
      double acc = 0.0;
      for (int rep_i = 0; rep_i < 3; ++rep_i) {
        const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, static_cast<int>(nu),
                                 derive_seed(38, nu, rep_i));
        const auto records = simulate_records(rho, batch, 0, 0);
        const EstimateReport rep = tomography(
            records, [&](int j) { return batch.get(j); }, shape, UnitaryVariant::kGlobal);
        acc += trace_norm_distance(rep.matrix, rho.elements());
      }
      errs.push_back(acc / 3.0);
    }
    double slope_acc = 0.0;
    slope_acc = std::log(errs.back() / errs.front()) / std::log(nus.back() / nus.front());
    CHECK(std::abs(slope_acc + 0.5) < 0.1);
  }
  SUBCASE("estimator is linear in the state, per unitary") {
    const HilbertShape shape(2, 1);
    Matrix m1 = Matrix::Zero(2, 2), m2 = Matrix::Zero(2, 2);
    m1(0, 0) = 1.0;
    m2(0, 0) = 0.5;
    m2(1, 1) = 0.5;
    m2(0, 1) = m2(1, 0) = 0.3;
    const DensityMatrix rho1(shape, m1), rho2(shape, m2);
    const double lambda = 0.4;
    const DensityMatrix mix(shape, lambda * m1 + (1.0 - lambda) * m2);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 1, 39);
    auto reconstruct = [&](const DensityMatrix& rho) {
      const auto records = simulate_records(rho, batch, 0, 0);
      return tomography(records, [&](int j) { return batch.get(j); }, shape,
                        UnitaryVariant::kGlobal)
          .matrix;
    };
    const Matrix lhs = reconstruct(mix);
    const Matrix rhs = lambda * reconstruct(rho1) + (1.0 - lambda) * reconstruct(rho2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("records without unitaries fail") {
    CHECK_THROWS_AS(tomography({}, [](int) { return SampledUnitary{}; }, HilbertShape(2, 1),
                               UnitaryVariant::kGlobal),
                    std::invalid_argument);
  }
}

TEST_CASE("renyi_k_global") {
  SUBCASE("k=2 agrees with purity_global") {
    const HilbertShape shape(2, 2);
    const DensityMatrix rho = make_state(StateKind::kRandomMixed, shape, 40, 2);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 500, 41);
    const auto records = simulate_records(rho, batch, 0, 0);
    const EstimateReport pur = purity_global(records, shape.total_dim);
    const EstimateReport ren = renyi_k_global(records, shape.total_dim, 2);
    CHECK(ren.moments.size() == 1);
    CHECK(ren.moments[0] == doctest::Approx(pur.value).epsilon(1e-12));
  }
  SUBCASE("exact twirl-oracle moments reproduce matrix powers for d=4") {
    const HilbertShape shape(4, 1);
    const DensityMatrix rho = make_state(StateKind::kRandomMixed, shape, 42, 1);
    Matrix rho_l = rho.elements();
    std::vector<double> pbar;
    for (int l = 2; l <= 3; ++l) {
      rho_l = tensor_product(rho_l, rho.elements());
      pbar.push_back(twirl_global(rho_l, l, 4)(0, 0).real());
    }
    const auto traces = solve_moment_recursion(pbar, 4, 3);
    const Matrix r2 = rho.elements() * rho.elements();
    CHECK(traces[0] == doctest::Approx(r2.trace().real()).epsilon(1e-10));
    CHECK(traces[1] == doctest::Approx((r2 * rho.elements()).trace().real()).epsilon(1e-10));
  }
  SUBCASE("sampled moments recover matrix powers within three sigma") {
    const HilbertShape shape(4, 1);
    const DensityMatrix rho = make_state(StateKind::kRandomMixed, shape, 43, 1);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 20000, 44);
    const auto records = simulate_records(rho, batch, 0, 0);
    const EstimateReport rep = renyi_k_global(records, 4, 3);
    const Matrix r2 = rho.elements() * rho.elements();
    CHECK(std::abs(rep.moments[0] - r2.trace().real()) < 3.0 * rep.moment_errors[0]);
    CHECK(std::abs(rep.moments[1] - (r2 * rho.elements()).trace().real()) <
          3.0 * rep.moment_errors[1]);
  }
  SUBCASE("pure states: avg P^l = l!/D_l forces all traces to one") {
    const std::int64_t dim = 8;
    std::vector<double> pbar;
    for (int l = 2; l <= 4; ++l) {
      double dl = 1.0, lfact = 1.0;
      for (int i = 0; i < l; ++i) dl *= dim + i;
      for (int i = 2; i <= l; ++i) lfact *= i;
      pbar.push_back(lfact / dl);
    }
    const auto traces = solve_moment_recursion(pbar, dim, 4);
    for (double t : traces) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("finite mode requires n_m >= k") {
    const HilbertShape shape(2, 1);
    const DensityMatrix rho = DensityMatrix::maximally_mixed(shape);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, 5, 45);
    const auto records = simulate_records(rho, batch, 2, 46);
    CHECK_THROWS_AS(renyi_k_global(records, 2, 3), std::invalid_argument);
  }
}

TEST_CASE("detect_entanglement") {
  auto report = [](double purity, double se = 0.0) {
    EstimateReport r;
    r.value = purity;
    r.std_error = se;
    return r;
  };
  SUBCASE("Bell state purities flag entanglement") {
    const EntanglementReport rep =
        detect_entanglement(report(0.5), report(0.5), report(1.0));
    CHECK(rep.verdict == EntanglementVerdict::kEntangled);
    CHECK(rep.gap == doctest::Approx(1.0));
  }
  SUBCASE("pure product state is inconclusive") {
    const EntanglementReport rep = detect_entanglement(report(1.0), report(1.0), report(1.0));
    CHECK(rep.verdict == EntanglementVerdict::kInconclusive);
  }
  SUBCASE("maximally mixed state is inconclusive") {
    const EntanglementReport rep = detect_entanglement(report(0.5), report(0.5), report(0.25));
    CHECK(rep.verdict == EntanglementVerdict::kInconclusive);
  }
  SUBCASE("noisy gap below three sigma is inconclusive") {
    const EntanglementReport rep =
        detect_entanglement(report(0.5, 0.2), report(0.5, 0.2), report(1.0, 0.2));
    CHECK(rep.verdict == EntanglementVerdict::kInconclusive);
    CHECK(rep.gap_std_error > 0.0);
  }
  SUBCASE("nonpositive purity estimates set the flag") {
    const EntanglementReport rep = detect_entanglement(report(-0.05), report(0.5), report(0.9));
    CHECK(rep.verdict == EntanglementVerdict::kInconclusive);
    CHECK(rep.nonpositive_flag);
  }
}

TEST_CASE("negative purity estimates are reported as-is with a warning") {
  // A single two-shot record split across outcomes drives the U-statistic
  // negative: (n'Kn - D N_M) / (N_M (N_M - 1)) = (2 - 4)/2 = -1.
  OutcomeRecord rec;
  rec.unitary_index = 0;
  rec.n_m = 2;
  rec.counts[0] = 1;
  rec.counts[1] = 1;
  const EstimateReport rep = purity_global({rec}, 2);
  CHECK(rep.value == doctest::Approx(-1.0));
  CHECK(rep.warning_nonpositive);
}

TEST_CASE("finite-shot purity is unbiased at fixed unitaries") {
  const HilbertShape shape(2, 2);
  const DensityMatrix rho = make_state(StateKind::kGhz, shape, 0);
  const UnitaryBatch batch(shape, UnitaryVariant::kLocal, 50, 47);
  const auto exact = simulate_records(rho, batch, 0, 0);
  const double reference = purity_local(exact, shape, {0, 1}).value;
  const int resamples = 300;
  double acc = 0.0, acc_sq = 0.0;
  for (int r = 0; r < resamples; ++r) {
    const auto recs = simulate_records(rho, batch, 16, derive_seed(48, r));
    const double est = purity_local(recs, shape, {0, 1}).value;
    acc += est;
    acc_sq += est * est;
  }
  const double mean = acc / resamples;
  const double se = std::sqrt((acc_sq / resamples - mean * mean) / resamples);
  CHECK(std::abs(mean - reference) < 3.0 * se);
}
