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

#include "randmeas/haar.hpp"
#include "randmeas/weingarten.hpp"

using namespace randmeas;

namespace {

struct MeanSe {
  double mean;
  double se;
};

MeanSe sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  const double mean = s / xs.size();
  double v = 0.0;
  for (double x : xs) v += (x - mean) * (x - mean);
  return {mean, std::sqrt(v / (xs.size() * (xs.size() - 1.0)))};
}

}  // namespace

TEST_CASE("sample_cue produces exactly unitary matrices") {
  RngStream rng(1);
  for (int dim : {2, 3, 4, 6, 8}) {
    const Matrix u = sample_cue(dim, rng);
    CHECK((u.adjoint() * u - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(sample_cue(1, rng), std::invalid_argument);
}

TEST_CASE("Haar first moment: E|U_11|^2 from the k=1 twirl oracle") {
  const int dim = 2;
  Matrix e00 = Matrix::Zero(dim, dim);
  e00(0, 0) = 1.0;
  const double oracle = twirl_global(e00, 1, dim)(0, 0).real();
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-12));

  const int n = 100000;
  std::vector<double> xs(n);
  RngStream rng(2);
  for (int i = 0; i < n; ++i) xs[i] = std::norm(sample_cue(dim, rng)(0, 0));
  const MeanSe m = sample_mean(xs);
  CHECK(std::abs(m.mean - oracle) < 3.0 * m.se);
}

TEST_CASE("Haar second moment: E|U_11|^4 from the k=2 twirl oracle") {
  const int dim = 4;
  Matrix e00 = Matrix::Zero(dim, dim);
  e00(0, 0) = 1.0;
  const Matrix op = tensor_product(e00, e00);
  const double oracle = twirl_global(op, 2, dim)(0, 0).real();
  CHECK(oracle == doctest::Approx(2.0 / (4.0 * 5.0)).epsilon(1e-12));  // 2/(d(d+1)) = 1/10

  const int n = 100000;
  std::vector<double> xs(n);
  RngStream rng(3);
  for (int i = 0; i < n; ++i) {
    const double p = std::norm(sample_cue(dim, rng)(0, 0));
    xs[i] = p * p;
  }
  const MeanSe m = sample_mean(xs);
  CHECK(std::abs(m.mean - oracle) < 3.0 * m.se);
}

TEST_CASE("UnitaryBatch") {
  SUBCASE("local batches assemble to the factor Kronecker product") {
    const UnitaryBatch batch(HilbertShape(2, 2), UnitaryVariant::kLocal, 4, 11);
    const SampledUnitary u = batch.get(2);
    REQUIRE(u.factors.size() == 2);
    const Matrix direct = tensor_product(u.factors[0], u.factors[1]);
    CHECK((u.assembled() - direct).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u.assembled().adjoint() * u.assembled() - Matrix::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
  SUBCASE("same seed gives bit-identical matrices") {
    const UnitaryBatch a(HilbertShape(2, 3), UnitaryVariant::kLocal, 8, 99);
    const UnitaryBatch b(HilbertShape(2, 3), UnitaryVariant::kLocal, 8, 99);
    for (int j : {0, 3, 7}) {
      const SampledUnitary ua = a.get(j), ub = b.get(j);
      for (int s = 0; s < 3; ++s) {
        CHECK((ua.factors[s] - ub.factors[s]).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
  SUBCASE("global batch elements are pairwise distinct") {
    const UnitaryBatch batch(HilbertShape(2, 3), UnitaryVariant::kGlobal, 100, 5);
    std::vector<Matrix> us;
    for (int j = 0; j < 100; ++j) us.push_back(batch.get(j).global);
    double min_gap = 1e300;
    for (int i = 0; i < 100; ++i) {
      for (int j = i + 1; j < 100; ++j) {
        min_gap = std::min(min_gap, (us[i] - us[j]).cwiseAbs().maxCoeff());
      }
    }
    CHECK(min_gap > 1e-6);
  }
  SUBCASE("index bounds") {
    const UnitaryBatch batch(HilbertShape(2, 1), UnitaryVariant::kGlobal, 3, 1);
    CHECK_THROWS_AS(batch.get(3), std::out_of_range);
    CHECK_THROWS_AS(batch.get(-1), std::out_of_range);
    CHECK_THROWS_AS(UnitaryBatch(HilbertShape(2, 1), UnitaryVariant::kGlobal, 0, 1),
                    std::invalid_argument);
  }
  SUBCASE("manifest comparison") {
    const UnitaryBatch a(HilbertShape(2, 2), UnitaryVariant::kLocal, 10, 1);
    const UnitaryBatch b(HilbertShape(2, 2), UnitaryVariant::kLocal, 10, 1);
    const UnitaryBatch c(HilbertShape(2, 2), UnitaryVariant::kLocal, 10, 2);
    const UnitaryBatch d(HilbertShape(2, 2), UnitaryVariant::kGlobal, 10, 1);
    CHECK(a.same_manifest(b));
    CHECK(!a.same_manifest(c));
    CHECK(!a.same_manifest(d));
  }
}

TEST_CASE("rotation_of") {
  SUBCASE("identity maps to identity") {
    const Eigen::Matrix3d q = rotation_of(Matrix::Identity(2, 2));
    CHECK((q - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("exp(-i theta sigma_z / 2) rotates about z by theta") {
    const double theta = 0.83;
    Matrix u(2, 2);
    u << std::exp(Complex(0, -theta / 2)), 0, 0, std::exp(Complex(0, theta / 2));
    const Eigen::Matrix3d q = rotation_of(u);
    Eigen::Matrix3d expected;
    expected << std::cos(theta), -std::sin(theta), 0, std::sin(theta), std::cos(theta), 0, 0, 0, 1;
    CHECK((q - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("random unitaries give special orthogonal matrices") {
    RngStream rng(7);
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix u = sample_cue(2, rng);
      const Eigen::Matrix3d q = rotation_of(u);
      CHECK((q.transpose() * q - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(q.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("rejects non-unitary input") {
    Matrix bad(2, 2);
    bad << 1, 1, 0, 1;
    CHECK_THROWS_AS(rotation_of(bad), std::invalid_argument);
    CHECK_THROWS_AS(rotation_of(Matrix::Identity(3, 3)), std::invalid_argument);
  }
}

TEST_CASE("left invariance of the CUE sampler") {
  // Moments of tr|VU| match those of tr|U| for any fixed V.
  RngStream vstream(17);
  const Matrix v = sample_cue(3, vstream);
  const int n = 10000;
  std::vector<double> with_v(n), without(n);
  RngStream rng_a(18), rng_b(19);
  for (int i = 0; i < n; ++i) {
    with_v[i] = std::norm((v * sample_cue(3, rng_a)).trace());
    without[i] = std::norm(sample_cue(3, rng_b).trace());
  }
  const MeanSe a = sample_mean(with_v);
  const MeanSe b = sample_mean(without);
  // E|tr U|^2 = 1 for the CUE.
  CHECK(std::abs(a.mean - b.mean) < 5.0 * std::hypot(a.se, b.se));
  CHECK(std::abs(a.mean - 1.0) < 5.0 * a.se);
}
