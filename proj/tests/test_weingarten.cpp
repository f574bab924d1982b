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
#include <map>

#include "randmeas/haar.hpp"
#include "randmeas/weingarten.hpp"

using namespace randmeas;

namespace {

Matrix random_complex(std::int64_t dim, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix g(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    for (std::int64_t j = 0; j < dim; ++j) {
      auto [re, im] = rng.normal_pair();
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

Matrix explicit_swap(int d) {
  Matrix s = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  }
  return s;
}

}  // namespace

TEST_CASE("permutation machinery") {
  const auto perms3 = all_permutations(3);
  REQUIRE(perms3.size() == 6);
  CHECK(perms3[0].images == std::vector<int>{0, 1, 2});  // lexicographic order
  CHECK(perms3[1].images == std::vector<int>{0, 2, 1});
  CHECK(perms3[5].images == std::vector<int>{2, 1, 0});

  const Permutation cycle{{1, 2, 0}};
  CHECK(cycle.num_cycles() == 1);
  CHECK(cycle.cycle_type() == std::vector<int>{0, 0, 1});
  CHECK(cycle.compose(cycle.inverse()).images == Permutation::identity(3).images);

  const Permutation swap01{{1, 0, 2}};
  CHECK(swap01.num_cycles() == 2);
  CHECK(swap01.cycle_type() == std::vector<int>{1, 1, 0});
}

TEST_CASE("cycle_type_count against brute-force enumeration of S_3 and S_4") {
  for (int k : {3, 4}) {
    std::map<std::vector<int>, std::int64_t> census;
    for (const auto& p : all_permutations(k)) ++census[p.cycle_type()];
    std::int64_t total = 0;
    for (const auto& type : cycle_types(k)) {
      const std::int64_t expected = census.at(type);
      CHECK(cycle_type_count(type) == expected);
      total += expected;
    }
    std::int64_t kfact = 1;
    for (int i = 2; i <= k; ++i) kfact *= i;
    CHECK(total == kfact);
  }
  // Frozen values for S_3: identity 1, transpositions 3, 3-cycles 2.
  CHECK(cycle_type_count({3, 0, 0}) == 1);
  CHECK(cycle_type_count({1, 1, 0}) == 3);
  CHECK(cycle_type_count({0, 0, 1}) == 2);
  CHECK_THROWS_AS(cycle_type_count({1, 0, 0}), std::invalid_argument);
}

TEST_CASE("perm_operator") {
  SUBCASE("identity permutation gives the identity with trace d^k") {
    const Matrix w = perm_operator(Permutation::identity(2), 3);
    CHECK((w - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.trace().real() == doctest::Approx(9.0));
  }
  SUBCASE("k=2 transposition is the swap with trace d") {
    const Matrix w = perm_operator(Permutation{{1, 0}}, 2);
    CHECK((w - explicit_swap(2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.trace().real() == doctest::Approx(2.0));
  }
  SUBCASE("three-cycle cubes to the identity") {
    const Matrix w = perm_operator(Permutation{{1, 2, 0}}, 2);
    CHECK(((w * w * w) - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(w.trace().real() == doctest::Approx(2.0));  // one cycle
  }
  SUBCASE("trace equals d^#cycles for all of S_4 at d = 3") {
    for (const auto& p : all_permutations(4)) {
      const Matrix w = perm_operator(p, 3);
      CHECK(w.trace().real() == doctest::Approx(std::pow(3.0, p.num_cycles())));
    }
  }
}

TEST_CASE("weingarten_table") {
  SUBCASE("k=2, d=2 closed-form values") {
    const WeingartenTable t = weingarten_table(2, 2);
    Eigen::MatrixXd q_expected(2, 2);
    q_expected << 4, 2, 2, 4;
    CHECK((t.gram - q_expected).cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd c_expected(2, 2);
    c_expected << 1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 1.0 / 3.0;
    CHECK((t.weingarten - c_expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("k=1 gives C = [1/d]") {
    for (int d : {2, 3, 4, 5}) {
      const WeingartenTable t = weingarten_table(1, d);
      CHECK(t.weingarten(0, 0) == doctest::Approx(1.0 / d).epsilon(1e-14));
    }
  }
  SUBCASE("k=3, d=3 is a faithful inverse pair") {
    const WeingartenTable t = weingarten_table(3, 3);
    CHECK((t.weingarten * t.gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((t.gram - t.gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("k > d is reported as singular") {
    CHECK_THROWS_AS(weingarten_table(3, 2), std::domain_error);
  }
  SUBCASE("C is a class function of the permutation product") {
    // With Q_{pi,sigma} = d^#cycles(pi sigma), the inverse C depends only on
    // the cycle type of pi sigma. (For k <= 2 all permutations are
    // involutions, so the pi sigma^-1 form coincides.)
    const WeingartenTable t = weingarten_table(3, 4);
    std::map<std::vector<int>, double> seen;
    for (std::size_t a = 0; a < t.perms.size(); ++a) {
      for (std::size_t b = 0; b < t.perms.size(); ++b) {
        const auto type = t.perms[a].compose(t.perms[b]).cycle_type();
        const double val = t.weingarten(a, b);
        const auto it = seen.find(type);
        if (it == seen.end()) {
          seen[type] = val;
        } else {
          CHECK(val == doctest::Approx(it->second).epsilon(1e-12));
        }
      }
    }
    CHECK(seen.size() == cycle_types(3).size());

    const WeingartenTable t2 = weingarten_table(2, 3);
    for (std::size_t a = 0; a < t2.perms.size(); ++a) {
      for (std::size_t b = 0; b < t2.perms.size(); ++b) {
        const auto via_inverse = t2.perms[a].compose(t2.perms[b].inverse()).cycle_type();
        const auto via_product = t2.perms[a].compose(t2.perms[b]).cycle_type();
        CHECK(via_inverse == via_product);
      }
    }
  }
  SUBCASE("row sums are 1/D_k") {
    for (int dim : {2, 3, 4, 8}) {
      for (int k = 1; k <= std::min(4, dim); ++k) {
        const WeingartenTable t = weingarten_table(k, dim);
        double dk = 1.0;
        for (int i = 0; i < k; ++i) dk *= dim + i;
        for (Eigen::Index row = 0; row < t.weingarten.rows(); ++row) {
          CHECK(t.weingarten.row(row).sum() == doctest::Approx(1.0 / dk).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("twirl_global") {
  SUBCASE("k=1 collapses to (tr O / d) I") {
    for (int d : {2, 3, 5}) {
      const Matrix o = random_complex(d, 31 + d);
      const Matrix expected = Matrix::Identity(d, d) * (o.trace() / static_cast<double>(d));
      CHECK((twirl_global(o, 1, d) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("k=2 matches the four-term closed form") {
    for (int d : {2, 3, 4}) {
      const Matrix o = random_complex(static_cast<std::int64_t>(d) * d, 41 + d);
      const Matrix id = Matrix::Identity(d * d, d * d);
      const Matrix sw = explicit_swap(d);
      const Complex tr_o = o.trace();
      const Complex tr_so = (sw * o).trace();
      const double dd = d;
      const Matrix expected =
          (id * tr_o + sw * tr_so - (sw * tr_o + id * tr_so) / dd) / (dd * dd - 1.0);
      CHECK((twirl_global(o, 2, d) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("permutation operators are fixed points") {
    for (const auto& p : all_permutations(2)) {
      const Matrix w = perm_operator(p, 3);
      CHECK((twirl_global(w, 2, 3) - w).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (const auto& p : all_permutations(3)) {
      const Matrix w = perm_operator(p, 3);
      CHECK((twirl_global(w, 3, 3) - w).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("projector, trace preservation, unitary invariance, self-duality") {
    const int d = 3, k = 2;
    const Matrix o = random_complex(9, 53);
    const Matrix once = twirl_global(o, k, d);
    CHECK((twirl_global(once, k, d) - once).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(once.trace() - o.trace()) < 1e-10);

    RngStream rng(54);
    const Matrix v = sample_cue(d, rng);
    const Matrix vk = tensor_product(v, v);
    CHECK((once * vk - vk * once).cwiseAbs().maxCoeff() < 1e-10);

    const Matrix a = random_complex(9, 55);
    const Complex lhs = (a * twirl_global(o, k, d)).trace();
    const Complex rhs = (twirl_global(a, k, d) * o).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("twirl_local") {
  SUBCASE("N=1 coincides with the global twirl") {
    const Matrix o = random_complex(9, 61);
    CHECK((twirl_local(o, 2, 3, 1) - twirl_global(o, 2, 3)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("factorizes over sites for product operators") {
    const int d = 2, k = 2, n = 2;
    std::vector<Matrix> site_ops = {random_complex(4, 62), random_complex(4, 63)};
    const Matrix product = copy_major_kron(site_ops, k, d);
    const Matrix lhs = twirl_local(product, k, d, n);
    std::vector<Matrix> twirled_sites = {twirl_global(site_ops[0], k, d),
                                         twirl_global(site_ops[1], k, d)};
    const Matrix rhs = copy_major_kron(twirled_sites, k, d);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("swap identity for the two-qubit purity kernel") {
    const int d = 2, n = 2;
    const HilbertShape shape(d, n);
    Matrix o = Matrix::Zero(16, 16);
    for (std::int64_t s = 0; s < 4; ++s) {
      for (std::int64_t t = 0; t < 4; ++t) {
        double entry = 1.0;
        for (int site = 0; site < n; ++site) {
          entry *= (shape.digit(s, site) == shape.digit(t, site)) ? d : -1.0;
        }
        o(s * 4 + t, s * 4 + t) = entry;
      }
    }
    CHECK((twirl_local(o, 2, d, n) - explicit_swap(4)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("local permutation tuples are fixed points") {
    const auto perms = all_permutations(2);
    for (const auto& p0 : perms) {
      for (const auto& p1 : perms) {
        const auto images = local_perm_images({p0, p1}, 2);
        Matrix w = Matrix::Zero(16, 16);
        for (std::size_t i = 0; i < images.size(); ++i) {
          w(images[i], static_cast<std::int64_t>(i)) = 1.0;
        }
        CHECK((twirl_local(w, 2, 2, 2) - w).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("mc_twirl_check converges at the CLT rate") {
  CHECK(mc_twirl_check(1, 2, 100000, 71) < 0.02);
  CHECK(mc_twirl_check(2, 2, 100000, 72) < 0.05);

  std::vector<double> nus = {2500, 10000, 40000};
  std::vector<double> devs;
  for (double n : nus) devs.push_back(mc_twirl_check(2, 2, static_cast<int>(n), 73));
  // Deviation halves when N_U quadruples.
  const double slope = std::log(devs[2] / devs[0]) / std::log(nus[2] / nus[0]);
  CHECK(std::abs(slope + 0.5) < 0.1);
}
