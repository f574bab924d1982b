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

#include "randmeas/weingarten.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "randmeas/haar.hpp"
#include "randmeas/rng.hpp"

namespace randmeas {

Permutation Permutation::identity(int k) {
  Permutation p;
  p.images.resize(k);
  std::iota(p.images.begin(), p.images.end(), 0);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  Permutation out;
  out.images.resize(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) out.images[i] = images[other.images[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  out.images.resize(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) out.images[images[i]] = static_cast<int>(i);
  return out;
}

int Permutation::num_cycles() const {
  int count = 0;
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (seen[i]) continue;
    ++count;
    for (std::size_t j = i; !seen[j]; j = images[j]) seen[j] = true;
  }
  return count;
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<int> b(images.size(), 0);
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = images[j]) {
      seen[j] = true;
      ++len;
    }
    ++b[len - 1];
  }
  return b;
}

std::vector<Permutation> all_permutations(int k) {
  if (k < 1) throw std::invalid_argument("permutation order must be >= 1");
  std::vector<Permutation> out;
  Permutation p = Permutation::identity(k);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.images.begin(), p.images.end()));
  return out;
}

WeingartenTable weingarten_table(int k, int d) {
  if (k < 1 || k > 5) throw std::invalid_argument("weingarten_table supports 1 <= k <= 5");
  if (k > d) {
    throw std::domain_error("weingarten_table: Gram matrix is singular for k > d");
  }
  WeingartenTable t;
  t.k = k;
  t.d = d;
  t.perms = all_permutations(k);
  const int m = static_cast<int>(t.perms.size());
  t.gram.resize(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const int cycles = t.perms[a].compose(t.perms[b]).num_cycles();
      t.gram(a, b) = std::pow(static_cast<double>(d), cycles);
    }
  }
  t.weingarten = t.gram.inverse();
  if ((t.weingarten * t.gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::domain_error("weingarten_table: Gram matrix inversion failed");
  }
  return t;
}

std::vector<std::int64_t> perm_operator_images(const Permutation& pi, int d) {
  const int k = pi.order();
  const std::int64_t dim = checked_pow(d, k);
  std::vector<std::int64_t> image(dim);
  std::vector<int> s(k), t(k);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    std::int64_t rest = idx;
    for (int c = k - 1; c >= 0; --c) {
      s[c] = static_cast<int>(rest % d);
      rest /= d;
    }
    for (int c = 0; c < k; ++c) t[c] = s[pi.images[c]];
    std::int64_t out = 0;
    for (int c = 0; c < k; ++c) out = out * d + t[c];
    image[idx] = out;
  }
  return image;
}

Matrix perm_operator(const Permutation& pi, int d) {
  const auto image = perm_operator_images(pi, d);
  const auto dim = static_cast<std::int64_t>(image.size());
  Matrix w = Matrix::Zero(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i) w(image[i], i) = 1.0;
  return w;
}

namespace {

// Sum_I O(I, image[I]) = tr(W O) for the permutation with the given images.
Complex trace_against_perm(const Matrix& op, const std::vector<std::int64_t>& image) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < image.size(); ++i) {
    acc += op(static_cast<std::int64_t>(i), image[i]);
  }
  return acc;
}

}  // namespace

Matrix twirl_global(const Matrix& op, int k, int dim) {
  const WeingartenTable table = weingarten_table(k, dim);
  const std::int64_t full = checked_pow(dim, k);
  if (op.rows() != full || op.cols() != full) {
    throw std::invalid_argument("twirl_global: operator size does not match dim^k");
  }
  std::vector<std::vector<std::int64_t>> images;
  images.reserve(table.perms.size());
  for (const auto& p : table.perms) images.push_back(perm_operator_images(p, dim));

  std::vector<Complex> traces(table.perms.size());
  for (std::size_t s = 0; s < table.perms.size(); ++s) traces[s] = trace_against_perm(op, images[s]);

  Matrix out = Matrix::Zero(full, full);
  for (std::size_t a = 0; a < table.perms.size(); ++a) {
    Complex coeff(0.0, 0.0);
    for (std::size_t b = 0; b < table.perms.size(); ++b) {
      coeff += table.weingarten(a, b) * traces[b];
    }
    for (std::int64_t i = 0; i < full; ++i) out(images[a][i], i) += coeff;
  }
  return out;
}

std::vector<std::int64_t> local_perm_images(const std::vector<Permutation>& site_perms, int d) {
  const int n = static_cast<int>(site_perms.size());
  const int k = site_perms.front().order();
  const std::int64_t dim_site = checked_pow(d, n);
  const std::int64_t full = checked_pow(dim_site, k);
  std::vector<std::int64_t> image(full);
  // digits[c][i]: digit of copy c at site i; copy 1 of all sites is most
  // significant (copy-major layout).
  std::vector<std::vector<int>> s(k, std::vector<int>(n));
  for (std::int64_t idx = 0; idx < full; ++idx) {
    std::int64_t rest = idx;
    for (int c = k - 1; c >= 0; --c) {
      for (int i = n - 1; i >= 0; --i) {
        s[c][i] = static_cast<int>(rest % d);
        rest /= d;
      }
    }
    std::int64_t out = 0;
    for (int c = 0; c < k; ++c) {
      for (int i = 0; i < n; ++i) {
        out = out * d + s[site_perms[i].images[c]][i];
      }
    }
    image[idx] = out;
  }
  return image;
}

Matrix copy_major_kron(const std::vector<Matrix>& site_ops, int k, int d) {
  const int n = static_cast<int>(site_ops.size());
  const std::int64_t dim_site = checked_pow(d, n);
  const std::int64_t full = checked_pow(dim_site, k);
  const std::int64_t local = checked_pow(d, k);
  for (const auto& a : site_ops) {
    if (a.rows() != local || a.cols() != local) {
      throw std::invalid_argument("copy_major_kron: site operator has wrong dimension");
    }
  }
  // Local copy index of site i within global index I: gather digit of each
  // copy at site i.
  auto local_index = [&](std::int64_t global, int site) {
    std::int64_t li = 0;
    for (int c = 0; c < k; ++c) {
      std::int64_t shift = 1;
      for (int steps = 0; steps < (k - 1 - c) * n + (n - 1 - site); ++steps) shift *= d;
      li = li * d + (global / shift) % d;
    }
    return li;
  };
  Matrix out(full, full);
  for (std::int64_t i = 0; i < full; ++i) {
    for (std::int64_t j = 0; j < full; ++j) {
      Complex prod(1.0, 0.0);
      for (int site = 0; site < n && prod != Complex(0.0, 0.0); ++site) {
        prod *= site_ops[site](local_index(i, site), local_index(j, site));
      }
      out(i, j) = prod;
    }
  }
  return out;
}

Matrix twirl_local(const Matrix& op, int k, int d, int num_sites) {
  const WeingartenTable table = weingarten_table(k, d);
  const std::int64_t dim_site = checked_pow(d, num_sites);
  const std::int64_t full = checked_pow(dim_site, k);
  if (op.rows() != full || op.cols() != full) {
    throw std::invalid_argument("twirl_local: operator size does not match (d^N)^k");
  }
  const auto kfact = static_cast<std::int64_t>(table.perms.size());
  std::int64_t tuples = 1;
  for (int i = 0; i < num_sites; ++i) {
    tuples *= kfact;
    if (tuples > 46656) {  // 6^6; twirl cost grows as tuples^2
      throw DimensionCapError("twirl_local: permutation tuple count too large");
    }
  }

  // Enumerate S_k^{xN} tuples by odometer over per-site permutation indices.
  std::vector<std::vector<int>> tuple_indices(tuples, std::vector<int>(num_sites));
  for (std::int64_t t = 0; t < tuples; ++t) {
    std::int64_t rest = t;
    for (int i = num_sites - 1; i >= 0; --i) {
      tuple_indices[t][i] = static_cast<int>(rest % kfact);
      rest /= kfact;
    }
  }
  std::vector<std::vector<std::int64_t>> images(tuples);
  std::vector<Complex> traces(tuples);
  for (std::int64_t t = 0; t < tuples; ++t) {
    std::vector<Permutation> perms(num_sites);
    for (int i = 0; i < num_sites; ++i) perms[i] = table.perms[tuple_indices[t][i]];
    images[t] = local_perm_images(perms, d);
    traces[t] = trace_against_perm(op, images[t]);
  }

  Matrix out = Matrix::Zero(full, full);
  for (std::int64_t a = 0; a < tuples; ++a) {
    Complex coeff(0.0, 0.0);
    for (std::int64_t b = 0; b < tuples; ++b) {
      double w = 1.0;
      for (int i = 0; i < num_sites; ++i) {
        w *= table.weingarten(tuple_indices[a][i], tuple_indices[b][i]);
      }
      coeff += w * traces[b];
    }
    if (coeff == Complex(0.0, 0.0)) continue;
    for (std::int64_t i = 0; i < full; ++i) out(images[a][i], i) += coeff;
  }
  return out;
}

std::int64_t cycle_type_count(const std::vector<int>& b) {
  const int k_from_type = [&] {
    int acc = 0;
    for (std::size_t l = 0; l < b.size(); ++l) acc += static_cast<int>(l + 1) * b[l];
    return acc;
  }();
  if (k_from_type != static_cast<int>(b.size())) {
    throw std::invalid_argument("cycle_type_count: sum of l*b_l must equal k");
  }
  const int k = k_from_type;
  std::int64_t num = 1;
  for (int i = 2; i <= k; ++i) num *= i;
  std::int64_t den = 1;
  for (std::size_t l = 0; l < b.size(); ++l) {
    for (int j = 2; j <= b[l]; ++j) den *= j;
    for (int j = 0; j < b[l]; ++j) den *= static_cast<std::int64_t>(l + 1);
  }
  return num / den;
}

std::vector<std::vector<int>> cycle_types(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> b(k, 0);
  // Recursive partition enumeration: place cycles of decreasing length.
  auto rec = [&](auto&& self, int remaining, int max_len) -> void {
    if (remaining == 0) {
      out.push_back(b);
      return;
    }
    for (int l = std::min(remaining, max_len); l >= 1; --l) {
      ++b[l - 1];
      self(self, remaining - l, l);
      --b[l - 1];
    }
  };
  rec(rec, k, k);
  return out;
}

double mc_twirl_check(int k, int dim, int n_u, std::uint64_t seed) {
  const Matrix test_op = random_hermitian(checked_pow(dim, k), derive_seed(seed, StreamDomain::kTwirlCheck));
  const Matrix exact = twirl_global(test_op, k, dim);
  Matrix acc = Matrix::Zero(test_op.rows(), test_op.cols());
  for (int j = 0; j < n_u; ++j) {
    RngStream rng(derive_seed(seed, StreamDomain::kTwirlCheck, static_cast<std::uint64_t>(j) + 1));
    const Matrix u = sample_cue(dim, rng);
    Matrix uk = u;
    for (int c = 1; c < k; ++c) uk = tensor_product(uk, u);
    acc += uk.adjoint() * test_op * uk;
  }
  acc /= static_cast<double>(n_u);
  return (acc - exact).cwiseAbs().maxCoeff();
}

}  // namespace randmeas
