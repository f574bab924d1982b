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

#include "randmeas/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randmeas {

double HammingKernel::entry(std::int64_t s, std::int64_t t) const {
  double prod = 1.0;
  for (int i = 0; i < num_sites; ++i) {
    prod *= (s % local_dim == t % local_dim) ? static_cast<double>(local_dim) : -1.0;
    s /= local_dim;
    t /= local_dim;
  }
  return prod;
}

Eigen::MatrixXd HammingKernel::dense() const {
  const std::int64_t n = dim();
  Eigen::MatrixXd k(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) k(i, j) = entry(i, j);
  }
  return k;
}

Eigen::VectorXd apply_hamming_kernel(const HammingKernel& kernel, const Eigen::VectorXd& v) {
  const std::int64_t dim = kernel.dim();
  if (v.size() != dim) throw std::invalid_argument("kernel/vector dimension mismatch");
  const int d = kernel.local_dim;
  Eigen::VectorXd w = v;
  std::int64_t stride = dim / d;  // site 0 first (most significant digit)
  for (int site = 0; site < kernel.num_sites; ++site) {
    for (std::int64_t outer = 0; outer < dim; outer += stride * d) {
      for (std::int64_t inner = 0; inner < stride; ++inner) {
        const std::int64_t base = outer + inner;
        double sum = 0.0;
        for (int a = 0; a < d; ++a) sum += w(base + a * stride);
        for (int a = 0; a < d; ++a) {
          w(base + a * stride) = (d + 1) * w(base + a * stride) - sum;
        }
      }
    }
    stride /= d;
  }
  return w;
}

namespace {

// In-place mode-wise rows transform: M <- (I x..x u x..x I) M.
void apply_factor_rows(Matrix& m, const Matrix& u, std::int64_t stride, int d) {
  const std::int64_t dim = m.rows();
  Vector fiber(d), out(d);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (std::int64_t outer = 0; outer < dim; outer += stride * d) {
      for (std::int64_t inner = 0; inner < stride; ++inner) {
        const std::int64_t base = outer + inner;
        for (int a = 0; a < d; ++a) fiber(a) = m(base + a * stride, col);
        out.noalias() = u * fiber;
        for (int a = 0; a < d; ++a) m(base + a * stride, col) = out(a);
      }
    }
  }
}

void apply_factor_vector(Vector& v, const Matrix& u, std::int64_t stride, int d) {
  const std::int64_t dim = v.size();
  Vector fiber(d), out(d);
  for (std::int64_t outer = 0; outer < dim; outer += stride * d) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t base = outer + inner;
      for (int a = 0; a < d; ++a) fiber(a) = v(base + a * stride);
      out.noalias() = u * fiber;
      for (int a = 0; a < d; ++a) v(base + a * stride) = out(a);
    }
  }
}

Eigen::VectorXd validated_probs(Eigen::VectorXd p) {
  if (p.minCoeff() < -1e-12) throw std::runtime_error("negative outcome probability");
  if (std::abs(p.sum() - 1.0) > 1e-10) throw std::runtime_error("probabilities do not sum to 1");
  return p;
}

}  // namespace

Eigen::VectorXd probabilities(const DensityMatrix& rho, const SampledUnitary& u) {
  if (!(u.shape == rho.shape())) throw std::invalid_argument("probabilities: shape mismatch");
  const std::int64_t dim = rho.dim();
  if (u.variant == UnitaryVariant::kGlobal) {
    // diag(U rho U^dag) = rowwise sum of (U rho) .* conj(U).
    const Matrix m = u.global * rho.elements();
    return validated_probs(m.cwiseProduct(u.global.conjugate()).rowwise().sum().real());
  }
  Matrix m = rho.elements();
  const int d = rho.shape().local_dim;
  for (int site = 0; site < rho.shape().num_sites; ++site) {
    apply_factor_rows(m, u.factors[site], rho.shape().stride(site), d);
  }
  // Right-multiplication by U^dag transforms column fibers by conj(U).
  Matrix mt = m.transpose();
  for (int site = 0; site < rho.shape().num_sites; ++site) {
    apply_factor_rows(mt, u.factors[site].conjugate(), rho.shape().stride(site), d);
  }
  Eigen::VectorXd p(dim);
  for (std::int64_t s = 0; s < dim; ++s) p(s) = mt(s, s).real();
  return validated_probs(std::move(p));
}

Eigen::VectorXd probabilities(const StateVector& psi, const SampledUnitary& u) {
  if (!(u.shape == psi.shape())) throw std::invalid_argument("probabilities: shape mismatch");
  if (u.variant == UnitaryVariant::kGlobal) {
    return validated_probs((u.global * psi.amplitudes()).cwiseAbs2());
  }
  Vector v = psi.amplitudes();
  const int d = psi.shape().local_dim;
  for (int site = 0; site < psi.shape().num_sites; ++site) {
    apply_factor_vector(v, u.factors[site], psi.shape().stride(site), d);
  }
  return validated_probs(v.cwiseAbs2());
}

OutcomeRecord sample_counts(const Eigen::VectorXd& p, std::int64_t n_m, RngStream& rng,
                            int unitary_index) {
  if (n_m < 1) throw std::invalid_argument("sample_counts requires n_m >= 1");
  if (p.size() < 1 || p.minCoeff() < -1e-12 || std::abs(p.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("sample_counts: invalid probability vector");
  }
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += std::max(p(i), 0.0);
    cdf[i] = acc;
  }
  OutcomeRecord rec;
  rec.unitary_index = unitary_index;
  rec.n_m = n_m;
  const double total = cdf.back();
  for (std::int64_t shot = 0; shot < n_m; ++shot) {
    const double x = rng.uniform() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    const auto idx = static_cast<std::int64_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    ++rec.counts[idx];
  }
  return rec;
}

OutcomeRecord exact_record(const Eigen::VectorXd& p, int unitary_index) {
  OutcomeRecord rec;
  rec.unitary_index = unitary_index;
  rec.n_m = 0;
  rec.exact_probs = p;
  return rec;
}

double est_p_squared(const OutcomeRecord& rec, std::int64_t s) {
  if (rec.exact()) {
    const double p = rec.exact_probs(s);
    return p * p;
  }
  if (rec.n_m < 2) throw std::invalid_argument("est_p_squared requires n_m >= 2");
  const auto it = rec.counts.find(s);
  if (it == rec.counts.end()) return 0.0;
  const auto n = static_cast<double>(it->second);
  return n * (n - 1.0) / (static_cast<double>(rec.n_m) * (static_cast<double>(rec.n_m) - 1.0));
}

double est_p_pair(const OutcomeRecord& rec, std::int64_t s, std::int64_t s_prime) {
  if (s == s_prime) return est_p_squared(rec, s);
  if (rec.exact()) return rec.exact_probs(s) * rec.exact_probs(s_prime);
  if (rec.n_m < 2) throw std::invalid_argument("est_p_pair requires n_m >= 2");
  const auto a = rec.counts.find(s);
  const auto b = rec.counts.find(s_prime);
  if (a == rec.counts.end() || b == rec.counts.end()) return 0.0;
  return static_cast<double>(a->second) * static_cast<double>(b->second) /
         (static_cast<double>(rec.n_m) * (static_cast<double>(rec.n_m) - 1.0));
}

double sum_est_p_squared(const OutcomeRecord& rec) {
  if (rec.exact()) return rec.exact_probs.cwiseAbs2().sum();
  if (rec.n_m < 2) throw std::invalid_argument("sum_est_p_squared requires n_m >= 2");
  double acc = 0.0;
  for (const auto& [s, n] : rec.counts) {
    acc += static_cast<double>(n) * (static_cast<double>(n) - 1.0);
  }
  return acc / (static_cast<double>(rec.n_m) * (static_cast<double>(rec.n_m) - 1.0));
}

double est_p_power(const OutcomeRecord& rec, std::int64_t s, int k) {
  if (k < 1) throw std::invalid_argument("est_p_power requires k >= 1");
  if (rec.exact()) return std::pow(rec.exact_probs(s), k);
  if (rec.n_m < k) throw std::invalid_argument("est_p_power requires n_m >= k");
  const auto it = rec.counts.find(s);
  if (it == rec.counts.end()) return 0.0;
  double num = 1.0, den = 1.0;
  for (int j = 0; j < k; ++j) {
    num *= static_cast<double>(std::max<std::int64_t>(it->second - j, 0));
    den *= static_cast<double>(rec.n_m - j);
  }
  return num / den;
}

namespace {

Eigen::VectorXd dense_counts(const OutcomeRecord& rec, std::int64_t dim) {
  Eigen::VectorXd n = Eigen::VectorXd::Zero(dim);
  for (const auto& [s, c] : rec.counts) {
    if (s < 0 || s >= dim) throw std::invalid_argument("count index out of kernel range");
    n(s) = static_cast<double>(c);
  }
  return n;
}

bool same_record(const OutcomeRecord& a, const OutcomeRecord& b) {
  if (&a == &b) return true;
  return a.unitary_index == b.unitary_index && a.n_m == b.n_m && a.counts == b.counts &&
         a.exact_probs.size() == b.exact_probs.size() &&
         (a.exact_probs.size() == 0 || a.exact_probs == b.exact_probs);
}

}  // namespace

double kernel_quadratic_form(const OutcomeRecord& rec, const OutcomeRecord& rec2,
                             const HammingKernel& kernel, bool same_run) {
  const std::int64_t dim = kernel.dim();
  if (same_run && !same_record(rec, rec2)) {
    throw std::logic_error("kernel_quadratic_form: same_run requires identical records");
  }
  if (rec.exact() != rec2.exact() && same_run) {
    throw std::logic_error("kernel_quadratic_form: mixed exact/finite with same_run");
  }
  if (rec.exact() && rec2.exact()) {
    if (rec.exact_probs.size() != dim || rec2.exact_probs.size() != dim) {
      throw std::invalid_argument("kernel_quadratic_form: probability vector length mismatch");
    }
    return rec.exact_probs.dot(apply_hamming_kernel(kernel, rec2.exact_probs));
  }
  if (rec.exact() || rec2.exact()) {
    // Cross form between an exact and a finite record: p'K (n / N_M).
    const auto& ex = rec.exact() ? rec : rec2;
    const auto& fin = rec.exact() ? rec2 : rec;
    if (fin.n_m < 1) throw std::invalid_argument("kernel_quadratic_form: empty finite record");
    const Eigen::VectorXd n = dense_counts(fin, dim);
    return ex.exact_probs.dot(apply_hamming_kernel(kernel, n)) / static_cast<double>(fin.n_m);
  }
  const Eigen::VectorXd n1 = dense_counts(rec, dim);
  const double nm1 = static_cast<double>(rec.n_m);
  if (same_run) {
    if (rec.n_m < 2) throw std::invalid_argument("kernel_quadratic_form: same_run needs n_m >= 2");
    const Eigen::VectorXd m = apply_hamming_kernel(kernel, n1);
    const double dn = std::pow(static_cast<double>(kernel.local_dim), kernel.num_sites);
    return (n1.dot(m) - dn * nm1) / (nm1 * (nm1 - 1.0));
  }
  const Eigen::VectorXd n2 = dense_counts(rec2, dim);
  const double nm2 = static_cast<double>(rec2.n_m);
  return n1.dot(apply_hamming_kernel(kernel, n2)) / (nm1 * nm2);
}

namespace {

template <typename State>
std::vector<OutcomeRecord> simulate_records_impl(const State& state, const UnitaryBatch& batch,
                                                 std::int64_t n_m, std::uint64_t shot_seed) {
  std::vector<OutcomeRecord> out;
  out.reserve(batch.count());
  for (int j = 0; j < batch.count(); ++j) {
    const Eigen::VectorXd p = probabilities(state, batch.get(j));
    if (n_m == 0) {
      out.push_back(exact_record(p, j));
    } else {
      RngStream rng(derive_seed(shot_seed, StreamDomain::kShots, static_cast<std::uint64_t>(j)));
      out.push_back(sample_counts(p, n_m, rng, j));
    }
  }
  return out;
}

}  // namespace

std::vector<OutcomeRecord> simulate_records(const DensityMatrix& rho, const UnitaryBatch& batch,
                                            std::int64_t n_m, std::uint64_t shot_seed) {
  return simulate_records_impl(rho, batch, n_m, shot_seed);
}

std::vector<OutcomeRecord> simulate_records(const StateVector& psi, const UnitaryBatch& batch,
                                            std::int64_t n_m, std::uint64_t shot_seed) {
  return simulate_records_impl(psi, batch, n_m, shot_seed);
}

OutcomeRecord marginalize(const OutcomeRecord& rec, const HilbertShape& full,
                          const std::vector<int>& subsystem) {
  if (subsystem.empty()) throw std::invalid_argument("marginalize: empty subsystem");
  for (std::size_t i = 0; i < subsystem.size(); ++i) {
    if (subsystem[i] < 0 || subsystem[i] >= full.num_sites) {
      throw std::out_of_range("marginalize: site out of range");
    }
    if (i > 0 && subsystem[i] <= subsystem[i - 1]) {
      throw std::invalid_argument("marginalize: sites must be strictly ascending");
    }
  }
  if (static_cast<int>(subsystem.size()) == full.num_sites) return rec;
  const HilbertShape sub(full.local_dim, static_cast<int>(subsystem.size()));
  auto project = [&](std::int64_t s) {
    std::int64_t out = 0;
    for (int site : subsystem) out = out * full.local_dim + full.digit(s, site);
    return out;
  };
  OutcomeRecord out;
  out.unitary_index = rec.unitary_index;
  out.n_m = rec.n_m;
  if (rec.exact()) {
    out.exact_probs = Eigen::VectorXd::Zero(sub.total_dim);
    for (std::int64_t s = 0; s < rec.exact_probs.size(); ++s) {
      out.exact_probs(project(s)) += rec.exact_probs(s);
    }
  } else {
    for (const auto& [s, c] : rec.counts) out.counts[project(s)] += c;
  }
  return out;
}

}  // namespace randmeas
