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

#include "randmeas/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace randmeas {

namespace {

std::vector<std::int64_t> int64_list(const Json& j, const char* key) {
  std::vector<std::int64_t> out;
  const auto& v = j.at(key);
  auto parse_one = [](const Json& e) -> std::int64_t {
    if (e.is_string()) {
      if (e.get<std::string>() == "inf") return 0;
      throw DataFormatError("config: only the string \"inf\" is accepted in numeric lists");
    }
    return e.get<std::int64_t>();
  };
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(parse_one(e));
  } else {
    out.push_back(parse_one(v));
  }
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  if (j.contains("protocol")) c.protocol = j.at("protocol").get<std::string>();
  if (j.contains("variant")) c.variant = j.at("variant").get<std::string>();
  if (c.variant != "local" && c.variant != "global") {
    throw DataFormatError("config: variant must be 'local' or 'global'");
  }
  if (j.contains("states")) {
    c.states.clear();
    if (j.at("states").is_array()) {
      for (const auto& s : j.at("states")) c.states.push_back(s.get<std::string>());
    } else {
      c.states.push_back(j.at("states").get<std::string>());
    }
  }
  if (j.contains("local_dim")) c.local_dim = j.at("local_dim").get<int>();
  if (j.contains("d")) c.local_dim = j.at("d").get<int>();
  if (j.contains("n_sites")) {
    c.n_sites.clear();
    for (auto v : int64_list(j, "n_sites")) c.n_sites.push_back(static_cast<int>(v));
  }
  if (j.contains("n_u")) {
    c.n_u.clear();
    for (auto v : int64_list(j, "n_u")) c.n_u.push_back(static_cast<int>(v));
  }
  if (j.contains("n_m")) c.n_m = int64_list(j, "n_m");
  if (j.contains("trials")) c.trials = j.at("trials").get<int>();
  if (j.contains("ancilla_sites")) c.ancilla_sites = j.at("ancilla_sites").get<int>();
  if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("seed")) c.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output")) c.output = j.at("output").get<std::string>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  for (int n : c.n_sites) {
    if (n < 1) throw DataFormatError("config: n_sites entries must be positive");
  }
  for (int n : c.n_u) {
    if (n < 1) throw DataFormatError("config: n_u entries must be positive");
  }
  for (auto n : c.n_m) {
    if (n < 0) throw DataFormatError("config: n_m entries must be positive or \"inf\"");
  }
  if (c.trials < 1) throw DataFormatError("config: trials must be positive");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw DataFormatError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RANDMEAS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& fn, int threads) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct PreparedState {
  std::optional<StateVector> psi;   // pure kinds: fast simulation path
  std::optional<DensityMatrix> rho; // mixed kinds
  double purity_truth = 1.0;
};

PreparedState prepare_state(const std::string& name, const HilbertShape& shape, int ancilla,
                            std::uint64_t seed) {
  PreparedState out;
  if (name == "maximally_mixed") {
    out.rho = DensityMatrix::maximally_mixed(shape);
    out.purity_truth = 1.0 / static_cast<double>(shape.total_dim);
    return out;
  }
  if (name == "random_mixed") {
    out.rho = make_state(StateKind::kRandomMixed, shape, seed, ancilla);
    out.purity_truth = purity_exact(*out.rho);
    return out;
  }
  StateKind kind;
  if (name == "pure_product") {
    kind = StateKind::kPureProduct;
  } else if (name == "ghz") {
    kind = StateKind::kGhz;
  } else if (name == "random_pure") {
    kind = StateKind::kRandomPure;
  } else {
    throw DataFormatError("unknown state kind '" + name + "'");
  }
  out.psi = make_pure_state(kind, shape, seed);
  out.purity_truth = 1.0;
  return out;
}

std::vector<OutcomeRecord> simulate_prepared(const PreparedState& st, const UnitaryBatch& batch,
                                             std::int64_t n_m, std::uint64_t shot_seed) {
  return st.psi ? simulate_records(*st.psi, batch, n_m, shot_seed)
                : simulate_records(*st.rho, batch, n_m, shot_seed);
}

struct CellSpec {
  int state_idx, n_idx, nu_idx, nm_idx;
};

std::vector<CellSpec> enumerate_cells(const ExperimentConfig& c) {
  std::vector<CellSpec> cells;
  for (int s = 0; s < static_cast<int>(c.states.size()); ++s) {
    for (int n = 0; n < static_cast<int>(c.n_sites.size()); ++n) {
      for (int u = 0; u < static_cast<int>(c.n_u.size()); ++u) {
        for (int m = 0; m < static_cast<int>(c.n_m.size()); ++m) cells.push_back({s, n, u, m});
      }
    }
  }
  return cells;
}

struct TrialOutcome {
  double estimate = 0.0;
  double std_error = 0.0;
  double truth = 0.0;
  double abs_error = 0.0;
};

std::vector<SweepRow> aggregate_rows(const ExperimentConfig& c, const std::vector<CellSpec>& cells,
                                     const std::vector<TrialOutcome>& outcomes,
                                     const std::string& protocol) {
  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const CellSpec& cell = cells[ci];
    SweepRow row;
    row.protocol = protocol;
    row.state = c.states[cell.state_idx];
    row.variant = c.variant;
    row.n_sites = c.n_sites[cell.n_idx];
    row.local_dim = c.local_dim;
    row.n_u = c.n_u[cell.nu_idx];
    row.n_m = c.n_m[cell.nm_idx];
    row.trials = c.trials;
    row.seed = c.master_seed;
    double sum_v = 0, sum_se = 0, sum_truth = 0, sum_abs = 0, sum_sq = 0;
    for (int t = 0; t < c.trials; ++t) {
      const TrialOutcome& o = outcomes[ci * c.trials + t];
      sum_v += o.estimate;
      sum_se += o.std_error;
      sum_truth += o.truth;
      sum_abs += o.abs_error;
      sum_sq += o.abs_error * o.abs_error;
    }
    const double nt = static_cast<double>(c.trials);
    row.value = sum_v / nt;
    row.std_error = sum_se / nt;
    row.truth = sum_truth / nt;
    row.abs_error = sum_abs / nt;
    row.rms_error = std::sqrt(sum_sq / nt);
    rows.push_back(std::move(row));
  }
  return rows;
}

constexpr std::uint64_t kStateTag = 0x100000;
constexpr std::uint64_t kBatchTag = 0x200000;
constexpr std::uint64_t kShotsTag = 0x300000;

}  // namespace

std::vector<SweepRow> run_purity_scaling(const ExperimentConfig& c) {
  const auto cells = enumerate_cells(c);
  const UnitaryVariant variant =
      c.variant == "global" ? UnitaryVariant::kGlobal : UnitaryVariant::kLocal;
  std::vector<TrialOutcome> outcomes(cells.size() * c.trials);
  parallel_for(static_cast<int>(outcomes.size()), [&](int task) {
    const auto ci = static_cast<std::size_t>(task) / c.trials;
    const int trial = task % c.trials;
    const CellSpec& cell = cells[ci];
    const HilbertShape shape(c.local_dim, c.n_sites[cell.n_idx]);
    const std::uint64_t group = static_cast<std::uint64_t>(cell.state_idx) * 256 + cell.n_idx;
    const PreparedState st =
        prepare_state(c.states[cell.state_idx], shape, c.ancilla_sites,
                      derive_seed(c.master_seed, StreamDomain::kExperiment, kStateTag + group,
                                  static_cast<std::uint64_t>(trial)));
    const UnitaryBatch batch(shape, variant, c.n_u[cell.nu_idx],
                             derive_seed(c.master_seed, StreamDomain::kExperiment, kBatchTag + ci,
                                         static_cast<std::uint64_t>(trial)));
    const auto records = simulate_prepared(
        st, batch, c.n_m[cell.nm_idx],
        derive_seed(c.master_seed, StreamDomain::kExperiment, kShotsTag + ci,
                    static_cast<std::uint64_t>(trial)));
    EstimateMeta meta;
    meta.n_m = c.n_m[cell.nm_idx];
    meta.seed = batch.master_seed();
    EstimateReport rep;
    if (variant == UnitaryVariant::kGlobal) {
      rep = purity_global(records, shape.total_dim, meta);
    } else {
      std::vector<int> full(shape.num_sites);
      for (int i = 0; i < shape.num_sites; ++i) full[i] = i;
      rep = purity_local(records, shape, full, meta);
    }
    TrialOutcome out;
    out.estimate = rep.value;
    out.std_error = rep.std_error;
    out.truth = st.purity_truth;
    out.abs_error = std::abs(rep.value - st.purity_truth);
    outcomes[task] = out;
  }, c.threads);
  return aggregate_rows(c, cells, outcomes, c.variant == "global" ? "purity_global"
                                                                  : "purity_local");
}

std::vector<SweepRow> run_tomography_scaling(const ExperimentConfig& c) {
  const auto cells = enumerate_cells(c);
  const UnitaryVariant variant =
      c.variant == "global" ? UnitaryVariant::kGlobal : UnitaryVariant::kLocal;
  std::vector<TrialOutcome> outcomes(cells.size() * c.trials);
  parallel_for(static_cast<int>(outcomes.size()), [&](int task) {
    const auto ci = static_cast<std::size_t>(task) / c.trials;
    const int trial = task % c.trials;
    const CellSpec& cell = cells[ci];
    const HilbertShape shape(c.local_dim, c.n_sites[cell.n_idx]);
    const std::uint64_t group = static_cast<std::uint64_t>(cell.state_idx) * 256 + cell.n_idx;
    const PreparedState st =
        prepare_state(c.states[cell.state_idx], shape, c.ancilla_sites,
                      derive_seed(c.master_seed, StreamDomain::kExperiment, kStateTag + group,
                                  static_cast<std::uint64_t>(trial)));
    const UnitaryBatch batch(shape, variant, c.n_u[cell.nu_idx],
                             derive_seed(c.master_seed, StreamDomain::kExperiment, kBatchTag + ci,
                                         static_cast<std::uint64_t>(trial)));
    const auto records = simulate_prepared(
        st, batch, c.n_m[cell.nm_idx],
        derive_seed(c.master_seed, StreamDomain::kExperiment, kShotsTag + ci,
                    static_cast<std::uint64_t>(trial)));
    EstimateMeta meta;
    meta.n_m = c.n_m[cell.nm_idx];
    meta.seed = batch.master_seed();
    const EstimateReport rep = tomography(
        records, [&](int j) { return batch.get(j); }, shape, variant, meta);
    const Matrix truth =
        st.psi ? Matrix(st.psi->amplitudes() * st.psi->amplitudes().adjoint()) : st.rho->elements();
    TrialOutcome out;
    out.estimate = rep.matrix_trace;
    out.std_error = rep.std_error;
    out.truth = 0.0;
    out.abs_error = trace_norm_distance(rep.matrix, truth);
    outcomes[task] = out;
  }, c.threads);
  auto rows = aggregate_rows(c, cells, outcomes, "tomography");
  // value column of tomography rows is the mean trace distance itself.
  for (auto& row : rows) {
    row.value = row.abs_error;
    row.truth = 0.0;
  }
  return rows;
}

BlochDemoResult run_bloch_demo(const DensityMatrix& rho, int n_u, std::uint64_t seed) {
  const int n = rho.shape().num_sites;
  if (rho.shape().local_dim != 2 || n > 2) {
    throw std::invalid_argument("run_bloch_demo requires 1 or 2 qubits");
  }
  BlochDemoResult res;
  res.num_qubits = n;
  res.purity_truth = purity_exact(rho);
  const UnitaryBatch batch(rho.shape(), UnitaryVariant::kLocal, n_u, seed);
  std::vector<OutcomeRecord> records = simulate_records(rho, batch, 0, seed);
  res.z1.reserve(n_u);
  if (n == 1) {
    for (const auto& rec : records) res.z1.push_back(rec.exact_probs(0) - rec.exact_probs(1));
    const BlochVector bv = bloch_vector(rho);
    res.v_norm = bv.v.norm();
    std::vector<int> full{0};
    const EstimateReport rep = purity_local(records, rho.shape(), full);
    res.purity_estimate = rep.value;
    res.purity_std_error = rep.std_error;
  } else {
    res.z2.reserve(n_u);
    res.z12.reserve(n_u);
    for (const auto& rec : records) {
      const auto& p = rec.exact_probs;
      res.z1.push_back(p(0) + p(1) - p(2) - p(3));
      res.z2.push_back(p(0) - p(1) + p(2) - p(3));
      res.z12.push_back(p(0) - p(1) - p(2) + p(3));
    }
    const BlochMatrix bm = bloch_matrix(rho);
    res.v_norm = bm.v().norm();
    res.w_norm = bm.w().norm();
    res.r_norm = bm.correlation().norm();
    const BlochCheckReport rep = purity_local_bloch_check(rho, records);
    res.purity_estimate = rep.purity.value;
    res.purity_std_error = rep.purity.std_error;
  }
  auto raw_sd = [](const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x * x;
    return xs.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(xs.size()));
  };
  res.std_z1 = raw_sd(res.z1);
  res.std_z2 = raw_sd(res.z2);
  res.std_z12 = raw_sd(res.z12);
  if (n == 1 && res.v_norm > 1e-12) {
    // Kolmogorov-Smirnov distance of Z_U against uniform on [-|v|, |v|].
    std::vector<double> sorted = res.z1;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    const double nn = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double f = std::clamp((sorted[i] + res.v_norm) / (2.0 * res.v_norm), 0.0, 1.0);
      ks = std::max(ks, std::abs(f - static_cast<double>(i) / nn));
      ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / nn));
    }
    res.ks_statistic = ks;
  }
  return res;
}

void write_bloch_csv(std::ostream& out, const BlochDemoResult& result, int bins) {
  out << "statistic,bin_lo,bin_hi,count\n";
  auto emit = [&](const char* name, const std::vector<double>& xs) {
    if (xs.empty()) return;
    const double lo = -1.0, hi = 1.0;
    std::vector<std::int64_t> hist(bins, 0);
    for (double x : xs) {
      int b = static_cast<int>((x - lo) / (hi - lo) * bins);
      b = std::clamp(b, 0, bins - 1);
      ++hist[b];
    }
    for (int b = 0; b < bins; ++b) {
      out << name << ',' << format_double(lo + (hi - lo) * b / bins) << ','
          << format_double(lo + (hi - lo) * (b + 1) / bins) << ',' << hist[b] << '\n';
    }
  };
  emit("z1", result.z1);
  emit("z2", result.z2);
  emit("z12", result.z12);
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("fit_power_law requires at least 3 points");
  }
  const auto n = static_cast<double>(x.size());
  std::vector<double> lx(x.size()), ly(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) {
      throw std::invalid_argument("fit_power_law requires positive data");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = pairwise_sum(lx) / n;
  const double my = pairwise_sum(ly) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx < 1e-14) throw std::invalid_argument("fit_power_law: degenerate x values");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
    rss += r * r;
  }
  fit.exponent_std_error = std::sqrt(std::max(rss, 0.0) / (n - 2.0) / sxx);
  return fit;
}

ShotNoiseExponentFit fit_shot_noise_exponent(const std::vector<SweepRow>& rows) {
  // Per (state, N) group: rms error of the exact-mode cell is the
  // unitary-ensemble floor; finite-N_M cells in the shot-dominated regime
  // isolate the shot part in quadrature.
  struct Key {
    std::string state;
    int n;
    bool operator<(const Key& o) const {
      return state < o.state || (state == o.state && n < o.n);
    }
  };
  std::map<Key, double> floor_rms;
  for (const auto& r : rows) {
    if (r.n_m == 0) floor_rms[{r.state, r.n_sites}] = r.rms_error;
  }
  std::vector<Eigen::Vector3d> design;
  std::vector<double> target;
  for (const auto& r : rows) {
    if (r.n_m == 0) continue;
    const auto it = floor_rms.find({r.state, r.n_sites});
    if (it == floor_rms.end()) continue;
    const double shot_sq = r.rms_error * r.rms_error - it->second * it->second;
    // Keep cells where the shot part is at least on par with the floor.
    if (shot_sq <= it->second * it->second) continue;
    design.emplace_back(1.0, static_cast<double>(r.n_sites), std::log2(static_cast<double>(r.n_m)));
    target.push_back(std::log2(std::sqrt(shot_sq)));
  }
  if (design.size() < 4) {
    throw std::invalid_argument("fit_shot_noise_exponent: too few shot-dominated cells");
  }
  Eigen::MatrixXd a(design.size(), 3);
  Eigen::VectorXd b(design.size());
  for (std::size_t i = 0; i < design.size(); ++i) {
    a.row(i) = design[i].transpose();
    b(i) = target[i];
  }
  const Eigen::Vector3d coeffs = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  ShotNoiseExponentFit fit;
  fit.b = coeffs(1);
  fit.gamma = coeffs(2);
  fit.cells_used = static_cast<int>(design.size());
  return fit;
}

namespace {

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw DataFormatError("file '" + path + "': " + e.what());
  }
  return j;
}

LoadedRecords load_records_file(const std::string& path, const UnitaryBatch& batch) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open records file '" + path + "'");
  return read_records_jsonl(in, batch);
}

const std::vector<OutcomeRecord>& pick_state(const LoadedRecords& loaded,
                                             const std::string& label) {
  if (label.empty()) {
    if (loaded.by_state.size() != 1) {
      throw DataFormatError("records contain multiple states; pass an explicit state label");
    }
    return loaded.by_state.begin()->second;
  }
  const auto it = loaded.by_state.find(label);
  if (it == loaded.by_state.end()) {
    throw DataFormatError("records contain no state labelled '" + label + "'");
  }
  return it->second;
}

std::int64_t records_n_m(const std::vector<OutcomeRecord>& records) {
  return records.empty() ? 0 : records.front().n_m;
}

}  // namespace

std::vector<EstimateReport> ingest(const std::string& records_path,
                                   const std::string& manifest_path, const IngestOptions& options,
                                   const std::string& records2_path,
                                   const std::string& manifest2_path) {
  const UnitaryBatch batch = manifest_from_json(load_json_file(manifest_path));
  const LoadedRecords loaded = load_records_file(records_path, batch);
  EstimateMeta meta;
  meta.seed = batch.master_seed();

  if (options.protocol == "purity") {
    const auto& records = pick_state(loaded, options.state);
    meta.n_m = records_n_m(records);
    if (batch.variant() == UnitaryVariant::kGlobal) {
      return {purity_global(records, batch.shape().total_dim, meta)};
    }
    std::vector<int> subsystem = options.subsystem;
    if (subsystem.empty()) {
      subsystem.resize(batch.shape().num_sites);
      for (int i = 0; i < batch.shape().num_sites; ++i) subsystem[i] = i;
    }
    return {purity_local(records, batch.shape(), subsystem, meta)};
  }

  if (options.protocol == "overlap") {
    if (!records2_path.empty()) {
      if (manifest2_path.empty()) {
        throw DataFormatError("overlap ingest with two record files requires two manifests");
      }
      const UnitaryBatch batch2 = manifest_from_json(load_json_file(manifest2_path));
      const LoadedRecords loaded2 = load_records_file(records2_path, batch2);
      const auto& r1 = pick_state(loaded, options.state);
      const auto& r2 = pick_state(loaded2, options.state2);
      meta.n_m = records_n_m(r1);
      return {overlap(r1, r2, batch, batch2, meta)};
    }
    if (options.state.empty() || options.state2.empty()) {
      throw DataFormatError("overlap ingest from one file requires two state labels");
    }
    const auto& r1 = pick_state(loaded, options.state);
    const auto& r2 = pick_state(loaded, options.state2);
    meta.n_m = records_n_m(r1);
    return {overlap(r1, r2, batch, batch, meta)};
  }

  if (options.protocol == "tomography") {
    const std::string label =
        options.state.empty() && loaded.by_state.size() == 1 ? loaded.by_state.begin()->first
                                                             : options.state;
    const auto& records = pick_state(loaded, label);
    const auto uit = loaded.unitaries_by_state.find(label);
    if (uit == loaded.unitaries_by_state.end()) {
      throw DataFormatError("tomography ingest requires records with stored unitaries");
    }
    meta.n_m = records_n_m(records);
    const auto& unitaries = uit->second;
    return {tomography(
        records, [&unitaries](int j) { return unitaries[j]; }, batch.shape(), batch.variant(),
        meta)};
  }

  if (options.protocol == "renyi") {
    if (batch.variant() != UnitaryVariant::kGlobal) {
      throw DataFormatError("renyi ingest requires a global-unitary batch");
    }
    const auto& records = pick_state(loaded, options.state);
    meta.n_m = records_n_m(records);
    return {renyi_k_global(records, batch.shape().total_dim, options.renyi_k, meta)};
  }

  throw DataFormatError("unknown ingest protocol '" + options.protocol + "'");
}

}  // namespace randmeas
