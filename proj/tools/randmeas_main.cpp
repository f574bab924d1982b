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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "randmeas/experiments.hpp"
#include "randmeas/io.hpp"
#include "randmeas/weingarten.hpp"

namespace {

using namespace randmeas;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDimCap = 4;

std::vector<std::int64_t> parse_int_list(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      out.push_back(0);
    } else {
      out.push_back(std::stoll(item));
    }
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("cannot open output file '" + path + "'");
  out << content;
}

struct ScalingArgs {
  std::string config_path;
  std::string output;
  std::string variant;
  std::string states;
  std::string n_sites, n_u, n_m;
  int local_dim = 0;
  int trials = 0;
  std::int64_t seed = -1;
  int threads = 0;
};

void add_scaling_flags(CLI::App* cmd, ScalingArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--output,-o", args.output, "output CSV path ('-' for stdout)");
  cmd->add_option("--variant", args.variant, "local | global");
  cmd->add_option("--states", args.states,
                  "comma list: pure_product,ghz,random_pure,random_mixed");
  cmd->add_option("--n-sites", args.n_sites, "comma list of site counts");
  cmd->add_option("--n-u", args.n_u, "comma list of unitary counts");
  cmd->add_option("--n-m", args.n_m, "comma list of shot counts ('inf' for exact)");
  cmd->add_option("--d", args.local_dim, "local dimension");
  cmd->add_option("--trials", args.trials, "independent experiments per cell");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--threads", args.threads, "worker threads (default: env/hardware)");
}

ExperimentConfig resolve_config(const ScalingArgs& args, const std::string& protocol) {
  ExperimentConfig c;
  if (!args.config_path.empty()) c = load_config(args.config_path);
  c.protocol = protocol;
  if (!args.variant.empty()) c.variant = args.variant;
  if (c.variant != "local" && c.variant != "global") {
    throw std::invalid_argument("variant must be 'local' or 'global'");
  }
  if (!args.states.empty()) {
    c.states.clear();
    std::stringstream ss(args.states);
    std::string item;
    while (std::getline(ss, item, ',')) c.states.push_back(item);
  }
  if (!args.n_sites.empty()) {
    c.n_sites.clear();
    for (auto v : parse_int_list(args.n_sites)) c.n_sites.push_back(static_cast<int>(v));
  }
  if (!args.n_u.empty()) {
    c.n_u.clear();
    for (auto v : parse_int_list(args.n_u)) c.n_u.push_back(static_cast<int>(v));
  }
  if (!args.n_m.empty()) c.n_m = parse_int_list(args.n_m);
  if (args.local_dim > 0) c.local_dim = args.local_dim;
  if (args.trials > 0) c.trials = args.trials;
  if (args.seed >= 0) c.master_seed = static_cast<std::uint64_t>(args.seed);
  if (args.threads > 0) c.threads = args.threads;
  if (!args.output.empty()) c.output = args.output;
  return c;
}

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

StateKind parse_kind(const std::string& kind) {
  if (kind == "pure_product") return StateKind::kPureProduct;
  if (kind == "ghz") return StateKind::kGhz;
  if (kind == "random_pure") return StateKind::kRandomPure;
  if (kind == "random_mixed") return StateKind::kRandomMixed;
  throw std::invalid_argument("unknown state kind '" + kind + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"randomized-measurement toolbox: purity, overlap, tomography and moment "
               "estimation for qudit lattice systems"};
  app.require_subcommand(1);

  // ---- purity-scaling / tomography-scaling ----
  ScalingArgs purity_args, tomo_args;
  CLI::App* purity_cmd =
      app.add_subcommand("purity-scaling", "statistical error of the purity estimate over a "
                                           "(state, N, N_U, N_M) grid");
  add_scaling_flags(purity_cmd, purity_args);
  CLI::App* tomo_cmd = app.add_subcommand(
      "tomography-scaling", "trace distance of reconstructed density matrices over a grid");
  add_scaling_flags(tomo_cmd, tomo_args);

  // ---- bloch-demo ----
  std::string bloch_state = "random_pure";
  int bloch_qubits = 1;
  int bloch_n_u = 10000;
  std::uint64_t bloch_seed = 7;
  std::uint64_t bloch_state_seed = 11;
  std::string bloch_output = "-";
  int bloch_ancilla = 1;
  CLI::App* bloch_cmd = app.add_subcommand(
      "bloch-demo", "sample Z_U histograms for a 1- or 2-qubit state; sqrt(3) std(Z_U) "
                    "estimates |v| and 3 std(Z12) estimates |R|");
  bloch_cmd->add_option("--qubits", bloch_qubits, "1 or 2")->check(CLI::Range(1, 2));
  bloch_cmd->add_option("--state", bloch_state, "state kind");
  bloch_cmd->add_option("--state-seed", bloch_state_seed, "state preparation seed");
  bloch_cmd->add_option("--ancilla", bloch_ancilla, "ancilla sites for random_mixed");
  bloch_cmd->add_option("--n-u", bloch_n_u, "number of random unitaries");
  bloch_cmd->add_option("--seed", bloch_seed, "unitary ensemble seed");
  bloch_cmd->add_option("--output,-o", bloch_output, "histogram CSV path");

  // ---- overlap (simulation) ----
  struct {
    int d = 2, n = 3, n_u = 1000;
    std::int64_t n_m = 0;
    std::uint64_t seed = 1, state_seed1 = 1, state_seed2 = 2;
    std::string variant = "local", state1 = "random_pure", state2 = "random_pure";
    int ancilla = 1;
  } ov;
  CLI::App* overlap_cmd =
      app.add_subcommand("overlap", "estimate tr(rho1 rho2) with a shared unitary batch");
  overlap_cmd->add_option("--d", ov.d);
  overlap_cmd->add_option("--n", ov.n);
  overlap_cmd->add_option("--n-u", ov.n_u);
  overlap_cmd->add_option("--n-m", ov.n_m, "shots per unitary (0 = exact)");
  overlap_cmd->add_option("--seed", ov.seed);
  overlap_cmd->add_option("--variant", ov.variant);
  overlap_cmd->add_option("--state1", ov.state1);
  overlap_cmd->add_option("--state2", ov.state2);
  overlap_cmd->add_option("--state-seed1", ov.state_seed1);
  overlap_cmd->add_option("--state-seed2", ov.state_seed2);
  overlap_cmd->add_option("--ancilla", ov.ancilla);

  // ---- loschmidt ----
  struct {
    int d = 2, n = 3, n_u = 1000;
    std::int64_t n_m = 0;
    double t = 1.0;
    std::uint64_t seed = 1, h_seed1 = 1, h_seed2 = 2;
    std::string h1_file, h2_file;
    std::string state = "pure_product";
    std::uint64_t state_seed = 1;
  } le;
  CLI::App* loschmidt_cmd = app.add_subcommand(
      "loschmidt", "Loschmidt echo |<psi0|e^{iH2 t}e^{-iH1 t}|psi0>|^2 from two forward "
                   "evolutions measured with the same unitaries");
  loschmidt_cmd->add_option("--d", le.d);
  loschmidt_cmd->add_option("--n", le.n);
  loschmidt_cmd->add_option("--t", le.t, "evolution time (units of 1/energy)");
  loschmidt_cmd->add_option("--n-u", le.n_u);
  loschmidt_cmd->add_option("--n-m", le.n_m);
  loschmidt_cmd->add_option("--seed", le.seed);
  loschmidt_cmd->add_option("--h-seed1", le.h_seed1, "seed for random Hermitian H1");
  loschmidt_cmd->add_option("--h-seed2", le.h_seed2, "seed for random Hermitian H2");
  loschmidt_cmd->add_option("--h1-file", le.h1_file, "matrix JSON for H1 (overrides seed)");
  loschmidt_cmd->add_option("--h2-file", le.h2_file, "matrix JSON for H2 (overrides seed)");
  loschmidt_cmd->add_option("--state", le.state, "initial pure state kind");
  loschmidt_cmd->add_option("--state-seed", le.state_seed);

  // ---- renyi-k ----
  struct {
    int d = 4, n = 1, k = 3, n_u = 10000;
    std::int64_t n_m = 0;
    std::uint64_t seed = 1, state_seed = 1;
    std::string state = "random_mixed";
    int ancilla = 1;
  } rk;
  CLI::App* renyi_cmd = app.add_subcommand(
      "renyi-k", "tr rho^l for l = 2..k from k-th order moments (global unitaries)");
  renyi_cmd->add_option("--d", rk.d);
  renyi_cmd->add_option("--n", rk.n);
  renyi_cmd->add_option("--k", rk.k)->check(CLI::Range(2, 5));
  renyi_cmd->add_option("--n-u", rk.n_u);
  renyi_cmd->add_option("--n-m", rk.n_m);
  renyi_cmd->add_option("--seed", rk.seed);
  renyi_cmd->add_option("--state", rk.state);
  renyi_cmd->add_option("--state-seed", rk.state_seed);
  renyi_cmd->add_option("--ancilla", rk.ancilla);

  // ---- ingest ----
  IngestOptions ingest_opts;
  std::string ingest_records, ingest_manifest, ingest_records2, ingest_manifest2;
  std::string ingest_subsystem;
  CLI::App* ingest_cmd = app.add_subcommand(
      "ingest", "run an estimator pipeline on externally recorded measurement data");
  ingest_cmd->add_option("--records", ingest_records, "JSON-lines records path")->required();
  ingest_cmd->add_option("--manifest", ingest_manifest, "batch manifest JSON path")->required();
  ingest_cmd->add_option("--protocol", ingest_opts.protocol, "purity | overlap | tomography | renyi");
  ingest_cmd->add_option("--state", ingest_opts.state, "state label");
  ingest_cmd->add_option("--state2", ingest_opts.state2, "overlap partner label");
  ingest_cmd->add_option("--records2", ingest_records2, "second records file (overlap)");
  ingest_cmd->add_option("--manifest2", ingest_manifest2, "second manifest (overlap)");
  ingest_cmd->add_option("--subsystem", ingest_subsystem, "comma list of kept sites (purity)");
  ingest_cmd->add_option("--k", ingest_opts.renyi_k, "moment order (renyi)");

  // ---- export-records ----
  struct {
    int d = 2, n = 2, n_u = 100;
    std::int64_t n_m = 100;
    std::uint64_t seed = 1, state_seed = 1, shot_seed = 2;
    std::string variant = "local", state = "ghz", label;
    int ancilla = 1;
    bool with_unitaries = false;
    std::string records_out, manifest_out;
  } ex;
  CLI::App* export_cmd = app.add_subcommand(
      "export-records", "simulate randomized measurements and write records JSONL + manifest "
                        "(the input format of 'ingest')");
  export_cmd->add_option("--d", ex.d);
  export_cmd->add_option("--n", ex.n);
  export_cmd->add_option("--n-u", ex.n_u);
  export_cmd->add_option("--n-m", ex.n_m, "shots per unitary (0 = exact probabilities)");
  export_cmd->add_option("--seed", ex.seed, "batch master seed");
  export_cmd->add_option("--shot-seed", ex.shot_seed);
  export_cmd->add_option("--variant", ex.variant);
  export_cmd->add_option("--state", ex.state);
  export_cmd->add_option("--state-seed", ex.state_seed);
  export_cmd->add_option("--ancilla", ex.ancilla);
  export_cmd->add_option("--label", ex.label, "state label in the records (default: state kind)");
  export_cmd->add_flag("--with-unitaries", ex.with_unitaries,
                       "store each applied unitary (required for tomography ingest)");
  export_cmd->add_option("--records-out", ex.records_out, "records JSONL path")->required();
  export_cmd->add_option("--manifest-out", ex.manifest_out, "manifest JSON path")->required();

  // ---- selftest ----
  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "quick oracle identities (swap kernel, closed forms)");

  // ---- dump-weingarten ----
  int wg_k = 2, wg_d = 2;
  CLI::App* wg_cmd = app.add_subcommand("dump-weingarten", "debug dump of a Weingarten table");
  wg_cmd->add_option("--k", wg_k)->check(CLI::Range(1, 5));
  wg_cmd->add_option("--d", wg_d);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (purity_cmd->parsed() || tomo_cmd->parsed()) {
    const bool is_purity = purity_cmd->parsed();
    const ExperimentConfig config = resolve_config(is_purity ? purity_args : tomo_args,
                                                   is_purity ? "purity-scaling"
                                                             : "tomography-scaling");
    const std::vector<SweepRow> rows =
        is_purity ? run_purity_scaling(config) : run_tomography_scaling(config);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    write_output(config.output, csv.str());
    return kExitOk;
  }

  if (bloch_cmd->parsed()) {
    const HilbertShape shape(2, bloch_qubits);
    const DensityMatrix rho =
        make_state(parse_kind(bloch_state), shape, bloch_state_seed, bloch_ancilla);
    const BlochDemoResult res = run_bloch_demo(rho, bloch_n_u, bloch_seed);
    std::ostringstream csv;
    write_bloch_csv(csv, res);
    write_output(bloch_output, csv.str());
    Json summary;
    summary["qubits"] = res.num_qubits;
    summary["n_u"] = bloch_n_u;
    summary["sqrt3_std_z1"] = std::sqrt(3.0) * res.std_z1;
    summary["v_norm"] = res.v_norm;
    if (res.num_qubits == 2) {
      summary["sqrt3_std_z2"] = std::sqrt(3.0) * res.std_z2;
      summary["w_norm"] = res.w_norm;
      summary["three_std_z12"] = 3.0 * res.std_z12;
      summary["r_norm"] = res.r_norm;
    } else {
      summary["ks_statistic"] = res.ks_statistic;
    }
    summary["purity_estimate"] = res.purity_estimate;
    summary["purity_std_error"] = res.purity_std_error;
    summary["purity_truth"] = res.purity_truth;
    std::cerr << summary.dump(2) << '\n';
    return kExitOk;
  }

  if (overlap_cmd->parsed()) {
    const HilbertShape shape(ov.d, ov.n);
    const UnitaryVariant variant =
        ov.variant == "global" ? UnitaryVariant::kGlobal : UnitaryVariant::kLocal;
    const UnitaryBatch batch(shape, variant, ov.n_u, ov.seed);
    auto make_records = [&](const std::string& kind, std::uint64_t state_seed,
                            std::uint64_t shot_tag) {
      const StateKind sk = parse_kind(kind);
      if (sk == StateKind::kRandomMixed) {
        return simulate_records(make_state(sk, shape, state_seed, ov.ancilla), batch, ov.n_m,
                                derive_seed(ov.seed, shot_tag));
      }
      return simulate_records(make_pure_state(sk, shape, state_seed), batch, ov.n_m,
                              derive_seed(ov.seed, shot_tag));
    };
    const auto r1 = make_records(ov.state1, ov.state_seed1, 101);
    const auto r2 = make_records(ov.state2, ov.state_seed2, 102);
    EstimateMeta meta;
    meta.n_m = ov.n_m;
    const EstimateReport rep = overlap(r1, r2, batch, batch, meta);
    std::cout << report_to_json(rep).dump(2) << '\n';
    return kExitOk;
  }

  if (loschmidt_cmd->parsed()) {
    const HilbertShape shape(le.d, le.n);
    const StateVector psi0 = make_pure_state(parse_kind(le.state), shape, le.state_seed);
    Matrix h1 = le.h1_file.empty() ? random_hermitian(shape.total_dim, le.h_seed1)
                                   : matrix_from_json(load_json_file(le.h1_file));
    Matrix h2 = le.h2_file.empty() ? random_hermitian(shape.total_dim, le.h_seed2)
                                   : matrix_from_json(load_json_file(le.h2_file));
    const UnitaryBatch batch(shape, UnitaryVariant::kLocal, le.n_u, le.seed);
    const EstimateReport rep =
        loschmidt_echo(psi0, h1, h2, le.t, batch, le.n_m, derive_seed(le.seed, 17));
    std::cout << report_to_json(rep).dump(2) << '\n';
    return kExitOk;
  }

  if (renyi_cmd->parsed()) {
    const HilbertShape shape(rk.d, rk.n);
    const UnitaryBatch batch(shape, UnitaryVariant::kGlobal, rk.n_u, rk.seed);
    const StateKind sk = parse_kind(rk.state);
    std::vector<OutcomeRecord> records;
    if (sk == StateKind::kRandomMixed) {
      records = simulate_records(make_state(sk, shape, rk.state_seed, rk.ancilla), batch, rk.n_m,
                                 derive_seed(rk.seed, 31));
    } else {
      records = simulate_records(make_pure_state(sk, shape, rk.state_seed), batch, rk.n_m,
                                 derive_seed(rk.seed, 31));
    }
    EstimateMeta meta;
    meta.n_m = rk.n_m;
    meta.seed = rk.seed;
    const EstimateReport rep = renyi_k_global(records, shape.total_dim, rk.k, meta);
    std::cout << report_to_json(rep).dump(2) << '\n';
    return kExitOk;
  }

  if (export_cmd->parsed()) {
    const HilbertShape shape(ex.d, ex.n);
    const UnitaryVariant variant =
        ex.variant == "global" ? UnitaryVariant::kGlobal : UnitaryVariant::kLocal;
    const UnitaryBatch batch(shape, variant, ex.n_u, ex.seed);
    const StateKind kind = parse_kind(ex.state);
    std::vector<OutcomeRecord> records;
    if (kind == StateKind::kRandomMixed) {
      records = simulate_records(make_state(kind, shape, ex.state_seed, ex.ancilla), batch, ex.n_m,
                                 ex.shot_seed);
    } else {
      records =
          simulate_records(make_pure_state(kind, shape, ex.state_seed), batch, ex.n_m, ex.shot_seed);
    }
    std::ofstream rec_out(ex.records_out, std::ios::binary);
    if (!rec_out) throw DataFormatError("cannot open output file '" + ex.records_out + "'");
    write_records_jsonl(rec_out, records, batch, ex.label.empty() ? ex.state : ex.label,
                        ex.with_unitaries);
    std::ofstream man_out(ex.manifest_out, std::ios::binary);
    if (!man_out) throw DataFormatError("cannot open output file '" + ex.manifest_out + "'");
    man_out << manifest_to_json(batch).dump(2) << '\n';
    return kExitOk;
  }

  if (ingest_cmd->parsed()) {
    if (!ingest_subsystem.empty()) {
      for (auto v : parse_int_list(ingest_subsystem)) {
        ingest_opts.subsystem.push_back(static_cast<int>(v));
      }
    }
    const auto reports =
        ingest(ingest_records, ingest_manifest, ingest_opts, ingest_records2, ingest_manifest2);
    Json out = Json::array();
    for (const auto& rep : reports) out.push_back(report_to_json(rep));
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }

  if (selftest_cmd->parsed()) {
    bool ok = true;
    auto check = [&ok](const std::string& name, bool pass) {
      std::cout << (pass ? "PASS " : "FAIL ") << name << '\n';
      ok = ok && pass;
    };
    // Swap kernel identity on one and two qubits.
    for (int n = 1; n <= 2; ++n) {
      const HammingKernel kernel{2, n};
      const std::int64_t dim = checked_pow(2, n);
      Matrix o = Matrix::Zero(dim * dim, dim * dim);
      for (std::int64_t s = 0; s < dim; ++s) {
        for (std::int64_t t = 0; t < dim; ++t) {
          o(s * dim + t, s * dim + t) = kernel.entry(s, t);
        }
      }
      std::vector<Permutation> swaps(n, Permutation{{1, 0}});
      const Matrix twirled = twirl_local(o, 2, 2, n);
      const auto images = local_perm_images(swaps, 2);
      Matrix swap_op = Matrix::Zero(dim * dim, dim * dim);
      for (std::size_t i = 0; i < images.size(); ++i) {
        swap_op(images[i], static_cast<std::int64_t>(i)) = 1.0;
      }
      check("swap identity N=" + std::to_string(n),
            (twirled - swap_op).cwiseAbs().maxCoeff() < 1e-10);
    }
    // k = 1 closed form on a random operator.
    {
      const int d = 3;
      const Matrix o = random_hermitian(d, 5);
      const Matrix lhs = twirl_global(o, 1, d);
      const Matrix rhs = Matrix::Identity(d, d) * (o.trace() / static_cast<double>(d));
      check("k=1 closed form", (lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
    return ok ? kExitOk : 1;
  }

  if (wg_cmd->parsed()) {
    std::cout << weingarten_table_to_json(weingarten_table(wg_k, wg_d)).dump(2) << '\n';
    return kExitOk;
  }

  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DimensionCapError& e) {
    std::cerr << "dimension cap error: " << e.what() << '\n';
    return kExitDimCap;
  } catch (const DataFormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
