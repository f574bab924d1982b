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

#include "randmeas/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace randmeas {

Json matrix_to_json(const Matrix& m, int local_dim, int num_sites) {
  Json j;
  j["d"] = local_dim;
  j["n"] = num_sites;
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Matrix matrix_from_json(const Json& j, int* local_dim, int* num_sites) {
  if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("re") ||
      !j.contains("im")) {
    throw DataFormatError("matrix JSON requires keys d, n, re, im");
  }
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  const std::int64_t dim = checked_pow(d, n);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() ||
      static_cast<std::int64_t>(re.size()) != dim * dim ||
      static_cast<std::int64_t>(im.size()) != dim * dim) {
    throw DataFormatError("matrix JSON re/im length must be (d^n)^2");
  }
  Matrix m(dim, dim);
  std::int64_t idx = 0;
  for (std::int64_t r = 0; r < dim; ++r) {
    for (std::int64_t c = 0; c < dim; ++c, ++idx) {
      m(r, c) = Complex(re.at(idx).get<double>(), im.at(idx).get<double>());
    }
  }
  if (local_dim) *local_dim = d;
  if (num_sites) *num_sites = n;
  return m;
}

Json density_matrix_to_json(const DensityMatrix& rho) {
  return matrix_to_json(rho.elements(), rho.shape().local_dim, rho.shape().num_sites);
}

DensityMatrix density_matrix_from_json(const Json& j) {
  int d = 0, n = 0;
  Matrix m = matrix_from_json(j, &d, &n);
  return DensityMatrix(HilbertShape(d, n), std::move(m));
}

Json manifest_to_json(const UnitaryBatch& batch) {
  Json j;
  j["variant"] = batch.variant() == UnitaryVariant::kGlobal ? "global" : "local";
  j["d"] = batch.shape().local_dim;
  j["n"] = batch.shape().num_sites;
  j["n_u"] = batch.count();
  j["master_seed"] = batch.master_seed();
  return j;
}

UnitaryBatch manifest_from_json(const Json& j) {
  for (const char* key : {"variant", "d", "n", "n_u", "master_seed"}) {
    if (!j.contains(key)) {
      throw DataFormatError(std::string("batch manifest missing key '") + key + "'");
    }
  }
  const std::string variant = j.at("variant").get<std::string>();
  if (variant != "global" && variant != "local") {
    throw DataFormatError("batch manifest variant must be 'global' or 'local'");
  }
  return UnitaryBatch(HilbertShape(j.at("d").get<int>(), j.at("n").get<int>()),
                      variant == "global" ? UnitaryVariant::kGlobal : UnitaryVariant::kLocal,
                      j.at("n_u").get<int>(), j.at("master_seed").get<std::uint64_t>());
}

std::string index_to_bitstring(std::int64_t index, const HilbertShape& shape) {
  if (shape.local_dim > 10) {
    throw DataFormatError("bitstring serialization supports local dimension <= 10");
  }
  std::string s(shape.num_sites, '0');
  for (int i = shape.num_sites - 1; i >= 0; --i) {
    s[i] = static_cast<char>('0' + index % shape.local_dim);
    index /= shape.local_dim;
  }
  return s;
}

std::int64_t bitstring_to_index(const std::string& s, const HilbertShape& shape) {
  if (static_cast<int>(s.size()) != shape.num_sites) {
    throw DataFormatError("bitstring length does not match number of sites");
  }
  std::int64_t idx = 0;
  for (char c : s) {
    const int digit = c - '0';
    if (digit < 0 || digit >= shape.local_dim) {
      throw DataFormatError("bitstring digit out of range for local dimension");
    }
    idx = idx * shape.local_dim + digit;
  }
  return idx;
}

void write_records_jsonl(std::ostream& out, const std::vector<OutcomeRecord>& records,
                         const UnitaryBatch& batch, const std::string& state_label,
                         bool with_unitaries) {
  const HilbertShape& shape = batch.shape();
  for (const auto& rec : records) {
    Json line;
    line["u"] = rec.unitary_index;
    line["state"] = state_label;
    line["n_m"] = rec.n_m;
    if (rec.exact()) {
      std::vector<double> probs(rec.exact_probs.data(),
                                rec.exact_probs.data() + rec.exact_probs.size());
      line["probs"] = probs;
    } else {
      Json counts = Json::object();
      for (const auto& [s, c] : rec.counts) counts[index_to_bitstring(s, shape)] = c;
      line["counts"] = counts;
    }
    if (with_unitaries) {
      const SampledUnitary u = batch.get(rec.unitary_index);
      if (u.variant == UnitaryVariant::kGlobal) {
        line["unitary"] = matrix_to_json(u.global, shape.local_dim, shape.num_sites);
      } else {
        Json factors = Json::array();
        for (const auto& f : u.factors) factors.push_back(matrix_to_json(f, shape.local_dim, 1));
        line["unitary_factors"] = factors;
      }
    }
    out << line.dump() << '\n';
  }
}

namespace {

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  throw DataFormatError("records line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

LoadedRecords read_records_jsonl(std::istream& in, const UnitaryBatch& batch) {
  LoadedRecords out;
  out.shape = batch.shape();
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::vector<bool>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      line_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("u") || !j.contains("state") || !j.contains("n_m")) {
      line_error(line_no, "record requires keys u, state, n_m");
    }
    const int u = j.at("u").get<int>();
    if (u < 0 || u >= batch.count()) line_error(line_no, "unitary index outside batch manifest");
    const std::string state = j.at("state").get<std::string>();
    const auto n_m = j.at("n_m").get<std::int64_t>();
    if (n_m < 0) line_error(line_no, "n_m must be >= 0");

    OutcomeRecord rec;
    rec.unitary_index = u;
    rec.n_m = n_m;
    if (n_m == 0) {
      if (!j.contains("probs")) line_error(line_no, "exact record (n_m = 0) requires probs");
      const auto& probs = j.at("probs");
      if (!probs.is_array() ||
          static_cast<std::int64_t>(probs.size()) != batch.shape().total_dim) {
        line_error(line_no, "probs length must equal Hilbert space dimension");
      }
      rec.exact_probs.resize(batch.shape().total_dim);
      for (std::int64_t s = 0; s < rec.exact_probs.size(); ++s) {
        rec.exact_probs(s) = probs.at(s).get<double>();
      }
      if (std::abs(rec.exact_probs.sum() - 1.0) > 1e-12) {
        line_error(line_no, "exact probabilities do not sum to 1");
      }
    } else {
      if (!j.contains("counts") || !j.at("counts").is_object()) {
        line_error(line_no, "finite record requires a counts object");
      }
      std::int64_t total = 0;
      for (const auto& [key, val] : j.at("counts").items()) {
        std::int64_t idx;
        try {
          idx = bitstring_to_index(key, batch.shape());
        } catch (const DataFormatError& e) {
          line_error(line_no, e.what());
        }
        const auto c = val.get<std::int64_t>();
        if (c < 0) line_error(line_no, "negative count");
        rec.counts[idx] += c;
        total += c;
      }
      if (total != n_m) line_error(line_no, "counts sum to " + std::to_string(total) +
                                                 " but n_m is " + std::to_string(n_m));
    }

    if (j.contains("unitary") || j.contains("unitary_factors")) {
      SampledUnitary su;
      su.shape = batch.shape();
      if (j.contains("unitary")) {
        su.variant = UnitaryVariant::kGlobal;
        su.global = matrix_from_json(j.at("unitary"));
        if (su.global.rows() != batch.shape().total_dim) {
          line_error(line_no, "stored unitary dimension mismatch");
        }
      } else {
        su.variant = UnitaryVariant::kLocal;
        for (const auto& f : j.at("unitary_factors")) {
          su.factors.push_back(matrix_from_json(f));
          if (su.factors.back().rows() != batch.shape().local_dim) {
            line_error(line_no, "stored unitary factor dimension mismatch");
          }
        }
        if (static_cast<int>(su.factors.size()) != batch.shape().num_sites) {
          line_error(line_no, "stored unitary factor count mismatch");
        }
      }
      auto& uvec = out.unitaries_by_state[state];
      uvec.resize(batch.count());
      uvec[u] = std::move(su);
    }

    auto& vec = out.by_state[state];
    auto& mask = seen[state];
    vec.resize(batch.count());
    mask.resize(batch.count(), false);
    if (mask[u]) line_error(line_no, "duplicate record for state '" + state + "' unitary " +
                                         std::to_string(u));
    mask[u] = true;
    vec[u] = std::move(rec);
  }
  for (const auto& [state, mask] : seen) {
    for (int u = 0; u < batch.count(); ++u) {
      if (!mask[u]) {
        throw DataFormatError("records missing state '" + state + "' unitary " +
                              std::to_string(u));
      }
    }
  }
  for (const auto& [state, unitaries] : out.unitaries_by_state) {
    for (int u = 0; u < batch.count(); ++u) {
      const SampledUnitary& su = unitaries[u];
      if (su.global.size() == 0 && su.factors.empty()) {
        throw DataFormatError("records for state '" + state + "' store unitaries only on some "
                              "lines (missing at unitary " + std::to_string(u) + ")");
      }
    }
  }
  if (out.by_state.empty()) throw DataFormatError("records stream contains no records");
  return out;
}

Json report_to_json(const EstimateReport& report) {
  Json j;
  j["protocol"] = report.protocol;
  j["value"] = report.value;
  j["std_error"] = report.std_error;
  j["n_u"] = report.meta.n_u;
  j["n_m"] = report.meta.n_m;
  j["seed"] = report.meta.seed;
  if (!report.meta.subsystem.empty()) j["subsystem"] = report.meta.subsystem;
  if (report.warning_nonpositive) j["warning_nonpositive"] = true;
  if (report.matrix.size() > 0) {
    j["matrix_trace"] = report.matrix_trace;
    j["matrix"] = matrix_to_json(report.matrix, static_cast<int>(report.matrix.rows()), 1);
  }
  if (!report.moments.empty()) {
    j["moments"] = report.moments;
    j["moment_errors"] = report.moment_errors;
  }
  return j;
}

Json weingarten_table_to_json(const WeingartenTable& table) {
  Json j;
  j["k"] = table.k;
  j["d"] = table.d;
  Json perms = Json::array();
  for (const auto& p : table.perms) {
    Json entry;
    entry["images"] = p.images;
    entry["cycle_type"] = p.cycle_type();
    entry["num_cycles"] = p.num_cycles();
    perms.push_back(entry);
  }
  j["permutations"] = perms;
  const auto mat_to_rows = [](const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  j["gram"] = mat_to_rows(table.gram);
  j["weingarten"] = mat_to_rows(table.weingarten);
  return j;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "protocol,state,variant,n_sites,local_dim,n_u,n_m,trials,seed,value,std_error,truth,"
         "abs_error,rms_error\n";
  for (const auto& r : rows) {
    out << r.protocol << ',' << r.state << ',' << r.variant << ',' << r.n_sites << ','
        << r.local_dim << ',' << r.n_u << ',';
    if (r.n_m == 0) {
      out << "inf";
    } else {
      out << r.n_m;
    }
    out << ',' << r.trials << ',' << r.seed << ',' << format_double(r.value) << ','
        << format_double(r.std_error) << ',' << format_double(r.truth) << ','
        << format_double(r.abs_error) << ',' << format_double(r.rms_error) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw DataFormatError("empty CSV");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 14) {
      throw DataFormatError("CSV line " + std::to_string(line_no) + ": expected 14 fields");
    }
    SweepRow r;
    r.protocol = fields[0];
    r.state = fields[1];
    r.variant = fields[2];
    r.n_sites = std::stoi(fields[3]);
    r.local_dim = std::stoi(fields[4]);
    r.n_u = std::stoi(fields[5]);
    r.n_m = fields[6] == "inf" ? 0 : std::stoll(fields[6]);
    r.trials = std::stoi(fields[7]);
    r.seed = std::stoull(fields[8]);
    r.value = std::stod(fields[9]);
    r.std_error = std::stod(fields[10]);
    r.truth = std::stod(fields[11]);
    r.abs_error = std::stod(fields[12]);
    r.rms_error = std::stod(fields[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace randmeas
