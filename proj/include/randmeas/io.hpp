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

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "randmeas/estimators.hpp"
#include "randmeas/weingarten.hpp"

namespace randmeas {

using Json = nlohmann::json;

/// Matrices serialize as {"d": local dim, "n": sites, "re": [row-major],
/// "im": [row-major]}; complex entries are IEEE-754 double pairs.
Json matrix_to_json(const Matrix& m, int local_dim, int num_sites);
Matrix matrix_from_json(const Json& j, int* local_dim = nullptr, int* num_sites = nullptr);

Json density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const Json& j);

/// Batch manifest {"variant", "d", "n", "n_u", "master_seed"}.
Json manifest_to_json(const UnitaryBatch& batch);
UnitaryBatch manifest_from_json(const Json& j);

/// Base-d digit string of a basis index, site 0 leftmost (d <= 10).
std::string index_to_bitstring(std::int64_t index, const HilbertShape& shape);
std::int64_t bitstring_to_index(const std::string& s, const HilbertShape& shape);

/// One JSON-lines object per unitary per state:
///   {"u": j, "state": label, "n_m": shots, "counts": {"0110": n, ...}}
/// Exact-mode records carry "n_m": 0 and "probs": [...]. When
/// `with_unitaries` is set, each line also stores the applied unitary
/// ("unitary" matrix JSON for global batches, "unitary_factors" list for
/// local ones) as required by tomography.
void write_records_jsonl(std::ostream& out, const std::vector<OutcomeRecord>& records,
                         const UnitaryBatch& batch, const std::string& state_label,
                         bool with_unitaries = false);

struct LoadedRecords {
  HilbertShape shape;
  // Per state label, records ordered by unitary index 0..n_u-1.
  std::map<std::string, std::vector<OutcomeRecord>> by_state;
  // Present only if the file stored unitaries; indexed like the records.
  std::map<std::string, std::vector<SampledUnitary>> unitaries_by_state;
};

/// Parses and validates a JSON-lines record stream against a manifest.
/// Violations (bad schema, count sums, duplicate or missing unitary
/// indices) raise DataFormatError naming the offending line.
LoadedRecords read_records_jsonl(std::istream& in, const UnitaryBatch& batch);

Json report_to_json(const EstimateReport& report);
Json weingarten_table_to_json(const WeingartenTable& table);

/// Shortest round-trip decimal formatting used for all CSV numbers.
std::string format_double(double x);

/// One row of a parameter-sweep CSV; every row is self-describing.
struct SweepRow {
  std::string protocol;
  std::string state;
  std::string variant;
  int n_sites = 0;
  int local_dim = 2;
  int n_u = 0;
  std::int64_t n_m = 0;  // 0 = exact mode, printed as "inf"
  int trials = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double std_error = 0.0;
  double truth = 0.0;
  double abs_error = 0.0;
  double rms_error = 0.0;
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

}  // namespace randmeas
