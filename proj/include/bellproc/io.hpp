#pragma once

// CSV and JSON forms of PmfTable and SamplePath. Reals are written with 17
// significant digits so that decimal round trips are exact.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellproc/dist.hpp"
#include "bellproc/process.hpp"

namespace bellproc::io {

using nlohmann::json;

/// Writes `v` with 17 significant digits.
std::string format_real(double v);

json to_json(const DegenParams& params);
DegenParams params_from_json(const json& j);

/// Columns: k,p.
void write_csv(std::ostream& os, const PmfTable& table);
/// Reads the k,p columns back; returns probabilities indexed by k.
std::vector<double> read_pmf_csv(std::istream& is);

json to_json(const PmfTable& table);
PmfTable pmf_table_from_json(const json& j);

/// Columns: time,size,cumulative_count.
void write_csv(std::ostream& os, const SamplePath& path);
std::vector<Burst> read_path_csv(std::istream& is);

json to_json(const SamplePath& path);
SamplePath sample_path_from_json(const json& j);

}  // namespace bellproc::io
