#include "bellproc/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bellproc/error.hpp"

namespace bellproc::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_real(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error(Errc::parse, "trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(Errc::parse, "not a number: '" + s + "'");
  }
}

std::size_t parse_index(const std::string& s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(Errc::parse, "not a nonnegative integer: '" + s + "'");
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const DegenParams& params) {
  return {{"alpha", params.alpha()},
          {"theta", params.theta()},
          {"lambda", params.lambda()},
          {"validity", std::string(to_string(params.validity()))}};
}

DegenParams params_from_json(const json& j) {
  try {
    return validate(j.at("alpha").get<double>(), j.at("theta").get<double>(),
                    j.at("lambda").get<double>());
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("params: ") + e.what());
  }
}

void write_csv(std::ostream& os, const PmfTable& table) {
  os << "k,p\n";
  const auto p = table.probs();
  for (std::size_t k = 0; k < p.size(); ++k) os << k << ',' << format_real(p[k]) << '\n';
}

std::vector<double> read_pmf_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "k,p") throw Error(Errc::parse, "pmf csv: bad header");
  std::vector<double> probs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw Error(Errc::parse, "pmf csv: expected 2 columns");
    const std::size_t k = parse_index(cells[0]);
    if (k != probs.size()) throw Error(Errc::parse, "pmf csv: k out of sequence");
    probs.push_back(parse_real(cells[1]));
  }
  return probs;
}

json to_json(const PmfTable& table) {
  const auto p = table.probs();
  return {{"params", to_json(table.params())},
          {"probs", std::vector<double>(p.begin(), p.end())},
          {"tail_mass", table.tail_mass()},
          {"certified", table.certified()}};
}

PmfTable pmf_table_from_json(const json& j) {
  try {
    return PmfTable(params_from_json(j.at("params")), j.at("probs").get<std::vector<double>>(),
                    j.at("tail_mass").get<double>(), j.value("certified", false));
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("pmf table: ") + e.what());
  }
}

void write_csv(std::ostream& os, const SamplePath& path) {
  os << "time,size,cumulative_count\n";
  const auto b = path.bursts();
  const auto c = path.cumulative();
  for (std::size_t i = 0; i < b.size(); ++i)
    os << format_real(b[i].time) << ',' << b[i].size << ',' << c[i] << '\n';
}

std::vector<Burst> read_path_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "time,size,cumulative_count")
    throw Error(Errc::parse, "path csv: bad header");
  std::vector<Burst> bursts;
  std::size_t total = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw Error(Errc::parse, "path csv: expected 3 columns");
    Burst b{parse_real(cells[0]), parse_index(cells[1])};
    total += b.size;
    if (parse_index(cells[2]) != total)
      throw Error(Errc::parse, "path csv: cumulative_count is inconsistent");
    bursts.push_back(b);
  }
  return bursts;
}

json to_json(const SamplePath& path) {
  json bursts = json::array();
  const auto b = path.bursts();
  const auto c = path.cumulative();
  for (std::size_t i = 0; i < b.size(); ++i)
    bursts.push_back({{"time", b[i].time}, {"size", b[i].size}, {"cumulative_count", c[i]}});
  return {{"params", to_json(path.params())}, {"horizon", path.horizon()}, {"bursts", bursts}};
}

SamplePath sample_path_from_json(const json& j) {
  try {
    std::vector<Burst> bursts;
    for (const auto& b : j.at("bursts"))
      bursts.push_back({b.at("time").get<double>(), b.at("size").get<std::size_t>()});
    return SamplePath(params_from_json(j.at("params")), j.at("horizon").get<double>(),
                      std::move(bursts));
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("sample path: ") + e.what());
  }
}

}  // namespace bellproc::io
