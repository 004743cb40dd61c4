#include "bellproc/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellproc/error.hpp"
#include "bellproc/io.hpp"
#include "bellproc/process.hpp"
#include "bellproc/rng.hpp"
#include "bellproc/sampler.hpp"
#include "bellproc/stats.hpp"

namespace bellproc::cli {

namespace {

using nlohmann::json;

[[noreturn]] void usage(const std::string& msg) { throw Error(Errc::parse, msg); }

double parse_real(const std::string& flag, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v, std::chars_format::general);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    usage(flag + ": expected a finite decimal number, got '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& flag, const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v, 10);
  if (ec != std::errc() || ptr != end || s.empty())
    usage(flag + ": expected a nonnegative decimal integer, got '" + s + "'");
  return v;
}

// Raw flag values as typed; numeric conversion happens after CLI11 is done so
// that every flag is read as plain decimal.
struct RawFlags {
  std::string alpha = "1", theta = "1", lambda = "1", t = "1", horizon = "1";
  std::string n = "1", paths = "1", seed, tail_tol, marginal;
  std::string method = "inverse-cdf", format = "csv", out;
  std::vector<std::string> perturb;
};

void add_params(CLI::App* sub, RawFlags& f) {
  sub->add_option("--alpha", f.alpha, "rate parameter alpha > 0");
  sub->add_option("--theta", f.theta, "scale parameter theta > 0");
  sub->add_option("--lambda", f.lambda, "degeneracy parameter in (0, 1]");
  sub->add_option("--tail-tol", f.tail_tol, "tail mass allowed beyond the cutoff");
  sub->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", f.out, "output file (default stdout)");
}

void add_seed(CLI::App* sub, RawFlags& f) {
  sub->add_option("--seed", f.seed, "64-bit seed (fallback: BELLPROC_SEED)");
}

void require_positive(const std::string& flag, double v) {
  if (!(v > 0.0)) usage(flag + " must be > 0");
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv, const char* env_seed) {
  CLI::App app{"Degenerate Bell distribution and counting process toolkit", "bellproc"};
  app.require_subcommand(1, 1);
  RawFlags f;

  auto* table = app.add_subcommand("table", "pmf and cdf rows up to the certified cutoff");
  add_params(table, f);
  table->add_option("--t", f.t, "time of the marginal (scales alpha)");

  auto* moments = app.add_subcommand("moments", "mean, variance and jump law");
  add_params(moments, f);
  moments->add_option("--t", f.t, "time of the marginal (scales alpha)");

  auto* sample = app.add_subcommand("sample", "draw variates");
  add_params(sample, f);
  add_seed(sample, f);
  sample->add_option("--t", f.t, "time of the marginal (scales alpha)");
  sample->add_option("--n", f.n, "number of variates");
  sample->add_option("--method", f.method, "inverse-cdf | compound")
      ->check(CLI::IsMember({"inverse-cdf", "compound"}));

  auto* simulate = app.add_subcommand("simulate", "simulate sample paths");
  add_params(simulate, f);
  add_seed(simulate, f);
  simulate->add_option("--horizon", f.horizon, "path horizon T > 0");
  simulate->add_option("--paths", f.paths, "number of paths");
  simulate->add_option("--marginal", f.marginal, "also print the histogram of N(t)");

  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  add_seed(verify, f);
  verify->add_option("--perturb", f.perturb, "NAME FACTOR: scale a closed form (mean|variance|pgf)")
      ->type_size(2)
      ->allow_extra_args(false);
  verify->add_option("--out", f.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  RunConfig c;
  if (*table) c.command = Command::table;
  else if (*moments) c.command = Command::moments;
  else if (*sample) c.command = Command::sample;
  else if (*simulate) c.command = Command::simulate;
  else c.command = Command::verify;

  c.output_path = f.out;
  if (!f.seed.empty()) c.seed = parse_uint("--seed", f.seed);
  else if (env_seed != nullptr && *env_seed != '\0') c.seed = parse_uint("BELLPROC_SEED", env_seed);

  if (c.command == Command::verify) {
    c.format = Format::json;
    for (std::size_t i = 0; i + 1 < f.perturb.size(); i += 2) {
      const auto& name = f.perturb[i];
      if (name != "mean" && name != "variance" && name != "pgf")
        usage("--perturb: unknown quantity '" + name + "' (mean|variance|pgf)");
      c.perturb.emplace_back(name, parse_real("--perturb", f.perturb[i + 1]));
    }
    return c;
  }

  c.alpha = parse_real("--alpha", f.alpha);
  c.theta = parse_real("--theta", f.theta);
  c.lambda = parse_real("--lambda", f.lambda);
  c.t = parse_real("--t", f.t);
  c.format = f.format == "json" ? Format::json : Format::csv;
  if (!f.tail_tol.empty()) {
    c.tail_tol = parse_real("--tail-tol", f.tail_tol);
    if (!(c.tail_tol > 0.0 && c.tail_tol < 1.0)) usage("--tail-tol must lie in (0, 1)");
  }
  require_positive("--t", c.t);

  const DegenParams base = validate(c.alpha, c.theta, c.lambda);
  c.params = c.command == Command::simulate ? base : scale_alpha(base, c.t);

  if (c.command == Command::sample) {
    c.n_samples = parse_uint("--n", f.n);
    if (c.n_samples == 0) usage("--n must be >= 1");
    c.method = f.method == "compound" ? Method::compound : Method::inverse_cdf;
    if (c.method == Method::compound && !c.params->strict())
      throw Error(Errc::not_strict, "--method compound requires lambda = 1/m for an integer m");
    if (c.method == Method::inverse_cdf && c.tail_tol > kNegativeMassTol)
      usage("--method inverse-cdf requires --tail-tol <= 1e-12");
  }
  if (c.command == Command::simulate) {
    c.horizon = parse_real("--horizon", f.horizon);
    require_positive("--horizon", c.horizon);
    c.n_paths = parse_uint("--paths", f.paths);
    if (c.n_paths == 0) usage("--paths must be >= 1");
    if (!c.params->strict())
      throw Error(Errc::not_strict, "simulate requires lambda = 1/m for an integer m");
    if (!f.marginal.empty()) {
      c.marginal = parse_real("--marginal", f.marginal);
      if (*c.marginal < 0.0 || *c.marginal > c.horizon)
        usage("--marginal must lie in [0, horizon]");
    }
  }
  return c;
}

namespace {

void emit_table(const RunConfig& c, std::ostream& out) {
  const auto table = build_pmf_table(*c.params, c.tail_tol);
  const auto cum = table.cumulative();
  if (c.format == Format::json) {
    json j = io::to_json(table);
    j["t"] = c.t;
    j["cdf"] = std::vector<double>(cum.begin(), cum.end());
    out << j.dump(2) << '\n';
    return;
  }
  out << "k,pmf,cdf\n";
  for (std::size_t k = 0; k < table.size(); ++k)
    out << k << ',' << io::format_real(table[k]) << ',' << io::format_real(cum[k]) << '\n';
  out << "tail_mass," << io::format_real(table.tail_mass()) << ','
      << io::format_real(cum.back() + table.tail_mass()) << '\n';
}

void emit_moments(const RunConfig& c, std::ostream& out) {
  const auto& p = *c.params;
  const double m = mean(p);
  const double v = variance(p);
  const double r = burst_rate(p);
  std::optional<JumpLaw> law;
  if (p.strict()) law = decompose(p);

  if (c.format == Format::json) {
    json j{{"params", io::to_json(p)}, {"t", c.t},        {"mean", m},
           {"variance", v},            {"overdispersion", v / m}, {"burst_rate", r}};
    if (law) {
      const auto probs = law->probs();
      j["jump_law"] = std::vector<double>(probs.begin(), probs.end());
    } else {
      j["jump_law"] = nullptr;
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "quantity,value\n"
      << "mean," << io::format_real(m) << '\n'
      << "variance," << io::format_real(v) << '\n'
      << "overdispersion," << io::format_real(v / m) << '\n'
      << "burst_rate," << io::format_real(r) << '\n';
  if (law) {
    out << "\nk,jump_prob\n";
    for (std::size_t k = 1; k <= law->max_jump(); ++k)
      out << k << ',' << io::format_real(law->prob(k)) << '\n';
  }
}

void emit_sample(const RunConfig& c, std::ostream& out) {
  RngStream rng(c.seed);
  std::vector<std::size_t> values(c.n_samples);
  if (c.method == Method::compound) {
    const auto law = decompose(*c.params);
    for (auto& x : values) x = sample_compound(law, rng);
  } else {
    const auto table = build_pmf_table(*c.params, c.tail_tol);
    for (auto& x : values) x = sample_inverse_cdf(table, rng);
  }
  stats::RunningMoments m;
  for (auto x : values) m.add(static_cast<double>(x));
  const double var = values.size() > 1 ? m.variance() : 0.0;

  if (c.format == Format::json) {
    json j{{"params", io::to_json(*c.params)},
           {"seed", c.seed},
           {"method", c.method == Method::compound ? "compound" : "inverse-cdf"},
           {"values", values},
           {"mean", m.mean()},
           {"variance", var}};
    out << j.dump() << '\n';
    return;
  }
  std::string buf = "value\n";
  for (auto x : values) {
    buf += std::to_string(x);
    buf += '\n';
  }
  out << buf << "# n=" << values.size() << '\n'
      << "# mean=" << io::format_real(m.mean()) << '\n'
      << "# variance=" << io::format_real(var) << '\n';
}

void emit_simulate(const RunConfig& c, std::ostream& out) {
  const auto law = decompose(*c.params);
  const RngStream root(c.seed);
  std::vector<SamplePath> paths;
  paths.reserve(c.n_paths);
  for (std::uint64_t i = 0; i < c.n_paths; ++i) {
    auto rng = root.split(i);
    paths.push_back(simulate_path(*c.params, law, c.horizon, rng));
  }
  std::vector<std::uint64_t> hist;
  if (c.marginal) {
    std::vector<std::size_t> counts;
    for (const auto& p : paths) counts.push_back(count_at(p, *c.marginal));
    hist = stats::histogram(counts);
  }

  if (c.format == Format::json) {
    json j{{"seed", c.seed}, {"paths", json::array()}};
    for (const auto& p : paths) j["paths"].push_back(io::to_json(p));
    if (c.marginal) j["marginal"] = {{"t", *c.marginal}, {"histogram", hist}};
    out << j.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    out << "# path " << i << '\n';
    io::write_csv(out, paths[i]);
  }
  if (c.marginal) {
    out << "# marginal t=" << io::format_real(*c.marginal) << '\n' << "count,paths\n";
    for (std::size_t k = 0; k < hist.size(); ++k) out << k << ',' << hist[k] << '\n';
  }
}

}  // namespace

int execute(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::table: emit_table(c, out); break;
    case Command::moments: emit_moments(c, out); break;
    case Command::sample: emit_sample(c, out); break;
    case Command::simulate: emit_simulate(c, out); break;
    case Command::verify: {
      const auto report = verify::run_verify({c.seed, c.perturb});
      out << verify::to_json(report).dump(2) << '\n';
      return report.overall ? kExitOk : kExitVerifyFailed;
    }
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const char* env_seed) {
  try {
    const RunConfig config = parse_args(argc, argv, env_seed);
    if (config.output_path.empty()) return execute(config, out);
    std::ofstream file(config.output_path);
    if (!file) {
      err << "bellproc: error: cannot open '" << config.output_path << "' for writing\n";
      return kExitUsage;
    }
    return execute(config, file);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const Error& e) {
    err << "bellproc: error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace bellproc::cli
