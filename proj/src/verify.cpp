#include "bellproc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string_view>

#include "bellproc/degen_core.hpp"
#include "bellproc/dist.hpp"
#include "bellproc/error.hpp"
#include "bellproc/process.hpp"
#include "bellproc/rng.hpp"
#include "bellproc/sampler.hpp"
#include "bellproc/stats.hpp"

namespace bellproc::verify {

namespace {

struct Grid {
  std::vector<double> alphas;
  std::vector<double> thetas;
  std::vector<double> lambdas;
};

const Grid kDefaultGrid{{0.5, 1.0, 2.0}, {0.5, 1.0}, {1.0, 0.5, 0.25, 0.1}};
const Grid kNormalizationGrid{{0.5, 1.0, 2.0, 5.0}, {0.25, 0.5, 1.0, 2.0}, {1.0, 0.5, 0.25, 0.2, 0.1}};
const std::vector<double> kCoreLambdas{1.0, 0.5, 0.25, 0.1};

constexpr std::size_t kSamplerDraws = 100000;
constexpr std::size_t kMomentDraws = 1000000;
constexpr std::size_t kPaths = 100000;
constexpr double kMinPValue = 0.001;

std::vector<DegenParams> expand(const Grid& g) {
  std::vector<DegenParams> out;
  for (double a : g.alphas)
    for (double t : g.thetas)
      for (double l : g.lambdas) out.push_back(validate(a, t, l));
  return out;
}

std::string describe(const DegenParams& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "alpha=%g theta=%g lambda=%g", p.alpha(), p.theta(), p.lambda());
  return buf;
}

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Tracks the worst case of a statistic together with where it occurred.
struct Worst {
  double value;
  std::string where;
  bool maximize;

  static Worst max() { return {-INFINITY, "", true}; }
  static Worst min() { return {INFINITY, "", false}; }

  void update(double v, std::string w) {
    if (maximize ? v > value : v < value) {
      value = v;
      where = std::move(w);
    }
  }
};

class Battery {
 public:
  explicit Battery(const VerifyOptions& opts) : opts_(opts), root_(opts.seed) {
    for (const auto& [name, f] : opts.perturb) {
      if (name != "mean" && name != "variance" && name != "pgf")
        throw Error(Errc::parse, "unknown perturbation '" + name + "' (mean|variance|pgf)");
      (void)f;
    }
  }

  double factor(std::string_view quantity) const {
    double f = 1.0;
    for (const auto& [name, v] : opts_.perturb)
      if (name == quantity) f *= v;
    return f;
  }

  RngStream stream(std::string_view check) const { return root_.split(fnv1a(check)); }

  void record(std::string name, double statistic, double threshold, Comparison cmp,
              std::string detail) {
    const bool pass = cmp == Comparison::at_most ? statistic <= threshold : statistic > threshold;
    report_.checks.push_back({std::move(name), statistic, threshold, cmp, pass, std::move(detail)});
  }
  void record(std::string name, const Worst& w, double threshold) {
    record(std::move(name), w.value, threshold,
           w.maximize ? Comparison::at_most : Comparison::greater_than, w.where);
  }

  VerifyReport finish(double seconds) {
    report_.overall = std::all_of(report_.checks.begin(), report_.checks.end(),
                                  [](const Check& c) { return c.pass; });
    report_.seed = opts_.seed;
    report_.wall_time = seconds;
    return std::move(report_);
  }

 private:
  VerifyOptions opts_;
  RngStream root_;
  VerifyReport report_;
};

// --- special functions -------------------------------------------------------

void check_core(Battery& b) {
  {
    Worst w = Worst::max();
    for (double lam : kCoreLambdas) {
      const auto table = build_stirling_table(DegenOrder(lam), 20);
      for (double x : {0.5, 1.0, 2.0, 5.0})
        for (std::size_t n = 0; n <= 20; ++n) {
          const double direct = bell_poly_degenerate(n, x, table);
          const double series = bell_poly_dobinski(n, x, lam, 1e-12);
          w.update(rel_err(series, direct),
                   "n=" + std::to_string(n) + " x=" + num(x) +
                       " lambda=" + num(lam));
        }
    }
    b.record("core.dobinski_equivalence", w, 1e-8);
  }
  {
    Worst w = Worst::max();
    for (double lam : kCoreLambdas) {
      const auto table = build_stirling_table(DegenOrder(lam), 20);
      for (std::size_t n = 0; n <= 20; ++n)
        for (std::size_t xi = 1; xi <= n + 1; ++xi) {
          const double x = static_cast<double>(xi);
          const double lhs = falling_factorial_degenerate(x, n, lam);
          double rhs = 0.0;
          for (std::size_t k = 0; k <= n; ++k)
            rhs += table(n, k) * falling_factorial_degenerate(x, k, 1.0);
          w.update(rel_err(rhs, lhs), "n=" + std::to_string(n) + " x=" + std::to_string(xi) +
                                          " lambda=" + num(lam));
        }
    }
    b.record("core.stirling_definition", w, 1e-9);
  }
  {
    Worst w = Worst::max();
    for (double lam : kCoreLambdas) {
      const auto table = build_stirling_table(DegenOrder(lam), 15);
      for (double x : {0.5, 1.0, 2.0})
        for (double y : {0.5, 1.0, 2.0})
          for (std::size_t n = 0; n <= 15; ++n) {
            double rhs = 0.0;
            double binom = 1.0;
            for (std::size_t k = 0; k <= n; ++k) {
              rhs += binom * bell_poly_degenerate(k, x, table) *
                     bell_poly_degenerate(n - k, y, table);
              binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
            }
            w.update(rel_err(rhs, bell_poly_degenerate(n, x + y, table)),
                     "n=" + std::to_string(n) + " lambda=" + num(lam));
          }
    }
    b.record("core.binomial_identity", w, 1e-9);
  }
  {
    Worst w = Worst::max();
    const auto table = build_stirling_table(DegenOrder(1.0), 20);
    for (double x : {0.5, 1.0, 2.0, 5.0})
      for (std::size_t n = 0; n <= 20; ++n)
        w.update(std::fabs(bell_poly_degenerate(n, x, table) - std::pow(x, double(n))) /
                     std::pow(x, double(n)),
                 "n=" + std::to_string(n));
    b.record("core.lambda1_collapse", w, 1e-14);
  }
  {
    // Observed constant C(lambda) = max |S_lambda - S| / (lambda * max(1, S)).
    auto constant = [](double lam) {
      const auto table = build_stirling_table(DegenOrder(lam), 12);
      double c = 0.0;
      for (std::size_t n = 0; n <= 12; ++n)
        for (std::size_t k = 0; k <= n; ++k) {
          const double s = classical::stirling2(n, k);
          c = std::max(c, std::fabs(table(n, k) - s) / (lam * std::max(1.0, s)));
        }
      return c;
    };
    const double c3 = constant(1e-3);
    const double c4 = constant(1e-4);
    b.record("core.classical_limit", std::fabs(std::log(c4 / c3)), std::log(2.0),
             Comparison::at_most,
             "C(1e-3)=" + num(c3) + " C(1e-4)=" + num(c4));
  }
}

// --- distribution ------------------------------------------------------------

void check_dist(Battery& b) {
  const double fmean = b.factor("mean");
  const double fvar = b.factor("variance");
  const double fpgf = b.factor("pgf");

  Worst norm = Worst::max();
  for (const auto& p : expand(kNormalizationGrid)) {
    const auto t = build_pmf_table(p);
    norm.update(std::fabs(t.cumulative().back() + t.tail_mass() - 1.0), describe(p));
  }
  b.record("dist.normalization", norm, 1e-12);

  Worst pgf_pmf = Worst::max();
  Worst mgf_pgf = Worst::max();
  Worst mgf_slope = Worst::max();
  Worst tmean = Worst::max();
  Worst tvar = Worst::max();
  Worst compound = Worst::max();
  for (const auto& p : expand(kDefaultGrid)) {
    const auto t = build_pmf_table(p);
    const auto probs = t.probs();
    for (double x : {0.0, 0.3, 0.7, 1.0}) {
      double s = 0.0;
      double pw = 1.0;
      for (double pk : probs) {
        s += pk * pw;
        pw *= x;
      }
      pgf_pmf.update(std::fabs(s - fpgf * pgf(x, p)), describe(p));
    }
    for (double x : {-1.0, 0.0, 0.3})
      mgf_pgf.update(std::fabs(mgf(x, p) - pgf(std::exp(x), p)), describe(p));
    const double h = 1e-5;
    mgf_slope.update(std::fabs((mgf(h, p) - mgf(-h, p)) / (2 * h) - fmean * mean(p)),
                     describe(p));

    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      m1 += static_cast<double>(k) * probs[k];
      m2 += static_cast<double>(k) * static_cast<double>(k) * probs[k];
    }
    tmean.update(std::fabs(m1 - fmean * mean(p)), describe(p));
    tvar.update(std::fabs(m2 - m1 * m1 - fvar * variance(p)), describe(p));

    const auto law = decompose(p);
    for (int i = 0; i <= 10; ++i) {
      const double x = i / 10.0;
      compound.update(
          std::fabs(std::exp(law.burst_rate() * (law.pgf(x) - 1.0)) - fpgf * pgf(x, p)),
          describe(p));
    }
  }
  b.record("dist.pgf_pmf", pgf_pmf, 1e-10);
  b.record("dist.mgf_pgf", mgf_pgf, 0.0);
  b.record("dist.mgf_derivative", mgf_slope, 1e-6);
  b.record("dist.table_mean", tmean, 1e-9);
  b.record("dist.table_variance", tvar, 1e-8);
  b.record("dist.compound_identity", compound, 1e-10);

  Worst poisson = Worst::max();
  for (double a : kNormalizationGrid.alphas)
    for (double th : kNormalizationGrid.thetas) {
      const auto p = validate(a, th, 1.0);
      const auto t = build_pmf_table(p);
      const double mu = a * th;
      for (std::size_t k = 0; k < t.size(); ++k) {
        const double ref =
            std::exp(-mu + double(k) * std::log(mu) - std::lgamma(double(k) + 1.0));
        poisson.update(std::fabs(t[k] - ref), describe(p) + " k=" + std::to_string(k));
      }
    }
  b.record("dist.poisson_collapse", poisson, 1e-13);

  Worst limit = Worst::max();
  for (double a : kDefaultGrid.alphas)
    for (double th : kDefaultGrid.thetas) {
      const auto p = validate(a, th, 1e-4);
      for (std::size_t k = 0; k <= 20; ++k) {
        const double ref = std::exp(-a * std::expm1(th) + double(k) * std::log(th) -
                                    std::lgamma(double(k) + 1.0)) *
                           classical::bell_poly(k, a);
        limit.update(std::fabs(pmf(k, p) - ref), describe(p) + " k=" + std::to_string(k));
      }
    }
  b.record("dist.bell_touchard_limit", limit, 1e-3);

  Worst conv = Worst::max();
  for (double th : kDefaultGrid.thetas)
    for (double lam : kDefaultGrid.lambdas)
      for (double a1 : kDefaultGrid.alphas)
        for (double a2 : kDefaultGrid.alphas) {
          const auto p1 = validate(a1, th, lam);
          const auto p2 = validate(a2, th, lam);
          const auto sum = convolve(p1, p2);
          const auto direct = convolve_tables(build_pmf_table(p1), build_pmf_table(p2));
          const auto target = build_pmf_table(sum);
          for (std::size_t k = 0; k <= 30 && k < direct.size(); ++k)
            conv.update(std::fabs(direct[k] - target[k]), describe(sum) + " k=" + std::to_string(k));
        }
  b.record("dist.convolution", conv, 1e-10);
}

// --- samplers ----------------------------------------------------------------

void check_sampler(Battery& b) {
  const double fmean = b.factor("mean");
  const double fvar = b.factor("variance");

  Worst agree = Worst::min();
  Worst zmean = Worst::max();
  Worst zvar = Worst::max();
  for (const auto& p : expand(kDefaultGrid)) {
    const auto table = build_pmf_table(p);
    const auto law = decompose(p);
    auto rng = b.stream("sampler.agreement/" + describe(p));
    std::vector<std::size_t> inv(kSamplerDraws);
    std::vector<std::size_t> cmp(kSamplerDraws);
    for (auto& x : inv) x = sample_inverse_cdf(table, rng);
    for (auto& x : cmp) x = sample_compound(law, rng);
    agree.update(stats::chi_square_two_sample(stats::histogram(inv), stats::histogram(cmp)).p_value,
                 describe(p));

    auto mrng = b.stream("sampler.moments/" + describe(p));
    stats::RunningMoments m;
    for (std::size_t i = 0; i < kMomentDraws; ++i)
      m.add(static_cast<double>(sample_compound(law, mrng)));
    zmean.update(std::fabs(m.mean() - fmean * mean(p)) / m.mean_std_error(), describe(p));
    zvar.update(std::fabs(m.variance() - fvar * variance(p)) / m.variance_std_error(),
                describe(p));
  }
  b.record("sampler.agreement", agree, kMinPValue);
  b.record("sampler.moment_mean", zmean, 4.0);
  b.record("sampler.moment_variance", zvar, 4.0);

  const auto p = validate(1.0, 1.0, 0.5);
  const auto law = decompose(p);
  const auto table = build_pmf_table(p);
  RngStream r1(b.stream("sampler.determinism"));
  RngStream r2(b.stream("sampler.determinism"));
  double mismatches = 0.0;
  for (int i = 0; i < 10000; ++i) {
    if (sample_compound(law, r1) != sample_compound(law, r2)) mismatches += 1.0;
    if (sample_inverse_cdf(table, r1) != sample_inverse_cdf(table, r2)) mismatches += 1.0;
  }
  b.record("sampler.determinism", mismatches, 0.0, Comparison::at_most, "20000 paired draws");
}

// --- process -----------------------------------------------------------------

void check_process(Battery& b) {
  const std::vector<double> times{0.5, 1.0, 2.0};
  Worst marginal = Worst::min();
  Worst stationarity = Worst::min();
  Worst inc_law = Worst::min();
  Worst independence = Worst::max();
  double violations = 0.0;

  for (const auto& p : expand(kDefaultGrid)) {
    const auto law = decompose(p);
    auto rng = b.stream("process.ensemble/" + describe(p));
    std::vector<std::vector<std::size_t>> counts(times.size(), std::vector<std::size_t>(kPaths));
    std::vector<std::size_t> inc_a(kPaths);
    std::vector<std::size_t> inc_b(kPaths);
    std::vector<double> first_half(kPaths);
    std::vector<double> second_half(kPaths);
    for (std::size_t i = 0; i < kPaths; ++i) {
      const auto path = simulate_path(p, law, 2.0, rng);
      std::size_t prev = 0;
      for (const auto& c : path.cumulative()) {
        if (c <= prev) violations += 1.0;
        prev = c;
      }
      for (std::size_t j = 0; j < times.size(); ++j) counts[j][i] = count_at(path, times[j]);
      inc_a[i] = increment(path, 0.0, 0.5);
      inc_b[i] = increment(path, 1.0, 1.5);
      first_half[i] = static_cast<double>(inc_a[i]);
      second_half[i] = static_cast<double>(increment(path, 0.5, 1.0));
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
      const auto table = build_pmf_table(scale_alpha(p, times[j]));
      marginal.update(stats::chi_square_gof(stats::histogram(counts[j]), table.probs()).p_value,
                      describe(p) + " t=" + num(times[j]));
    }
    const auto half = build_pmf_table(scale_alpha(p, 0.5));
    inc_law.update(stats::chi_square_gof(stats::histogram(inc_a), half.probs()).p_value,
                   describe(p) + " (0,0.5]");
    inc_law.update(stats::chi_square_gof(stats::histogram(inc_b), half.probs()).p_value,
                   describe(p) + " (1,1.5]");
    stationarity.update(
        stats::chi_square_two_sample(stats::histogram(inc_a), stats::histogram(inc_b)).p_value,
        describe(p));
    independence.update(std::fabs(stats::correlation(first_half, second_half)), describe(p));
  }
  b.record("process.marginal", marginal, kMinPValue);
  b.record("process.monotone", violations, 0.0, Comparison::at_most, "strict increase of N per burst");
  b.record("process.increment_law", inc_law, kMinPValue);
  b.record("process.stationarity", stationarity, kMinPValue);
  b.record("process.independence", independence, 0.01);

  {
    auto rng = b.stream("process.superposition");
    const auto p1 = validate(1.0, 1.0, 0.5);
    const auto p2 = validate(2.0, 1.0, 0.5);
    const auto l1 = decompose(p1);
    const auto l2 = decompose(p2);
    Worst sup = Worst::min();
    std::vector<std::vector<std::size_t>> counts(times.size(), std::vector<std::size_t>(kPaths));
    for (std::size_t i = 0; i < kPaths; ++i) {
      const std::vector<SamplePath> pair{simulate_path(p1, l1, 2.0, rng), simulate_path(p2, l2, 2.0, rng)};
      const auto merged = superpose(pair);
      for (std::size_t j = 0; j < times.size(); ++j) counts[j][i] = count_at(merged, times[j]);
    }
    const auto beta = convolve(p1, p2);
    for (std::size_t j = 0; j < times.size(); ++j) {
      const auto table = build_pmf_table(scale_alpha(beta, times[j]));
      sup.update(stats::chi_square_gof(stats::histogram(counts[j]), table.probs()).p_value,
                 "t=" + num(times[j]));
    }
    b.record("process.superposition", sup, kMinPValue);
  }

  {
    const auto p = validate(1.0, 1.0, 0.5);
    const auto law = decompose(p);
    auto rng = b.stream("process.laplace");
    const std::vector<double> xs{0.1, 0.7, 2.0};
    std::vector<std::vector<stats::RunningMoments>> acc(times.size(),
                                                        std::vector<stats::RunningMoments>(xs.size()));
    for (std::size_t i = 0; i < kPaths; ++i) {
      const auto path = simulate_path(p, law, 2.0, rng);
      for (std::size_t j = 0; j < times.size(); ++j) {
        const double n = static_cast<double>(count_at(path, times[j]));
        for (std::size_t k = 0; k < xs.size(); ++k) acc[j][k].add(std::exp(-xs[k] * n));
      }
    }
    Worst z = Worst::max();
    for (std::size_t j = 0; j < times.size(); ++j)
      for (std::size_t k = 0; k < xs.size(); ++k)
        z.update(std::fabs(acc[j][k].mean() - laplace_functional(p, times[j], xs[k])) /
                     acc[j][k].mean_std_error(),
                 "t=" + num(times[j]) + " x=" + num(xs[k]));
    b.record("process.laplace", z, 4.0);
  }

  {
    // pmf(k; alpha s)/s -> alpha (1)_k theta^k / k! at first order in s.
    Worst lo = Worst::min();
    Worst hi = Worst::max();
    for (const auto& p : expand(kDefaultGrid)) {
      const std::size_t m = p.reciprocal();
      for (std::size_t k = 1; k <= std::min<std::size_t>(3, 2 * m); ++k) {
        double err[3];
        int i = 0;
        for (double s : {1e-2, 1e-3, 1e-4}) {
          err[i++] = std::fabs(pmf(k, scale_alpha(p, s)) / s - small_s_intensity(k, p, s) / s);
        }
        for (int j = 0; j < 2; ++j) {
          const double ratio = err[j] / err[j + 1];
          const std::string where = describe(p) + " k=" + std::to_string(k);
          lo.update(ratio, where);
          hi.update(ratio, where);
        }
      }
    }
    b.record("process.linearization_min_ratio", lo.value, 5.0, Comparison::greater_than, lo.where);
    b.record("process.linearization_max_ratio", hi.value, 20.0, Comparison::at_most, hi.where);
  }

  {
    // lambda = 1: unit jumps at Poisson epochs of rate alpha theta.
    const auto p = validate(1.0, 1.0, 1.0);
    auto rng = b.stream("process.poisson_gaps");
    const auto path = simulate_path(p, 20000.0, rng);
    std::vector<double> gaps;
    double prev = 0.0;
    double non_unit = 0.0;
    for (const auto& burst : path.bursts()) {
      gaps.push_back(burst.time - prev);
      prev = burst.time;
      if (burst.size != 1) non_unit += 1.0;
    }
    b.record("process.poisson_gaps", stats::ks_exponential(std::move(gaps), 1.0).p_value,
             kMinPValue, Comparison::greater_than, std::to_string(path.bursts().size()) + " gaps");
    b.record("process.unit_jumps", non_unit, 0.0, Comparison::at_most, "lambda=1");
  }
}

// --- negative control --------------------------------------------------------

template <class F>
bool rejects(F&& f, Errc want) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == want;
  }
  return false;
}

void check_negative(Battery& b) {
  const auto p1 = validate(1.0, 1.0, 0.5);
  const auto p2 = validate(1.0, 2.0, 0.5);
  auto rng = b.stream("negative.theta_mismatch");
  const std::vector<SamplePath> paths{simulate_path(p1, 1.0, rng), simulate_path(p2, 1.0, rng)};
  double accepted = 0.0;
  if (!rejects([&] { (void)convolve(p1, p2); }, Errc::theta_mismatch)) accepted += 1.0;
  if (!rejects([&] { (void)superpose(paths); }, Errc::theta_mismatch)) accepted += 1.0;
  b.record("negative.theta_mismatch", accepted, 0.0, Comparison::at_most,
           "convolve and superpose with theta 1 vs 2");
}

std::string_view to_string(Comparison c) {
  return c == Comparison::at_most ? "at_most" : "greater_than";
}

Comparison comparison_from_string(const std::string& s) {
  if (s == "at_most") return Comparison::at_most;
  if (s == "greater_than") return Comparison::greater_than;
  throw Error(Errc::parse, "unknown comparison '" + s + "'");
}

// JSON has no infinities; nonfinite statistics are written as null.
nlohmann::json real(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }
double real(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Battery b(options);
  check_core(b);
  check_dist(b);
  check_sampler(b);
  check_process(b);
  check_negative(b);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return b.finish(elapsed.count());
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"statistic", real(c.statistic)},
                      {"threshold", real(c.threshold)},
                      {"comparison", to_string(c.comparison)},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  return {{"checks", checks},
          {"overall", report.overall},
          {"seed", report.seed},
          {"wall_time", report.wall_time}};
}

VerifyReport report_from_json(const nlohmann::json& j) {
  try {
    VerifyReport r;
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), real(c.at("statistic")),
                          real(c.at("threshold")),
                          comparison_from_string(c.at("comparison").get<std::string>()),
                          c.at("pass").get<bool>(), c.at("detail").get<std::string>()});
    r.overall = j.at("overall").get<bool>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wall_time = j.at("wall_time").get<double>();
    const bool all = std::all_of(r.checks.begin(), r.checks.end(),
                                 [](const Check& c) { return c.pass; });
    if (all != r.overall) throw Error(Errc::parse, "overall flag disagrees with checks");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("verify report: ") + e.what());
  }
}

}  // namespace bellproc::verify
