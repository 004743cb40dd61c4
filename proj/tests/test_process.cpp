#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "bellproc/dist.hpp"
#include "bellproc/error.hpp"
#include "bellproc/io.hpp"
#include "bellproc/process.hpp"
#include "bellproc/stats.hpp"
#include "oracles.hpp"

using namespace bellproc;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return Errc::parse;
}

}  // namespace

TEST_CASE("sample path validation") {
  const auto p = validate(1, 1, 0.5);
  CHECK_NOTHROW(SamplePath(p, 1.0, {{0.2, 1}, {0.5, 2}}));
  CHECK_NOTHROW(SamplePath(p, 1.0, {{0.5, 1}, {0.5, 1}}));
  CHECK(code_of([&] { SamplePath(p, 1.0, {{0.5, 1}, {0.2, 1}}); }) == Errc::domain);
  CHECK(code_of([&] { SamplePath(p, 1.0, {{0.0, 1}}); }) == Errc::domain);
  CHECK(code_of([&] { SamplePath(p, 1.0, {{1.5, 1}}); }) == Errc::domain);
  CHECK(code_of([&] { SamplePath(p, 1.0, {{0.5, 0}}); }) == Errc::domain);
  CHECK(code_of([&] { SamplePath(p, 1.0, {{0.5, 3}}); }) == Errc::domain);
  CHECK(code_of([&] { SamplePath(p, 0.0, {}); }) == Errc::domain);
}

TEST_CASE("counting functions") {
  const SamplePath path(validate(1, 1, 0.25), 2.0, {{0.5, 1}, {1.0, 3}, {1.5, 2}});
  CHECK(std::vector<std::size_t>(path.cumulative().begin(), path.cumulative().end()) ==
        std::vector<std::size_t>{1, 4, 6});
  CHECK(count_at(path, 0.0) == 0);
  CHECK(count_at(path, 0.49) == 0);
  CHECK(count_at(path, 0.5) == 1);
  CHECK(count_at(path, 1.2) == 4);
  CHECK(count_at(path, 2.0) == 6);
  CHECK(increment(path, 0.5, 1.5) == 5);
  CHECK(code_of([&] { count_at(path, 2.5); }) == Errc::domain);
  CHECK(code_of([&] { count_at(path, -0.1); }) == Errc::domain);
  CHECK(code_of([&] { increment(path, 1.0, 1.0); }) == Errc::domain);
}

TEST_CASE("simulated paths are ordered and respect the jump support") {
  RngStream r(3);
  for (double l : {1.0, 0.5, 0.25}) {
    const auto p = validate(2.0, 1.0, l);
    const std::size_t m = p.reciprocal();
    for (int i = 0; i < 200; ++i) {
      const auto path = simulate_path(p, 5.0, r);
      double prev = 0.0;
      for (const auto& b : path.bursts()) {
        CHECK(b.time > prev);
        CHECK(b.time <= 5.0);
        CHECK(b.size >= 1);
        CHECK(b.size <= m);
        prev = b.time;
      }
    }
  }
  CHECK(code_of([&] { simulate_path(validate(1, 1, 0.3), 1.0, r); }) == Errc::not_strict);
  CHECK(code_of([&] { simulate_path(validate(1, 1, 0.5), -1.0, r); }) == Errc::domain);
}

TEST_CASE("short horizons are mostly empty") {
  const auto p = validate(1, 1, 0.5);
  RngStream r(17);
  const int n = 10000;
  int empty = 0;
  for (int i = 0; i < n; ++i) empty += simulate_path(p, 0.001, r).bursts().empty();
  const double q = std::exp(-1.25 * 0.001);
  CHECK(std::fabs(empty / double(n) - q) <= 4 * std::sqrt(q * (1 - q) / n));
}

TEST_CASE("marginal of the simulated process") {
  const auto p = validate(1.5, 0.8, 0.25);
  RngStream r(2024);
  std::vector<std::size_t> n1(50000);
  for (auto& x : n1) x = count_at(simulate_path(p, 1.0, r), 1.0);
  const auto ref = oracle::db_pmf(1.5, 0.8, 0.25, 80);
  const std::vector<double> probs(ref.begin(), ref.end());
  CHECK(stats::chi_square_gof(stats::histogram(n1), probs).p_value > 0.001);
}

TEST_CASE("laplace functional matches the pmf transform") {
  for (double l : {1.0, 0.5, 0.1})
    for (double t : {0.5, 2.0})
      for (double x : {0.1, 1.0}) {
        const auto ref = oracle::db_pmf(1.3 * t, 0.9, l, 200);
        long double s = 0;
        for (int k = 0; k <= 200; ++k) s += ref[k] * std::exp(-x * k);
        CHECK(laplace_functional(validate(1.3, 0.9, l), t, x) ==
              doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
      }
}

TEST_CASE("short-window probabilities are first order in the window") {
  const auto p = validate(2.0, 1.0, 0.5);
  for (std::size_t k : {1u, 2u}) {
    double prev = NAN;
    for (double s : {1e-2, 1e-3, 1e-4}) {
      const double err = std::fabs(pmf(k, scale_alpha(p, s)) - small_s_intensity(k, p, s)) / s;
      if (!std::isnan(prev)) {
        CHECK(prev / err > 5.0);
        CHECK(prev / err < 20.0);
      }
      prev = err;
    }
  }
  CHECK(small_s_intensity(3, p, 0.1) == 0.0);
}

TEST_CASE("superposition") {
  const auto p1 = validate(1, 1, 0.5);
  const auto p2 = validate(2, 1, 0.5);
  const SamplePath a(p1, 1.0, {{0.2, 1}, {0.6, 2}});
  const SamplePath b(p2, 1.0, {{0.2, 2}, {0.4, 1}});
  const std::vector<SamplePath> both{a, b};
  const auto s = superpose(both);
  CHECK(s.params().alpha() == 3.0);
  const std::vector<Burst> want{{0.2, 1}, {0.2, 2}, {0.4, 1}, {0.6, 2}};
  CHECK(std::vector<Burst>(s.bursts().begin(), s.bursts().end()) == want);
  CHECK(count_at(s, 1.0) == 6);

  const std::vector<SamplePath> theta{a, SamplePath(validate(1, 2, 0.5), 1.0, {})};
  CHECK(code_of([&] { superpose(theta); }) == Errc::theta_mismatch);
  const std::vector<SamplePath> lam{a, SamplePath(validate(1, 1, 0.25), 1.0, {})};
  CHECK(code_of([&] { superpose(lam); }) == Errc::lambda_mismatch);
  const std::vector<SamplePath> hor{a, SamplePath(p2, 2.0, {})};
  CHECK(code_of([&] { superpose(hor); }) == Errc::horizon_mismatch);
}

TEST_CASE("path csv and json round trips are exact") {
  RngStream r(8);
  const auto path = simulate_path(validate(2, 1, 0.25), 3.0, r);
  std::stringstream ss;
  io::write_csv(ss, path);
  const auto bursts = io::read_path_csv(ss);
  CHECK(bursts == std::vector<Burst>(path.bursts().begin(), path.bursts().end()));

  const auto back = io::sample_path_from_json(nlohmann::json::parse(io::to_json(path).dump()));
  CHECK(back.horizon() == path.horizon());
  CHECK(std::vector<Burst>(back.bursts().begin(), back.bursts().end()) ==
        std::vector<Burst>(path.bursts().begin(), path.bursts().end()));

  std::stringstream bad("time,size,cumulative_count\n0.5,1,2\n");
  CHECK_THROWS_AS(io::read_path_csv(bad), Error);
}
