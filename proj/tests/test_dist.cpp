#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "bellproc/dist.hpp"
#include "bellproc/error.hpp"
#include "bellproc/io.hpp"
#include "oracles.hpp"

using namespace bellproc;

namespace {

struct P {
  double alpha, theta, lambda;
};

std::vector<P> default_grid() {
  std::vector<P> g;
  for (double a : {0.5, 1.0, 2.0})
    for (double t : {0.5, 1.0})
      for (double l : {1.0, 0.5, 0.25, 0.1}) g.push_back({a, t, l});
  return g;
}

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

TEST_CASE("parameter validation") {
  for (P bad : {P{0, 1, 1}, P{-1, 1, 1}, P{1, 0, 1}, P{1, -2, 0.5}, P{1, 1, 0}, P{1, 1, 1.5},
                P{NAN, 1, 1}, P{1, INFINITY, 1}, P{1, 1, NAN}})
    CHECK(code_of([&] { validate(bad.alpha, bad.theta, bad.lambda); }) == Errc::invalid_params);

  const auto s = validate(1, 1, 0.25);
  CHECK(s.strict());
  CHECK(s.reciprocal() == 4);
  CHECK(validate(1, 1, 1.0 / 3.0).reciprocal() == 3);
  CHECK(reciprocal_integer(0.1) == 10u);
  CHECK_FALSE(reciprocal_integer(0.3).has_value());

  const auto a = validate(1, 1, 0.3);
  CHECK(a.validity() == Validity::asymptotic);
  CHECK(a.reciprocal() == 0);
  // Negative probability mass for a non-reciprocal lambda.
  CHECK(code_of([] { validate(1, 1, 0.6); }) == Errc::negative_mass);
}

TEST_CASE("pmf agrees with the Panjer recursion") {
  for (double l : {1.0, 0.5, 0.25, 0.2, 0.1})
    for (double a : {0.5, 2.0, 10.0, 40.0})
      for (double t : {0.25, 1.0, 2.0}) {
        const auto p = validate(a, t, l);
        const auto ref = oracle::db_pmf(a, t, l, 80);
        for (int k = 0; k <= 80; ++k) {
          const double got = pmf(k, p);
          CHECK_MESSAGE(std::fabs(got - ref[k]) <= 1e-15 + 1e-9 * ref[k],
                        "a=" << a << " t=" << t << " l=" << l << " k=" << k);
        }
      }
}

TEST_CASE("log pmf agrees with pmf") {
  const auto p = validate(3.0, 1.0, 0.25);
  for (int k = 0; k < 60; ++k)
    CHECK(std::exp(log_pmf(k, p)) == doctest::Approx(pmf(k, p)).epsilon(1e-11));
  CHECK(pmf(0, p) == doctest::Approx(std::exp(-burst_rate(p))).epsilon(1e-15));
}

TEST_CASE("burst rate and moments") {
  CHECK(burst_rate(validate(1, 1, 0.5)) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(mean(validate(2, 0.5, 0.5)) == doctest::Approx(1.25).epsilon(1e-15));
  for (double a : {0.5, 3.0}) {
    const auto p = validate(a, 1.5, 1.0);
    CHECK(variance(p) / mean(p) == doctest::Approx(1.0).epsilon(1e-15));
  }
  for (auto g : default_grid()) {
    const auto p = validate(g.alpha, g.theta, g.lambda);
    const auto ref = oracle::db_pmf(g.alpha, g.theta, g.lambda, 200);
    long double m1 = 0, m2 = 0;
    for (int k = 0; k <= 200; ++k) {
      m1 += k * ref[k];
      m2 += static_cast<long double>(k) * k * ref[k];
    }
    CHECK(mean(p) == doctest::Approx(static_cast<double>(m1)).epsilon(1e-12));
    CHECK(variance(p) == doctest::Approx(static_cast<double>(m2 - m1 * m1)).epsilon(1e-11));
  }
}

TEST_CASE("tables are normalized and the tail bound is a true bound") {
  for (double l : {1.0, 0.5, 0.25, 0.2, 0.1, 1e-4})
    for (double a : {0.5, 1.0, 2.0, 5.0, 50.0})
      for (double t : {0.25, 0.5, 1.0, 2.0}) {
        const auto p = validate(a, t, l);
        const auto tab = build_pmf_table(p);
        CHECK(tab.certified());
        CHECK(tab.tail_mass() <= kDefaultTailTol);
        CHECK(std::fabs(tab.cumulative().back() + tab.tail_mass() - 1.0) <= 1e-12);
        if (l >= 0.1) {
          const auto ref = oracle::db_pmf(a, t, l, static_cast<int>(tab.cutoff()) + 400);
          long double beyond = 0.0L;
          for (std::size_t k = tab.cutoff() + 1; k < ref.size(); ++k) beyond += ref[k];
          CHECK(beyond <= tab.tail_mass() * (1 + 1e-6));
        }
      }
}

TEST_CASE("tail bound decreases with the cutoff") {
  const auto p = validate(2.0, 1.0, 1e-4);
  double prev = 1.0;
  for (std::size_t k = 5; k < 60; k += 5) {
    const double b = tail_bound(p, k);
    CHECK(b <= prev);
    CHECK(b >= 0.0);
    prev = b;
  }
  CHECK(tail_bound(validate(1, 1, 0.3), 10) == 1.0);
}

TEST_CASE("asymptotic tables are marked uncertified") {
  const auto tab = build_pmf_table(validate(1, 1, 0.3));
  CHECK_FALSE(tab.certified());
  CHECK(std::fabs(tab.cumulative().back() + tab.tail_mass() - 1.0) <= 1e-12);
  for (double v : tab.probs()) CHECK(v >= 0.0);
}

TEST_CASE("cdf and quantile") {
  const auto p = validate(2.0, 1.0, 0.5);
  const auto tab = build_pmf_table(p);
  double prev = 0.0;
  for (std::size_t k = 0; k < tab.size(); ++k) {
    CHECK(cdf(k, tab) >= prev);
    prev = cdf(k, tab);
  }
  CHECK(cdf(tab.size() + 10, tab) == cdf(tab.cutoff(), tab));
  CHECK(cdf(3, p) == doctest::Approx(cdf(3, tab)).epsilon(1e-15));

  CHECK(quantile(0.0, tab) == 0);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(quantile(std::nextafter(cdf(k, tab), 0.0), tab) == k);
    CHECK(quantile(cdf(k, tab), tab) == k + 1);
  }
  CHECK(code_of([&] { quantile(1.0, tab); }) == Errc::domain);
  CHECK(code_of([&] { quantile(-0.1, tab); }) == Errc::domain);
  CHECK(code_of([&] { quantile(1.0 - 1e-14, tab); }) == Errc::tail_sliver);
  CHECK(quantile(0.5, p) == quantile(0.5, tab));
}

TEST_CASE("pgf and mgf") {
  for (auto g : default_grid()) {
    const auto p = validate(g.alpha, g.theta, g.lambda);
    const auto ref = oracle::db_pmf(g.alpha, g.theta, g.lambda, 200);
    for (double t : {-0.5, 0.0, 0.3, 0.9, 1.0, 1.2}) {
      long double s = 0, pw = 1;
      for (int k = 0; k <= 200; ++k) {
        s += ref[k] * pw;
        pw *= t;
      }
      CHECK(pgf(t, p) == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
    }
    CHECK(pgf(1.0, p) == 1.0);
    CHECK(mgf(0.0, p) == 1.0);
    CHECK(mgf(0.4, p) == pgf(std::exp(0.4), p));
  }
  CHECK(code_of([] { pgf(-1.0, validate(1, 1, 1)); }) == Errc::domain);
  CHECK(code_of([] { mgf(60.0, validate(1, 1, 1)); }) == Errc::overflow);
}

TEST_CASE("convolution of parameters and of tables") {
  const auto p1 = validate(0.5, 1.0, 0.25);
  const auto p2 = validate(1.5, 1.0, 0.25);
  const auto s = convolve(p1, p2);
  CHECK(s.alpha() == 2.0);
  CHECK(s.theta() == 1.0);
  CHECK(s.lambda() == 0.25);
  const auto direct = convolve_tables(build_pmf_table(p1), build_pmf_table(p2));
  const auto ref = oracle::db_pmf(2.0, 1.0, 0.25, 40);
  REQUIRE(direct.size() > 30);
  for (int k = 0; k <= 30; ++k) CHECK(std::fabs(direct[k] - ref[k]) <= 1e-14);

  CHECK(code_of([] { convolve(validate(1, 1, 0.5), validate(1, 2, 0.5)); }) == Errc::theta_mismatch);
  CHECK(code_of([] { convolve(validate(1, 1, 0.5), validate(1, 1, 0.25)); }) == Errc::lambda_mismatch);
  CHECK_NOTHROW(convolve(validate(1, 1, 0.5), validate(1, 1 + 1e-13, 0.5)));
}

TEST_CASE("jump law") {
  for (double l : {1.0, 0.5, 0.25, 0.1, 1e-4})
    for (double t : {0.5, 1.0, 2.0}) {
      const auto p = validate(1.5, t, l);
      const auto law = decompose(p);
      const int m = static_cast<int>(std::lround(1.0 / l));
      REQUIRE(law.support_bound().has_value());
      CHECK(*law.support_bound() == static_cast<std::size_t>(m));
      CHECK(law.max_jump() <= static_cast<std::size_t>(m));
      CHECK(law.prob(0) == 0.0);
      CHECK(law.prob(m + 1) == 0.0);
      CHECK(law.cumulative().back() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(law.burst_rate() == doctest::Approx(burst_rate(p)).epsilon(1e-15));

      const auto w = oracle::jump_weights(t, l, m);
      for (int k = 1; k <= std::min(m, 40); ++k)
        CHECK(law.prob(k) == doctest::Approx(static_cast<double>(w[k])).epsilon(1e-12));

      // PGF of the jump law and the compound identity at ten points.
      for (int i = 0; i < 10; ++i) {
        const double x = 0.1 * i + 0.05;
        long double h = 0, pw = x;
        for (int k = 1; k <= m; ++k) {
          h += w[k] * pw;
          pw *= x;
          if (pw < 1e-40L) break;
        }
        CHECK(law.pgf(x) == doctest::Approx(static_cast<double>(h)).epsilon(1e-12));
        CHECK(std::exp(law.burst_rate() * (law.pgf(x) - 1.0)) ==
              doctest::Approx(pgf(x, p)).epsilon(1e-12));
      }
    }
  const auto lifted = decompose(validate(1, 1, 1));
  CHECK(lifted.max_jump() == 1);
  CHECK(lifted.prob(1) == 1.0);
  CHECK(code_of([] { decompose(validate(1, 1, 0.3)); }) == Errc::not_strict);
}

TEST_CASE("limits") {
  for (double a : {0.5, 1.0, 5.0})
    for (double t : {0.25, 2.0}) {
      const auto tab = build_pmf_table(validate(a, t, 1.0));
      for (std::size_t k = 0; k < tab.size(); ++k)
        CHECK(std::fabs(tab[k] - oracle::poisson_pmf(a * t, k)) <= 1e-13);
    }
  for (double a : {0.5, 2.0})
    for (double t : {0.5, 1.0}) {
      const auto p = validate(a, t, 1e-4);
      for (int k = 0; k <= 20; ++k) CHECK(std::fabs(pmf(k, p) - oracle::bell_touchard_pmf(a, t, k)) <= 1e-3);
    }
}

TEST_CASE("scale_alpha revalidates") {
  const auto p = validate(2.0, 1.0, 0.5);
  CHECK(scale_alpha(p, 0.5).alpha() == 1.0);
  CHECK(code_of([&] { scale_alpha(p, 0.0); }) == Errc::invalid_params);
}

TEST_CASE("table reassembly checks its invariants") {
  const auto p = validate(1, 1, 1);
  CHECK(code_of([&] { PmfTable(p, {0.5, 0.4}, 0.0, true); }) == Errc::domain);
  CHECK(code_of([&] { PmfTable(p, {1.1, -0.1}, 0.0, true); }) == Errc::negative_mass);
  const PmfTable t(p, {0.5, 0.5 - 5e-13}, 5e-13, true);
  CHECK(t.cutoff() == 1);
}

TEST_CASE("table csv and json round trips are exact") {
  const auto tab = build_pmf_table(validate(2.0, 0.7, 0.2));
  std::stringstream ss;
  io::write_csv(ss, tab);
  const auto back = io::read_pmf_csv(ss);
  REQUIRE(back.size() == tab.size());
  for (std::size_t k = 0; k < back.size(); ++k) CHECK(back[k] == tab[k]);

  const auto j = io::to_json(tab);
  const auto again = io::pmf_table_from_json(nlohmann::json::parse(j.dump()));
  CHECK(again.tail_mass() == tab.tail_mass());
  CHECK(again.certified() == tab.certified());
  CHECK(again.params().lambda() == tab.params().lambda());
  for (std::size_t k = 0; k < tab.size(); ++k) CHECK(again[k] == tab[k]);

  std::stringstream bad("k,p\n0,x\n");
  CHECK_THROWS_AS(io::read_pmf_csv(bad), Error);
  CHECK(code_of([] { io::params_from_json(nlohmann::json{{"alpha", -1}, {"theta", 1}, {"lambda", 1}}); }) ==
        Errc::invalid_params);
}
