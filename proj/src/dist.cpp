#include "bellproc/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "bellproc/error.hpp"
#include "bellproc/simd/kernels.hpp"

namespace bellproc {

namespace {

bool same_value(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(Errc::invalid_params,
                std::string(name) + " must be positive and finite, got " + num(v));
}

bool linear_regime(std::size_t k, double rate) {
  return k < kLogRegimeK && rate < kLogRegimeRate;
}

// Signed pmf terms for k = 0..cutoff. Small k use the Stirling sum, the
// rest the log-domain Dobinski series.
std::vector<double> pmf_terms(double alpha, double theta, double lambda, std::size_t cutoff) {
  const double rate = alpha * degenerate_expm1(lambda, theta);
  std::vector<double> out(cutoff + 1, 0.0);

  std::size_t linear_end = 0;
  if (rate < kLogRegimeRate) {
    linear_end = std::min(cutoff + 1, kLogRegimeK);
    const auto table = build_stirling_table(DegenOrder(lambda), linear_end - 1);
    const auto phi = bell_polys_degenerate(alpha, table);
    double scale = std::exp(-rate);  // e^{-R} theta^k / k!
    for (std::size_t k = 0; k < linear_end; ++k) {
      if (k > 0) scale *= theta / static_cast<double>(k);
      out[k] = scale * phi[k];
    }
  }
  if (linear_end <= cutoff) {
    const auto log_phi = bell_polys_dobinski_log(cutoff, alpha, lambda);
    const long double log_theta = std::log(static_cast<long double>(theta));
    for (std::size_t k = linear_end; k <= cutoff; ++k) {
      const auto& lp = log_phi[k];
      if (lp.sign == 0) continue;
      const long double kl = static_cast<long double>(k);
      out[k] = lp.sign * static_cast<double>(std::exp(-static_cast<long double>(rate) + kl * log_theta -
                                                      std::lgamma(kl + 1.0L) + lp.log_abs));
    }
  }
  return out;
}

double poisson_upper_tail(double mean, std::size_t at_least) {
  if (at_least == 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(at_least), mean);
}

// log of inf_{u>0} G(e^u) e^{-u (cutoff+1)}; 0 when the infimum is at u = 0.
double log_chernoff_bound(const DegenParams& p, std::size_t cutoff) {
  const double a = p.alpha();
  const double th = p.theta();
  const double lam = p.lambda();
  const double target = static_cast<double>(cutoff) + 1.0;
  // d/du of alpha e_lambda(theta e^u).
  auto slope = [&](double u) {
    const double z = th * std::exp(u);
    return a * z * std::exp((1.0 / lam - 1.0) * std::log1p(lam * z));
  };
  auto objective = [&](double u) {
    const double z = th * std::exp(u);
    return a * (degenerate_expm1(lam, z) - degenerate_expm1(lam, th)) - target * u;
  };
  if (slope(0.0) >= target) return 0.0;
  double hi = 1.0;
  while (slope(hi) < target) {
    hi *= 2.0;
    if (hi > 700.0) break;
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::min(0.0, objective(0.5 * (lo + hi)));
}

std::vector<double> prefix_sums(std::span<const double> v) {
  std::vector<double> out(v.size());
  double comp = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = v[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    out[i] = sum;
  }
  return out;
}

struct Truncation {
  std::vector<double> probs;
  double tail_mass;
};

// Asymptotic params: no proof of a tail bound, so the series is summed until
// the remaining mass and the next terms are numerically negligible.
Truncation truncate_asymptotic(double alpha, double theta, double lambda, double tail_tol) {
  constexpr std::size_t kLookahead = 10;
  const std::size_t cap = kMaxStirlingOrder;
  const auto terms = pmf_terms(alpha, theta, lambda, cap);
  double sum = 0.0;
  for (std::size_t k = 0; k + kLookahead <= cap; ++k) {
    if (!std::isfinite(terms[k])) break;
    sum += terms[k];
    if (terms[k] < -kNegativeMassTol)
      throw Error(Errc::negative_mass,
                  "pmf(" + std::to_string(k) + ") = " + num(terms[k]) +
                      " is negative; lambda=" + num(lambda) +
                      " is not a reciprocal integer and this (alpha, theta) is not a valid law");
    if (std::fabs(1.0 - sum) <= tail_tol) {
      bool settled = true;
      for (std::size_t j = k + 1; j <= k + kLookahead; ++j)
        if (!(std::fabs(terms[j]) <= tail_tol)) settled = false;
      if (settled) {
        std::vector<double> probs(terms.begin(), terms.begin() + static_cast<long>(k) + 1);
        for (auto& p : probs) p = std::max(p, 0.0);
        return {std::move(probs), std::max(0.0, 1.0 - sum)};
      }
    }
  }
  throw Error(Errc::cap_exceeded, "pmf series for lambda=" + num(lambda) +
                                      " did not settle within " + std::to_string(cap) + " terms");
}

}  // namespace

std::string_view to_string(Validity v) noexcept {
  return v == Validity::strict ? "strict" : "asymptotic";
}

std::optional<std::size_t> reciprocal_integer(double lambda) noexcept {
  if (!(lambda > 0.0)) return std::nullopt;
  const double inv = 1.0 / lambda;
  const double r = std::round(inv);
  if (r >= 1.0 && std::fabs(inv - r) < 1e-9) return static_cast<std::size_t>(r);
  return std::nullopt;
}

DegenParams validate(double alpha, double theta, double lambda) {
  require_positive(alpha, "alpha");
  require_positive(theta, "theta");
  const DegenOrder order(lambda);
  if (const auto m = reciprocal_integer(order.value()))
    return DegenParams(alpha, theta, lambda, Validity::strict, *m);
  truncate_asymptotic(alpha, theta, lambda, kDefaultTailTol);
  return DegenParams(alpha, theta, lambda, Validity::asymptotic, 0);
}

DegenParams scale_alpha(const DegenParams& params, double factor) {
  return validate(params.alpha() * factor, params.theta(), params.lambda());
}

double burst_rate(const DegenParams& params) {
  return params.alpha() * degenerate_expm1(params.lambda(), params.theta());
}

double pmf(std::size_t k, const DegenParams& params) {
  if (k > kMaxPmfSupport)
    throw Error(Errc::out_of_range, "pmf: k=" + std::to_string(k) + " beyond numeric cap");
  const double rate = burst_rate(params);
  if (linear_regime(k, rate)) {
    const auto table = build_stirling_table(params.order(), k);
    double scale = std::exp(-rate);
    for (std::size_t j = 1; j <= k; ++j) scale *= params.theta() / static_cast<double>(j);
    return scale * bell_poly_degenerate(k, params.alpha(), table);
  }
  return pmf_terms(params.alpha(), params.theta(), params.lambda(), k)[k];
}

double log_pmf(std::size_t k, const DegenParams& params) {
  if (k > kMaxPmfSupport)
    throw Error(Errc::out_of_range, "log_pmf: k=" + std::to_string(k) + " beyond numeric cap");
  const double rate = burst_rate(params);
  const long double kl = static_cast<long double>(k);
  const long double head = -static_cast<long double>(rate) +
                           kl * std::log(static_cast<long double>(params.theta())) -
                           std::lgamma(kl + 1.0L);
  long double log_phi;
  if (linear_regime(k, rate)) {
    const auto table = build_stirling_table(params.order(), k);
    const double phi = bell_poly_degenerate(k, params.alpha(), table);
    if (!(phi > 0.0)) throw Error(Errc::negative_mass, "log_pmf: phi is not positive");
    log_phi = std::log(phi);
  } else {
    const auto lp = bell_polys_dobinski_log(k, params.alpha(), params.lambda())[k];
    if (lp.sign <= 0) throw Error(Errc::negative_mass, "log_pmf: phi is not positive");
    log_phi = lp.log_abs;
  }
  return static_cast<double>(head + log_phi);
}

double tail_bound(const DegenParams& params, std::size_t cutoff) {
  if (!params.strict()) return 1.0;
  const std::size_t m = params.reciprocal();
  const double by_poisson = poisson_upper_tail(burst_rate(params), cutoff / m + 1);
  const double by_chernoff = std::exp(log_chernoff_bound(params, cutoff));
  return std::clamp(std::min(by_poisson, by_chernoff), 0.0, 1.0);
}

PmfTable::PmfTable(DegenParams params, std::vector<double> probs, double tail_mass,
                   bool certified)
    : params_(params), probs_(std::move(probs)), tail_mass_(tail_mass), certified_(certified) {
  if (probs_.empty()) throw Error(Errc::out_of_range, "PmfTable: empty probability vector");
  if (!(tail_mass_ >= 0.0)) throw Error(Errc::domain, "PmfTable: tail_mass must be nonnegative");
  for (auto& p : probs_) {
    if (!(p >= -kNegativeMassTol))
      throw Error(Errc::negative_mass, "PmfTable: negative probability " + num(p));
    p = std::max(p, 0.0);
  }
  cdf_ = prefix_sums(probs_);
  // tail_mass is an upper bound, so a loose certificate may overshoot by up
  // to its own size.
  const double total = cdf_.back() + tail_mass_;
  if (total < 1.0 - 1e-12 || total > 1.0 + std::max(1e-12, tail_mass_)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", total);
    throw Error(Errc::domain, std::string("PmfTable: mass does not sum to one (") + buf + ")");
  }
}

PmfTable build_pmf_table(const DegenParams& params, double tail_tol) {
  if (!(tail_tol > 0.0)) throw Error(Errc::domain, "build_pmf_table: tail_tol must be positive");
  if (!params.strict()) {
    auto t = truncate_asymptotic(params.alpha(), params.theta(), params.lambda(), tail_tol);
    return PmfTable(params, std::move(t.probs), t.tail_mass, false);
  }
  // Smallest certified cutoff: the bound is nonincreasing in the cutoff.
  std::size_t hi = std::max<std::size_t>(8, static_cast<std::size_t>(mean(params)));
  while (tail_bound(params, hi) > tail_tol) {
    if (hi >= kMaxPmfSupport)
      throw Error(Errc::cap_exceeded, "build_pmf_table: tail not certified below " +
                                          num(tail_tol) + " within " +
                                          std::to_string(kMaxPmfSupport) + " terms");
    hi = std::min(kMaxPmfSupport, hi * 2);
  }
  std::size_t lo = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (tail_bound(params, mid) <= tail_tol)
      hi = mid;
    else
      lo = mid + 1;
  }
  auto probs = pmf_terms(params.alpha(), params.theta(), params.lambda(), hi);
  return PmfTable(params, std::move(probs), tail_bound(params, hi), true);
}

double cdf(std::size_t k, const PmfTable& table) noexcept {
  const auto c = table.cumulative();
  return k < c.size() ? c[k] : c.back();
}

double cdf(std::size_t k, const DegenParams& params) { return cdf(k, build_pmf_table(params)); }

std::size_t quantile(double u, const PmfTable& table) {
  if (!(u >= 0.0 && u < 1.0)) throw Error(Errc::domain, "quantile: u must lie in [0, 1)");
  const auto c = table.cumulative();
  const auto it = std::upper_bound(c.begin(), c.end(), u);
  if (it == c.end()) throw Error(Errc::tail_sliver, "quantile: u falls in the truncated tail");
  return static_cast<std::size_t>(it - c.begin());
}

std::size_t quantile(double u, const DegenParams& params) {
  return quantile(u, build_pmf_table(params));
}

double pgf(double t, const DegenParams& params) {
  const double lam = params.lambda();
  const double th = params.theta();
  if (!(1.0 + lam * th * t > 0.0))
    throw Error(Errc::domain, "pgf: 1 + lambda*theta*t must be positive");
  return std::exp(params.alpha() * (degenerate_expm1(lam, th * t) - degenerate_expm1(lam, th)));
}

double mgf(double t, const DegenParams& params) {
  const double v = pgf(std::exp(t), params);
  if (!std::isfinite(v)) throw Error(Errc::overflow, "mgf: overflow at t=" + num(t));
  return v;
}

double mean(const DegenParams& params) {
  const double lam = params.lambda();
  const double th = params.theta();
  return th * params.alpha() * degenerate_exp(1.0 - lam, lam, th);
}

double variance(const DegenParams& params) {
  const double lam = params.lambda();
  const double th = params.theta();
  const double inv_base = degenerate_exp(-lam, lam, th);  // (1 + lambda theta)^{-1}
  return th * params.alpha() * (1.0 + th * (1.0 - lam) * inv_base) *
         degenerate_exp(1.0 - lam, lam, th);
}

DegenParams convolve(const DegenParams& p1, const DegenParams& p2) {
  if (!same_value(p1.theta(), p2.theta()))
    throw Error(Errc::theta_mismatch,
                "convolve: theta differs (" + std::to_string(p1.theta()) + " vs " +
                    std::to_string(p2.theta()) + "); the sum is not a degenerate Bell law");
  if (!same_value(p1.lambda(), p2.lambda()))
    throw Error(Errc::lambda_mismatch, "convolve: lambda differs (" +
                                           std::to_string(p1.lambda()) + " vs " +
                                           std::to_string(p2.lambda()) + ")");
  return validate(p1.alpha() + p2.alpha(), p1.theta(), p1.lambda());
}

std::vector<double> convolve_tables(const PmfTable& a, const PmfTable& b) {
  std::vector<double> out(a.size() + b.size() - 1);
  simd::convolve_truncated(a.probs(), b.probs(), out);
  return out;
}

double JumpLaw::prob(std::size_t k) const noexcept {
  return (k >= 1 && k <= probs_.size()) ? probs_[k - 1] : 0.0;
}

double JumpLaw::pgf(double t) const {
  return degenerate_expm1(lambda_, theta_ * t) / degenerate_expm1(lambda_, theta_);
}

JumpLaw decompose(const DegenParams& params) {
  if (!params.strict())
    throw Error(Errc::not_strict, "decompose: lambda=" + std::to_string(params.lambda()) +
                                      " is not 1/m; jump weights would be negative");
  const std::size_t m = params.reciprocal();
  const double th = params.theta();
  const double total = degenerate_expm1(params.lambda(), th);

  JumpLaw law;
  law.burst_rate_ = params.alpha() * total;
  law.theta_ = th;
  law.lambda_ = params.lambda();
  law.support_bound_ = m;

  // w_k = (1)_{k,lambda} theta^k / k!, w_{k+1} = w_k (m - k)/m theta/(k+1).
  std::vector<double> weights;
  double w = th;
  double acc = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    weights.push_back(w);
    acc += w;
    const double ratio = (static_cast<double>(m - k) / static_cast<double>(m)) * th /
                         static_cast<double>(k + 1);
    const double next = w * ratio;
    if (next == 0.0) break;
    if (ratio < 0.5 && next * ratio / (1.0 - ratio) < 1e-18 * acc) {
      weights.push_back(next);
      break;
    }
    w = next;
  }
  law.probs_.reserve(weights.size());
  for (double v : weights) law.probs_.push_back(v / total);
  law.cdf_ = prefix_sums(law.probs_);
  return law;
}

}  // namespace bellproc
