#include "bellproc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "bellproc/error.hpp"

namespace bellproc::stats {

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                          double min_expected) {
  const double n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (n == 0.0) throw Error(Errc::domain, "chi_square_gof: no observations");
  const std::size_t len = std::max(observed.size(), probs.size());
  auto obs_at = [&](std::size_t k) { return k < observed.size() ? double(observed[k]) : 0.0; };
  auto prob_at = [&](std::size_t k) { return k < probs.size() ? probs[k] : 0.0; };

  std::vector<double> bin_obs;
  std::vector<double> bin_exp;
  double o = 0.0;
  double e = 0.0;
  double used_prob = 0.0;
  double used_obs = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    o += obs_at(k);
    e += n * prob_at(k);
    if (e >= min_expected) {
      // Close the bin only if what remains can still form a valid bin.
      const double rest = n * (1.0 - used_prob - e / n);
      if (rest < min_expected) break;
      bin_obs.push_back(o);
      bin_exp.push_back(e);
      used_prob += e / n;
      used_obs += o;
      o = e = 0.0;
    }
  }
  bin_obs.push_back(n - used_obs);
  bin_exp.push_back(n * std::max(0.0, 1.0 - used_prob));

  TestResult r;
  for (std::size_t i = 0; i < bin_obs.size(); ++i) {
    const double d = bin_obs[i] - bin_exp[i];
    r.statistic += d * d / bin_exp[i];
  }
  r.bins = bin_obs.size();
  r.dof = static_cast<double>(r.bins) - 1.0;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

TestResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b, double min_expected) {
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
  if (na == 0.0 || nb == 0.0) throw Error(Errc::domain, "chi_square_two_sample: empty sample");
  const std::size_t len = std::max(a.size(), b.size());
  auto at = [](std::span<const std::uint64_t> v, std::size_t k) {
    return k < v.size() ? double(v[k]) : 0.0;
  };
  // Expected count of the smaller sample in a pooled bin.
  const double small_share = std::min(na, nb) / (na + nb);

  std::vector<double> ba;
  std::vector<double> bb;
  double ca = 0.0;
  double cb = 0.0;
  double rest = na + nb;
  for (std::size_t k = 0; k < len; ++k) {
    ca += at(a, k);
    cb += at(b, k);
    if ((ca + cb) * small_share >= min_expected &&
        (rest - ca - cb) * small_share >= min_expected) {
      ba.push_back(ca);
      bb.push_back(cb);
      rest -= ca + cb;
      ca = cb = 0.0;
    }
  }
  const double used_a = std::accumulate(ba.begin(), ba.end(), 0.0);
  const double used_b = std::accumulate(bb.begin(), bb.end(), 0.0);
  ba.push_back(na - used_a);
  bb.push_back(nb - used_b);

  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  TestResult r;
  for (std::size_t i = 0; i < ba.size(); ++i) {
    const double tot = ba[i] + bb[i];
    if (tot == 0.0) continue;
    const double d = ka * ba[i] - kb * bb[i];
    r.statistic += d * d / tot;
  }
  r.bins = ba.size();
  r.dof = static_cast<double>(r.bins) - 1.0;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_exponential(std::vector<double> samples, double rate) {
  if (samples.empty()) throw Error(Errc::domain, "ks_exponential: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = -std::expm1(-rate * samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  TestResult r;
  r.statistic = d;
  r.dof = n;
  r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
  return r;
}

std::vector<std::uint64_t> histogram(std::span<const std::size_t> values) {
  std::vector<std::uint64_t> h;
  for (std::size_t v : values) {
    if (v >= h.size()) h.resize(v + 1, 0);
    ++h[v];
  }
  return h;
}

void RunningMoments::add(double x) noexcept {
  // Terriberry's one-pass update.
  const double n1 = static_cast<double>(n_);
  ++n_;
  const double n = static_cast<double>(n_);
  const double delta = x - mean_;
  const double delta_n = delta / n;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean_ += delta_n;
  m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
  m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
  m2_ += term1;
}

double RunningMoments::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningMoments::central4() const noexcept {
  return n_ > 0 ? m4_ / static_cast<double>(n_) : 0.0;
}

double RunningMoments::mean_std_error() const noexcept {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double RunningMoments::variance_std_error() const noexcept {
  if (n_ < 2) return 0.0;
  const double s2 = m2_ / static_cast<double>(n_);
  return std::sqrt(std::max(0.0, central4() - s2 * s2) / static_cast<double>(n_));
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(Errc::domain, "correlation: need two equal-length samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace bellproc::stats
