#include "hypflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypflow/rng.hpp"

namespace hypflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ln(|xi - p|^2 / (1 - |p|^2)); busemann(xi, p, x) = this at p minus at x.
double busemann_base(cplx xi_unit, cplx p) {
  return std::log(std::norm(xi_unit - p)) - std::log1p(-std::norm(p));
}

double residual_to_support(double theta, const MeasureHistogram& mu, double floor) {
  double binw = kTwoPi / double(mu.bins);
  size_t k0 = mu.bin_of(theta);
  if (mu.weights[k0] > floor) return 0.0;
  double best = kPi;
  for (size_t k = 0; k < mu.bins; ++k) {
    if (mu.weights[k] <= floor) continue;
    double lo = double(k) * binw, hi = lo + binw;
    best = std::min(best, std::min(angular_dist(theta, lo), angular_dist(theta, hi)));
  }
  return best;
}

}  // namespace

double bms_density(const DiskPoint& p, double r, const BoundaryPoint& xi,
                   const BoundaryPoint& eta) {
  return std::exp(r * gromov_product(p, xi, eta));
}

std::vector<BmsPairSample> bms_sample(const MeasureHistogram& mu, double r,
                                      size_t count, uint64_t seed,
                                      BmsSampleStats* stats) {
  if (count < 1) throw std::invalid_argument("bms_sample: count must be >= 1");
  if (mu.degenerate) throw std::invalid_argument("bms_sample: degenerate histogram");

  const double floor = mu.mass_floor();
  std::vector<size_t> bins;
  std::vector<double> cdf;
  double acc = 0.0;
  for (size_t k = 0; k < mu.bins; ++k)
    if (mu.weights[k] > floor) {
      bins.push_back(k);
      acc += mu.weights[k];
      cdf.push_back(acc);
    }
  if (bins.size() < 2)
    throw std::invalid_argument("bms_sample: measure supported on fewer than 2 bins");

  const cplx zp = mu.base_point.z();
  double max_base = -kInf;
  for (size_t k : bins)
    max_base = std::max(max_base, busemann_base(BoundaryPoint(mu.bin_center(k)).unit(), zp));
  const double binw = kTwoPi / double(mu.bins);
  double beta_bound = 2.0 * max_base + 2.0 * std::log(1.0 / std::sin(std::min(binw, 1.0)));
  double envelope = r > 0.0 ? std::exp(r * std::max(beta_bound, 0.0)) : 1.0;

  Rng rng(seed);
  std::vector<BmsPairSample> samples;
  samples.reserve(count);
  BmsSampleStats local;
  const uint64_t max_proposals = 1'000'000 + 100'000 * uint64_t(count);
  auto draw_bin = [&]() {
    double u = rng.uniform01() * acc;
    size_t i = size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    return bins[std::min(i, bins.size() - 1)];
  };
  while (samples.size() < count) {
    if (++local.proposals > max_proposals)
      throw std::runtime_error("bms_sample: rejection sampler stalled");
    size_t k = draw_bin(), l = draw_bin();
    size_t dk = (k > l ? k - l : l - k);
    dk = std::min(dk, mu.bins - dk);
    if (dk <= 1) continue;  // diagonal and adjacent bins are excluded
    BoundaryPoint xi(mu.bin_center(k)), eta(mu.bin_center(l));
    double density = bms_density(mu.base_point, r, xi, eta);
    while (density > envelope) {
      envelope *= 2.0;
      ++local.envelope_violations;
    }
    if (rng.uniform01() < density / envelope)
      samples.push_back(BmsPairSample{xi, eta, density});
  }
  local.envelope = envelope;
  if (stats) *stats = local;
  return samples;
}

ConicalProfile conical_statistic(const BoundaryPoint& xi, const OrbitBall& ball,
                                 const DiskPoint& p, double prefix_radius,
                                 double plateau_rel, double plateau_floor) {
  ConicalProfile profile;
  const double r_eff = prefix_radius < 0.0 ? ball.radius : prefix_radius;
  const size_t n_el =
      prefix_radius < 0.0 ? ball.elements.size() : ball.prefix_count(prefix_radius);
  profile.depth_max = std::max(1, int(std::floor(r_eff + 1e-12)) - 2);

  const cplx zp = p.z();
  const bool reuse_points = std::abs(zp - ball.base_q) <= 1e-12 &&
                            std::abs(ball.base_p - ball.base_q) <= 1e-12;
  const cplx dir_conj = std::conj(chart_at_boundary(zp, xi.unit()));

  std::vector<double> bucket_min(size_t(profile.depth_max) + 1, kInf);
  for (size_t i = 0; i < n_el; ++i) {
    cplx z = reuse_points ? ball.elements[i].point
                          : ball.elements[i].map.apply_disk(zp);
    cplx w = dir_conj * chart_at(zp, z);
    double u = w.real();
    if (u <= 0.0) continue;  // foot parameter is nonpositive
    double nrm = std::norm(w);
    double disc = (1.0 + nrm) * (1.0 + nrm) - 4.0 * u * u;
    double x = 2.0 * u / ((1.0 + nrm) + std::sqrt(std::max(disc, 0.0)));
    double t = 2.0 * std::atanh(std::min(x, 1.0 - 1e-17));
    int m = int(std::floor(t));
    if (m < 0) continue;
    if (m > profile.depth_max) m = profile.depth_max;
    double dperp = dist(w, cplx(x, 0.0));
    auto& slot = bucket_min[size_t(m)];
    if (dperp < slot) slot = dperp;
  }
  profile.values.assign(size_t(profile.depth_max) + 1, kInf);
  double running = kInf;
  for (int n = profile.depth_max; n >= 0; --n) {
    running = std::min(running, bucket_min[size_t(n)]);
    profile.values[size_t(n)] = running;
  }
  profile.c_final = profile.values[size_t(profile.depth_max)];
  int q_start = profile.depth_max - std::max(1, profile.depth_max / 4);
  double c_q = profile.values[size_t(std::max(q_start, 0))];
  if (std::isfinite(profile.c_final)) {
    profile.plateau_ratio = profile.c_final / std::max(c_q, 1e-300);
    profile.plateau = profile.c_final <= plateau_floor ||
                      profile.plateau_ratio <= 1.0 + plateau_rel;
  }
  return profile;
}

MyrbergProfile myrberg_statistic(
    const BoundaryPoint& xi,
    const std::vector<std::pair<BoundaryPoint, BoundaryPoint>>& targets,
    const OrbitBall& ball, const DiskPoint& x) {
  if (targets.empty()) throw std::invalid_argument("myrberg_statistic: no targets");
  for (const auto& [eta, etap] : targets)
    if (eta.approx_eq(etap))
      throw std::invalid_argument("myrberg_statistic: target pair must be distinct");

  const cplx zx = x.z();
  const bool reuse_points = std::abs(zx - ball.base_q) <= 1e-12 &&
                            std::abs(ball.base_p - ball.base_q) <= 1e-12;
  const size_t nt = targets.size();
  std::vector<double> eta_chart(nt), etap_theta(nt);
  for (size_t t = 0; t < nt; ++t) {
    eta_chart[t] = std::arg(chart_at_boundary(zx, targets[t].first.unit()));
    etap_theta[t] = targets[t].second.theta;
  }

  MyrbergProfile profile;
  int depth_top = std::max(1, int(std::floor(ball.radius + 1e-12)));
  for (int d = 1; d <= depth_top; ++d) profile.depths.push_back(d);
  profile.best_eps.assign(nt, std::vector<double>(profile.depths.size(), kInf));

  std::vector<double> running(nt, kInf);
  size_t depth_idx = 0;
  auto flush_through = [&](double dist_value) {
    while (depth_idx < profile.depths.size() &&
           dist_value > double(profile.depths[depth_idx]) * (1.0 + 1e-12)) {
      for (size_t t = 0; t < nt; ++t) profile.best_eps[t][depth_idx] = running[t];
      ++depth_idx;
    }
  };

  for (size_t i = 0; i < ball.elements.size(); ++i) {
    const auto& e = ball.elements[i];
    flush_through(e.dist);
    cplx axp = reuse_points ? e.point : e.map.apply_disk(zx);
    cplx w = chart_at(zx, axp);
    if (std::abs(w) < 1e-9) continue;  // alpha x ~ x: direction undefined
    double theta_fwd = std::arg(w);
    double alpha_xi = e.map.disk_aut().apply_angle(xi.theta);
    for (size_t t = 0; t < nt; ++t) {
      double eps = std::max(angular_dist(theta_fwd, eta_chart[t]),
                            angular_dist(alpha_xi, etap_theta[t]));
      if (eps < running[t]) running[t] = eps;
    }
  }
  flush_through(kInf);
  profile.final_eps = running;
  return profile;
}

NonwanderingResult nonwandering_test(const TangentVector& v,
                                     const MeasureHistogram& limit_approx,
                                     double eps) {
  if (limit_approx.degenerate)
    throw std::invalid_argument("nonwandering_test: degenerate limit approximation");
  NonwanderingResult res;
  double floor = limit_approx.mass_floor();
  res.residual_forward =
      residual_to_support(v.forward_endpoint().theta, limit_approx, floor);
  res.residual_backward =
      residual_to_support(v.backward_endpoint().theta, limit_approx, floor);
  res.ok = res.residual_forward <= eps && res.residual_backward <= eps;
  return res;
}

namespace {

std::vector<std::pair<BoundaryPoint, BoundaryPoint>> default_myrberg_targets(
    const MeasureHistogram& mu) {
  // the three highest-mass bins, pairwise separated by at least 0.2 rad
  std::vector<size_t> order(mu.bins);
  for (size_t k = 0; k < mu.bins; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (mu.weights[a] != mu.weights[b]) return mu.weights[a] > mu.weights[b];
    return a < b;
  });
  std::vector<double> centers;
  for (size_t k : order) {
    if (mu.weights[k] <= mu.mass_floor()) break;
    double c = mu.bin_center(k);
    bool ok = true;
    for (double prev : centers)
      if (angular_dist(prev, c) < 0.2) { ok = false; break; }
    if (ok) centers.push_back(c);
    if (centers.size() == 3) break;
  }
  if (centers.size() < 2)
    throw std::invalid_argument("myrberg targets: support too concentrated");
  std::vector<std::pair<BoundaryPoint, BoundaryPoint>> targets;
  for (size_t i = 0; i < centers.size(); ++i)
    targets.emplace_back(BoundaryPoint(centers[i]),
                         BoundaryPoint(centers[(i + 1) % centers.size()]));
  return targets;
}

}  // namespace

ConservativityReport conservativity_report(const OrbitBall& ball,
                                           const std::string& preset_name,
                                           double s_or_auto, size_t bins,
                                           size_t samples,
                                           const DichotomyThresholds& thresholds,
                                           uint64_t seed,
                                           const std::string& preset_note) {
  ConservativityReport report;
  report.preset = preset_name;
  report.radius = ball.radius;
  report.ball_size = ball.elements.size();
  report.ball_complete = ball.complete;
  if (!preset_note.empty()) report.notes.push_back(preset_note);
  report.notes.push_back(
      "finite-depth indicators from a truncated orbit; no claim of proof");

  auto annuli = annuli_counts(ball);
  report.delta_counting = estimate_delta_counting(annuli.a);
  report.delta_partial_sum = estimate_delta_partial_sum(ball, default_s_grid());
  report.s_used = s_or_auto > 0.0
                      ? s_or_auto
                      : report.delta_counting.value + thresholds.auto_s_margin;

  DiskPoint p(ball.base_p);
  MeasureHistogram mu = ps_histogram(ball, report.s_used, p, bins);

  size_t support = 0;
  for (double w : mu.weights)
    if (w > thresholds.elementary_support_eps * mu.total_mass) ++support;
  if (support <= 4) {
    report.elementary = true;
    report.elementary_reason =
        "measure support occupies " + std::to_string(support) +
        " bins (limit set of at most 2 points); dichotomy indicators skipped";
    report.verdict = "elementary";
    return report;
  }

  report.divergence =
      divergence_diagnostic(ball, report.delta_counting.value,
                            thresholds.divergence_epsilon);
  report.conical_threshold =
      thresholds.conical_c_factor *
      (visibility_constant(kPi / 2.0) + dist(ball.base_p, ball.base_q));

  auto pair_samples = bms_sample(mu, report.s_used, samples, seed);
  auto targets = default_myrberg_targets(mu);

  size_t conical_passes = 0;
  std::vector<double> finals, earlier;
  double floor = mu.mass_floor();
  int depth_top = std::max(1, int(std::floor(ball.radius + 1e-12)));
  int depth_earlier = std::max(1, int(std::floor(0.7 * double(depth_top))));
  for (const auto& sample : pair_samples) {
    ClassificationRecord rec;
    rec.point = sample.xi;
    rec.limit_dist = residual_to_support(sample.xi.theta, mu, floor);
    rec.conical = conical_statistic(sample.xi, ball, p, -1.0,
                                    thresholds.conical_plateau_rel);
    rec.conical_pass =
        rec.conical.plateau && rec.conical.c_final <= report.conical_threshold;
    rec.myrberg = myrberg_statistic(sample.xi, targets, ball, p);
    double worst = 0.0;
    for (double eps : rec.myrberg.final_eps) worst = std::max(worst, eps);
    rec.myrberg_pass = worst < thresholds.myrberg_eps;
    if (rec.myrberg_pass && !rec.conical_pass) ++report.lm_subset_lc_violations;
    if (rec.conical_pass) ++conical_passes;
    for (size_t t = 0; t < rec.myrberg.final_eps.size(); ++t) {
      finals.push_back(rec.myrberg.final_eps[t]);
      earlier.push_back(rec.myrberg.best_eps[t][size_t(depth_earlier - 1)]);
    }
    report.records.push_back(std::move(rec));
  }
  report.conical_pass_fraction =
      pair_samples.empty() ? 0.0 : double(conical_passes) / double(pair_samples.size());
  report.myrberg_median_final = median_of(finals);
  report.myrberg_median_earlier = median_of(earlier);
  report.myrberg_trend_decreasing =
      report.myrberg_median_final < report.myrberg_median_earlier;

  bool i1 = report.divergence.verdict == DivergenceVerdict::diverging;
  bool i2 = report.conical_pass_fraction >= 0.9;
  bool i3 = report.myrberg_trend_decreasing;
  if (i1 && i2 && i3)
    report.verdict = "conservative-consistent";
  else if (!i1 && !i2 && !i3)
    report.verdict = "dissipative-consistent";
  else
    report.verdict = "mixed";
  return report;
}

}  // namespace hypflow
