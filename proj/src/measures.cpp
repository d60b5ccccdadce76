#include "hypflow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypflow/reduce.hpp"

namespace hypflow {

namespace {

constexpr double kProjectionCutoff = 1e-6;  // atoms this close to p are skipped

// Ideal endpoint (global angle) of the ray from p through z.
inline double projection_angle(cplx p, cplx z) {
  cplx w = chart_at(p, z);
  double m = std::abs(w);
  return std::arg(unchart_at(p, w / m));
}

}  // namespace

MeasureHistogram ps_histogram(const OrbitBall& ball, double s, const DiskPoint& p,
                              size_t bins) {
  if (bins < 64 || bins > 65536)
    throw std::invalid_argument("ps_histogram: bins must lie in [64, 65536]");
  if (ball.elements.empty()) throw std::invalid_argument("ps_histogram: empty ball");
  if (std::abs(ball.base_p - ball.base_q) > 1e-12)
    throw std::invalid_argument("ps_histogram: ball must be enumerated at p = q = p0");

  MeasureHistogram mu;
  mu.bins = bins;
  mu.weights.assign(bins, 0.0);
  mu.base_point = p;
  mu.s_param = s;
  mu.ball_radius = ball.radius;
  mu.normalizer = poincare_partial(ball, s);

  const cplx zp = p.z();
  const auto& els = ball.elements;
  std::vector<double> atom_weight(els.size(), 0.0);
  for (size_t i = 0; i < els.size(); ++i) {
    double d = dist(zp, els[i].point);
    if (d < kProjectionCutoff) {
      mu.excluded_mass += std::exp(-s * d) / mu.normalizer;
      continue;
    }
    double w = std::exp(-s * d) / mu.normalizer;
    atom_weight[i] = w;
    mu.weights[mu.bin_of(projection_angle(zp, els[i].point))] += w;
  }
  mu.total_mass = pairwise_sum(els.size(), [&](size_t i) { return atom_weight[i]; });
  mu.degenerate = mu.total_mass == 0.0;
  return mu;
}

CocycleAuditReport cocycle_audit(const MeasureHistogram& mu_p,
                                 const MeasureHistogram& mu_q, double r) {
  if (mu_p.bins != mu_q.bins)
    throw std::invalid_argument("cocycle_audit: bin counts differ");
  CocycleAuditReport report;
  report.deviations.assign(mu_p.bins, std::numeric_limits<double>::quiet_NaN());
  const double floor_p = mu_p.mass_floor(), floor_q = mu_q.mass_floor();
  const cplx zp = mu_p.base_point.z(), zq = mu_q.base_point.z();
  double wsum = 0.0, wdev = 0.0, covered = 0.0;
  for (size_t k = 0; k < mu_p.bins; ++k) {
    double wp = mu_p.weights[k], wq = mu_q.weights[k];
    if (wp <= floor_p || wq <= floor_q) continue;
    double dev = std::abs(std::log(wp / wq) +
                          r * busemann(BoundaryPoint(mu_p.bin_center(k)), zp, zq));
    report.deviations[k] = dev;
    report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
    double w = 0.5 * (wp + wq);
    wsum += w;
    wdev += w * dev;
    covered += wp + wq;
    ++report.compared_bins;
  }
  report.mass_weighted_mean = wsum > 0.0 ? wdev / wsum : 0.0;
  double total = mu_p.total_mass + mu_q.total_mass;
  report.mass_coverage = total > 0.0 ? covered / total : 0.0;
  return report;
}

EquivarianceAudit equivariance_audit(const OrbitBall& ball, double s,
                                     const DiskPoint& p, const MobiusMap& alpha,
                                     size_t bins) {
  if (bins < 64 || bins > 65536)
    throw std::invalid_argument("equivariance_audit: bins must lie in [64, 65536]");
  if (std::abs(ball.base_p - ball.base_q) > 1e-12)
    throw std::invalid_argument("equivariance_audit: ball must be enumerated at p = q = p0");

  EquivarianceAudit audit;
  for (const auto& e : ball.elements)
    if (map_distance(e.map, alpha) <= 1e-9) { audit.alpha_in_ball = true; break; }

  const cplx zp = p.z();
  const cplx zap = alpha.apply_disk(zp);
  const cplx q0 = ball.base_q;
  audit.displacement = dist(q0, alpha.apply_disk(q0));
  const MobiusMap alpha_inv = alpha.inverse();
  const double normalizer = poincare_partial(ball, s);
  const double keep = ball.radius * (1.0 + 1e-12);

  auto bin_index = [bins](double theta) {
    auto k = size_t(wrap_angle(theta) / kTwoPi * double(bins));
    return k >= bins ? bins - 1 : k;
  };

  std::vector<double> side_p(bins, 0.0), side_pull(bins, 0.0);
  const auto& els = ball.elements;
  for (size_t i = 0; i < els.size(); ++i) {
    cplx z = els[i].point;
    // mu_p side: atom of the reference measure
    double dp = dist(zp, z);
    if (dp >= kProjectionCutoff)
      side_p[bin_index(projection_angle(zp, z))] += std::exp(-s * dp) / normalizer;
    // mu_{alpha p}(alpha .) side, pulled back through alpha
    double dap = dist(zap, z);
    cplx zpull = alpha_inv.apply_disk(z);
    if (dap >= kProjectionCutoff)
      side_pull[bin_index(projection_angle(zp, zpull))] += std::exp(-s * dap) / normalizer;

    // truncation mismatch: left-translates leaving / entering the ball
    double d_out = dist(q0, alpha.apply_disk(z));   // d(p0, alpha gamma p0)
    if (d_out > keep) audit.mismatch_bound += std::exp(-s * dp) / normalizer;
    double d_in = dist(q0, zpull);                  // d(p0, alpha^{-1} gamma' p0)
    if (d_in > keep) audit.mismatch_bound += std::exp(-s * dist(zp, zpull)) / normalizer;

    if (els[i].dist > ball.radius - audit.displacement)
      audit.annulus_proxy += std::exp(-s * dp) / normalizer;
  }
  double tv = 0.0;
  for (size_t k = 0; k < bins; ++k) tv += std::abs(side_p[k] - side_pull[k]);
  audit.total_variation = 0.5 * tv;
  return audit;
}

ShadowLemmaAudit shadow_lemma_audit(const OrbitBall& ball,
                                    const MeasureHistogram& mu_p, double R,
                                    double r) {
  if (!(R > 0.0)) throw std::invalid_argument("shadow_lemma_audit: R must be positive");
  ShadowLemmaAudit audit;
  audit.min_ratio = std::numeric_limits<double>::infinity();
  const cplx zp = mu_p.base_point.z();
  const double binw = kTwoPi / double(mu_p.bins);
  const double half_radius = ball.radius / 2.0;

  for (const auto& e : ball.elements) {
    if (e.dist <= half_radius) continue;
    ShadowArc arc = shadow_arc(zp, e.point, R);
    if (arc.full) { ++audit.degenerate_shadows; continue; }
    // prorated arc mass across bins
    double lo = wrap_angle(arc.center - arc.half_width);
    double span = 2.0 * arc.half_width;
    double mass = 0.0;
    auto k0 = size_t(lo / binw);
    if (k0 >= mu_p.bins) k0 = mu_p.bins - 1;
    double covered = 0.0;
    for (size_t step = 0; covered < span && step <= mu_p.bins; ++step) {
      size_t k = (k0 + step) % mu_p.bins;
      double bin_lo = double(k) * binw;
      double start = step == 0 ? lo : bin_lo;
      double remaining = span - covered;
      double seg = std::min(bin_lo + binw - start, remaining);
      mass += mu_p.weights[k] * (seg / binw);
      covered += seg;
    }
    double d = dist(zp, e.point);
    double ratio = mass / std::exp(-r * d);
    if (!(ratio > 0.0)) { ++audit.zero_mass_shadows; continue; }
    audit.min_ratio = std::min(audit.min_ratio, ratio);
    audit.max_ratio = std::max(audit.max_ratio, ratio);
    ++audit.used;
  }
  if (audit.used > 0) {
    audit.c_emp = std::max(audit.max_ratio, 1.0 / audit.min_ratio);
    audit.spread_log10 = std::log10(audit.max_ratio / audit.min_ratio);
  }
  return audit;
}

MinimalityProbe support_minimality_probe(const MeasureHistogram& mu,
                                         const OrbitBall& ball, double eps) {
  MinimalityProbe probe;
  double floor = eps * mu.total_mass;
  size_t top = 0;
  for (size_t k = 1; k < mu.bins; ++k)
    if (mu.weights[k] > mu.weights[top]) top = k;
  probe.seed_theta = mu.bin_center(top);

  std::vector<char> positive(mu.bins, 0), hit(mu.bins, 0);
  for (size_t k = 0; k < mu.bins; ++k)
    if (mu.weights[k] > floor) { positive[k] = 1; ++probe.positive_bins; }

  BoundaryPoint seed(probe.seed_theta);
  for (const auto& e : ball.elements) {
    double theta = e.map.disk_aut().apply_angle(seed.theta);
    size_t k = mu.bin_of(theta);
    if (positive[k] && !hit[k]) { hit[k] = 1; ++probe.hit_bins; }
  }
  probe.coverage = probe.positive_bins > 0
                       ? double(probe.hit_bins) / double(probe.positive_bins)
                       : 0.0;
  return probe;
}

}  // namespace hypflow
