#include "hypflow/series.hpp"

#include <algorithm>
#include <cmath>

#include "hypflow/reduce.hpp"
#include "hypflow/rng.hpp"

namespace hypflow {

namespace {

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
  return sxy / sxx;
}

// Boundaries of the integer annuli inside the sorted element list.
std::vector<size_t> annulus_offsets(const OrbitBall& ball, size_t nbuckets) {
  std::vector<size_t> off(nbuckets + 1, 0);
  for (const auto& e : ball.elements) {
    size_t n = annulus_of(e.dist);
    if (n + 1 < off.size()) ++off[n + 1];
  }
  for (size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
  return off;
}

}  // namespace

double poincare_partial(const OrbitBall& ball, double s) {
  if (s < 0.0) throw std::invalid_argument("poincare_partial: s must be nonnegative");
  const auto& els = ball.elements;
  return pairwise_sum(els.size(), [&](size_t i) { return std::exp(-s * els[i].dist); });
}

std::vector<double> annulus_weighted_sums(const OrbitBall& ball, double r) {
  size_t nbuckets = size_t(std::ceil(ball.radius - 1e-12)) + 1;
  auto off = annulus_offsets(ball, nbuckets);
  std::vector<double> sums(nbuckets, 0.0);
  const auto& els = ball.elements;
  for (size_t n = 0; n < nbuckets; ++n)
    sums[n] = pairwise_sum(off[n], off[n + 1],
                           [&](size_t i) { return std::exp(-r * els[i].dist); });
  return sums;
}

std::vector<double> partial_sums_by_radius(const OrbitBall& ball, double s) {
  auto sums = annulus_weighted_sums(ball, s);
  size_t top = size_t(std::floor(ball.radius + 1e-12));
  std::vector<double> out(std::min(sums.size(), top + 1), 0.0);
  double acc = 0.0;
  for (size_t n = 0; n < out.size(); ++n) {
    acc += sums[n];
    out[n] = acc;
  }
  return out;
}

DeltaEstimate estimate_delta_counting(const std::vector<int64_t>& annuli,
                                      const DeltaCountingOptions& opts) {
  if (opts.window < 1) throw std::invalid_argument("delta_counting: bad window");
  int64_t nonempty = 0;
  for (int64_t a : annuli) nonempty += (a > 0) ? 1 : 0;
  if (nonempty < 5)
    throw std::invalid_argument("delta_counting: fewer than 5 nonempty annuli");

  const int n_max = int(annuli.size()) - 1;
  const int n_lo = std::max(opts.window, (n_max + 1) / 2);
  std::vector<double> xs, ys;
  for (int n = n_lo; n <= n_max; ++n) {
    int64_t w = 0;
    for (int m = n - opts.window + 1; m <= n; ++m)
      if (m >= 0) w += annuli[size_t(m)];
    if (w > 0) {
      xs.push_back(double(n));
      ys.push_back(std::log(double(w)));
    }
  }
  if (xs.size() < 5)
    throw std::invalid_argument("delta_counting: fewer than 5 usable regression points");

  DeltaEstimate est;
  est.value = std::max(0.0, ls_slope(xs, ys));

  Rng rng(opts.seed);
  std::vector<double> slopes;
  slopes.reserve(size_t(opts.bootstrap));
  std::vector<double> bx(xs.size()), by(xs.size());
  for (int b = 0; b < opts.bootstrap; ++b) {
    bool distinct = false;
    for (size_t i = 0; i < xs.size(); ++i) {
      size_t j = size_t(rng.below(xs.size()));
      bx[i] = xs[j];
      by[i] = ys[j];
      if (bx[i] != bx[0]) distinct = true;
    }
    if (!distinct) continue;
    slopes.push_back(std::max(0.0, ls_slope(bx, by)));
  }
  std::sort(slopes.begin(), slopes.end());
  if (!slopes.empty()) {
    est.lo = slopes[size_t(0.025 * double(slopes.size() - 1))];
    est.hi = slopes[size_t(0.975 * double(slopes.size() - 1))];
  }
  est.low_confidence = xs.size() < 6 || (est.hi - est.lo) > 0.25;
  return est;
}

namespace {

// Slope of ln of trailing two-annulus series increments over the outer half.
// Positive: the series is still gaining mass at this exponent.
std::optional<double> increment_slope(const std::vector<double>& annulus_sums,
                                      int n_max) {
  const int n_lo = std::max(1, (n_max + 1) / 2);
  std::vector<double> xs, ys;
  for (int n = n_lo; n <= n_max; ++n) {
    double w = annulus_sums[size_t(n)] + (n >= 1 ? annulus_sums[size_t(n - 1)] : 0.0);
    if (w > 0.0) {
      xs.push_back(double(n));
      ys.push_back(std::log(w));
    }
  }
  if (xs.size() < 3) return std::nullopt;
  return ls_slope(xs, ys);
}

}  // namespace

DeltaPartialSum estimate_delta_partial_sum(const OrbitBall& ball,
                                           const std::vector<double>& s_grid) {
  if (s_grid.size() < 2 || s_grid.front() > 1e-12 || s_grid.back() < 1.2 - 1e-12)
    throw std::invalid_argument("delta_partial_sum: grid must span [0, 1.2]");
  for (size_t i = 1; i < s_grid.size(); ++i)
    if (s_grid[i] - s_grid[i - 1] > 0.05 + 1e-12 || s_grid[i] <= s_grid[i - 1])
      throw std::invalid_argument("delta_partial_sum: grid step must be in (0, 0.05]");

  const int n_max = int(std::floor(ball.radius + 1e-12));
  auto slope_at = [&](double s) -> std::optional<double> {
    return increment_slope(annulus_weighted_sums(ball, s), n_max);
  };

  DeltaPartialSum out;
  std::optional<double> prev = slope_at(s_grid[0]);
  if (!prev || *prev <= 0.0) {
    out.value = s_grid[0];
    out.status = CrossingStatus::at_grid_min;
    return out;
  }
  for (size_t i = 1; i < s_grid.size(); ++i) {
    std::optional<double> cur = slope_at(s_grid[i]);
    if (cur && *cur <= 0.0) {
      double lo = s_grid[i - 1], hi = s_grid[i];
      for (int it = 0; it < 40 && hi - lo > 1e-4; ++it) {
        double mid = 0.5 * (lo + hi);
        std::optional<double> gm = slope_at(mid);
        if (gm && *gm <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      out.value = 0.5 * (lo + hi);
      out.status = CrossingStatus::ok;
      return out;
    }
    prev = cur;
  }
  out.value = s_grid.back();
  out.status = CrossingStatus::no_crossing;
  return out;
}

std::string to_string(DivergenceVerdict v) {
  switch (v) {
    case DivergenceVerdict::diverging: return "diverging";
    case DivergenceVerdict::converging: return "converging";
    case DivergenceVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

DivergenceDiagnostic divergence_diagnostic(const OrbitBall& ball, double s,
                                           double eps_div) {
  if (s < 0.0) throw std::invalid_argument("divergence_diagnostic: s must be >= 0");
  DivergenceDiagnostic diag;
  auto partial = partial_sums_by_radius(ball, s);
  auto sums = annulus_weighted_sums(ball, s);
  const int n_max = int(partial.size()) - 1;
  const int n_lo = std::max(0, (n_max + 1) / 2);
  std::vector<double> xs, ys;
  for (int n = n_lo; n <= n_max; ++n)
    if (partial[size_t(n)] > 0.0) {
      xs.push_back(double(n));
      ys.push_back(std::log(partial[size_t(n)]));
    }
  if (xs.size() < 3) return diag;  // inconclusive
  diag.slope = ls_slope(xs, ys);

  double late = sums[size_t(n_max)] + (n_max >= 1 ? sums[size_t(n_max - 1)] : 0.0);
  double early = n_max >= 3 ? sums[size_t(n_max - 2)] + sums[size_t(n_max - 3)] : 0.0;
  diag.tail_ratio = early > 0.0 ? late / early : (late > 0.0 ? HUGE_VAL : 0.0);

  if (diag.slope > eps_div)
    diag.verdict = DivergenceVerdict::diverging;
  else if (late == 0.0 || diag.tail_ratio <= 0.95)
    diag.verdict = DivergenceVerdict::converging;
  else
    diag.verdict = DivergenceVerdict::inconclusive;
  return diag;
}

void WeightSpec::validate() const {
  if (breaks.empty() || breaks.size() != eps.size())
    throw std::invalid_argument("WeightSpec: breaks and eps must be nonempty and equal length");
  if (breaks.front() != 0.0)
    throw std::invalid_argument("WeightSpec: first break must be 0");
  for (size_t i = 1; i < breaks.size(); ++i)
    if (breaks[i] <= breaks[i - 1])
      throw std::invalid_argument("WeightSpec: breaks must be increasing");
  for (size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] < 0.0) throw std::invalid_argument("WeightSpec: eps must be nonnegative");
    if (i > 0 && eps[i] > eps[i - 1] + 1e-15)
      throw std::invalid_argument("WeightSpec: eps must be nonincreasing");
  }
}

double WeightSpec::h(double t) const {
  double integral = 0.0;
  for (size_t i = 0; i < breaks.size(); ++i) {
    double hi = (i + 1 < breaks.size()) ? std::min(t, breaks[i + 1]) : t;
    double seg = hi - breaks[i];
    if (seg <= 0.0) break;
    integral += eps[i] * seg;
  }
  return std::exp(integral);
}

double modified_series_partial(const OrbitBall& ball, double s, const WeightSpec& w) {
  if (s < 0.0) throw std::invalid_argument("modified_series_partial: s must be >= 0");
  w.validate();
  const auto& els = ball.elements;
  return pairwise_sum(els.size(), [&](size_t i) {
    return w.h(els[i].dist) * std::exp(-s * els[i].dist);
  });
}

std::vector<double> default_s_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 24; ++i) grid.push_back(double(i) * 0.05);
  return grid;
}

PoincareReport build_poincare_report(const OrbitBall& ball,
                                     const std::vector<double>& s_grid,
                                     double eps_div) {
  PoincareReport report;
  report.s_grid = s_grid;
  report.radius = ball.radius;
  report.ball_complete = ball.complete;
  report.partial_sums.reserve(s_grid.size());
  for (double s : s_grid) report.partial_sums.push_back(partial_sums_by_radius(ball, s));
  report.annuli = annuli_counts(ball).a;
  report.delta_counting = estimate_delta_counting(report.annuli);
  report.delta_partial_sum = estimate_delta_partial_sum(ball, s_grid);
  report.diagnostic_at_delta =
      divergence_diagnostic(ball, report.delta_counting.value, eps_div);
  report.estimator_gap =
      std::abs(report.delta_counting.value - report.delta_partial_sum.value);
  return report;
}

}  // namespace hypflow
