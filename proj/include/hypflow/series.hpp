#pragma once

// Poincare series partial sums over enumerated orbit balls, critical-exponent
// estimation by two routes (annulus counting and series increments), and the
// modified series with a monotone weight.

#include <optional>
#include <string>
#include <vector>

#include "hypflow/orbit.hpp"

namespace hypflow {

// Annulus index: n such that n-1 < d <= n (boundary-consistent with
// enumerate_ball's keep test).
inline size_t annulus_of(double d) {
  return size_t(std::max(0.0, std::ceil(d - 1e-12)));
}

double poincare_partial(const OrbitBall& ball, double s);

// Per-annulus sums of e^{-r d}; pairwise within each annulus.
std::vector<double> annulus_weighted_sums(const OrbitBall& ball, double r);

// Cumulative partial sums P_n(s) for integer radii n = 0..floor(radius).
std::vector<double> partial_sums_by_radius(const OrbitBall& ball, double s);

struct DeltaEstimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool low_confidence = false;
};

struct DeltaCountingOptions {
  int window = 2;        // trailing-window width for cumulative counts
  int bootstrap = 200;
  uint64_t seed = 12345;
};

// Least-squares slope of ln of trailing-window cumulative counts over the
// last half of the annuli, with a bootstrap interval; clamped at 0.
DeltaEstimate estimate_delta_counting(const std::vector<int64_t>& annuli,
                                      const DeltaCountingOptions& opts = {});

enum class CrossingStatus { ok, at_grid_min, no_crossing };

struct DeltaPartialSum {
  double value = 0.0;
  CrossingStatus status = CrossingStatus::ok;
};

// Bisection on s of the sign of the slope of ln of the trailing-window
// series increments over the outer half of the ball. The grid must span
// [0, 1.2] with step <= 0.05.
DeltaPartialSum estimate_delta_partial_sum(const OrbitBall& ball,
                                           const std::vector<double>& s_grid);

enum class DivergenceVerdict { diverging, converging, inconclusive };

std::string to_string(DivergenceVerdict v);

struct DivergenceDiagnostic {
  DivergenceVerdict verdict = DivergenceVerdict::inconclusive;
  double slope = 0.0;       // slope of ln(partial sums) vs radius, outer half
  double tail_ratio = 0.0;  // late window increment / previous window increment
};

DivergenceDiagnostic divergence_diagnostic(const OrbitBall& ball, double s,
                                           double eps_div = 0.01);

// Piecewise-constant epsilon(u) >= 0, nonincreasing; the weight is
// h(t) = exp(integral_0^t epsilon). breaks[0] must be 0.
struct WeightSpec {
  std::vector<double> breaks;
  std::vector<double> eps;

  static WeightSpec trivial() { return WeightSpec{{0.0}, {0.0}}; }
  void validate() const;
  double h(double t) const;
};

double modified_series_partial(const OrbitBall& ball, double s, const WeightSpec& w);

struct PoincareReport {
  std::vector<double> s_grid;
  std::vector<std::vector<double>> partial_sums;  // [grid index][integer radius]
  std::vector<int64_t> annuli;
  DeltaEstimate delta_counting;
  DeltaPartialSum delta_partial_sum;
  DivergenceDiagnostic diagnostic_at_delta;  // at the counting estimate
  double estimator_gap = 0.0;
  bool ball_complete = true;
  double radius = 0.0;
};

PoincareReport build_poincare_report(const OrbitBall& ball,
                                     const std::vector<double>& s_grid,
                                     double eps_div = 0.01);

std::vector<double> default_s_grid();  // 0, 0.05, ..., 1.2

}  // namespace hypflow
