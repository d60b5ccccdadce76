#pragma once

// Finite-depth boundary-point classification (conical / Myrberg /
// non-wandering), the Bowen-Margulis-Sullivan quasi-product density and
// sampler, and the conservativity report that juxtaposes the dichotomy
// indicators.

#include <optional>
#include <string>
#include <vector>

#include "hypflow/measures.hpp"
#include "hypflow/series.hpp"

namespace hypflow {

double bms_density(const DiskPoint& p, double r, const BoundaryPoint& xi,
                   const BoundaryPoint& eta);

struct BmsPairSample {
  BoundaryPoint xi;
  BoundaryPoint eta;
  double density = 0.0;  // e^{r beta_p(xi, eta)} at the sampled pair
};

struct BmsSampleStats {
  uint64_t proposals = 0;
  uint64_t envelope_violations = 0;
  double envelope = 0.0;
};

// Rejection sampler for pairs (xi, eta) ~ e^{r beta_p} mu x mu off the
// diagonal; bin-level, same and adjacent bins excluded. Deterministic in the
// seed. If the analytic envelope is ever exceeded it is doubled and the
// event is counted.
std::vector<BmsPairSample> bms_sample(const MeasureHistogram& mu, double r,
                                      size_t count, uint64_t seed,
                                      BmsSampleStats* stats = nullptr);

struct ConicalProfile {
  // values[n] = min perpendicular distance to the ray over enumerated orbit
  // points whose foot parameter along the ray is >= n; +inf when that tail
  // is empty. Index n runs from 0 to depth_max.
  std::vector<double> values;
  int depth_max = 0;
  double plateau_ratio = 0.0;  // C(last) / C(start of last quartile)
  bool plateau = false;
  double c_final = 0.0;
};

// Conical statistic for the ray from p toward xi against the orbit of p.
// `prefix_radius` restricts the ball to elements with d <= prefix_radius.
ConicalProfile conical_statistic(const BoundaryPoint& xi, const OrbitBall& ball,
                                 const DiskPoint& p,
                                 double prefix_radius = -1.0,
                                 double plateau_rel = 0.05,
                                 double plateau_floor = 0.5);

struct MyrbergProfile {
  std::vector<int> depths;                     // integer prefix radii
  std::vector<std::vector<double>> best_eps;   // [target][depth index]
  std::vector<double> final_eps;               // per target, at full depth
};

// Per target pair (eta, eta') and depth: min over the ball prefix of
// max(angle at x between alpha x and eta, angular distance from alpha xi to
// eta'). Nonincreasing in depth by construction.
MyrbergProfile myrberg_statistic(
    const BoundaryPoint& xi,
    const std::vector<std::pair<BoundaryPoint, BoundaryPoint>>& targets,
    const OrbitBall& ball, const DiskPoint& x);

struct NonwanderingResult {
  bool ok = false;
  double residual_forward = 0.0;
  double residual_backward = 0.0;
};

// True iff both ideal endpoints of the vector's geodesic fall within eps of
// a positive-mass bin of the limit-set approximation.
NonwanderingResult nonwandering_test(const TangentVector& v,
                                     const MeasureHistogram& limit_approx,
                                     double eps);

struct ClassificationRecord {
  BoundaryPoint point;
  double limit_dist = 0.0;  // angular distance to the nearest positive bin
  ConicalProfile conical;
  MyrbergProfile myrberg;
  bool conical_pass = false;
  bool myrberg_pass = false;
};

struct DichotomyThresholds {
  double divergence_epsilon = 0.01;
  double conical_plateau_rel = 0.05;
  double conical_c_factor = 3.0;   // threshold = factor * (R_{pi/2} + d(p, p0))
  double myrberg_eps = 0.2;
  double auto_s_margin = 0.05;
  double elementary_support_eps = 1e-6;
};

struct ConservativityReport {
  std::string preset;
  double radius = 0.0;
  double s_used = 0.0;
  size_t ball_size = 0;
  bool ball_complete = true;
  bool elementary = false;
  std::string elementary_reason;
  DeltaEstimate delta_counting;
  DeltaPartialSum delta_partial_sum;
  DivergenceDiagnostic divergence;      // at the counting delta estimate
  double conical_threshold = 0.0;
  double conical_pass_fraction = 0.0;
  double myrberg_median_final = 0.0;
  double myrberg_median_earlier = 0.0;  // median at ~70% depth
  bool myrberg_trend_decreasing = false;
  size_t lm_subset_lc_violations = 0;   // Myrberg-passing samples failing conical
  std::vector<ClassificationRecord> records;
  std::vector<std::string> notes;
  std::string verdict;  // indicator agreement summary; never a proof claim
};

// End-to-end pipeline on a prebuilt ball (enumerated at p = q = p0).
ConservativityReport conservativity_report(const OrbitBall& ball,
                                           const std::string& preset_name,
                                           double s_or_auto, size_t bins,
                                           size_t samples,
                                           const DichotomyThresholds& thresholds,
                                           uint64_t seed,
                                           const std::string& preset_note = "");

}  // namespace hypflow
