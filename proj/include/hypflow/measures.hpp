#pragma once

// Discretized Patterson-Sullivan measures: orbit atoms weighted by
// e^{-s d(p, alpha p0)} / P(s, p0, p0), binned by the ideal endpoint of the
// ray from the histogram's base point through the atom.

#include <vector>

#include "hypflow/orbit.hpp"

namespace hypflow {

struct MeasureHistogram {
  size_t bins = 0;
  std::vector<double> weights;
  DiskPoint base_point;
  double s_param = 0.0;
  double ball_radius = 0.0;
  double total_mass = 0.0;     // pairwise sum over atoms (bin-count independent)
  double excluded_mass = 0.0;  // atoms within 1e-6 of the base point
  double normalizer = 0.0;     // truncated P(s, p0, p0)
  bool degenerate = false;     // no atom could be binned

  double bin_center(size_t k) const { return (double(k) + 0.5) * kTwoPi / double(bins); }
  size_t bin_of(double theta) const {
    auto k = size_t(wrap_angle(theta) / kTwoPi * double(bins));
    return k >= bins ? bins - 1 : k;
  }
  double mass_floor() const { return 1e-12 * total_mass; }
};

// The ball must be enumerated with base_p = base_q = p0 (the normalizer is
// the truncated Poincare series at p0). `bins` must lie in [64, 65536].
MeasureHistogram ps_histogram(const OrbitBall& ball, double s, const DiskPoint& p,
                              size_t bins);

struct CocycleAuditReport {
  std::vector<double> deviations;  // per compared bin; NaN where not compared
  double max_abs_deviation = 0.0;
  double mass_weighted_mean = 0.0;
  double mass_coverage = 0.0;  // fraction of combined mass in compared bins
  size_t compared_bins = 0;
};

// Checks ln(w_p/w_q) against -r * busemann(xi_bin, p, q) on bins where both
// histograms carry mass.
CocycleAuditReport cocycle_audit(const MeasureHistogram& mu_p,
                                 const MeasureHistogram& mu_q, double r);

struct EquivarianceAudit {
  double total_variation = 0.0;   // between mu_p and the pullback of mu_{alpha p}
  double mismatch_bound = 0.0;    // exact truncation mismatch mass (both sides)
  double annulus_proxy = 0.0;     // mass at distance > radius - displacement
  double displacement = 0.0;      // d(p0, alpha p0)
  bool alpha_in_ball = false;
};

EquivarianceAudit equivariance_audit(const OrbitBall& ball, double s,
                                     const DiskPoint& p, const MobiusMap& alpha,
                                     size_t bins);

struct ShadowLemmaAudit {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double c_emp = 0.0;           // max(max_ratio, 1/min_ratio)
  double spread_log10 = 0.0;    // log10(max_ratio / min_ratio)
  size_t used = 0;
  size_t degenerate_shadows = 0;  // full-circle shadows, excluded
  size_t zero_mass_shadows = 0;   // arcs that met no histogram mass, excluded
};

// For orbit points in the outer half of the ball, compares the histogram mass
// of the shadow of B(alpha q, R) with e^{-r d(p, alpha q)}. Arc mass is
// prorated across partially covered bins.
ShadowLemmaAudit shadow_lemma_audit(const OrbitBall& ball,
                                    const MeasureHistogram& mu_p, double R, double r);

struct MinimalityProbe {
  double coverage = 0.0;       // fraction of positive-mass bins hit by the orbit
  size_t positive_bins = 0;
  size_t hit_bins = 0;
  double seed_theta = 0.0;     // center of the top-mass bin that was pushed
};

// Pushes the top-mass bin center through every ball element and measures how
// much of the measure's support the orbit revisits.
MinimalityProbe support_minimality_probe(const MeasureHistogram& mu,
                                         const OrbitBall& ball, double eps = 1e-6);

}  // namespace hypflow
