#pragma once

// Poincare disk model of the hyperbolic plane (curvature -1).
// Interior points are complex numbers with |z| < 1, ideal points are angles
// on the unit circle. All distances and angles are hyperbolic.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace hypflow {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Tolerances fixed by the library contract.
inline constexpr double kBoundaryMargin = 1e-12;   // strict interiority bound
inline constexpr double kAngleEqTol = 1e-10;       // boundary-point equality
inline constexpr double kGeodesicOriginTol = 1e-10;

double wrap_angle(double theta);    // reduce into [0, 2*pi)
double wrap_signed(double theta);   // reduce into (-pi, pi]
double angular_dist(double a, double b);  // circular distance in [0, pi]

struct DiskPoint {
  double re = 0.0;
  double im = 0.0;

  DiskPoint() = default;
  DiskPoint(double r, double i);
  explicit DiskPoint(cplx z);

  cplx z() const { return {re, im}; }
};

struct BoundaryPoint {
  double theta = 0.0;  // canonical representative in [0, 2*pi)

  BoundaryPoint() = default;
  explicit BoundaryPoint(double angle) : theta(wrap_angle(angle)) {}

  cplx unit() const { return {std::cos(theta), std::sin(theta)}; }
  bool approx_eq(const BoundaryPoint& o, double tol = kAngleEqTol) const {
    return angular_dist(theta, o.theta) <= tol;
  }
};

// Mobius transform of the disk moving p to 0: w -> (w - p) / (1 - conj(p) w).
// Conformal with positive real derivative at p, so direction angles at p are
// preserved. Boundary points map to boundary points.
cplx chart_at(cplx p, cplx w);
cplx chart_at_boundary(cplx p, cplx unit_w);
cplx unchart_at(cplx p, cplx w);

double dist(cplx z, cplx w);
double dist(const DiskPoint& p, const DiskPoint& q);

// Distance from the disk center to the geodesic whose ideal endpoints are
// separated by angle `sep`; the closest point sits at Euclidean radius
// tan(pi/4 - sep/4) along the bisector.
double center_dist_for_separation(double sep);

// Unit-speed complete geodesic. c(0) = origin, c(+inf) = theta_plus,
// c(-inf) = theta_minus.
struct Geodesic {
  BoundaryPoint theta_minus;
  BoundaryPoint theta_plus;
  DiskPoint origin;

  Geodesic(BoundaryPoint minus, BoundaryPoint plus, DiskPoint orig);

  cplx point_at(double t) const;
  DiskPoint disk_point_at(double t) const;
};

Geodesic geodesic_between(const DiskPoint& a, const DiskPoint& b);
Geodesic geodesic_between(const DiskPoint& a, const BoundaryPoint& xi);
Geodesic geodesic_between(const BoundaryPoint& xi, const DiskPoint& b);
Geodesic geodesic_between(const BoundaryPoint& xi, const BoundaryPoint& eta);

// beta_xi(p, x) = lim_t { d(p, c_{x,xi}(t)) - t }, closed form via the
// Poisson kernel: log(|xi - p|^2 / (1 - |p|^2)) - same at x.
double busemann(const BoundaryPoint& xi, cplx p, cplx x);
double busemann(const BoundaryPoint& xi, const DiskPoint& p, const DiskPoint& x);

// The defining limit evaluated at a finite ray time, used as an oracle.
double busemann_limit_oracle(const BoundaryPoint& xi, const DiskPoint& p,
                             const DiskPoint& x, double t_max);

// beta_p(xi, eta) = beta_xi(p, x) + beta_eta(p, x) for x on the connecting
// geodesic; independent of the witness x.
double gromov_product(cplx p, const BoundaryPoint& xi, const BoundaryPoint& eta);
double gromov_product(const DiskPoint& p, const BoundaryPoint& xi,
                      const BoundaryPoint& eta);

struct ShadowArc {
  double center = 0.0;      // angle in [0, 2*pi)
  double half_width = 0.0;  // in (0, pi]
  bool full = false;        // d(p, z) <= R: the shadow is the whole circle

  bool contains(double theta) const {
    return full || angular_dist(theta, center) < half_width;
  }
};

// Ideal shadow of the metric ball B(z, R) seen from p. The visual half-angle
// at p obeys sin(psi) = sinh(R) / sinh(d(p, z)).
ShadowArc shadow_arc(cplx p, cplx z, double R);
ShadowArc shadow_arc(const DiskPoint& p, const DiskPoint& z, double R);

double dist_to_geodesic(cplx p, const Geodesic& g);
double dist_to_geodesic(const DiskPoint& p, const Geodesic& g);

// Foot of the perpendicular from a point onto a geodesic: the parameter t*
// realizing the infimum and the perpendicular distance.
struct GeodesicFoot {
  double t = 0.0;
  double dist = 0.0;
};
GeodesicFoot foot_on_geodesic(cplx p, const Geodesic& g);

// Distance to the ray { c(t) : t >= t_min }.
double dist_to_ray(cplx p, const Geodesic& g, double t_min = 0.0);

double angle_at(const DiskPoint& p, const DiskPoint& a, const DiskPoint& b);
double angle_at(const DiskPoint& p, const DiskPoint& a, const BoundaryPoint& b);
double angle_at(const DiskPoint& p, const BoundaryPoint& a, const DiskPoint& b);
double angle_at(const DiskPoint& p, const BoundaryPoint& a, const BoundaryPoint& b);

// Smallest R such that every geodesic at distance >= R from a point subtends
// angle <= eps there. Found by bisection on R; by homogeneity the base point
// is the disk center.
double visibility_constant(double eps);

struct TangentVector {
  DiskPoint base;
  double direction = 0.0;  // Euclidean direction angle at base, in [0, 2*pi)

  TangentVector() = default;
  TangentVector(DiskPoint b, double dir) : base(b), direction(wrap_angle(dir)) {}

  BoundaryPoint forward_endpoint() const;
  BoundaryPoint backward_endpoint() const;
};

// Truncated cone membership: angle at base(v) between x and the tip direction
// is < eps and (for interior x) d(base, x) > r.
bool cone_membership(const TangentVector& v, const DiskPoint& x, double eps, double r);
bool cone_membership(const TangentVector& v, const BoundaryPoint& x, double eps, double r);

}  // namespace hypflow
