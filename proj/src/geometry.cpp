#include "hypflow/geometry.hpp"

#include <algorithm>

namespace hypflow {

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;  // fmod can round up to 2*pi
  return t;
}

double wrap_signed(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t > kPi) t -= kTwoPi;
  if (t <= -kPi) t += kTwoPi;
  return t;
}

double angular_dist(double a, double b) { return std::abs(wrap_signed(a - b)); }

DiskPoint::DiskPoint(double r, double i) : re(r), im(i) {
  if (!(std::hypot(r, i) < 1.0 - kBoundaryMargin))
    throw std::invalid_argument("DiskPoint: point not strictly inside the unit disk");
}

DiskPoint::DiskPoint(cplx z) : DiskPoint(z.real(), z.imag()) {}

cplx chart_at(cplx p, cplx w) { return (w - p) / (1.0 - std::conj(p) * w); }

cplx chart_at_boundary(cplx p, cplx unit_w) {
  cplx v = chart_at(p, unit_w);
  double m = std::abs(v);
  if (m == 0.0) throw std::invalid_argument("chart_at_boundary: degenerate image");
  return v / m;
}

cplx unchart_at(cplx p, cplx w) { return (w + p) / (1.0 + std::conj(p) * w); }

double dist(cplx z, cplx w) {
  double delta = std::abs((z - w) / (1.0 - std::conj(z) * w));
  if (delta >= 1.0) delta = std::nextafter(1.0, 0.0);
  return 2.0 * std::atanh(delta);
}

double dist(const DiskPoint& p, const DiskPoint& q) { return dist(p.z(), q.z()); }

double center_dist_for_separation(double sep) {
  double r = std::tan(kPi / 4.0 - sep / 4.0);
  if (r <= 0.0) return 0.0;
  return 2.0 * std::atanh(r);
}

namespace {

// Closest point to the disk center on the geodesic with the given ideal
// endpoints. Lies at Euclidean radius tan(pi/4 - sep/4) along the bisector
// of the short side; a diameter yields the center itself.
cplx midpoint_toward_center(const BoundaryPoint& u, const BoundaryPoint& v) {
  double d = wrap_signed(v.theta - u.theta);
  double sep = std::abs(d);
  double mid = u.theta + d / 2.0;
  double r = std::tan(kPi / 4.0 - sep / 4.0);
  if (r < 0.0) r = 0.0;
  return std::polar(r, mid);
}

double geodesic_dist_from(cplx w, const BoundaryPoint& u, const BoundaryPoint& v) {
  cplx uu = chart_at_boundary(w, u.unit());
  cplx vv = chart_at_boundary(w, v.unit());
  double sep = angular_dist(std::arg(uu), std::arg(vv));
  return center_dist_for_separation(sep);
}

}  // namespace

Geodesic::Geodesic(BoundaryPoint minus, BoundaryPoint plus, DiskPoint orig)
    : theta_minus(minus), theta_plus(plus), origin(orig) {
  if (minus.approx_eq(plus))
    throw std::invalid_argument("Geodesic: coincident ideal endpoints");
  if (geodesic_dist_from(orig.z(), minus, plus) > kGeodesicOriginTol)
    throw std::invalid_argument("Geodesic: origin does not lie on the geodesic");
}

cplx Geodesic::point_at(double t) const {
  cplx p = origin.z();
  cplx dir = chart_at_boundary(p, theta_plus.unit());
  return unchart_at(p, std::tanh(t / 2.0) * dir);
}

DiskPoint Geodesic::disk_point_at(double t) const { return DiskPoint(point_at(t)); }

Geodesic geodesic_between(const DiskPoint& a, const DiskPoint& b) {
  cplx w = chart_at(a.z(), b.z());
  double m = std::abs(w);
  if (m < kBoundaryMargin)
    throw std::invalid_argument("geodesic_between: coincident points");
  cplx dir = w / m;
  BoundaryPoint plus(std::arg(unchart_at(a.z(), dir)));
  BoundaryPoint minus(std::arg(unchart_at(a.z(), -dir)));
  return Geodesic(minus, plus, a);
}

Geodesic geodesic_between(const DiskPoint& a, const BoundaryPoint& xi) {
  cplx dir = chart_at_boundary(a.z(), xi.unit());
  BoundaryPoint minus(std::arg(unchart_at(a.z(), -dir)));
  return Geodesic(minus, xi, a);
}

Geodesic geodesic_between(const BoundaryPoint& xi, const DiskPoint& b) {
  cplx dir = chart_at_boundary(b.z(), xi.unit());
  BoundaryPoint plus(std::arg(unchart_at(b.z(), -dir)));
  return Geodesic(xi, plus, b);
}

Geodesic geodesic_between(const BoundaryPoint& xi, const BoundaryPoint& eta) {
  if (xi.approx_eq(eta))
    throw std::invalid_argument("geodesic_between: coincident ideal endpoints");
  return Geodesic(xi, eta, DiskPoint(midpoint_toward_center(xi, eta)));
}

double busemann(const BoundaryPoint& xi, cplx p, cplx x) {
  cplx u = xi.unit();
  double bp = std::log(std::norm(u - p)) - std::log1p(-std::norm(p));
  double bx = std::log(std::norm(u - x)) - std::log1p(-std::norm(x));
  return bp - bx;
}

double busemann(const BoundaryPoint& xi, const DiskPoint& p, const DiskPoint& x) {
  return busemann(xi, p.z(), x.z());
}

double busemann_limit_oracle(const BoundaryPoint& xi, const DiskPoint& p,
                             const DiskPoint& x, double t_max) {
  if (t_max < 10.0)
    throw std::invalid_argument("busemann_limit_oracle: t_max must be >= 10");
  Geodesic ray = geodesic_between(x, xi);
  return dist(p.z(), ray.point_at(t_max)) - t_max;
}

double gromov_product(cplx p, const BoundaryPoint& xi, const BoundaryPoint& eta) {
  if (xi.approx_eq(eta))
    throw std::invalid_argument("gromov_product: coincident ideal endpoints");
  cplx x = midpoint_toward_center(xi, eta);
  return busemann(xi, p, x) + busemann(eta, p, x);
}

double gromov_product(const DiskPoint& p, const BoundaryPoint& xi,
                      const BoundaryPoint& eta) {
  return gromov_product(p.z(), xi, eta);
}

ShadowArc shadow_arc(cplx p, cplx z, double R) {
  if (R <= 0.0) throw std::invalid_argument("shadow_arc: R must be positive");
  cplx w = chart_at(p, z);
  double m = std::abs(w);
  double D = 2.0 * std::atanh(std::min(m, std::nextafter(1.0, 0.0)));
  if (D <= R) {
    ShadowArc arc;
    arc.center = m > 0.0 ? wrap_angle(std::arg(unchart_at(p, w / m))) : 0.0;
    arc.half_width = kPi;
    arc.full = true;
    return arc;
  }
  double phi = std::arg(w);
  double psi = std::asin(std::min(1.0, std::sinh(R) / std::sinh(D)));
  double lo = std::arg(unchart_at(p, std::polar(1.0, phi - psi)));
  double hi = std::arg(unchart_at(p, std::polar(1.0, phi + psi)));
  double span = wrap_angle(hi - lo);
  ShadowArc arc;
  arc.center = wrap_angle(lo + span / 2.0);
  arc.half_width = span / 2.0;
  arc.full = false;
  return arc;
}

ShadowArc shadow_arc(const DiskPoint& p, const DiskPoint& z, double R) {
  return shadow_arc(p.z(), z.z(), R);
}

double dist_to_geodesic(cplx p, const Geodesic& g) {
  return geodesic_dist_from(p, g.theta_minus, g.theta_plus);
}

double dist_to_geodesic(const DiskPoint& p, const Geodesic& g) {
  return dist_to_geodesic(p.z(), g);
}

GeodesicFoot foot_on_geodesic(cplx p, const Geodesic& g) {
  cplx o = g.origin.z();
  cplx dir = chart_at_boundary(o, g.theta_plus.unit());
  cplx w = chart_at(o, p) * std::conj(dir);  // geodesic is now the real axis, oriented +
  double u = w.real();
  double n = std::norm(w);
  GeodesicFoot foot;
  if (u == 0.0) {
    foot.t = 0.0;
    foot.dist = dist(w, cplx(0.0, 0.0));
    return foot;
  }
  double disc = (1.0 + n) * (1.0 + n) - 4.0 * u * u;
  if (disc < 0.0) disc = 0.0;
  double x = 2.0 * u / ((1.0 + n) + std::sqrt(disc));
  foot.t = 2.0 * std::atanh(std::clamp(x, -1.0 + 1e-17, 1.0 - 1e-17));
  foot.dist = dist(w, cplx(x, 0.0));
  return foot;
}

double dist_to_ray(cplx p, const Geodesic& g, double t_min) {
  GeodesicFoot foot = foot_on_geodesic(p, g);
  if (foot.t >= t_min) return foot.dist;
  return dist(p, g.point_at(t_min));
}

namespace {

double angle_between_images(cplx wa, cplx wb) {
  double ma = std::abs(wa), mb = std::abs(wb);
  if (ma < kBoundaryMargin || mb < kBoundaryMargin)
    throw std::invalid_argument("angle_at: argument coincides with the vertex");
  return angular_dist(std::arg(wa), std::arg(wb));
}

}  // namespace

double angle_at(const DiskPoint& p, const DiskPoint& a, const DiskPoint& b) {
  return angle_between_images(chart_at(p.z(), a.z()), chart_at(p.z(), b.z()));
}

double angle_at(const DiskPoint& p, const DiskPoint& a, const BoundaryPoint& b) {
  return angle_between_images(chart_at(p.z(), a.z()),
                              chart_at_boundary(p.z(), b.unit()));
}

double angle_at(const DiskPoint& p, const BoundaryPoint& a, const DiskPoint& b) {
  return angle_between_images(chart_at_boundary(p.z(), a.unit()),
                              chart_at(p.z(), b.z()));
}

double angle_at(const DiskPoint& p, const BoundaryPoint& a, const BoundaryPoint& b) {
  return angle_between_images(chart_at_boundary(p.z(), a.unit()),
                              chart_at_boundary(p.z(), b.unit()));
}

namespace {

// Angle subtended at the center by a geodesic tangent to the circle of
// hyperbolic radius R about it.
double subtended_angle_at_distance(double R) {
  if (R <= 0.0) return kPi;
  double m = std::tanh(R / 2.0);
  cplx touch(m, 0.0);
  cplx e1 = unchart_at(touch, cplx(0.0, 1.0));
  cplx e2 = unchart_at(touch, cplx(0.0, -1.0));
  return angular_dist(std::arg(e1), std::arg(e2));
}

}  // namespace

double visibility_constant(double eps) {
  if (!(eps > 0.0) || eps > kPi)
    throw std::invalid_argument("visibility_constant: eps must lie in (0, pi]");
  if (subtended_angle_at_distance(0.0) <= eps) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (subtended_angle_at_distance(hi) > eps) {
    hi *= 2.0;
    if (hi > 64.0) throw std::runtime_error("visibility_constant: search diverged");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    double mid = 0.5 * (lo + hi);
    if (subtended_angle_at_distance(mid) > eps)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

BoundaryPoint TangentVector::forward_endpoint() const {
  return BoundaryPoint(std::arg(unchart_at(base.z(), std::polar(1.0, direction))));
}

BoundaryPoint TangentVector::backward_endpoint() const {
  return BoundaryPoint(std::arg(unchart_at(base.z(), -std::polar(1.0, direction))));
}

bool cone_membership(const TangentVector& v, const DiskPoint& x, double eps, double r) {
  cplx w = chart_at(v.base.z(), x.z());
  if (std::abs(w) < kBoundaryMargin)
    throw std::invalid_argument("cone_membership: x coincides with the cone vertex");
  double ang = angular_dist(std::arg(w), v.direction);
  return ang < eps && dist(v.base.z(), x.z()) > r;
}

bool cone_membership(const TangentVector& v, const BoundaryPoint& x, double eps,
                     double /*r*/) {
  cplx w = chart_at_boundary(v.base.z(), x.unit());
  double ang = angular_dist(std::arg(w), v.direction);
  return ang < eps;
}

}  // namespace hypflow
