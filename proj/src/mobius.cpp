#include "hypflow/mobius.hpp"

#include <algorithm>
#include <cmath>

namespace hypflow {

namespace {

constexpr double kDetTol = 1e-12;
constexpr double kTraceTol = 1e-9;

void canonicalize_sign(double& a, double& b, double& c, double& d) {
  const double v[4] = {a, b, c, d};
  for (double e : v) {
    if (std::abs(e) > kDetTol) {
      if (e < 0.0) { a = -a; b = -b; c = -c; d = -d; }
      return;
    }
  }
}

void renormalize_det(double& a, double& b, double& c, double& d) {
  double det = a * d - b * c;
  if (!(det > 0.0))
    throw std::invalid_argument("MobiusMap: determinant must be positive");
  double s = std::sqrt(det);
  a /= s; b /= s; c /= s; d /= s;
}

}  // namespace

MobiusMap MobiusMap::from_entries(double a, double b, double c, double d) {
  renormalize_det(a, b, c, d);
  canonicalize_sign(a, b, c, d);
  MobiusMap m;
  m.a = a; m.b = b; m.c = c; m.d = d;
  return m;
}

MobiusMap MobiusMap::inverse() const { return from_entries(d, -b, -c, a); }

bool MobiusMap::is_identity(double tol) const {
  return std::abs(a - 1.0) <= tol && std::abs(b) <= tol && std::abs(c) <= tol &&
         std::abs(d - 1.0) <= tol;
}

MobiusMap operator*(const MobiusMap& m, const MobiusMap& n) {
  return MobiusMap::from_entries(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                                 m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d);
}

double map_distance(const MobiusMap& m, const MobiusMap& n) {
  double dplus = std::max({std::abs(m.a - n.a), std::abs(m.b - n.b),
                           std::abs(m.c - n.c), std::abs(m.d - n.d)});
  double dminus = std::max({std::abs(m.a + n.a), std::abs(m.b + n.b),
                            std::abs(m.c + n.c), std::abs(m.d + n.d)});
  return std::min(dplus, dminus);
}

MobiusMap compose_word(const std::vector<MobiusMap>& gens,
                       const std::vector<MobiusMap>& inv_gens,
                       const int8_t* word, size_t len) {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  for (size_t i = 0; i < len; ++i) {
    int8_t letter = word[i];
    const MobiusMap& g =
        (letter & 1) ? inv_gens[size_t(letter) >> 1] : gens[size_t(letter) >> 1];
    double na = a * g.a + b * g.c;
    double nb = a * g.b + b * g.d;
    double nc = c * g.a + d * g.c;
    double nd = c * g.b + d * g.d;
    a = na; b = nb; c = nc; d = nd;
    if ((i & 7u) == 7u) renormalize_det(a, b, c, d);
  }
  return MobiusMap::from_entries(a, b, c, d);
}

cplx halfplane_to_disk(cplx z) { return (z - cplx(0.0, 1.0)) / (z + cplx(0.0, 1.0)); }

cplx disk_to_halfplane(cplx w) {
  return cplx(0.0, 1.0) * (1.0 + w) / (1.0 - w);
}

DiskPoint disk_point_from_halfplane(cplx z) {
  if (!(z.imag() > 0.0))
    throw std::invalid_argument("half-plane point must have positive imaginary part");
  return DiskPoint(halfplane_to_disk(z));
}

BoundaryPoint boundary_from_halfplane_real(double x) {
  cplx w = (cplx(x, 0.0) - cplx(0.0, 1.0)) / (cplx(x, 0.0) + cplx(0.0, 1.0));
  return BoundaryPoint(std::arg(w));
}

BoundaryPoint boundary_from_halfplane_infinity() { return BoundaryPoint(0.0); }

std::string to_string(IsometryClass cls) {
  switch (cls) {
    case IsometryClass::identity: return "identity";
    case IsometryClass::elliptic: return "elliptic";
    case IsometryClass::parabolic: return "parabolic";
    case IsometryClass::axial: return "axial";
  }
  return "unknown";
}

IsometryClass classify(const MobiusMap& m) {
  if (m.is_identity()) return IsometryClass::identity;
  double t = std::abs(m.trace());
  if (std::abs(t - 2.0) <= kTraceTol) return IsometryClass::parabolic;
  return t < 2.0 ? IsometryClass::elliptic : IsometryClass::axial;
}

namespace {

// Fixed points on the half-plane ideal boundary, as disk boundary angles.
// Returns (repelling, attracting) for axial input.
std::pair<BoundaryPoint, BoundaryPoint> axial_fixed_points(const MobiusMap& m) {
  double tr = m.trace();
  double disc = tr * tr - 4.0;
  double s = std::sqrt(std::max(disc, 0.0));
  if (std::abs(m.c) > 1e-14) {
    double z1 = (m.a - m.d + s) / (2.0 * m.c);
    double z2 = (m.a - m.d - s) / (2.0 * m.c);
    // attracting iff |f'(z)| = 1/(cz+d)^2 < 1
    double d1 = std::abs(m.c * z1 + m.d);
    BoundaryPoint p1 = boundary_from_halfplane_real(z1);
    BoundaryPoint p2 = boundary_from_halfplane_real(z2);
    if (d1 > 1.0) return {p2, p1};
    return {p1, p2};
  }
  // c = 0: fixed points are b/(d-a) and infinity; f(z) = (a/d) z + b/d.
  double zf = m.b / (m.d - m.a);
  BoundaryPoint fin = boundary_from_halfplane_real(zf);
  BoundaryPoint inf = boundary_from_halfplane_infinity();
  if (std::abs(m.a) > std::abs(m.d)) return {fin, inf};
  return {inf, fin};
}

}  // namespace

AxisInfo axis_and_length(const MobiusMap& m) {
  if (classify(m) != IsometryClass::axial)
    throw std::invalid_argument("axis_and_length: map is not axial");
  auto [rep, att] = axial_fixed_points(m);
  AxisInfo info{geodesic_between(rep, att), 2.0 * std::acosh(std::abs(m.trace()) / 2.0)};
  return info;
}

std::vector<BoundaryPoint> fixed_boundary_points(const MobiusMap& m) {
  IsometryClass cls = classify(m);
  switch (cls) {
    case IsometryClass::identity:
      throw std::invalid_argument("fixed_boundary_points: identity fixes everything");
    case IsometryClass::elliptic:
      return {};
    case IsometryClass::parabolic: {
      if (std::abs(m.c) > 1e-14)
        return {boundary_from_halfplane_real((m.a - m.d) / (2.0 * m.c))};
      return {boundary_from_halfplane_infinity()};
    }
    case IsometryClass::axial: {
      auto [rep, att] = axial_fixed_points(m);
      if (rep.theta <= att.theta) return {rep, att};
      return {att, rep};
    }
  }
  return {};
}

CommutingAudit commuting_fixed_point_audit(const MobiusMap& alpha,
                                           const MobiusMap& beta, int n) {
  if (classify(alpha) != IsometryClass::axial)
    throw std::invalid_argument("commuting_fixed_point_audit: alpha must be axial");
  if (n == 0) throw std::invalid_argument("commuting_fixed_point_audit: n must be nonzero");

  MobiusMap an = MobiusMap::identity();
  MobiusMap step = n > 0 ? alpha : alpha.inverse();
  for (int i = 0; i < std::abs(n); ++i) an = an * step;

  MobiusMap lhs = beta * an;
  MobiusMap rhs = an * beta;
  double scale = 0.0;
  for (double e : lhs.entries()) scale = std::max(scale, std::abs(e));
  CommutingAudit audit;
  audit.commutator_residual = map_distance(lhs, rhs);
  audit.commutes = audit.commutator_residual <= 1e-9 * std::max(1.0, scale);
  if (!audit.commutes) {
    audit.pass = true;  // implication is vacuous
    audit.verdict = "not commuting";
    return audit;
  }
  AxisInfo ax = axis_and_length(alpha);
  audit.endpoint_residual_plus =
      angular_dist(beta.apply(ax.axis.theta_plus).theta, ax.axis.theta_plus.theta);
  audit.endpoint_residual_minus =
      angular_dist(beta.apply(ax.axis.theta_minus).theta, ax.axis.theta_minus.theta);
  audit.pass = audit.endpoint_residual_plus <= 1e-6 &&
               audit.endpoint_residual_minus <= 1e-6;
  audit.verdict = audit.pass ? "commuting, endpoints fixed"
                             : "commuting but endpoints move";
  return audit;
}

}  // namespace hypflow
