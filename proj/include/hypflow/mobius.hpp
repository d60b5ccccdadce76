#pragma once

// Real 2x2 unit-determinant matrices acting as isometries. Matrices use the
// upper half-plane convention z -> (az+b)/(cz+d); the action on the internal
// disk model goes through the fixed Cayley transform z -> (z-i)/(z+i), which
// conjugates SL(2,R) into SU(1,1).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hypflow/geometry.hpp"

namespace hypflow {

struct DiskAut {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};

  cplx apply(cplx z) const {
    return (alpha * z + beta) / (std::conj(beta) * z + std::conj(alpha));
  }
  double apply_angle(double theta) const {
    cplx w = apply(std::polar(1.0, theta));
    return wrap_angle(std::arg(w));
  }
};

struct MobiusMap {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  MobiusMap() = default;
  static MobiusMap from_entries(double a, double b, double c, double d);
  static MobiusMap identity() { return MobiusMap(); }

  MobiusMap inverse() const;
  double trace() const { return a + d; }
  std::array<double, 4> entries() const { return {a, b, c, d}; }

  DiskAut disk_aut() const {
    return DiskAut{cplx((a + d) / 2.0, (b - c) / 2.0),
                   cplx((a - d) / 2.0, -(b + c) / 2.0)};
  }
  cplx apply_disk(cplx z) const { return disk_aut().apply(z); }
  DiskPoint apply(const DiskPoint& p) const { return DiskPoint(apply_disk(p.z())); }
  BoundaryPoint apply(const BoundaryPoint& x) const {
    return BoundaryPoint(disk_aut().apply_angle(x.theta));
  }

  bool is_identity(double tol = 1e-9) const;
};

MobiusMap operator*(const MobiusMap& m, const MobiusMap& n);

// Entrywise distance between two maps as projective classes (min over sign).
double map_distance(const MobiusMap& m, const MobiusMap& n);

// Product of generator letters recomputed from scratch, determinant
// renormalized every 8 multiplications. Letter 2j is generator j, letter
// 2j+1 its inverse.
MobiusMap compose_word(const std::vector<MobiusMap>& gens,
                       const std::vector<MobiusMap>& inv_gens,
                       const int8_t* word, size_t len);

// Cayley transform between the half-plane and the disk.
cplx halfplane_to_disk(cplx z);
cplx disk_to_halfplane(cplx w);
DiskPoint disk_point_from_halfplane(cplx z);
// Ideal boundary: real axis plus infinity to the unit circle.
BoundaryPoint boundary_from_halfplane_real(double x);
BoundaryPoint boundary_from_halfplane_infinity();

enum class IsometryClass { identity, elliptic, parabolic, axial };

std::string to_string(IsometryClass cls);

// |tr| < 2 elliptic, |tr| = 2 (within 1e-9) parabolic, |tr| > 2 axial.
IsometryClass classify(const MobiusMap& m);

struct AxisInfo {
  Geodesic axis;          // oriented from the repelling to the attracting point
  double length = 0.0;    // translation length, 2*acosh(|tr|/2)
};

AxisInfo axis_and_length(const MobiusMap& m);

std::vector<BoundaryPoint> fixed_boundary_points(const MobiusMap& m);

struct CommutingAudit {
  bool commutes = false;
  double commutator_residual = 0.0;
  double endpoint_residual_plus = 0.0;   // angular, valid when commutes
  double endpoint_residual_minus = 0.0;
  bool pass = false;
  std::string verdict;
};

// If beta commutes with alpha^n, verify beta fixes both endpoints of the
// axis of alpha (within 1e-6 of angle).
CommutingAudit commuting_fixed_point_audit(const MobiusMap& alpha,
                                           const MobiusMap& beta, int n);

}  // namespace hypflow
