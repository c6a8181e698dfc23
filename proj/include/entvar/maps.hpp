#pragma once

/*
 * Explicit smooth map families: a two-legged model horseshoe on a planar
 * disc, the isotopy deforming it to a contraction, and the composed
 * three-dimensional family on the unit ball (slice-wise horseshoe suspension
 * followed by a pole-to-pole flow).
 *
 * All maps carry analytic Jacobians. Piecewise seams (band cuts, fold arc
 * boundaries, saturation knees, the retraction circle) are exposed through
 * seam_distance so finite-difference checks can stay clear of them.
 */

#include <functional>
#include <string>

#include "entvar/errors.hpp"

namespace entvar {

struct Vec2 {
  double x = 0.0, y = 0.0;
};
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};
struct Mat2 {
  // row-major
  double a[4] = {0, 0, 0, 0};
};
struct Mat3 {
  double a[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
};

struct Disc {
  Vec2 center;
  double radius = 1.0;
};

struct PlanarMap {
  std::function<Vec2(Vec2)> evaluate;
  std::function<Mat2(Vec2)> jacobian;
  Disc domain;
  // 0 inside the region whose maximal invariant set carries the entropy
  // (the two horizontal bands for the horseshoe, the whole domain otherwise).
  std::function<double(Vec2)> core_distance;
  std::function<double(Vec2)> seam_distance;
};

struct Ball3Map {
  double tau = 0.0;
  std::function<Vec3(Vec3)> evaluate;
  std::function<Mat3(Vec3)> jacobian;
  Vec3 center;
  double radius = 1.0;
  std::function<double(Vec3)> core_distance;
  std::function<double(Vec3)> seam_distance;
};

// Domain radius of the planar model. The branch slopes (3 and 1/3) and the
// band cuts at y = +-1/3 force the invariant square to be [-1,1]^2, so the
// carrying disc is scaled up from the unit disc accordingly.
inline constexpr double kPlanarDomainRadius = 1.5;

// Two-legged horseshoe on the disc of radius kPlanarDomainRadius: vertical
// expansion 3 and horizontal contraction 1/3 on the bands 1/3 <= |y| <= 1,
// a fold arc over the middle band, saturating tails and a radial retraction
// keeping the image inside the disc. Maximal invariant set of the two bands
// is conjugate to the full 2-shift.
PlanarMap model_horseshoe();

// alpha_t(x, y) = ((2/3) x, (1-t) y - (5/3) t), the squeeze-and-push-down
// used by the isotopy. Valid for t in [eps0(), 1].
Vec2 alpha(double t, Vec2 p);

// Smallest parameter (plus a 0.01 safety margin) for which alpha_t maps the
// whole domain disc strictly below the x-axis. Computed, not assumed.
double eps0();

// The deformed map ~f_t on the shrunk disc of radius sqrt(1-t^2) * R:
// identity-to-alpha blend for |t| <= 1/2, then alpha with its parameter
// sweeping [eps0, 1]; mirrored for t < 0. t = 0 returns the base map.
// Throws error(domain_escape) if a sampled domain point leaves the shrunk
// disc by more than 1e-9.
PlanarMap isotopy_map(double t, const PlanarMap& base);

// G_tau = phi_tau o F on the closed unit ball: F applies the slice map
// ~f_z on the disc at height z (conjugated to the slice radius), phi_tau is
// the time-tau map of the pole-to-pole flow
//   z' = (z - T)/(1 - z T),  (x, y) scaled by sqrt(1 - T^2)/(1 - z T),
// with T = tanh(tau/2). Fixed points of the flow factor are exactly the
// poles N = (0,0,1) and S = (0,0,-1).
Ball3Map family_G(double tau);

// Affine blend coefficients of the isotopy path at parameter t in [0,1]:
// beta_t(x, y) = (m1 x, m2 y + b).
struct IsotopyCoeffs {
  double m1 = 1.0, m2 = 1.0, b = 0.0;
  double dm1 = 0.0, dm2 = 0.0, db = 0.0;  // derivatives with respect to t
};
IsotopyCoeffs isotopy_coeffs(double t);

}  // namespace entvar
