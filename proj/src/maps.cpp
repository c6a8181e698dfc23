#include "entvar/maps.hpp"

#include <algorithm>
#include <cmath>

namespace entvar {

namespace {

constexpr double kFoldOffset = 2.0 / 3.14159265358979323846;  // 2/pi
constexpr double kPi = 3.14159265358979323846;
constexpr double kTailKnee = 3.0;     // |v| beyond which the fold tail saturates
constexpr double kTailScale = 0.35;   // saturation width of the tail
constexpr double kRetractR0 = 1.40;   // radius where the retraction kicks in
constexpr double kRetractScale = 0.099;  // image stays inside r0 + scale < 1.5

struct Jet2 {
  Vec2 p;
  Mat2 J;
};

Mat2 mul(const Mat2& A, const Mat2& B) {
  Mat2 C;
  C.a[0] = A.a[0] * B.a[0] + A.a[1] * B.a[2];
  C.a[1] = A.a[0] * B.a[1] + A.a[1] * B.a[3];
  C.a[2] = A.a[2] * B.a[0] + A.a[3] * B.a[2];
  C.a[3] = A.a[2] * B.a[1] + A.a[3] * B.a[3];
  return C;
}

// Saturating tail: identity up to the knee, then a bounded tanh extension.
double tail(double v, double* dv) {
  const double av = std::abs(v);
  if (av <= kTailKnee) {
    if (dv) *dv = 1.0;
    return v;
  }
  const double u = (av - kTailKnee) / kTailScale;
  const double th = std::tanh(u);
  if (dv) *dv = 1.0 - th * th;
  return std::copysign(kTailKnee + kTailScale * th, v);
}

Jet2 squeeze(Vec2 p) {
  Jet2 out;
  out.p = {p.x / 3.0, 3.0 * p.y};
  out.J = {{1.0 / 3.0, 0.0, 0.0, 3.0}};
  return out;
}

// Horseshoe fold: bottom leg translated up, top leg flipped over, the
// middle band bent around a half-circle arc of radius |u - c|.
Jet2 fold(Vec2 q) {
  const double u = q.x, v = q.y;
  const double c = kFoldOffset;
  Jet2 out;
  if (v <= -1.0) {
    double dT;
    const double Tv = tail(v, &dT);
    out.p = {u - c, Tv + 2.0};
    out.J = {{1.0, 0.0, 0.0, dT}};
  } else if (v >= 1.0) {
    double dT;
    const double Tv = tail(v, &dT);
    out.p = {c - u, 2.0 - Tv};
    out.J = {{-1.0, 0.0, 0.0, -dT}};
  } else {
    const double s = kPi * (v + 1.0) / 2.0;
    const double cs = std::cos(s), sn = std::sin(s);
    out.p = {(u - c) * cs, 1.0 + (c - u) * sn};
    out.J = {{cs, -(u - c) * sn * kPi / 2.0, -sn, (c - u) * cs * kPi / 2.0}};
  }
  return out;
}

// Radial retraction onto the disc of radius r0 + scale: identity inside r0,
// bounded tanh compression of the radius outside.
Jet2 retract(Vec2 q) {
  Jet2 out;
  const double r = std::hypot(q.x, q.y);
  if (r <= kRetractR0) {
    out.p = q;
    out.J = {{1.0, 0.0, 0.0, 1.0}};
    return out;
  }
  const double u = (r - kRetractR0) / kRetractScale;
  const double th = std::tanh(u);
  const double g = kRetractR0 + kRetractScale * th;
  const double dg = 1.0 - th * th;
  const double sc = g / r;
  out.p = {sc * q.x, sc * q.y};
  const double w = (dg * r - g) / (r * r * r);
  out.J = {{sc + w * q.x * q.x, w * q.x * q.y, w * q.x * q.y, sc + w * q.y * q.y}};
  return out;
}

Jet2 horseshoe_jet(Vec2 p) {
  const Jet2 a = squeeze(p);
  const Jet2 b = fold(a.p);
  Jet2 c = retract(b.p);
  c.J = mul(c.J, mul(b.J, a.J));
  return c;
}

// Distance to the complement of the two entropy-carrying bands
// {|x| <= 1, 1/3 <= |y| <= 1} (infinity norm, 0 inside).
double band_distance(Vec2 p) {
  const double ay = std::abs(p.y);
  const double dx = std::max(0.0, std::abs(p.x) - 1.0);
  double dy = 0.0;
  if (ay > 1.0)
    dy = ay - 1.0;
  else if (ay < 1.0 / 3.0)
    dy = 1.0 / 3.0 - ay;
  return std::max(dx, dy);
}

double horseshoe_seam_distance(Vec2 p) {
  const double ay = std::abs(p.y);
  double d = std::min(std::abs(ay - 1.0 / 3.0), std::abs(ay - 1.0));
  const Jet2 a = squeeze(p);
  const Jet2 b = fold(a.p);
  const double r = std::hypot(b.p.x, b.p.y);
  // Retraction seam, pulled back conservatively (fold o squeeze has
  // Lipschitz constant below 4 on the domain).
  d = std::min(d, std::abs(r - kRetractR0) / 4.0);
  return d;
}

}  // namespace

PlanarMap model_horseshoe() {
  PlanarMap m;
  m.domain = {{0.0, 0.0}, kPlanarDomainRadius};
  m.evaluate = [](Vec2 p) { return horseshoe_jet(p).p; };
  m.jacobian = [](Vec2 p) { return horseshoe_jet(p).J; };
  m.core_distance = band_distance;
  m.seam_distance = horseshoe_seam_distance;
  return m;
}

Vec2 alpha(double t, Vec2 p) {
  return {(2.0 / 3.0) * p.x, (1.0 - t) * p.y - (5.0 / 3.0) * t};
}

double eps0() {
  static const double value = [] {
    const double R = kPlanarDomainRadius;
    for (int k = 1; k <= 1000; ++k) {
      const double t = k * 1e-3;
      // max image height of the disc under alpha_t
      if ((1.0 - t) * R - (5.0 / 3.0) * t < 0.0) return t + 0.01;
    }
    return 1.0;
  }();
  return value;
}

IsotopyCoeffs isotopy_coeffs(double t) {
  const double e0 = eps0();
  IsotopyCoeffs c;
  if (t <= 0.5) {
    // linear blend from the identity to alpha_{eps0}
    const double sg = 2.0 * t;
    c.m1 = 1.0 - sg / 3.0;
    c.m2 = 1.0 - sg * e0;
    c.b = -sg * (5.0 / 3.0) * e0;
    c.dm1 = -2.0 / 3.0;
    c.dm2 = -2.0 * e0;
    c.db = -(10.0 / 3.0) * e0;
  } else {
    // alpha_sp with sp sweeping [eps0, 1]
    const double sp = e0 + (2.0 * t - 1.0) * (1.0 - e0);
    c.m1 = 2.0 / 3.0;
    c.m2 = 1.0 - sp;
    c.b = -(5.0 / 3.0) * sp;
    c.dm1 = 0.0;
    c.dm2 = -2.0 * (1.0 - e0);
    c.db = -(10.0 / 3.0) * (1.0 - e0);
  }
  return c;
}

PlanarMap isotopy_map(double t, const PlanarMap& base) {
  if (!(std::abs(t) <= 1.0)) throw error(errc::config, "isotopy parameter must lie in [-1, 1]");
  const double tt = std::abs(t);  // the family is mirrored across t = 0
  const double k = std::sqrt(std::max(0.0, 1.0 - tt * tt));
  const IsotopyCoeffs co = isotopy_coeffs(tt);
  PlanarMap m;
  m.domain = {base.domain.center, base.domain.radius * k};
  const double limit = m.domain.radius + 1e-9;
  m.evaluate = [=](Vec2 p) {
    if (std::hypot(p.x, p.y) > limit)
      throw error(errc::domain_escape, "point outside the deformed disc");
    if (k < 1e-12) return Vec2{0.0, 0.0};
    const Vec2 r{co.m1 * (p.x / k), co.m2 * (p.y / k) + co.b};
    const Vec2 s = base.evaluate(r);
    return Vec2{k * s.x, k * s.y};
  };
  m.jacobian = [=](Vec2 p) {
    if (k < 1e-12) return Mat2{};
    const Vec2 r{co.m1 * (p.x / k), co.m2 * (p.y / k) + co.b};
    const Mat2 J = base.jacobian(r);
    return Mat2{{J.a[0] * co.m1, J.a[1] * co.m2, J.a[2] * co.m1, J.a[3] * co.m2}};
  };
  m.core_distance = [=](Vec2 p) {
    if (k < 1e-12) return 0.0;
    const Vec2 r{co.m1 * (p.x / k), co.m2 * (p.y / k) + co.b};
    return k * base.core_distance(r);
  };
  m.seam_distance = [=](Vec2 p) {
    if (k < 1e-12) return 0.0;
    const Vec2 r{co.m1 * (p.x / k), co.m2 * (p.y / k) + co.b};
    return k * base.seam_distance(r);
  };
  return m;
}

namespace {

struct SliceJet {
  Vec2 out;        // planar image, ball coordinates
  double dxy[4];   // d(out)/d(x,y), row-major
  double dz[2];    // d(out)/dz
};

// Slice map of F at height z: conjugate the blended horseshoe down to the
// disc of radius sqrt(1 - z^2).
SliceJet slice_jet(const PlanarMap& base, double x, double y, double z) {
  SliceJet sj;
  const double R = kPlanarDomainRadius;
  const double w = std::max(1e-12, 1.0 - z * z);
  const double k = std::sqrt(w) / R;
  const double dk = -z / (R * std::sqrt(w));
  const double az = std::abs(z);
  const double sg = (z >= 0.0) ? 1.0 : -1.0;  // d|z|/dz, seam at z = 0
  const IsotopyCoeffs co = isotopy_coeffs(az);
  const Vec2 q{x / k, y / k};
  const Vec2 r{co.m1 * q.x, co.m2 * q.y + co.b};
  const Jet2 f = horseshoe_jet(r);
  sj.out = {k * f.p.x, k * f.p.y};
  sj.dxy[0] = f.J.a[0] * co.m1;
  sj.dxy[1] = f.J.a[1] * co.m2;
  sj.dxy[2] = f.J.a[2] * co.m1;
  sj.dxy[3] = f.J.a[3] * co.m2;
  const double dqx = -(dk / k) * q.x, dqy = -(dk / k) * q.y;
  const double drx = sg * co.dm1 * q.x + co.m1 * dqx;
  const double dry = sg * (co.dm2 * q.y + co.db) + co.m2 * dqy;
  sj.dz[0] = dk * f.p.x + k * (f.J.a[0] * drx + f.J.a[1] * dry);
  sj.dz[1] = dk * f.p.y + k * (f.J.a[2] * drx + f.J.a[3] * dry);
  (void)base;
  return sj;
}

}  // namespace

Ball3Map family_G(double tau) {
  if (!(tau >= 0.0)) throw error(errc::config, "flow time must be nonnegative");
  const PlanarMap base = model_horseshoe();
  const double T = std::tanh(tau / 2.0);
  const double sq = std::sqrt(1.0 - T * T);

  // F then the flow factor; shared by evaluate and jacobian.
  auto full_jet = [base, T, sq](Vec3 p, Mat3* J) {
    double fx, fy;
    double JF[9] = {0, 0, 0, 0, 0, 0, 0, 0, 1};
    if (std::abs(p.z) >= 1.0 - 1e-12) {
      fx = fy = 0.0;  // degenerate pole slice
    } else {
      const SliceJet sj = slice_jet(base, p.x, p.y, p.z);
      fx = sj.out.x;
      fy = sj.out.y;
      JF[0] = sj.dxy[0];
      JF[1] = sj.dxy[1];
      JF[2] = sj.dz[0];
      JF[3] = sj.dxy[2];
      JF[4] = sj.dxy[3];
      JF[5] = sj.dz[1];
    }
    const double fz = p.z;
    const double den = 1.0 - fz * T;
    const double sc = sq / den;
    const Vec3 out{sc * fx, sc * fy, (fz - T) / den};
    if (J) {
      // d(phi)/d(F) at (fx, fy, fz), then the chain rule
      const double d2 = den * den;
      const double Jp[9] = {sc, 0.0, fx * sq * T / d2,
                            0.0, sc, fy * sq * T / d2,
                            0.0, 0.0, (1.0 - T * T) / d2};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double acc = 0.0;
          for (int k = 0; k < 3; ++k) acc += Jp[3 * i + k] * JF[3 * k + j];
          J->a[3 * i + j] = acc;
        }
    }
    return out;
  };

  Ball3Map m;
  m.tau = tau;
  m.center = {0.0, 0.0, 0.0};
  m.radius = 1.0;
  m.evaluate = [full_jet](Vec3 p) { return full_jet(p, nullptr); };
  m.jacobian = [full_jet](Vec3 p) {
    Mat3 J;
    full_jet(p, &J);
    return J;
  };
  m.core_distance = [](Vec3 p) {
    return std::max(0.0, std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z) - 1.0);
  };
  m.seam_distance = [base](Vec3 p) {
    const double az = std::abs(p.z);
    double d = std::min({1.0 - az, az, std::abs(az - 0.5)});
    if (az < 1.0 - 1e-9) {
      const double R = kPlanarDomainRadius;
      const double k = std::sqrt(1.0 - p.z * p.z) / R;
      const IsotopyCoeffs co = isotopy_coeffs(az);
      const Vec2 r{co.m1 * (p.x / k), co.m2 * (p.y / k) + co.b};
      d = std::min(d, k * base.seam_distance(r));
    }
    return d;
  };
  return m;
}

}  // namespace entvar
