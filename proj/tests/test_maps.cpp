#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "entvar/maps.hpp"

using namespace entvar;

namespace {

double norm2(Vec2 p) { return std::hypot(p.x, p.y); }
double norm3(Vec3 p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

// Central finite differences against the analytic Jacobian, valid away from
// the piecewise seams.
double planar_fd_error(const PlanarMap& m, Vec2 p, double step = 1e-6) {
  const Mat2 J = m.jacobian(p);
  double worst = 0.0;
  const Vec2 fx1 = m.evaluate({p.x + step, p.y});
  const Vec2 fx0 = m.evaluate({p.x - step, p.y});
  const Vec2 fy1 = m.evaluate({p.x, p.y + step});
  const Vec2 fy0 = m.evaluate({p.x, p.y - step});
  worst = std::max(worst, std::abs((fx1.x - fx0.x) / (2 * step) - J.a[0]));
  worst = std::max(worst, std::abs((fy1.x - fy0.x) / (2 * step) - J.a[1]));
  worst = std::max(worst, std::abs((fx1.y - fx0.y) / (2 * step) - J.a[2]));
  worst = std::max(worst, std::abs((fy1.y - fy0.y) / (2 * step) - J.a[3]));
  return worst;
}

double ball_fd_error(const Ball3Map& m, Vec3 p, double step = 1e-6) {
  const Mat3 J = m.jacobian(p);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    Vec3 a = p, b = p;
    (j == 0 ? a.x : j == 1 ? a.y : a.z) += step;
    (j == 0 ? b.x : j == 1 ? b.y : b.z) -= step;
    const Vec3 fa = m.evaluate(a);
    const Vec3 fb = m.evaluate(b);
    const double fd[3] = {(fa.x - fb.x) / (2 * step), (fa.y - fb.y) / (2 * step),
                          (fa.z - fb.z) / (2 * step)};
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(fd[i] - J.a[3 * i + j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("horseshoe Jacobian matches finite differences off the seams") {
  const PlanarMap hs = model_horseshoe();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int checked = 0;
  for (int i = 0; i < 20000 && checked < 800; ++i) {
    const Vec2 p{u(rng), u(rng)};
    if (norm2(p) > 1.5 || hs.seam_distance(p) < 1e-3) continue;
    CHECK(planar_fd_error(hs, p) < 1e-5);
    ++checked;
  }
  CHECK(checked == 800);
}

TEST_CASE("horseshoe bands expand by exactly 3 and contract by exactly 1/3") {
  const PlanarMap hs = model_horseshoe();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  std::uniform_real_distribution<double> uy(1.0 / 3 + 1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 500; ++i) {
    Vec2 p{ux(rng), uy(rng)};
    if (i % 2) p.y = -p.y;
    const Mat2 J = hs.jacobian(p);
    CHECK(std::abs(J.a[0]) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(std::abs(J.a[3]) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(J.a[1] == 0.0);
    CHECK(J.a[2] == 0.0);
  }
}

TEST_CASE("branch images of the bands are disjoint and inside the core x-range") {
  const PlanarMap hs = model_horseshoe();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  std::uniform_real_distribution<double> uy(1.0 / 3, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{ux(rng), (i % 2) ? uy(rng) : -uy(rng)};
    const Vec2 q = hs.evaluate(p);
    CHECK(std::abs(q.y) <= 1.0 + 1e-12);  // full crossing of the band region
    CHECK(std::abs(q.x) >= 0.30);         // the two legs stay clear of x = 0
    CHECK(std::abs(q.x) <= 0.98);
    CHECK(((i % 2) ? q.x >= 0.0 : q.x <= 0.0));  // top leg lands right, bottom left
  }
}

TEST_CASE("the domain disc is trapping") {
  const PlanarMap hs = model_horseshoe();
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 300; ++i) {
    Vec2 p{u(rng), u(rng)};
    if (norm2(p) > 1.5) continue;
    for (int k = 0; k < 60; ++k) {
      p = hs.evaluate(p);
      CHECK(norm2(p) <= 1.5);
    }
  }
}

TEST_CASE("every depth-8 itinerary is realized by a band orbit") {
  // On the bands the y-dynamics is affine: y -> 3y + 2 (bottom), 2 - 3y
  // (top). Pull an interval back through a prescribed word, then check the
  // full planar map follows that word.
  const PlanarMap hs = model_horseshoe();
  const int depth = 8;
  for (int word = 0; word < (1 << depth); ++word) {
    double lo = -1.0, hi = 1.0;  // target interval at the end of the word
    for (int k = depth - 1; k >= 0; --k) {
      const bool top = (word >> k) & 1;
      double a, b;
      if (top) {  // preimage under y' = 2 - 3y inside [1/3, 1]
        a = (2.0 - hi) / 3.0;
        b = (2.0 - lo) / 3.0;
      } else {  // preimage under y' = 3y + 2 inside [-1, -1/3]
        a = (lo - 2.0) / 3.0;
        b = (hi - 2.0) / 3.0;
      }
      lo = std::min(a, b);
      hi = std::max(a, b);
    }
    Vec2 p{0.0, (lo + hi) / 2.0};
    bool ok = true;
    for (int k = 0; k < depth; ++k) {
      const bool top = (word >> k) & 1;
      ok = ok && (top ? (p.y >= 1.0 / 3 - 1e-9) : (p.y <= -1.0 / 3 + 1e-9));
      ok = ok && std::abs(p.x) <= 1.0 && std::abs(p.y) <= 1.0 + 1e-9;
      p = hs.evaluate(p);
    }
    CHECK(ok);
  }
}

TEST_CASE("alpha squeezes horizontally and pushes down") {
  CHECK(alpha(0.0, {0.9, 0.6}).x == doctest::Approx(0.6));
  CHECK(alpha(0.0, {0.9, 0.6}).y == doctest::Approx(0.6));
  CHECK(alpha(1.0, {0.9, 0.6}).y == doctest::Approx(-5.0 / 3));
  CHECK(alpha(0.5, {0.0, 1.0}).y == doctest::Approx(0.5 - 5.0 / 6));
}

TEST_CASE("eps0 is the computed clearance parameter") {
  const double e0 = eps0();
  CHECK(e0 > 0.45);
  CHECK(e0 < 0.52);
  // alpha_{e0} maps the whole domain disc strictly below the x-axis
  CHECK((1.0 - e0) * kPlanarDomainRadius - (5.0 / 3) * e0 < 0.0);
  // and the margin is tight: 0.02 less would not clear
  CHECK((1.0 - (e0 - 0.02)) * kPlanarDomainRadius - (5.0 / 3) * (e0 - 0.02) > 0.0);
}

TEST_CASE("isotopy coefficients blend continuously and end at the full push") {
  const IsotopyCoeffs at0 = isotopy_coeffs(0.0);
  CHECK(at0.m1 == doctest::Approx(1.0));
  CHECK(at0.m2 == doctest::Approx(1.0));
  CHECK(at0.b == doctest::Approx(0.0));
  const IsotopyCoeffs left = isotopy_coeffs(0.5 - 1e-12);
  const IsotopyCoeffs right = isotopy_coeffs(0.5 + 1e-12);
  CHECK(left.m1 == doctest::Approx(right.m1).epsilon(1e-9));
  CHECK(left.m2 == doctest::Approx(right.m2).epsilon(1e-9));
  CHECK(left.b == doctest::Approx(right.b).epsilon(1e-9));
  const IsotopyCoeffs at1 = isotopy_coeffs(1.0);
  CHECK(at1.m1 == doctest::Approx(2.0 / 3));
  CHECK(at1.m2 == doctest::Approx(0.0));
  CHECK(at1.b == doctest::Approx(-5.0 / 3));
}

TEST_CASE("isotopy at t=0 is the base map, exactly") {
  const PlanarMap hs = model_horseshoe();
  const PlanarMap f0 = isotopy_map(0.0, hs);
  CHECK(f0.domain.radius == doctest::Approx(1.5));
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p{1.06 * u(rng), 1.06 * u(rng)};
    if (norm2(p) > 1.49) continue;
    const Vec2 a = hs.evaluate(p);
    const Vec2 b = f0.evaluate(p);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
  }
}

TEST_CASE("the family is mirrored across t = 0") {
  const PlanarMap hs = model_horseshoe();
  const PlanarMap fp = isotopy_map(0.35, hs);
  const PlanarMap fm = isotopy_map(-0.35, hs);
  CHECK(fp.domain.radius == fm.domain.radius);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const Vec2 p{fp.domain.radius * 0.7 * u(rng), fp.domain.radius * 0.7 * u(rng)};
    const Vec2 a = fp.evaluate(p);
    const Vec2 b = fm.evaluate(p);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
  }
}

TEST_CASE("isotopy maps keep their shrunk disc invariant and contract at t near 1") {
  const PlanarMap hs = model_horseshoe();
  for (double t : {0.3, 0.7, 0.99}) {
    const PlanarMap ft = isotopy_map(t, hs);
    CHECK(ft.domain.radius == doctest::Approx(1.5 * std::sqrt(1 - t * t)));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      Vec2 p{ft.domain.radius * u(rng), ft.domain.radius * u(rng)};
      if (norm2(p) > ft.domain.radius) continue;
      for (int k = 0; k < 40; ++k) {
        p = ft.evaluate(p);
        CHECK(norm2(p) <= ft.domain.radius + 1e-12);
      }
    }
  }
  // two orbits at t = 0.99 collapse together: the map is a contraction
  const PlanarMap fc = isotopy_map(0.99, hs);
  Vec2 a{0.1, 0.05}, b{-0.08, -0.1};
  for (int k = 0; k < 80; ++k) {
    a = fc.evaluate(a);
    b = fc.evaluate(b);
  }
  CHECK(std::hypot(a.x - b.x, a.y - b.y) < 1e-6);
}

TEST_CASE("isotopy Jacobian matches finite differences") {
  const PlanarMap hs = model_horseshoe();
  const PlanarMap ft = isotopy_map(0.4, hs);
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 20000 && checked < 300; ++i) {
    const Vec2 p{ft.domain.radius * u(rng), ft.domain.radius * u(rng)};
    if (norm2(p) > ft.domain.radius - 1e-4 || ft.seam_distance(p) < 1e-3) continue;
    CHECK(planar_fd_error(ft, p) < 1e-5);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("points outside the deformed disc are rejected") {
  const PlanarMap ft = isotopy_map(0.6, model_horseshoe());
  CHECK_THROWS_AS(ft.evaluate({ft.domain.radius + 0.1, 0.0}), error);
  try {
    ft.evaluate({ft.domain.radius + 0.1, 0.0});
  } catch (const error& e) {
    CHECK(e.code() == errc::domain_escape);
  }
  CHECK_THROWS_AS(isotopy_map(1.5, model_horseshoe()), error);
}

TEST_CASE("ball family fixes exactly the poles and keeps the ball invariant") {
  for (double tau : {0.05, 0.2, 0.7}) {
    const Ball3Map g = family_G(tau);
    const Vec3 n = g.evaluate({0.0, 0.0, 1.0});
    const Vec3 s = g.evaluate({0.0, 0.0, -1.0});
    CHECK(n.x == 0.0);
    CHECK(n.y == 0.0);
    CHECK(n.z == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.z == doctest::Approx(-1.0).epsilon(1e-15));
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      Vec3 p{u(rng), u(rng), u(rng)};
      if (norm3(p) > 1.0) continue;
      double prevZ = p.z;
      for (int k = 0; k < 30; ++k) {
        p = g.evaluate(p);
        CHECK(norm3(p) <= 1.0 + 1e-9);
        if (std::abs(prevZ) < 1.0 - 1e-9) CHECK(p.z < prevZ + 1e-15);  // poleward drift
        prevZ = p.z;
      }
    }
  }
}

TEST_CASE("G_0 restricted to the equatorial slice is the conjugated horseshoe") {
  const Ball3Map g0 = family_G(0.0);
  const PlanarMap hs = model_horseshoe();
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Vec2 p{u(rng) * 0.7, u(rng) * 0.7};
    if (norm2(p) > 0.99) continue;
    const Vec3 q = g0.evaluate({p.x, p.y, 0.0});
    const Vec2 h = hs.evaluate({1.5 * p.x, 1.5 * p.y});
    CHECK(q.z == 0.0);
    CHECK(q.x == doctest::Approx(h.x / 1.5).epsilon(1e-12));
    CHECK(q.y == doctest::Approx(h.y / 1.5).epsilon(1e-12));
  }
}

TEST_CASE("ball Jacobian matches finite differences off the seams") {
  const Ball3Map g = family_G(0.1);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 60000 && checked < 400; ++i) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    if (norm3(p) > 0.97 || g.seam_distance(p) < 2e-3) continue;
    CHECK(ball_fd_error(g, p) < 1e-5);
    ++checked;
  }
  CHECK(checked == 400);
  CHECK_THROWS_AS(family_G(-0.1), error);
}

TEST_CASE("core and seam distances vanish where they should") {
  const PlanarMap hs = model_horseshoe();
  CHECK(hs.core_distance({0.5, 0.5}) == 0.0);
  CHECK(hs.core_distance({0.5, -0.5}) == 0.0);
  CHECK(hs.core_distance({0.0, 0.0}) == doctest::Approx(1.0 / 3));
  CHECK(hs.core_distance({0.0, 1.2}) == doctest::Approx(0.2));
  CHECK(hs.core_distance({1.4, 0.5}) == doctest::Approx(0.4));
  CHECK(hs.seam_distance({0.0, 1.0 / 3}) == 0.0);
  CHECK(hs.seam_distance({0.0, 0.5}) > 0.1);
  const Ball3Map g = family_G(0.1);
  CHECK(g.core_distance({0.2, 0.1, 0.3}) == 0.0);
  CHECK(g.core_distance({0.0, 0.0, 1.5}) == doctest::Approx(0.5));
  CHECK(g.seam_distance({0.3, 0.2, 0.0}) == 0.0);  // mirror joint at z = 0
}
