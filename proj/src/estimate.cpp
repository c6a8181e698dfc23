#include "entvar/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <deque>
#include <functional>
#include <limits>

namespace entvar {

namespace {

// Refinement tuning: cells split once their image extent along the worst
// axis exceeds kSplitExtent, so resolution follows the expansion and the
// per-itinerary multiplicity stays O(1). Pruning keeps a cell while the
// center orbit stays within the propagated cell radius of the core.
constexpr double kSplitExtent = 0.6;
constexpr double kAliveSafety = 1.5;
constexpr int kMaxCells = 150000;

// Dimension-generic view of a smooth system (dim = 2 or 3).
struct Sys {
  int dim = 2;
  std::function<void(const double*, double*)> eval;
  std::function<void(const double*, double*)> jac;  // row-major dim x dim
  double center[3] = {0, 0, 0};
  double radius = 1.0;
  std::function<double(const double*)> core;
};

Sys view_of(const PlanarMap& m) {
  Sys s;
  s.dim = 2;
  s.center[0] = m.domain.center.x;
  s.center[1] = m.domain.center.y;
  s.radius = m.domain.radius;
  s.eval = [&m](const double* in, double* out) {
    const Vec2 q = m.evaluate({in[0], in[1]});
    out[0] = q.x;
    out[1] = q.y;
  };
  s.jac = [&m](const double* in, double* out) {
    const Mat2 J = m.jacobian({in[0], in[1]});
    std::memcpy(out, J.a, 4 * sizeof(double));
  };
  s.core = [&m](const double* p) { return m.core_distance({p[0], p[1]}); };
  return s;
}

Sys view_of(const Ball3Map& m) {
  Sys s;
  s.dim = 3;
  s.center[0] = m.center.x;
  s.center[1] = m.center.y;
  s.center[2] = m.center.z;
  s.radius = m.radius;
  s.eval = [&m](const double* in, double* out) {
    const Vec3 q = m.evaluate({in[0], in[1], in[2]});
    out[0] = q.x;
    out[1] = q.y;
    out[2] = q.z;
  };
  s.jac = [&m](const double* in, double* out) {
    const Mat3 J = m.jacobian({in[0], in[1], in[2]});
    std::memcpy(out, J.a, 9 * sizeof(double));
  };
  s.core = [&m](const double* p) { return m.core_distance({p[0], p[1], p[2]}); };
  return s;
}

double dist(const double* a, const double* b, int dim) {
  double acc = 0.0;
  for (int j = 0; j < dim; ++j) acc += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(acc);
}

bool in_domain(const Sys& s, const double* p) {
  return dist(p, s.center, s.dim) <= s.radius + 1e-12;
}

struct Cell {
  double c[3] = {0, 0, 0};
  double h[3] = {0, 0, 0};  // half-widths, anisotropic
};

struct CellOrbit {
  bool alive = false;
  bool wantSplit = false;
  int splitAxis = 0;
  std::vector<double> orbit;  // m * dim doubles, steps 0..m-1
};

// Follow the center orbit to depth m, propagating the cell edge vectors
// through the Jacobians. Alive: the core stays within the propagated cell
// radius at every step. Split request: worst-axis image extent > threshold.
CellOrbit trace_cell(const Sys& s, const Cell& cell, int m) {
  const int d = s.dim;
  CellOrbit out;
  out.orbit.resize(static_cast<std::size_t>(m) * d);
  double x[3], w[3][3];  // w[j] = Df^i applied to the j-th half-edge
  for (int j = 0; j < d; ++j) {
    x[j] = cell.c[j];
    for (int k = 0; k < d; ++k) w[j][k] = (j == k) ? cell.h[j] : 0.0;
  }
  double growth[3] = {0, 0, 0};
  double J[9];
  for (int i = 0; i <= m; ++i) {
    double slack = 0.0;
    for (int j = 0; j < d; ++j) {
      double nj = 0.0;
      for (int k = 0; k < d; ++k) nj += w[j][k] * w[j][k];
      nj = std::sqrt(nj);
      growth[j] = std::max(growth[j], nj);
      slack += nj;
    }
    if (s.core(x) > kAliveSafety * slack + 1e-9) return out;  // dead
    if (i < m) {
      for (int k = 0; k < d; ++k) out.orbit[static_cast<std::size_t>(i) * d + k] = x[k];
      if (!in_domain(s, x)) return out;
      s.jac(x, J);
      for (int j = 0; j < d; ++j) {
        double nw[3];
        for (int r = 0; r < d; ++r) {
          nw[r] = 0.0;
          for (int k = 0; k < d; ++k) nw[r] += J[r * d + k] * w[j][k];
        }
        for (int r = 0; r < d; ++r) w[j][r] = nw[r];
      }
      double nx[3];
      s.eval(x, nx);
      for (int k = 0; k < d; ++k) x[k] = nx[k];
    }
  }
  out.alive = true;
  int axis = 0;
  for (int j = 1; j < d; ++j)
    if (growth[j] > growth[axis]) axis = j;
  out.splitAxis = axis;
  out.wantSplit = 2.0 * growth[axis] > kSplitExtent;
  return out;
}

std::vector<Cell> base_grid(const Sys& s, int perAxis) {
  std::vector<Cell> cells;
  const double h = s.radius / perAxis;
  const int d = s.dim;
  std::vector<int> idx(d, 0);
  for (;;) {
    Cell c;
    for (int j = 0; j < d; ++j) {
      c.h[j] = h;
      c.c[j] = s.center[j] - s.radius + (2 * idx[j] + 1) * h;
    }
    cells.push_back(c);
    int j = 0;
    while (j < d && ++idx[j] == 2 * perAxis) idx[j++] = 0;
    if (j == d) break;
  }
  return cells;
}

// Greedy maximal (m, eps)-separated subset in the Bowen metric. Orbits are
// stored contiguously, m steps of dim doubles each. Late steps are checked
// first: expanding dynamics separates there, so most pairs exit immediately.
long greedy_separated(const std::vector<const double*>& orbits, int m, int dim, double eps) {
  const double epsEff = eps * (1.0 - 1e-9);
  const double eps2 = epsEff * epsEff;
  std::vector<const double*> kept;
  kept.reserve(orbits.size());
  for (const double* cand : orbits) {
    bool ok = true;
    for (const double* k : kept) {
      bool separated = false;
      for (int i = m - 1; i >= 0; --i) {
        double d2 = 0.0;
        for (int j = 0; j < dim; ++j) {
          const double df = cand[i * dim + j] - k[i * dim + j];
          d2 += df * df;
        }
        if (d2 >= eps2) {
          separated = true;
          break;
        }
      }
      if (!separated) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(cand);
  }
  return static_cast<long>(kept.size());
}

// Least-squares slope of y against m over the tail window [n/2, n], plus rms
// residual. Entries with missing y are skipped.
std::pair<double, double> tail_slope(const std::vector<std::pair<int, double>>& pts, int n) {
  const int lo = std::max(1, n / 2);
  double sm = 0, sy = 0, smm = 0, smy = 0;
  int cnt = 0;
  for (const auto& [m, y] : pts)
    if (m >= lo) {
      sm += m;
      sy += y;
      smm += static_cast<double>(m) * m;
      smy += m * y;
      ++cnt;
    }
  if (cnt < 2) return {0.0, 0.0};
  const double det = cnt * smm - sm * sm;
  if (det <= 0) return {0.0, 0.0};
  const double slope = (cnt * smy - sm * sy) / det;
  const double intercept = (sy - slope * sm) / cnt;
  double rss = 0.0;
  for (const auto& [m, y] : pts)
    if (m >= lo) {
      const double e = y - (slope * m + intercept);
      rss += e * e;
    }
  return {slope, std::sqrt(rss / cnt)};
}

EntropyEstimate separated_core(const Sys& s, int n, double epsilon, const GridSpec& grid) {
  if (n < 2) throw error(errc::config, "separated_entropy requires n >= 2");
  if (!(epsilon > 0)) throw error(errc::config, "separated_entropy requires epsilon > 0");
  if (grid.resolution < 2) throw error(errc::config, "grid resolution must be >= 2");

  EntropyEstimate est;
  est.n = n;
  est.epsilon = epsilon;

  std::vector<std::pair<int, double>> logCounts;
  long envelope = 0;

  if (!grid.refine) {
    const double spacing = 2.0 * s.radius / grid.resolution;
    if (spacing > epsilon * (1.0 + 1e-12))
      throw error(errc::config, "GRID_TOO_COARSE: static grid spacing " + std::to_string(spacing) +
                                    " exceeds epsilon " + std::to_string(epsilon));
    // Lambda proxy: grid points whose forward orbit stays in the domain.
    std::vector<std::vector<double>> orbits;
    Sys gs = s;
    const auto cells = base_grid(gs, grid.resolution / 2);
    for (const auto& c : cells) {
      if (static_cast<long>(orbits.size()) >= kMaxCells) break;
      double x[3] = {c.c[0], c.c[1], c.c[2]};
      if (!in_domain(s, x)) continue;
      std::vector<double> orb(static_cast<std::size_t>(n) * s.dim);
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < s.dim; ++j) orb[static_cast<std::size_t>(i) * s.dim + j] = x[j];
        double nx[3];
        s.eval(x, nx);
        for (int j = 0; j < s.dim; ++j) x[j] = nx[j];
        if (!in_domain(s, x)) {
          ok = (i == n - 1);
          if (!ok) break;
        }
      }
      if (ok) orbits.push_back(std::move(orb));
    }
    std::vector<const double*> ptrs;
    ptrs.reserve(orbits.size());
    for (const auto& o : orbits) ptrs.push_back(o.data());
    for (int m = 1; m <= n; ++m) {
      const long r = greedy_separated(ptrs, m, s.dim, epsilon);
      envelope = std::max(envelope, r);
      est.cardinalities.push_back(envelope);
      if (envelope >= 1) logCounts.push_back({m, std::log(static_cast<double>(envelope))});
    }
  } else {
    std::vector<Cell> cells = base_grid(s, 4);  // 8 cells per axis
    for (int m = 1; m <= n; ++m) {
      // Prune and refine the current generation at horizon m.
      std::deque<Cell> queue(cells.begin(), cells.end());
      std::vector<Cell> keptCells;
      std::vector<std::vector<double>> keptOrbits;
      while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        CellOrbit co = trace_cell(s, c, m);
        if (!co.alive) continue;
        const long population = static_cast<long>(keptCells.size() + queue.size());
        if (co.wantSplit && population + 1 < kMaxCells) {
          const int ax = co.splitAxis;
          Cell a = c, b = c;
          a.h[ax] = b.h[ax] = c.h[ax] / 2.0;
          a.c[ax] = c.c[ax] - a.h[ax];
          b.c[ax] = c.c[ax] + b.h[ax];
          queue.push_back(a);
          queue.push_back(b);
        } else {
          keptCells.push_back(c);
          keptOrbits.push_back(std::move(co.orbit));
        }
      }
      cells = std::move(keptCells);
      std::vector<const double*> ptrs;
      ptrs.reserve(keptOrbits.size());
      for (const auto& o : keptOrbits) ptrs.push_back(o.data());
      const long r = greedy_separated(ptrs, m, s.dim, epsilon);
      envelope = std::max(envelope, r);
      est.cardinalities.push_back(envelope);
      if (envelope >= 1) logCounts.push_back({m, std::log(static_cast<double>(envelope))});
    }
  }

  est.value = std::max(0.0, tail_slope(logCounts, n).first);
  return est;
}

double max_abs(const double* a, int len) {
  double m = 0.0;
  for (int i = 0; i < len; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

// Largest singular value via power iteration on P^T P.
double op_norm(const double* P, int d) {
  double B[9];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += P[k * d + i] * P[k * d + j];
      B[i * d + j] = acc;
    }
  double v[3];
  for (int i = 0; i < d; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(d));
  double lam = 0.0;
  for (int it = 0; it < 80; ++it) {
    double w[3] = {0, 0, 0};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) w[i] += B[i * d + j] * v[j];
    double nw = 0.0;
    for (int i = 0; i < d; ++i) nw += w[i] * w[i];
    nw = std::sqrt(nw);
    if (nw == 0.0) return 0.0;
    lam = nw;
    for (int i = 0; i < d; ++i) v[i] = w[i] / nw;
  }
  return std::sqrt(lam);
}

GrowthRate growth_core(const Sys& s, int n, const GridSpec& grid) {
  if (n < 4) throw error(errc::config, "growth_rate requires n >= 4");
  const int d = s.dim;

  std::vector<std::array<double, 3>> seeds;
  seeds.push_back({s.center[0], s.center[1], s.center[2]});
  const int perAxis = std::min(std::max(grid.resolution, 4), 24);
  for (const auto& c : base_grid(s, perAxis / 2)) {
    double x[3] = {c.c[0], c.c[1], c.c[2]};
    if (in_domain(s, x)) seeds.push_back({x[0], x[1], x[2]});
  }
  if (grid.refine) {
    // Centers of cells shadowing the invariant core: these realize the
    // maximal derivative growth for the full n steps.
    std::vector<Cell> cells = base_grid(s, 4);
    for (int m = 1; m <= n; ++m) {
      std::deque<Cell> queue(cells.begin(), cells.end());
      std::vector<Cell> kept;
      while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        CellOrbit co = trace_cell(s, c, m);
        if (!co.alive) continue;
        const long population = static_cast<long>(kept.size() + queue.size());
        if (co.wantSplit && population + 1 < 20000) {
          const int ax = co.splitAxis;
          Cell a = c, b = c;
          a.h[ax] = b.h[ax] = c.h[ax] / 2.0;
          a.c[ax] = c.c[ax] - a.h[ax];
          b.c[ax] = c.c[ax] + b.h[ax];
          queue.push_back(a);
          queue.push_back(b);
        } else {
          kept.push_back(c);
        }
      }
      cells = std::move(kept);
    }
    const std::size_t stride = std::max<std::size_t>(1, cells.size() / 2000);
    for (std::size_t i = 0; i < cells.size(); i += stride)
      seeds.push_back({cells[i].c[0], cells[i].c[1], cells[i].c[2]});
  }

  std::vector<double> best(static_cast<std::size_t>(n) + 1,
                           -std::numeric_limits<double>::infinity());
  double J[9], P[9], nP[9];
  for (const auto& seed : seeds) {
    double x[3] = {seed[0], seed[1], seed[2]};
    double logScale = 0.0;
    for (int i = 0; i < d * d; ++i) P[i] = 0.0;
    for (int i = 0; i < d; ++i) P[i * d + i] = 1.0;
    for (int m = 1; m <= n; ++m) {
      if (!in_domain(s, x)) break;
      s.jac(x, J);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double acc = 0.0;
          for (int k = 0; k < d; ++k) acc += J[i * d + k] * P[k * d + j];
          nP[i * d + j] = acc;
        }
      std::memcpy(P, nP, sizeof(double) * d * d);
      const double scale = max_abs(P, d * d);
      if (!std::isfinite(scale) || scale > 1e300)
        throw error(errc::non_convergence,
                    "OVERFLOW_GUARD: derivative norms exceeded 1e300 before rescaling");
      if (scale > 1e100) {
        for (int i = 0; i < d * d; ++i) P[i] /= scale;
        logScale += std::log(scale);
      }
      const double nrm = op_norm(P, d);
      if (nrm > 0.0) best[m] = std::max(best[m], logScale + std::log(nrm));
      double nx[3];
      s.eval(x, nx);
      for (int k = 0; k < d; ++k) x[k] = nx[k];
    }
  }

  GrowthRate R;
  for (int m = 1; m <= n; ++m)
    if (std::isfinite(best[m])) R.samples.push_back({m, best[m]});
  const auto [slope, resid] = tail_slope(R.samples, n);
  R.value = std::max(0.0, slope);
  R.residual = resid;
  return R;
}

}  // namespace

EntropyEstimate separated_entropy(const PlanarMap& map, int n, double epsilon,
                                  const GridSpec& grid) {
  return separated_core(view_of(map), n, epsilon, grid);
}

EntropyEstimate separated_entropy(const Ball3Map& map, int n, double epsilon,
                                  const GridSpec& grid) {
  return separated_core(view_of(map), n, epsilon, grid);
}

GrowthRate growth_rate(const PlanarMap& map, int n, const GridSpec& grid) {
  return growth_core(view_of(map), n, grid);
}

GrowthRate growth_rate(const Ball3Map& map, int n, const GridSpec& grid) {
  return growth_core(view_of(map), n, grid);
}

double yomdin_defect(double growthRateValue, int dimM, int k) {
  if (k < 1) throw error(errc::config, "yomdin_defect requires k >= 1");
  if (dimM != 2 && dimM != 3) throw error(errc::config, "yomdin_defect requires dimM in {2,3}");
  if (growthRateValue < 0) throw error(errc::config, "growth rate must be nonnegative");
  return (2.0 * dimM / k) * growthRateValue;
}

double yomdin_defect(const GrowthRate& R, int dimM, int k) {
  return yomdin_defect(R.value, dimM, k);
}

double snake_bound(double lambda, std::optional<double> mu, int tau, double eps) {
  if (!(lambda > 1.0))
    throw error(errc::config, "INVALID_EIGENVALUES: lambda must exceed 1");
  if (mu && !(*mu > 0.0 && *mu < 1.0))
    throw error(errc::config, "INVALID_EIGENVALUES: mu must lie in (0, 1)");
  if (tau < 1) throw error(errc::config, "tau must be a positive integer");
  if (eps < 0.0) throw error(errc::config, "eps must be nonnegative");
  const double lamEff = mu ? std::min(lambda, 1.0 / *mu) : lambda;
  return std::log(lamEff) / tau - eps;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::VARIES: return "VARIES";
    case Verdict::CONSTANT_CINF: return "CONSTANT_CINF";
    case Verdict::CONSTANT_CK: return "CONSTANT_CK";
    case Verdict::UNDECIDED: return "UNDECIDED";
  }
  return "UNDECIDED";
}

VerdictResult variation_verdict(const std::vector<double>& pieceEntropies,
                                int tangencyPieceIndex, double alpha_k) {
  if (pieceEntropies.empty()) throw error(errc::config, "piece entropy list is empty");
  if (tangencyPieceIndex < 0 ||
      tangencyPieceIndex >= static_cast<int>(pieceEntropies.size()))
    throw error(errc::config, "tangency piece index out of range");
  if (alpha_k < 0.0) throw error(errc::config, "alpha_k must be nonnegative");
  const double maxE = *std::max_element(pieceEntropies.begin(), pieceEntropies.end());
  VerdictResult res;
  res.gap = maxE - pieceEntropies[tangencyPieceIndex];
  const bool responsible = res.gap <= 1e-12;
  res.constantCinf = !responsible;
  res.constantCk = !responsible && res.gap > alpha_k;
  if (responsible)
    res.tag = Verdict::VARIES;
  else if (alpha_k == 0.0)
    res.tag = Verdict::CONSTANT_CINF;
  else if (res.gap > alpha_k)
    res.tag = Verdict::CONSTANT_CK;
  else
    res.tag = Verdict::UNDECIDED;
  return res;
}

std::vector<Vec3> fixed_points(const Ball3Map& map, int seedsPerAxis) {
  std::vector<Vec3> seeds;
  for (int a = 0; a < seedsPerAxis; ++a)
    for (int b = 0; b < seedsPerAxis; ++b)
      for (int c = 0; c < seedsPerAxis; ++c) {
        const Vec3 p{-1.0 + (2.0 * a + 1.0) / seedsPerAxis,
                     -1.0 + (2.0 * b + 1.0) / seedsPerAxis,
                     -1.0 + (2.0 * c + 1.0) / seedsPerAxis};
        if (p.x * p.x + p.y * p.y + p.z * p.z <= 1.0) seeds.push_back(p);
      }
  seeds.push_back({0.0, 0.0, 1.0});
  seeds.push_back({0.0, 0.0, -1.0});

  std::vector<Vec3> found;
  for (Vec3 p : seeds) {
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const Vec3 q = map.evaluate(p);
      double r[3] = {q.x - p.x, q.y - p.y, q.z - p.z};
      const double rn = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
      if (rn < 1e-12) {
        converged = true;
        break;
      }
      Mat3 J = map.jacobian(p);
      double A[9];
      for (int i = 0; i < 9; ++i) A[i] = J.a[i];
      for (int i = 0; i < 3; ++i) A[i * 3 + i] -= 1.0;
      // solve A * delta = -r by Gaussian elimination with partial pivoting
      double rhs[3] = {-r[0], -r[1], -r[2]};
      bool singular = false;
      int perm[3] = {0, 1, 2};
      for (int col = 0; col < 3 && !singular; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
          if (std::abs(A[perm[row] * 3 + col]) > std::abs(A[perm[piv] * 3 + col])) piv = row;
        std::swap(perm[col], perm[piv]);
        const double pv = A[perm[col] * 3 + col];
        if (std::abs(pv) < 1e-14) {
          singular = true;
          break;
        }
        for (int row = col + 1; row < 3; ++row) {
          const double f = A[perm[row] * 3 + col] / pv;
          for (int k = col; k < 3; ++k) A[perm[row] * 3 + k] -= f * A[perm[col] * 3 + k];
          rhs[perm[row]] -= f * rhs[perm[col]];
        }
      }
      if (singular) break;
      double delta[3];
      for (int col = 2; col >= 0; --col) {
        double acc = rhs[perm[col]];
        for (int k = col + 1; k < 3; ++k) acc -= A[perm[col] * 3 + k] * delta[k];
        delta[col] = acc / A[perm[col] * 3 + col];
      }
      double dn = std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]);
      if (dn > 0.5) {
        for (double& v : delta) v *= 0.5 / dn;
      }
      p = {p.x + delta[0], p.y + delta[1], p.z + delta[2]};
      if (p.x * p.x + p.y * p.y + p.z * p.z > 2.25) break;  // left the chart
    }
    if (!converged) continue;
    if (p.x * p.x + p.y * p.y + p.z * p.z > 1.0 + 1e-6) continue;
    bool dup = false;
    for (const Vec3& f : found)
      if (std::hypot(f.x - p.x, f.y - p.y, f.z - p.z) < 1e-6) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(p);
  }
  std::sort(found.begin(), found.end(), [](const Vec3& a, const Vec3& b) {
    if (a.z != b.z) return a.z < b.z;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  return found;
}

}  // namespace entvar
