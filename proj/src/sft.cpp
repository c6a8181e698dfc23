#include "entvar/sft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numeric>
#include <sstream>

namespace entvar {

TransitionMatrix::TransitionMatrix(int order) : order_(order) {
  if (order < 1) throw error(errc::config, "matrix order must be >= 1");
  bits_.assign(static_cast<std::size_t>(order) * order, 0);
}

TransitionMatrix::TransitionMatrix(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> r;
  for (const auto& row : rows) r.emplace_back(row);
  *this = from_rows(r);
}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const int n = static_cast<int>(rows.size());
  TransitionMatrix A(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw error(errc::config, "transition matrix must be square");
    for (int j = 0; j < n; ++j) A.set(i, j, static_cast<std::uint8_t>(rows[i][j]));
  }
  return A;
}

void TransitionMatrix::set(int i, int j, std::uint8_t v) {
  if (v != 0 && v != 1) throw error(errc::config, "transition matrix entries must be 0 or 1");
  bits_[static_cast<std::size_t>(i) * order_ + j] = v;
}

std::string TransitionMatrix::to_text() const {
  std::ostringstream os;
  os << order_ << '\n';
  for (int i = 0; i < order_; ++i) {
    for (int j = 0; j < order_; ++j) {
      if (j) os << ' ';
      os << static_cast<int>(at(i, j));
    }
    os << '\n';
  }
  return os.str();
}

TransitionMatrix TransitionMatrix::from_text(const std::string& text) {
  std::istringstream is(text);
  int n = 0;
  if (!(is >> n) || n < 1) throw error(errc::config, "bad matrix header");
  TransitionMatrix A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int v = -1;
      if (!(is >> v) || (v != 0 && v != 1))
        throw error(errc::config, "bad matrix entry at row " + std::to_string(i + 1));
      A.set(i, j, static_cast<std::uint8_t>(v));
    }
  return A;
}

TransitionMatrix TransitionMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config, "cannot open matrix file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void TransitionMatrix::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw error(errc::config, "cannot write matrix file: " + path);
  out << to_text();
}

namespace {

// Iterative Tarjan, vertices in 0..n-1.
struct TarjanState {
  const TransitionMatrix& A;
  std::vector<int> index, low, stack;
  std::vector<bool> onstack;
  std::vector<std::vector<int>> sccs;
  int counter = 0;

  explicit TarjanState(const TransitionMatrix& a)
      : A(a), index(a.order(), -1), low(a.order(), 0), onstack(a.order(), false) {}

  void run(int root) {
    struct Frame {
      int v;
      int next;
    };
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    onstack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const int n = A.order();
      bool descended = false;
      while (f.next < n) {
        const int w = f.next++;
        if (!A.at(f.v, w)) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          onstack[w] = true;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (onstack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      if (low[f.v] == index[f.v]) {
        std::vector<int> scc;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          onstack[w] = false;
          scc.push_back(w);
        } while (w != f.v);
        std::sort(scc.begin(), scc.end());
        sccs.push_back(std::move(scc));
      }
      const int v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
    }
  }
};

TransitionMatrix induced_submatrix(const TransitionMatrix& A, const std::vector<int>& symbols) {
  const int m = static_cast<int>(symbols.size());
  TransitionMatrix S(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) S.set(i, j, A.at(symbols[i], symbols[j]));
  return S;
}

bool has_edge(const TransitionMatrix& A) {
  for (int i = 0; i < A.order(); ++i)
    for (int j = 0; j < A.order(); ++j)
      if (A.at(i, j)) return true;
  return false;
}

constexpr long kIterationCap = 1000000;

// Power iteration on B = A + I restricted to one irreducible block.
// A + I is primitive there, so convergence is geometric.
struct BlockIteration {
  double radius = 0.0;
  long iterations = 0;
  double residual = 0.0;
};

BlockIteration block_power_iteration(const TransitionMatrix& A, double tol) {
  const int n = A.order();
  std::vector<double> v(n, 1.0), w(n, 0.0);
  BlockIteration out;
  double lambda = 0.0;
  for (long it = 1; it <= kIterationCap; ++it) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = v[i];  // the +I shift
      for (int j = 0; j < n; ++j)
        if (A.at(i, j)) s += v[j];
      w[i] = s;
      norm = std::max(norm, s);
    }
    lambda = norm;
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(w[i] - lambda * v[i]));
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
    out.iterations = it;
    if (resid <= tol * std::max(1.0, lambda)) {
      out.residual = resid;
      out.radius = lambda - 1.0;  // undo the identity shift
      return out;
    }
    out.residual = resid;
  }
  throw error(errc::non_convergence,
              "power iteration failed to reach tolerance within iteration cap");
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const TransitionMatrix& A) {
  TarjanState st(A);
  for (int v = 0; v < A.order(); ++v)
    if (st.index[v] < 0) st.run(v);
  // Deterministic presentation order: by smallest contained symbol.
  std::sort(st.sccs.begin(), st.sccs.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return st.sccs;
}

bool is_irreducible(const TransitionMatrix& A) {
  return strongly_connected_components(A).size() == 1;
}

SpectralResult spectral_radius(const TransitionMatrix& A, double tol) {
  if (tol <= 0) throw error(errc::config, "tolerance must be positive");
  SpectralResult out;
  for (const auto& scc : strongly_connected_components(A)) {
    TransitionMatrix block = induced_submatrix(A, scc);
    if (!has_edge(block)) continue;  // wandering vertex, contributes radius 0
    BlockIteration bi = block_power_iteration(block, tol);
    if (bi.radius > out.radius) {
      out.radius = bi.radius;
      out.residual = bi.residual;
    }
    out.iterations += bi.iterations;
  }
  if (out.radius <= 0.0) {
    // Nilpotent transition graph: no recurrent symbol at all. Entropy 0 by
    // convention, flagged so callers can tell it apart from the 1-shift.
    out.radius = 0.0;
    out.entropy = 0.0;
    out.degenerate = true;
    return out;
  }
  if (A.order() <= 8) {
    const double exact = oracle::perron_root(A);
    if (std::abs(exact - out.radius) > std::max(100.0 * tol, 1e-9))
      out.radius = exact;  // polynomial fallback; power iteration stalled
    out.residual = std::min(out.residual, std::abs(exact - out.radius));
  }
  out.entropy = std::log(out.radius);
  return out;
}

ComponentDecomposition decompose(const TransitionMatrix& A, double tol) {
  ComponentDecomposition out;
  for (const auto& scc : strongly_connected_components(A)) {
    TransitionMatrix block = induced_submatrix(A, scc);
    if (!has_edge(block)) continue;
    SpectralResult sr = spectral_radius(block, tol);
    out.components.push_back({scc, std::move(block)});
    out.componentEntropies.push_back(sr.entropy);
  }
  out.maxEntropy = 0.0;
  out.responsibleIndex = -1;
  for (std::size_t k = 0; k < out.componentEntropies.size(); ++k) {
    if (out.responsibleIndex < 0 || out.componentEntropies[k] > out.maxEntropy) {
      out.maxEntropy = out.componentEntropies[k];
      out.responsibleIndex = static_cast<int>(k);
    }
  }
  if (out.responsibleIndex < 0) out.maxEntropy = 0.0;
  return out;
}

TransitionMatrix principal_minor(const TransitionMatrix& A, int dropIndex) {
  const int n = A.order();
  if (n < 2) throw error(errc::config, "principal minor requires order >= 2");
  if (dropIndex < 1 || dropIndex > n)
    throw error(errc::config, "principal minor index out of range");
  TransitionMatrix M(n - 1);
  const int d = dropIndex - 1;
  for (int i = 0, ii = 0; i < n; ++i) {
    if (i == d) continue;
    for (int j = 0, jj = 0; j < n; ++j) {
      if (j == d) continue;
      M.set(ii, jj, A.at(i, j));
      ++jj;
    }
    ++ii;
  }
  return M;
}

namespace oracle {

namespace {

using Poly = std::vector<std::int64_t>;  // ascending coefficients

std::vector<std::int64_t> mat_mul(const std::vector<std::int64_t>& X,
                                  const std::vector<std::int64_t>& Y, int n) {
  std::vector<std::int64_t> Z(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const std::int64_t x = X[static_cast<std::size_t>(i) * n + k];
      if (!x) continue;
      for (int j = 0; j < n; ++j) Z[static_cast<std::size_t>(i) * n + j] += x * Y[static_cast<std::size_t>(k) * n + j];
    }
  return Z;
}

std::int64_t trace(const std::vector<std::int64_t>& X, int n) {
  std::int64_t t = 0;
  for (int i = 0; i < n; ++i) t += X[static_cast<std::size_t>(i) * n + i];
  return t;
}

// Exact polynomial GCD over the integers via the primitive PRS. Inputs are
// small (degree <= 8, char-poly coefficients of a 0-1 matrix), __int128
// intermediates are ample.
using WidePoly = std::vector<__int128>;

WidePoly trim(WidePoly p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  return p;
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

WidePoly primitive_part(WidePoly p) {
  __int128 g = 0;
  for (auto c : p) g = gcd128(g, c);
  if (g > 1)
    for (auto& c : p) c /= g;
  if (!p.empty() && p.back() < 0)
    for (auto& c : p) c = -c;
  return p;
}

// Pseudo-remainder of a by b (b nonzero, deg a >= deg b).
WidePoly pseudo_rem(WidePoly a, const WidePoly& b) {
  const auto db = b.size() - 1;
  const __int128 lead = b.back();
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    const auto da = a.size() - 1;
    const __int128 coef = a.back();
    for (auto& c : a) c *= lead;
    for (std::size_t k = 0; k <= db; ++k) a[da - db + k] -= coef * b[k];
    a = trim(a);
    a = primitive_part(a);  // keep growth down
    if (a.size() == 1 && a[0] == 0) break;
  }
  return a;
}

WidePoly poly_gcd(WidePoly a, WidePoly b) {
  a = primitive_part(trim(a));
  b = primitive_part(trim(b));
  if (a.size() < b.size()) std::swap(a, b);
  while (!(b.size() == 1 && b[0] == 0)) {
    WidePoly r = pseudo_rem(a, b);
    a = b;
    b = r;
  }
  return a;
}

std::vector<double> to_double(const WidePoly& p) {
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = static_cast<double>(p[i]);
  return q;
}

// Exact division of integer polynomials (used for the square-free part;
// divisibility holds by construction, checked anyway).
WidePoly poly_div_exact(const WidePoly& a, const WidePoly& b) {
  WidePoly rem = a;
  WidePoly quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, 0);
  while (rem.size() >= b.size() && !(rem.size() == 1 && rem[0] == 0)) {
    const auto shift = rem.size() - b.size();
    if (rem.back() % b.back() != 0) throw error(errc::config, "inexact polynomial division");
    const __int128 c = rem.back() / b.back();
    quot[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) rem[shift + k] -= c * b[k];
    rem = trim(rem);
    if (rem.size() == 1 && rem[0] == 0) break;
  }
  return trim(quot);
}

std::complex<long double> horner(const std::vector<double>& p, std::complex<long double> x) {
  std::complex<long double> acc(0.0L, 0.0L);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + static_cast<long double>(*it);
  return acc;
}

std::complex<long double> horner_d(const std::vector<double>& p, std::complex<long double> x) {
  std::complex<long double> acc(0.0L, 0.0L);
  for (std::size_t k = p.size(); k-- > 1;)
    acc = acc * x + static_cast<long double>(p[k]) * static_cast<long double>(k);
  return acc;
}

}  // namespace

std::vector<std::int64_t> char_poly(const TransitionMatrix& A) {
  const int n = A.order();
  std::vector<std::int64_t> M(static_cast<std::size_t>(n) * n, 0);  // dense copy of A
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[static_cast<std::size_t>(i) * n + j] = A.at(i, j);

  // Faddeev-LeVerrier: c_{n-k} from traces of the auxiliary sequence.
  Poly c(static_cast<std::size_t>(n) + 1, 0);
  c[n] = 1;
  std::vector<std::int64_t> Mk = M;
  for (int k = 1; k <= n; ++k) {
    const std::int64_t ck = -trace(Mk, n) / k;  // division is exact
    c[n - k] = ck;
    if (k == n) break;
    for (int i = 0; i < n; ++i) Mk[static_cast<std::size_t>(i) * n + i] += ck;
    Mk = mat_mul(M, Mk, n);
  }
  return c;
}

std::vector<Root> char_poly_roots(const TransitionMatrix& A) {
  const Poly ci = char_poly(A);
  WidePoly p(ci.begin(), ci.end());
  p = trim(p);
  // Strip x^k factors up front (zero eigenvalues).
  std::size_t zeros = 0;
  while (zeros + 1 < p.size() && p[zeros] == 0) ++zeros;
  WidePoly core(p.begin() + static_cast<long>(zeros), p.end());
  std::vector<Root> roots(zeros, Root{0.0, 0.0});
  if (core.size() <= 1) return roots;

  // Square-free part, so Durand-Kerner converges quadratically.
  WidePoly d(core.size() - 1);
  for (std::size_t k = 1; k < core.size(); ++k) d[k - 1] = core[k] * static_cast<__int128>(k);
  WidePoly g = poly_gcd(core, d);
  WidePoly sf = (g.size() > 1) ? primitive_part(poly_div_exact(core, g)) : core;

  const std::vector<double> q = to_double(sf);
  const std::size_t deg = q.size() - 1;
  std::vector<std::complex<long double>> z(deg);
  for (std::size_t k = 0; k < deg; ++k)
    z[k] = std::polar<long double>(0.4L + 0.9L * static_cast<long double>(k + 1),
                                   0.9L * static_cast<long double>(k) + 0.3L);
  const long double lead = static_cast<long double>(q.back());
  for (int iter = 0; iter < 400; ++iter) {
    long double shift = 0.0L;
    for (std::size_t k = 0; k < deg; ++k) {
      std::complex<long double> denom(lead, 0.0L);
      for (std::size_t j = 0; j < deg; ++j)
        if (j != k) denom *= (z[k] - z[j]);
      const std::complex<long double> delta = horner(q, z[k]) / denom;
      z[k] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-16L) break;
  }
  // Newton polish.
  for (auto& r : z)
    for (int it = 0; it < 8; ++it) {
      const auto dp = horner_d(q, r);
      if (std::abs(dp) < 1e-30L) break;
      r -= horner(q, r) / dp;
    }
  for (const auto& r : z)
    roots.push_back({static_cast<double>(r.real()), static_cast<double>(r.imag())});
  return roots;
}

double perron_root(const TransitionMatrix& A) {
  if (A.order() > 8)
    throw error(errc::config, "exact polynomial oracle is restricted to order <= 8");
  double radius = 0.0;
  for (const auto& r : char_poly_roots(A))
    radius = std::max(radius, std::hypot(r.re, r.im));
  return radius;
}

}  // namespace oracle

}  // namespace entvar
