#pragma once

/*
 * Subshift-of-finite-type algebra: 0-1 transition matrices, irreducibility,
 * strongly connected component decomposition, Perron root and topological
 * entropy (natural log of the spectral radius).
 *
 * Two independent routes to the spectral radius are provided:
 *   - power iteration on A + I, blockwise over strongly connected components;
 *   - exact integer characteristic polynomial (Faddeev-LeVerrier) with
 *     floating root finding on the square-free part, for order <= 8.
 * spectral_radius() cross-checks the two when the order permits.
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entvar/errors.hpp"

namespace entvar {

// Square 0-1 matrix encoding allowed symbol transitions. Indices are
// 0-based internally; the text format and the tangency construction speak
// 1-based like the usual Markov partition labelling.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(int order);
  TransitionMatrix(std::initializer_list<std::initializer_list<int>> rows);

  static TransitionMatrix from_rows(const std::vector<std::vector<int>>& rows);

  int order() const { return order_; }
  std::uint8_t at(int i, int j) const { return bits_[static_cast<std::size_t>(i) * order_ + j]; }
  void set(int i, int j, std::uint8_t v);

  bool operator==(const TransitionMatrix& other) const = default;

  // Text format: first line "order", then `order` lines of space-separated
  // 0/1. Round-trips bit-exactly.
  std::string to_text() const;
  static TransitionMatrix from_text(const std::string& text);
  static TransitionMatrix load(const std::string& path);
  void save(const std::string& path) const;

 private:
  int order_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct SpectralResult {
  double radius = 0.0;
  double entropy = 0.0;  // log(radius); 0 with degenerate=true for nilpotent input
  long iterations = 0;
  double residual = 0.0;
  bool degenerate = false;  // radius 0 (nilpotent transition graph)
};

struct Component {
  std::vector<int> symbols;  // ascending symbol indices (0-based)
  TransitionMatrix induced;
};

struct ComponentDecomposition {
  std::vector<Component> components;  // only components carrying at least one edge
  std::vector<double> componentEntropies;
  double maxEntropy = 0.0;
  int responsibleIndex = -1;  // -1 when there is no component with an edge
};

// True iff the transition digraph is strongly connected.
bool is_irreducible(const TransitionMatrix& A);

// Strongly connected components in topological order (Tarjan), including
// single vertices without self-loops. Used by decompose() and the blockwise
// eigensolver.
std::vector<std::vector<int>> strongly_connected_components(const TransitionMatrix& A);

// Perron root and entropy. Power iteration on A + I per strongly connected
// block; the overall radius is the max over blocks. For order <= 8 the value
// is cross-checked against the exact characteristic polynomial and the
// polynomial root is preferred when the two disagree beyond tolerance.
// Throws error(non_convergence) if the iteration cap is hit.
SpectralResult spectral_radius(const TransitionMatrix& A, double tol = 1e-12);

// Entropy-carrying decomposition: every strongly connected component with at
// least one edge, its induced submatrix and entropy. maxEntropy agrees with
// spectral_radius(A).entropy.
ComponentDecomposition decompose(const TransitionMatrix& A, double tol = 1e-12);

// Drop row and column `dropIndex` (1-based, matching the partition labels).
TransitionMatrix principal_minor(const TransitionMatrix& A, int dropIndex);

namespace oracle {

// Exact integer characteristic polynomial coefficients, ascending order:
// p(x) = c[0] + c[1] x + ... + c[n] x^n with c[n] = 1.
// Faddeev-LeVerrier; exact for any 0-1 matrix of modest order.
std::vector<std::int64_t> char_poly(const TransitionMatrix& A);

// All complex roots of the (square-free part of the) characteristic
// polynomial. Durand-Kerner with Newton polishing.
struct Root {
  double re = 0.0;
  double im = 0.0;
};
std::vector<Root> char_poly_roots(const TransitionMatrix& A);

// Largest root modulus = Perron root, computed from the exact polynomial.
// Restricted to order <= 8 by construction cost; throws error(config) above.
double perron_root(const TransitionMatrix& A);

}  // namespace oracle

}  // namespace entvar
