#pragma once

/*
 * Extended transition matrix of an unfolded tangency orbit and the
 * Perron-Frobenius minor chain certifying strict spectral-radius growth.
 *
 * Starting from an irreducible base matrix H of order s (the horseshoe piece),
 * the extension appends a chain of l = N1 + N2 - 1 strip symbols: the exit
 * rectangle (symbol 1) feeds the first strip, strips map one to the next, and
 * the last strip re-enters through the entry rectangle (symbol s).
 */

#include <algorithm>
#include <string>
#include <vector>

#include "entvar/sft.hpp"

namespace entvar {

struct ExtensionSpec {
  TransitionMatrix H;  // irreducible base matrix, order s >= 2
  int N1 = 1;          // forward transit length
  int N2 = 1;          // backward transit length

  int s() const { return H.order(); }
  int strip_count() const { return N1 + N2 - 1; }  // l

  // Throws error(invalid_spec) if H is reducible, s < 2, or N1/N2 < 1.
  void validate() const;

  // Key-value text format: lines "H-file: <path>", "N1: <int>", "N2: <int>".
  static ExtensionSpec load(const std::string& path);
};

struct ChainReport {
  std::vector<double> radii;      // lambda_mu = radii[0] >= ... >= radii[l] = lambda_0
  std::vector<bool> strictSteps;  // radii[k] > radii[k+1] + margin
  bool conclusion = false;        // radii[0] > radii[l] + margin

  std::string to_csv() const;  // columns: step,radius,strict
};

struct StructureViolation {
  enum class Kind {
    WrongOrder,
    RBlockMismatch,
    BrokenChain,
    ExtraEntryIntoStrips,
    ExtraExitFromStrips,
    MissingEntry,
    MissingReturn,
  };
  Kind kind;
  int i = 0;  // 1-based row of the offending entry, when applicable
  int j = 0;  // 1-based column
  std::string describe() const;
};

// Build the order-(s+l) matrix of the extended Markov partition.
TransitionMatrix extend_matrix(const ExtensionSpec& spec);

// Check every structural clause of the extension against A; an empty list
// means A is exactly the matrix the construction produces.
std::vector<StructureViolation> validate_markov_structure(const TransitionMatrix& A,
                                                          const ExtensionSpec& spec);

// Spectral radii along the nested principal minors obtained by deleting the
// last row/column l times, ending at H.
ChainReport perron_chain(const TransitionMatrix& A, const ExtensionSpec& spec,
                         double tol = 1e-12);

// log(lambda_mu) - log(lambda_0) > 0: the certified entropy increase.
double entropy_gap(const ExtensionSpec& spec, double tol = 1e-12);

// Strictness margin separating Perron strictness from floating-point noise.
inline double strictness_margin(double tol) { return std::max(10.0 * tol, 1e-9); }

}  // namespace entvar
