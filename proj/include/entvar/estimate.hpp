#pragma once

/*
 * Numerical entropy machinery: (n, eps)-separated-set estimates under the
 * Bowen metric, the derivative growth rate R(f), the C^k defect bound
 * alpha_k = (2 dim M / k) R, the snake-perturbation lower bound, and the
 * variation verdict combining piece entropies with the defect bound.
 *
 * Sampling runs either on a static grid (GRID_TOO_COARSE if its spacing
 * exceeds eps) or through an adaptive refinement tree that splits cells
 * along the axis of strongest derivative growth and prunes cells whose
 * orbits provably leave the entropy-carrying core. Greedy separated subsets
 * lower-bound the true cardinalities; the estimate is the least-squares
 * slope of log r(m, eps) over the tail window [n/2, n] (see README).
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entvar/maps.hpp"

namespace entvar {

struct GridSpec {
  int resolution = 400;  // points per axis of the static grid / refinement budget scale
  bool refine = true;    // adaptive refinement instead of the static grid
};

struct EntropyEstimate {
  double value = 0.0;    // estimated entropy, >= 0
  int n = 0;             // orbit-segment length
  double epsilon = 0.0;  // resolution
  std::vector<long> cardinalities;  // r(m, eps) for m = 1..n, monotone envelope
  std::string method = "separated-sets";
};

struct GrowthRate {
  double value = 0.0;  // R(f) >= 0, tail slope of the log-norm sequence
  std::vector<std::pair<int, double>> samples;  // (m, max over seeds of log ||Df^m||)
  double residual = 0.0;  // rms residual of the tail fit
};

EntropyEstimate separated_entropy(const PlanarMap& map, int n, double epsilon,
                                  const GridSpec& grid = {});
EntropyEstimate separated_entropy(const Ball3Map& map, int n, double epsilon,
                                  const GridSpec& grid = {});

GrowthRate growth_rate(const PlanarMap& map, int n, const GridSpec& grid = {});
GrowthRate growth_rate(const Ball3Map& map, int n, const GridSpec& grid = {});

// alpha_k = (2 dimM / k) * R, the C^k bound on the entropy jump.
double yomdin_defect(double growthRateValue, int dimM, int k);
double yomdin_defect(const GrowthRate& R, int dimM, int k);

// (1/tau) log lambda_eff - eps; lambda_eff = lambda in the conservative
// (determinant-one) case and min{lambda, 1/mu} when mu is given.
// Throws error(config, "INVALID_EIGENVALUES ...") unless lambda > 1 and,
// when present, 0 < mu < 1.
double snake_bound(double lambda, std::optional<double> mu, int tau, double eps);

enum class Verdict { VARIES, CONSTANT_CINF, CONSTANT_CK, UNDECIDED };

struct VerdictResult {
  Verdict tag = Verdict::UNDECIDED;
  bool constantCinf = false;  // tangency piece is not responsible for the entropy
  bool constantCk = false;    // entropy gap to the responsible piece exceeds alpha_k
  double gap = 0.0;           // max entropy - tangency piece entropy
};

std::string to_string(Verdict v);

// VARIES when the tangency piece attains the maximal entropy; otherwise the
// strongest constancy certificate the defect bound supports.
VerdictResult variation_verdict(const std::vector<double>& pieceEntropies,
                                int tangencyPieceIndex, double alpha_k);

// Newton search for fixed points from a seed grid over the ball; converged
// points deduplicated at 1e-6. Residual tolerance 1e-12.
std::vector<Vec3> fixed_points(const Ball3Map& map, int seedsPerAxis = 12);

}  // namespace entvar
