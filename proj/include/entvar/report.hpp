#pragma once

/*
 * Sweep aggregation: parameter grids over extension specs and flow times,
 * rendered as deterministic CSV. Rows are computed possibly in parallel,
 * then sorted by the swept parameter, so the serialized bytes are identical
 * for any job count. The config hash is 64-bit FNV-1a over the canonical
 * config text; no timestamp is serialized (determinism, see README).
 */

#include <cstdint>
#include <string>
#include <vector>

#include "entvar/estimate.hpp"
#include "entvar/tangency.hpp"

namespace entvar {

struct SweepReport {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::uint64_t configHash = 0;
  std::string version;

  std::string to_csv() const;  // "# config-hash=..." / "# version=..." / header / rows
};

std::uint64_t fnv1a64(const std::string& bytes);

// One row per spec: s, N1, N2, lambda_0, lambda_mu, gap. Sorted by
// (N1, N2, s). Invalid specs abort with error(invalid_spec) naming the row.
SweepReport sweep_entropy_gap(const std::vector<ExtensionSpec>& specGrid, int jobs = 1);

struct DiscSweepConfig {
  int nSlice = 12;          // estimator depth on the invariant slice (tau = 0 row)
  double epsSlice = 1e-3;
  int gridSlice = 400;
  int nBall = 10;           // full-ball rows (tau > 0): resolution-matched static grid
  double epsBall = 0.1;
  int gridBall = 20;
  int jobs = 1;

  std::string canonical() const;  // key=value lines, hashing input
};

// Rows: tau, scope (0 = invariant slice, 1 = full ball), entropy estimate,
// n, epsilon. The grid must contain tau = 0; its row runs the planar model
// on the slice, tau > 0 rows run the ball family. Sorted by tau.
SweepReport sweep_discontinuity(const std::vector<double>& tauGrid,
                                const DiscSweepConfig& config = {});

}  // namespace entvar
