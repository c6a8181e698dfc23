#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entvar/estimate.hpp"
#include "entvar/report.hpp"

namespace {

using namespace entvar;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::config, "cannot write " + path);
  out << text;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

std::string estimate_csv(const EntropyEstimate& est) {
  std::ostringstream os;
  os << "m,cardinality,rate\n";
  for (std::size_t i = 0; i < est.cardinalities.size(); ++i) {
    const int m = static_cast<int>(i) + 1;
    const long r = est.cardinalities[i];
    const double rate = r >= 1 ? std::log(static_cast<double>(r)) / m : 0.0;
    os << m << ',' << r << ',' << fmt17(rate) << '\n';
  }
  os << "estimate," << est.cardinalities.size() << ',' << fmt17(est.value) << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy variation toolkit: subshift spectra, tangency extensions, "
               "smooth model families and separated-set entropy estimates"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--seed", seed, "Seed for randomized sweeps")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads for sweeps (output is identical for any value)")
      ->capture_default_str();

  // sft-entropy
  auto* sft = app.add_subcommand("sft-entropy", "Perron root and entropy of a 0-1 matrix");
  std::string sftPath;
  double sftTol = 1e-12;
  sft->add_option("matrix", sftPath, "Matrix file (first line order, then 0/1 rows)")->required();
  sft->add_option("--tol", sftTol, "Power-iteration tolerance")->capture_default_str();

  // extend
  auto* ext = app.add_subcommand("extend", "Extended transition matrix of an unfolded tangency");
  std::string extH, extOut;
  int extN1 = 1, extN2 = 1;
  ext->add_option("--H", extH, "Base matrix file")->required();
  ext->add_option("--n1", extN1, "Forward transit length")->capture_default_str();
  ext->add_option("--n2", extN2, "Backward transit length")->capture_default_str();
  ext->add_option("--out", extOut, "Output matrix file")->required();

  // chain
  auto* chn = app.add_subcommand("chain", "Perron minor chain of the extended matrix");
  std::string chnH, chnOut;
  int chnN1 = 1, chnN2 = 1;
  double chnTol = 1e-12;
  chn->add_option("--H", chnH, "Base matrix file")->required();
  chn->add_option("--n1", chnN1, "Forward transit length")->capture_default_str();
  chn->add_option("--n2", chnN2, "Backward transit length")->capture_default_str();
  chn->add_option("--tol", chnTol, "Spectral tolerance")->capture_default_str();
  chn->add_option("--out", chnOut, "Chain CSV output path");

  // estimate
  auto* est = app.add_subcommand("estimate", "Separated-set entropy estimate for a model family");
  std::string family = "horseshoe", estOut;
  double estT = 0.0, estTau = 0.0, estEps = 1e-3;
  int estN = 12, estGrid = 400;
  bool noRefine = false;
  est->add_option("--family", family, "horseshoe | isotopy | ball")->capture_default_str();
  est->add_option("--t", estT, "Isotopy parameter in [-1, 1]")->capture_default_str();
  est->add_option("--tau", estTau, "Flow time for the ball family")->capture_default_str();
  est->add_option("--n", estN, "Orbit-segment length")->capture_default_str();
  est->add_option("--epsilon", estEps, "Separation resolution")->capture_default_str();
  est->add_option("--grid", estGrid, "Grid resolution per axis")->capture_default_str();
  est->add_flag("--no-refine", noRefine, "Static grid instead of adaptive refinement");
  est->add_option("--out", estOut, "Estimate CSV output path");

  // sweep-gap
  auto* swg = app.add_subcommand("sweep-gap", "Entropy gap sweep over transit lengths");
  std::string swgH, swgOut;
  int swgMax = 3;
  swg->add_option("--H", swgH, "Base matrix file")->required();
  swg->add_option("--max-n", swgMax, "Sweep N1 = N2 over 1..max-n")->capture_default_str();
  swg->add_option("--out", swgOut, "Sweep CSV output path");

  // sweep-disc
  auto* swd = app.add_subcommand("sweep-disc", "Entropy discontinuity sweep over flow times");
  std::string swdTaus = "0,0.05,0.2", swdOut;
  bool swdFixed = false;
  DiscSweepConfig dcfg;
  swd->add_option("--taus", swdTaus, "Comma-separated flow times (must include 0)")
      ->capture_default_str();
  swd->add_option("--n-slice", dcfg.nSlice, "Estimator depth on the tau=0 slice")
      ->capture_default_str();
  swd->add_option("--eps-slice", dcfg.epsSlice, "Slice resolution")->capture_default_str();
  swd->add_option("--grid-slice", dcfg.gridSlice, "Slice grid")->capture_default_str();
  swd->add_option("--n-ball", dcfg.nBall, "Estimator depth on the ball")->capture_default_str();
  swd->add_option("--eps-ball", dcfg.epsBall, "Ball resolution")->capture_default_str();
  swd->add_option("--grid-ball", dcfg.gridBall, "Ball grid per axis")->capture_default_str();
  swd->add_flag("--fixed-points", swdFixed, "Run the Newton fixed-point search per tau > 0");
  swd->add_option("--out", swdOut, "Sweep CSV output path");

  // snake
  auto* snk = app.add_subcommand("snake", "Snake-perturbation entropy lower bound");
  double snkLambda = 0.0, snkMu = 0.0, snkEps = 0.0;
  int snkTau = 1;
  bool snkHasMu = false;
  snk->add_option("--lambda", snkLambda, "Expanding eigenvalue (> 1)")->required();
  auto* muOpt = snk->add_option("--mu", snkMu, "Contracting eigenvalue in (0, 1); omit for det 1");
  snk->add_option("--tau", snkTau, "Period of the saddle")->capture_default_str();
  snk->add_option("--eps", snkEps, "Slack subtracted from the bound")->capture_default_str();

  // verdict
  auto* vdt = app.add_subcommand("verdict", "Variation verdict from piece entropies");
  std::string vdtPieces;
  int vdtIndex = 0;
  double vdtAlpha = 0.0;
  vdt->add_option("--pieces", vdtPieces, "Comma-separated piece entropies")->required();
  vdt->add_option("--index", vdtIndex, "Index of the tangency piece")->capture_default_str();
  vdt->add_option("--alpha", vdtAlpha, "C^k defect bound alpha_k")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sft->parsed()) {
      const TransitionMatrix A = TransitionMatrix::load(sftPath);
      const SpectralResult r = spectral_radius(A, sftTol);
      const ComponentDecomposition dec = decompose(A, sftTol);
      std::cout << "order " << A.order() << "\nradius " << fmt17(r.radius) << "\nentropy "
                << fmt17(r.entropy) << "\ncomponents " << dec.components.size() << "\n";
      if (r.degenerate) std::cout << "degenerate (nilpotent transition graph)\n";
    } else if (ext->parsed()) {
      const ExtensionSpec spec{TransitionMatrix::load(extH), extN1, extN2};
      const TransitionMatrix A = extend_matrix(spec);
      A.save(extOut);
      std::cout << "order " << A.order() << " (s=" << spec.s()
                << ", strips=" << spec.strip_count() << ") -> " << extOut << "\n";
    } else if (chn->parsed()) {
      const ExtensionSpec spec{TransitionMatrix::load(chnH), chnN1, chnN2};
      const TransitionMatrix A = extend_matrix(spec);
      const ChainReport rep = perron_chain(A, spec, chnTol);
      for (std::size_t k = 0; k < rep.radii.size(); ++k)
        std::cout << "step " << k << " radius " << fmt17(rep.radii[k]) << "\n";
      std::cout << "gap " << fmt17(entropy_gap(spec, chnTol)) << "\nconclusion "
                << (rep.conclusion ? "strict" : "not-strict") << "\n";
      if (!chnOut.empty()) write_file(chnOut, rep.to_csv());
    } else if (est->parsed()) {
      EntropyEstimate e;
      const GridSpec grid{estGrid, !noRefine};
      if (family == "horseshoe")
        e = separated_entropy(model_horseshoe(), estN, estEps, grid);
      else if (family == "isotopy")
        e = separated_entropy(isotopy_map(estT, model_horseshoe()), estN, estEps, grid);
      else if (family == "ball")
        e = separated_entropy(family_G(estTau), estN, estEps, grid);
      else
        throw error(errc::config, "unknown family: " + family);
      std::cout << "estimate " << fmt17(e.value) << " (n=" << e.n << ", eps=" << e.epsilon
                << ", method=" << e.method << ")\n";
      if (!estOut.empty()) write_file(estOut, estimate_csv(e));
    } else if (swg->parsed()) {
      const TransitionMatrix H = TransitionMatrix::load(swgH);
      if (swgMax < 1) throw error(errc::config, "--max-n must be >= 1");
      std::vector<ExtensionSpec> specs;
      for (int k = 1; k <= swgMax; ++k) specs.push_back({H, k, k});
      const SweepReport rep = sweep_entropy_gap(specs, jobs);
      std::cout << rep.to_csv();
      if (!swgOut.empty()) write_file(swgOut, rep.to_csv());
    } else if (swd->parsed()) {
      dcfg.jobs = jobs;
      const std::vector<double> taus = parse_list(swdTaus);
      const SweepReport rep = sweep_discontinuity(taus, dcfg);
      std::cout << rep.to_csv();
      if (!swdOut.empty()) write_file(swdOut, rep.to_csv());
      if (swdFixed) {
        for (double t : taus) {
          if (t == 0.0) continue;
          const auto fps = fixed_points(family_G(t));
          std::cout << "tau=" << t << " fixed points: " << fps.size() << "\n";
          for (const auto& p : fps)
            std::cout << "  (" << fmt17(p.x) << ", " << fmt17(p.y) << ", " << fmt17(p.z)
                      << ")\n";
        }
      }
    } else if (snk->parsed()) {
      snkHasMu = muOpt->count() > 0;
      const double b =
          snake_bound(snkLambda, snkHasMu ? std::optional<double>(snkMu) : std::nullopt,
                      snkTau, snkEps);
      std::cout << "bound " << fmt17(b) << "\n";
    } else if (vdt->parsed()) {
      const std::vector<double> pieces = parse_list(vdtPieces);
      const VerdictResult v = variation_verdict(pieces, vdtIndex, vdtAlpha);
      std::cout << "verdict " << to_string(v.tag) << "\ngap " << fmt17(v.gap)
                << "\nconstant-cinf " << (v.constantCinf ? 1 : 0) << "\nconstant-ck "
                << (v.constantCk ? 1 : 0) << "\n";
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
