#include "entvar/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace entvar {

void ExtensionSpec::validate() const {
  if (H.order() < 2)
    throw error(errc::invalid_spec, "base matrix must have order s >= 2");
  if (N1 < 1 || N2 < 1)
    throw error(errc::invalid_spec, "transit lengths N1, N2 must be >= 1");
  if (!is_irreducible(H))
    throw error(errc::invalid_spec, "base matrix must be irreducible");
}

ExtensionSpec ExtensionSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config, "cannot open spec file: " + path);
  std::string hfile;
  int n1 = 0, n2 = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    key = strip(key);
    value = strip(value);
    if (key == "H-file")
      hfile = value;
    else if (key == "N1")
      n1 = std::stoi(value);
    else if (key == "N2")
      n2 = std::stoi(value);
    else if (!key.empty())
      throw error(errc::config, "unknown spec key: " + key);
  }
  if (hfile.empty()) throw error(errc::config, "spec file is missing H-file");
  ExtensionSpec spec{TransitionMatrix::load(hfile), n1, n2};
  spec.validate();
  return spec;
}

std::string ChainReport::to_csv() const {
  std::ostringstream os;
  os << "step,radius,strict\n";
  for (std::size_t k = 0; k < radii.size(); ++k) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", radii[k]);
    os << k << ',' << buf << ',' << (k < strictSteps.size() ? (strictSteps[k] ? 1 : 0) : 0)
       << '\n';
  }
  return os.str();
}

std::string StructureViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::WrongOrder: os << "WRONG_ORDER"; break;
    case Kind::RBlockMismatch: os << "R_BLOCK_MISMATCH"; break;
    case Kind::BrokenChain: os << "BROKEN_CHAIN"; break;
    case Kind::ExtraEntryIntoStrips: os << "EXTRA_ENTRY_INTO_STRIPS"; break;
    case Kind::ExtraExitFromStrips: os << "EXTRA_EXIT_FROM_STRIPS"; break;
    case Kind::MissingEntry: os << "MISSING_ENTRY"; break;
    case Kind::MissingReturn: os << "MISSING_RETURN"; break;
  }
  if (i || j) os << " at (" << i << ',' << j << ')';
  return os.str();
}

TransitionMatrix extend_matrix(const ExtensionSpec& spec) {
  spec.validate();
  const int s = spec.s();
  const int l = spec.strip_count();
  TransitionMatrix A(s + l);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) A.set(i, j, spec.H.at(i, j));
  A.set(0, s, 1);          // exit rectangle R_1 feeds strip S_1
  A.set(s + l - 1, s - 1, 1);  // last strip re-enters through R_s
  for (int i = s; i < s + l - 1; ++i) A.set(i, i + 1, 1);  // S_j -> S_{j+1}
  return A;
}

std::vector<StructureViolation> validate_markov_structure(const TransitionMatrix& A,
                                                          const ExtensionSpec& spec) {
  using Kind = StructureViolation::Kind;
  std::vector<StructureViolation> out;
  const int s = spec.s();
  const int l = spec.strip_count();
  if (A.order() != s + l) {
    out.push_back({Kind::WrongOrder, A.order(), s + l});
    return out;
  }
  // R block must be exactly H.
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      if (A.at(i, j) != spec.H.at(i, j)) out.push_back({Kind::RBlockMismatch, i + 1, j + 1});
  // Only R_1 enters the strips, and only into S_1.
  for (int i = 0; i < s; ++i)
    for (int j = s; j < s + l; ++j) {
      const bool expected = (i == 0 && j == s);
      if (A.at(i, j) && !expected) out.push_back({Kind::ExtraEntryIntoStrips, i + 1, j + 1});
      if (!A.at(i, j) && expected) out.push_back({Kind::MissingEntry, i + 1, j + 1});
    }
  // Strips form a simple chain S_1 -> ... -> S_l and the last strip maps
  // only into R_s.
  for (int i = s; i < s + l; ++i)
    for (int j = 0; j < s + l; ++j) {
      const bool expected =
          (i < s + l - 1) ? (j == i + 1) : (j == s - 1);
      if (A.at(i, j) && !expected) {
        if (j >= s)
          out.push_back({Kind::BrokenChain, i + 1, j + 1});
        else
          out.push_back({Kind::ExtraExitFromStrips, i + 1, j + 1});
      }
      if (!A.at(i, j) && expected) {
        if (i < s + l - 1)
          out.push_back({Kind::BrokenChain, i + 1, j + 1});
        else
          out.push_back({Kind::MissingReturn, i + 1, j + 1});
      }
    }
  return out;
}

ChainReport perron_chain(const TransitionMatrix& A, const ExtensionSpec& spec, double tol) {
  spec.validate();
  const int l = spec.strip_count();
  if (A.order() != spec.s() + l)
    throw error(errc::invalid_spec, "matrix order does not match the extension spec");
  ChainReport report;
  TransitionMatrix M = A;
  report.radii.push_back(spectral_radius(M, tol).radius);
  for (int k = 0; k < l; ++k) {
    M = principal_minor(M, M.order());
    report.radii.push_back(spectral_radius(M, tol).radius);
  }
  const double margin = strictness_margin(tol);
  for (int k = 0; k < l; ++k)
    report.strictSteps.push_back(report.radii[k] > report.radii[k + 1] + margin);
  report.conclusion = report.radii.front() > report.radii.back() + margin;
  return report;
}

double entropy_gap(const ExtensionSpec& spec, double tol) {
  const TransitionMatrix A = extend_matrix(spec);
  const double lam_mu = spectral_radius(A, tol).radius;
  const double lam_0 = spectral_radius(spec.H, tol).radius;
  return std::log(lam_mu) - std::log(lam_0);
}

}  // namespace entvar
