#include "entvar/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace entvar {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Run fn(i) for i in [0, count) over `jobs` threads with preassigned
// indices; results land in index order, so scheduling never shows.
void parallel_rows(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr err;
  std::mutex errMutex;
  for (int t = 0; t < jobs; ++t)
    threads.emplace_back([&, t] {
      for (int i = t; i < count; i += jobs) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(errMutex);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : threads) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(configHash));
  os << "# config-hash=" << hash << '\n';
  os << "# version=" << version << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      os << fmt17(row[i]) << (i + 1 < row.size() ? ',' : '\n');
  return os.str();
}

SweepReport sweep_entropy_gap(const std::vector<ExtensionSpec>& specGrid, int jobs) {
  for (std::size_t i = 0; i < specGrid.size(); ++i) {
    try {
      specGrid[i].validate();
    } catch (const error& e) {
      throw error(errc::invalid_spec,
                  "sweep row " + std::to_string(i) + ": " + e.what());
    }
  }
  SweepReport rep;
  rep.version = kVersion;
  std::string canon;
  for (const auto& spec : specGrid)
    canon += spec.H.to_text() + "N1=" + std::to_string(spec.N1) +
             " N2=" + std::to_string(spec.N2) + "\n";
  rep.configHash = fnv1a64(canon);
  rep.columns = {"s", "N1", "N2", "lambda0", "lambdamu", "gap"};
  rep.rows.resize(specGrid.size());
  parallel_rows(static_cast<int>(specGrid.size()), jobs, [&](int i) {
    const ExtensionSpec& spec = specGrid[i];
    const double lam0 = spectral_radius(spec.H).radius;
    const double lamMu = spectral_radius(extend_matrix(spec)).radius;
    rep.rows[i] = {static_cast<double>(spec.s()), static_cast<double>(spec.N1),
                   static_cast<double>(spec.N2), lam0, lamMu,
                   std::log(lamMu) - std::log(lam0)};
  });
  std::sort(rep.rows.begin(), rep.rows.end(), [](const auto& a, const auto& b) {
    if (a[1] != b[1]) return a[1] < b[1];
    if (a[2] != b[2]) return a[2] < b[2];
    return a[0] < b[0];
  });
  return rep;
}

std::string DiscSweepConfig::canonical() const {
  std::ostringstream os;
  os << "n-slice=" << nSlice << "\neps-slice=" << fmt17(epsSlice)
     << "\ngrid-slice=" << gridSlice << "\nn-ball=" << nBall
     << "\neps-ball=" << fmt17(epsBall) << "\ngrid-ball=" << gridBall << "\n";
  return os.str();
}

SweepReport sweep_discontinuity(const std::vector<double>& tauGrid,
                                const DiscSweepConfig& config) {
  if (std::none_of(tauGrid.begin(), tauGrid.end(), [](double t) { return t == 0.0; }))
    throw error(errc::config, "discontinuity sweep grid must include tau = 0");
  for (double t : tauGrid)
    if (t < 0.0) throw error(errc::config, "flow times must be nonnegative");

  SweepReport rep;
  rep.version = kVersion;
  std::string canon = config.canonical();
  for (double t : tauGrid) canon += "tau=" + fmt17(t) + "\n";
  rep.configHash = fnv1a64(canon);
  rep.columns = {"tau", "scope", "value", "n", "epsilon"};
  rep.rows.resize(tauGrid.size());
  parallel_rows(static_cast<int>(tauGrid.size()), config.jobs, [&](int i) {
    const double tau = tauGrid[i];
    if (tau == 0.0) {
      // The tau = 0 entropy lives on the invariant slice z = 0, which is
      // the planar model up to linear conjugacy; estimate it there.
      const EntropyEstimate est = separated_entropy(
          model_horseshoe(), config.nSlice, config.epsSlice, {config.gridSlice, true});
      rep.rows[i] = {tau, 0.0, est.value, static_cast<double>(est.n), est.epsilon};
    } else {
      const EntropyEstimate est = separated_entropy(
          family_G(tau), config.nBall, config.epsBall, {config.gridBall, false});
      rep.rows[i] = {tau, 1.0, est.value, static_cast<double>(est.n), est.epsilon};
    }
  });
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return rep;
}

}  // namespace entvar
