#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "hooda/search/trial.hpp"

namespace hooda::bench {

struct BenchSummary {
  ArchitectureKind arch = ArchitectureKind::SingleLayer;
  int trial_count = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_search_time = std::numeric_limits<double>::quiet_NaN();  // over successes
  double mean_efficiency = 0.0;
  double ci95_half_width = 0.0;  // on the success rate
};

struct BenchResult {
  std::vector<ArchitectureKind> archs;
  std::vector<std::vector<TrialResult>> trials;  // [arch][trial]
  std::vector<BenchSummary> summaries;
};

// Aggregation in trial-index order; recomputing from the stored rows must
// reproduce the summary exactly.
inline BenchSummary summarize(ArchitectureKind arch, const std::vector<TrialResult>& trials) {
  BenchSummary s;
  s.arch = arch;
  s.trial_count = static_cast<int>(trials.size());
  double time_sum = 0.0, eff_sum = 0.0;
  for (const auto& t : trials) {
    if (t.found) {
      ++s.successes;
      time_sum += *t.search_time;
    }
    eff_sum += t.efficiency;
  }
  if (s.trial_count > 0) {
    s.success_rate = static_cast<double>(s.successes) / s.trial_count;
    s.mean_efficiency = eff_sum / s.trial_count;
    const double p = s.success_rate;
    s.ci95_half_width = 1.96 * std::sqrt(p * (1.0 - p) / s.trial_count);
  }
  if (s.successes > 0) s.mean_search_time = time_sum / s.successes;
  return s;
}

// Paired Monte Carlo over architectures: trial i draws seed split(base, i) for
// every architecture, so all of them face the identical world and target
// trajectory. Trials run on a small worker pool; results land in a
// preallocated slot per index, so the outcome is independent of `jobs`.
inline BenchResult run_benchmark(const sim::WorldConfig& cfg, const SearchParams& params,
                                 const std::vector<ArchitectureKind>& archs, int n_trials,
                                 std::uint64_t base_seed, int jobs = 0) {
  if (n_trials < 1) throw ValidationError("bench: n_trials must be >= 1");
  if (archs.empty()) throw ValidationError("bench: at least one architecture");
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;

  BenchResult result;
  result.archs = archs;
  result.trials.assign(archs.size(), std::vector<TrialResult>(static_cast<std::size_t>(n_trials)));

  const std::size_t total = archs.size() * static_cast<std::size_t>(n_trials);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t at = cursor.fetch_add(1);
      if (at >= total) break;
      const std::size_t arch_idx = at / static_cast<std::size_t>(n_trials);
      const std::size_t trial_idx = at % static_cast<std::size_t>(n_trials);
      result.trials[arch_idx][trial_idx] =
          run_trial(cfg, params, archs[arch_idx], split_seed(base_seed, trial_idx));
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t a = 0; a < archs.size(); ++a)
    result.summaries.push_back(summarize(archs[a], result.trials[a]));
  return result;
}

}  // namespace hooda::bench
