#include "wpda/toolkit.hpp"

#include <algorithm>
#include <chrono>

namespace wpda {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::optional<Algo> algo_from_string(std::string_view name) {
  if (name == "astar-h1") return Algo::AstarH1;
  if (name == "astar-h2") return Algo::AstarH2;
  if (name == "lazy") return Algo::Lazy;
  if (name == "expand") return Algo::Expand;
  return std::nullopt;
}

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::AstarH1:
      return "astar-h1";
    case Algo::AstarH2:
      return "astar-h2";
    case Algo::Lazy:
      return "lazy";
    case Algo::Expand:
      return "expand";
  }
  return "?";
}

KPathResult run_kshortest(const Wpda& m, int k, Algo algo,
                          const RunOptions& opt) {
  switch (algo) {
    case Algo::AstarH1: {
      auto t0 = std::chrono::steady_clock::now();
      WeightTable alpha = inside(m, opt.search.inside);
      WeightTable beta = outside(m, alpha, opt.search.inside);
      double precompute = seconds_since(t0);
      KPathResult r = astar_kshortest(m, k, make_h1(beta), opt.search);
      r.stats.precompute_seconds = precompute;
      return r;
    }
    case Algo::AstarH2: {
      auto t0 = std::chrono::steady_clock::now();
      WeightTable d = reverse_inside(m, opt.search.inside);
      GammaTable g = gamma(m, d);
      double precompute = seconds_since(t0);
      KPathResult r = astar_kshortest(m, k, make_h2(g), opt.search);
      r.stats.precompute_seconds = precompute;
      return r;
    }
    case Algo::Lazy:
      return lazy_kshortest(m, k, opt.search);
    case Algo::Expand: {
      BoundLimits limits = opt.expand_limits;
      if (opt.expand_budget_by_states) {
        limits.configs = std::min<uint64_t>(
            limits.configs, 10ull * std::max(1, m.num_states));
      }
      auto t0 = std::chrono::steady_clock::now();
      Expansion ex = expand(m, limits, opt.expand_deadline_seconds);
      double precompute = seconds_since(t0);
      auto t1 = std::chrono::steady_clock::now();
      WfsaKPaths found = wfsa_kshortest(ex.fsa, k);
      KPathResult r;
      for (const WfsaPathEntry& pe : found.paths) {
        Path path;
        for (int32_t arc : pe.arcs) path.arcs.push_back(ex.origin[arc]);
        r.paths.push_back({pe.weight, std::move(path)});
      }
      r.stats.exhausted = found.exhausted;
      r.stats.precompute_seconds = precompute;
      r.stats.search_seconds = seconds_since(t1);
      return r;
    }
  }
  return {};
}

}  // namespace wpda
