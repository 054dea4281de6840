#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "posim/linear_extensions.hpp"
#include "posim/order.hpp"

namespace posim {

// Number of unordered candidate pairs ordered oppositely by the two orders
// (pairs incomparable in either contribute nothing). Counted as ordered
// pairs (x, y) with x < y in kappa and y < x in mu — antisymmetry makes each
// inverted unordered pair appear exactly once.
inline long long kendall_tau(const DownSetTable& kappa, const DownSetTable& mu) {
  const int n = kappa.n();
  if (n != mu.n())
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(n) + " vs " + std::to_string(mu.n()) + " candidates");
  std::vector<DynBitset> up(n, DynBitset(n));  // predecessors in mu
  for (int x = 0; x < n; ++x)
    mu.sets[x].for_each([&](int y) { up[y].set(x); });
  long long inversions = 0;
  for (int x = 0; x < n; ++x) inversions += and_count(kappa.sets[x], up[x]);
  return inversions;
}

inline long long kendall_tau(const PartialOrder& kappa, const PartialOrder& mu) {
  return kendall_tau(kappa.closure, mu.closure);
}

// kendall_tau(base, relabel(base, sigma)) without materializing the copy:
// y < x in the relabelled order iff sigma_inv[y] < sigma_inv[x] in base.
inline long long kendall_tau_relabelled(const PartialOrder& base, const std::vector<int>& sigma_inv) {
  const int n = base.n;
  long long inversions = 0;
  for (int x = 0; x < n; ++x) {
    const DynBitset& down = base.closure.sets[x];
    const int xi = sigma_inv[x];
    down.for_each([&](int y) { inversions += base.closure.sets[sigma_inv[y]].test(xi); });
  }
  return inversions;
}

inline long long spearman_footrule(const TotalOrderRanking& a, const TotalOrderRanking& b) {
  if (a.n() != b.n())
    raise(ErrorKind::DomainMismatch,
          "rankings have " + std::to_string(a.n()) + " vs " + std::to_string(b.n()) + " candidates");
  long long total = 0;
  for (int x = 0; x < a.n(); ++x) total += std::abs(a.position[x] - b.position[x]);
  return total;
}

// Footrule on two total orders (NotTotalOrder otherwise).
inline long long spearman_footrule(const PartialOrder& kappa, const PartialOrder& mu) {
  if (kappa.n != mu.n)
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(kappa.n) + " vs " + std::to_string(mu.n) + " candidates");
  return spearman_footrule(ranking_of(kappa), ranking_of(mu));
}

enum class ExtMetric { kendall, footrule };

inline const char* ext_metric_name(ExtMetric m) {
  return m == ExtMetric::kendall ? "kendall" : "footrule";
}

struct DistanceReport {
  long long value = 0;
  std::string metric_id;
  long long extensions_enumerated = 0;
};

namespace detail {

inline long long ranking_metric(ExtMetric metric, const TotalOrderRanking& a,
                                const TotalOrderRanking& b) {
  if (metric == ExtMetric::footrule) return spearman_footrule(a, b);
  long long inversions = 0;
  const int n = a.n();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      const bool ka = a.position[x] < a.position[y];
      const bool kb = b.position[x] < b.position[y];
      if (ka != kb) ++inversions;
    }
  return inversions;
}

// Enumerates both extension sets under the pair budget |Ext(k)|*|Ext(m)| <= cap.
inline std::pair<std::vector<TotalOrderRanking>, std::vector<TotalOrderRanking>>
enumerate_extension_pair(const PartialOrder& kappa, const PartialOrder& mu, long long cap) {
  if (kappa.n != mu.n)
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(kappa.n) + " vs " + std::to_string(mu.n) + " candidates");
  if (cap < 1) raise(ErrorKind::InfeasibleSpec, "extension cap must be >= 1");
  auto ext_k = linear_extensions(kappa, cap);
  const long long budget_m = cap / static_cast<long long>(ext_k.size());
  if (budget_m < 1)
    raise(ErrorKind::ExtensionCapExceeded,
          std::to_string(ext_k.size()) + " extensions on the left exhaust the pair cap " +
              std::to_string(cap));
  auto ext_m = linear_extensions(mu, budget_m);
  return {std::move(ext_k), std::move(ext_m)};
}

}  // namespace detail

// Nearest-neighbour distance: min metric over all extension pairs.
inline DistanceReport nn_distance(const PartialOrder& kappa, const PartialOrder& mu,
                                  ExtMetric metric, long long cap = kDefaultExtensionCap) {
  auto [ext_k, ext_m] = detail::enumerate_extension_pair(kappa, mu, cap);
  long long best = -1;
  for (const auto& a : ext_k)
    for (const auto& b : ext_m) {
      long long d = detail::ranking_metric(metric, a, b);
      if (best < 0 || d < best) best = d;
      if (best == 0) break;
    }
  DistanceReport report;
  report.value = best;
  report.metric_id = std::string("nn-") + ext_metric_name(metric);
  report.extensions_enumerated = static_cast<long long>(ext_k.size() + ext_m.size());
  return report;
}

// Hausdorff distance: max over each side's extensions of the distance to the
// nearest extension on the other side.
inline DistanceReport hausdorff_distance(const PartialOrder& kappa, const PartialOrder& mu,
                                         ExtMetric metric, long long cap = kDefaultExtensionCap) {
  auto [ext_k, ext_m] = detail::enumerate_extension_pair(kappa, mu, cap);
  auto directed = [&](const std::vector<TotalOrderRanking>& from,
                      const std::vector<TotalOrderRanking>& to) {
    long long worst = 0;
    for (const auto& a : from) {
      long long nearest = -1;
      for (const auto& b : to) {
        long long d = detail::ranking_metric(metric, a, b);
        if (nearest < 0 || d < nearest) nearest = d;
        if (nearest == 0) break;
      }
      if (nearest > worst) worst = nearest;
    }
    return worst;
  };
  DistanceReport report;
  report.value = std::max(directed(ext_k, ext_m), directed(ext_m, ext_k));
  report.metric_id = std::string("hausdorff-") + ext_metric_name(metric);
  report.extensions_enumerated = static_cast<long long>(ext_k.size() + ext_m.size());
  return report;
}

}  // namespace posim
