#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "posim/ami.hpp"
#include "posim/mutual_information.hpp"
#include "posim/order.hpp"
#include "posim/parallel.hpp"
#include "posim/rng.hpp"

namespace posim {

// Null space for the empirical expected MI: single-rooted DAGs with fixed
// node count n and link count m.
struct DagNullSpec {
  int n = 0;
  long long m = 0;
  int samples = 1000;
  std::uint64_t seed = kDefaultSeed;
};

inline void validate_null_spec(const DagNullSpec& spec) {
  if (spec.n < 2) raise(ErrorKind::InfeasibleSpec, "null model needs n >= 2");
  const long long max_m = static_cast<long long>(spec.n) * (spec.n - 1) / 2;
  if (spec.m < spec.n - 1 || spec.m > max_m)
    raise(ErrorKind::InfeasibleSpec,
          "m=" + std::to_string(spec.m) + " outside [n-1, n(n-1)/2] = [" +
              std::to_string(spec.n - 1) + ", " + std::to_string(max_m) + "]");
  if (spec.samples < 2) raise(ErrorKind::InfeasibleSpec, "null model needs samples >= 2");
}

enum class NullModel { random_dag, rewire_mcmc };

inline const char* null_model_name(NullModel m) {
  return m == NullModel::random_dag ? "random-dag" : "rewire-mcmc";
}

// Draws an approximately uniform single-rooted DAG with n nodes and m links:
// position 0 is the root, every position i >= 1 takes one parent uniform in
// [0, i), the remaining m-(n-1) links are sampled without replacement from
// the unused forward pairs, and finally positions get a uniform random
// candidate labelling so ids carry no structural information.
inline PartialOrder sample_random_dag(const DagNullSpec& spec, Rng& rng) {
  validate_null_spec(spec);
  const int n = spec.n;
  std::vector<Edge> position_edges;
  position_edges.reserve(spec.m);
  std::vector<int> parent(n, -1);
  for (int i = 1; i < n; ++i) {
    parent[i] = rng.below_int(i);
    position_edges.emplace_back(parent[i], i);
  }
  long long extra = spec.m - (n - 1);
  if (extra > 0) {
    const long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
    const long long unused = total_pairs - (n - 1);
    auto key = [n](int j, int i) { return static_cast<long long>(j) * n + i; };
    if (extra * 3 < unused) {
      // sparse: rejection-sample distinct unused forward pairs
      std::unordered_set<long long> taken;
      taken.reserve(extra * 2);
      while (static_cast<long long>(taken.size()) < extra) {
        int i = 1 + rng.below_int(n - 1);
        int j = rng.below_int(i);
        if (j == parent[i]) continue;
        if (taken.insert(key(j, i)).second) position_edges.emplace_back(j, i);
      }
    } else {
      // dense: enumerate unused pairs, partial Fisher-Yates for `extra` picks
      std::vector<std::pair<int, int>> pool;
      pool.reserve(unused);
      for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j)
          if (j != parent[i]) pool.emplace_back(j, i);
      for (long long k = 0; k < extra; ++k) {
        std::size_t pick = k + rng.below(pool.size() - k);
        std::swap(pool[k], pool[pick]);
        position_edges.emplace_back(pool[k].first, pool[k].second);
      }
    }
  }
  std::vector<int> labelling(n);
  for (int i = 0; i < n; ++i) labelling[i] = i;
  rng.shuffle(labelling);
  std::vector<Edge> edges;
  edges.reserve(position_edges.size());
  for (const auto& [j, i] : position_edges) edges.emplace_back(labelling[j], labelling[i]);
  return order_from_edges(n, std::move(edges));
}

namespace detail {

// One uniform link relocation: the link keeps its child v, the parent moves
// to a node that is not v, not a descendant of v (acyclicity), and not an
// already-present parent of v (no parallel links). The removed parent itself
// stays eligible, so the candidate set is never empty.
inline void relocate_link(int n, std::vector<Edge>& links, std::size_t idx,
                          std::vector<std::vector<int>>& children, Rng& rng,
                          std::vector<int>& scratch_stack, std::vector<char>& scratch_mark) {
  const auto [u, v] = links[idx];
  auto& uc = children[u];
  uc.erase(std::find(uc.begin(), uc.end(), v));

  scratch_mark.assign(n, 0);
  scratch_mark[v] = 1;
  scratch_stack.clear();
  scratch_stack.push_back(v);
  while (!scratch_stack.empty()) {
    int w = scratch_stack.back();
    scratch_stack.pop_back();
    for (int c : children[w])
      if (!scratch_mark[c]) {
        scratch_mark[c] = 1;
        scratch_stack.push_back(c);
      }
  }
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (k == idx) continue;  // the link being moved keeps its old spot eligible
    if (links[k].second == v) scratch_mark[links[k].first] = 1;
  }

  int valid = 0;
  for (int w = 0; w < n; ++w)
    if (!scratch_mark[w]) ++valid;
  int pick = rng.below_int(valid);
  int new_parent = -1;
  for (int w = 0; w < n; ++w) {
    if (scratch_mark[w]) continue;
    if (pick-- == 0) {
      new_parent = w;
      break;
    }
  }
  links[idx] = {new_parent, v};
  children[new_parent].push_back(v);
}

}  // namespace detail

// Alternative null sampler: burn-in uniform link relocations starting from
// the observed Hasse DAG. Approximately uniform over the reachable
// fixed-(n,m) space; slower but structure-agnostic.
inline PartialOrder sample_random_dag_mcmc(const PartialOrder& observed, long long burn_in,
                                           Rng& rng) {
  require_single_root(observed, "rewire-mcmc null");
  const int n = observed.n;
  std::vector<Edge> links = observed.hasse_edges;
  if (links.empty()) raise(ErrorKind::InfeasibleSpec, "rewire-mcmc null needs at least one link");
  std::vector<std::vector<int>> children(n);
  for (const auto& [u, v] : links) children[u].push_back(v);
  std::vector<int> stack;
  std::vector<char> mark;
  for (long long step = 0; step < burn_in; ++step)
    detail::relocate_link(n, links, rng.below(links.size()), children, rng, stack, mark);
  return order_from_edges(n, links);
}

struct EmpiricalNull {
  double mean_I = 0;
  double stderr_I = 0;
  int samples_used = 0;
};

struct EmiOptions {
  int samples = 1000;
  std::uint64_t seed = kDefaultSeed;
  NullModel null_model = NullModel::random_dag;
  long long burn_in = -1;  // rewire-mcmc only; -1 means 10 * m
  int threads = 0;
};

namespace detail {

template <typename SampleFn>
inline EmpiricalNull empirical_null_from_sampler(int samples, int threads, SampleFn&& sample_pair) {
  std::vector<double> values(samples);
  parallel_for(samples, threads, [&](std::size_t i) { values[i] = sample_pair(i); });
  EmpiricalNull null_est;
  null_est.samples_used = samples;
  double sum = 0;
  for (double v : values) sum += v;  // fixed index order: bit-stable
  null_est.mean_I = sum / samples;
  double ss = 0;
  for (double v : values) ss += (v - null_est.mean_I) * (v - null_est.mean_I);
  null_est.stderr_I = std::sqrt(ss / (static_cast<double>(samples) * (samples - 1)));
  return null_est;
}

}  // namespace detail

// Monte-Carlo estimate of <I> over independent pairs of null DAGs. Each
// sample i draws both orders from one sub-seeded stream (seed, i), so the
// estimate is bit-identical for any thread count.
inline EmpiricalNull empirical_expected_mi(const DagNullSpec& spec, int threads = 0) {
  validate_null_spec(spec);
  return detail::empirical_null_from_sampler(spec.samples, threads, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, i));
    PartialOrder rho1 = sample_random_dag(spec, rng);
    PartialOrder rho2 = sample_random_dag(spec, rng);
    return mi_total(rho1, rho2);
  });
}

inline EmpiricalNull empirical_expected_mi_mcmc(const PartialOrder& observed, int samples,
                                                std::uint64_t seed, long long burn_in = -1,
                                                int threads = 0) {
  if (samples < 2) raise(ErrorKind::InfeasibleSpec, "null model needs samples >= 2");
  const long long m = static_cast<long long>(observed.hasse_edges.size());
  if (burn_in < 0) burn_in = 10 * m;
  const long long burn = burn_in;
  return detail::empirical_null_from_sampler(samples, threads, [&, burn](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    PartialOrder rho1 = sample_random_dag_mcmc(observed, burn, rng);
    PartialOrder rho2 = sample_random_dag_mcmc(observed, burn, rng);
    return mi_total(rho1, rho2);
  });
}

// EMI formula given an already-estimated null; shared by the experiment
// harness, where one null per (n, m) is reused across many comparisons.
inline double emi_from(double i_total, double h_kappa, double h_mu, double null_mean) {
  const double denom = 0.5 * (h_kappa + h_mu) - null_mean;
  if (denom <= 1e-12)
    raise(ErrorKind::DegenerateOrder, "null-adjusted denominator is not positive");
  return (i_total - null_mean) / denom;
}

struct EmiResult {
  double value = 0;
  double i_total = 0;
  double h_kappa = 0;
  double h_mu = 0;
  EmpiricalNull null_estimate;
  long long m = 0;
};

// Empirically adjusted mutual information. The two orders must agree on the
// candidate count and on the Hasse link count m (the null space is pinned to
// that (n, m)).
inline EmiResult emi(const PartialOrder& kappa, const PartialOrder& mu, const EmiOptions& opts = {}) {
  if (kappa.n != mu.n)
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(kappa.n) + " vs " + std::to_string(mu.n) + " candidates");
  const long long mk = static_cast<long long>(kappa.hasse_edges.size());
  const long long mm = static_cast<long long>(mu.hasse_edges.size());
  if (mk != mm)
    raise(ErrorKind::LinkCountMismatch,
          "orders have " + std::to_string(mk) + " vs " + std::to_string(mm) + " links");

  EmiResult out;
  out.m = mk;
  MiBreakdown mi = mutual_information(kappa, mu);
  out.i_total = mi.total;
  out.h_kappa = mi.h_kappa;
  out.h_mu = mi.h_mu;
  if (opts.null_model == NullModel::random_dag) {
    DagNullSpec spec{kappa.n, mk, opts.samples, opts.seed};
    out.null_estimate = empirical_expected_mi(spec, opts.threads);
  } else {
    out.null_estimate =
        empirical_expected_mi_mcmc(kappa, opts.samples, opts.seed, opts.burn_in, opts.threads);
  }
  out.value = emi_from(mi.total, mi.h_kappa, mi.h_mu, out.null_estimate.mean_I);
  return out;
}

inline double emi_value(const PartialOrder& kappa, const PartialOrder& mu, int samples,
                        std::uint64_t seed) {
  EmiOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  return emi(kappa, mu, opts).value;
}

}  // namespace posim
