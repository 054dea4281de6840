#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "posim/ami.hpp"
#include "posim/distances.hpp"
#include "posim/emi.hpp"
#include "posim/mutual_information.hpp"
#include "posim/order.hpp"
#include "posim/parallel.hpp"
#include "posim/rng.hpp"

namespace posim {

// Visitation order for the progressive randomization walks: top_down walks
// the candidates (or links, keyed by child) in breadth-first depth order
// from the root, bottom_up is the exact reverse, random is a fresh uniform
// shuffle per run.
enum class Scheme { top_down, bottom_up, random };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::top_down:
      return "top-down";
    case Scheme::bottom_up:
      return "bottom-up";
    default:
      return "random";
  }
}

struct MeasureSelection {
  bool nmi = true;
  bool ami = false;
  bool emi = false;
  bool kendall = false;

  int count() const {
    return static_cast<int>(nmi) + static_cast<int>(ami) + static_cast<int>(emi) +
           static_cast<int>(kendall);
  }
};

struct ExperimentOptions {
  int runs = 100;
  std::uint64_t seed = kDefaultSeed;
  MeasureSelection measures{};  // permute/rewire walks; the swap experiment reports all four
  double grid_step = 0.05;      // recording grid for the walk fraction
  int emi_null_samples = 1000;
  int threads = 0;  // 0 = POSIM_THREADS env, then hardware
};

// One aggregated trace point: mean and sample standard deviation of one
// measure over the runs at one x (swap level or walk fraction).
struct TraceRow {
  double x = 0;
  std::string measure;
  double mean = 0;
  double std_dev = 0;
  int runs = 0;
};

struct ExperimentTrace {
  std::vector<TraceRow> rows;
};

namespace detail {

// Stream ids for deriving independent sub-seeds: one 64-bit tag per
// experiment family so walks, pair draws, and null estimation never share a
// random stream even under the same user seed.
inline constexpr std::uint64_t kStreamSwap = 1;
inline constexpr std::uint64_t kStreamPermute = 2;
inline constexpr std::uint64_t kStreamRewire = 3;
inline constexpr std::uint64_t kStreamOverlap = 4;
inline constexpr std::uint64_t kStreamNull = 5;

inline std::uint64_t stream(std::uint64_t tag, std::uint64_t sub) { return (tag << 32) | sub; }

inline constexpr int kMeasureSlots = 4;  // nmi, ami, emi, kendall
inline const char* const kMeasureNames[kMeasureSlots] = {"nmi", "ami", "emi", "kendall"};

inline bool measure_selected(const MeasureSelection& sel, int slot) {
  switch (slot) {
    case 0:
      return sel.nmi;
    case 1:
      return sel.ami;
    case 2:
      return sel.emi;
    default:
      return sel.kendall;
  }
}

// Per-experiment constants. For label walks (swap/permute/overlap) the
// relabelled copy keeps the down-set-size multiset, so entropy, the
// combinatorial null and the empirical null are all walk-invariant and the
// similarity transforms reduce to affine maps of the raw I.
struct MeasureContext {
  double h_kappa = 0;
  double expected_I = 0;  // combinatorial relabelling null (ami)
  double null_mean = 0;   // empirical fixed-(n,m) DAG null (emi)
};

inline MeasureContext make_context(const PartialOrder& order, const MeasureSelection& sel,
                                   const ExperimentOptions& opts, std::uint64_t experiment_tag) {
  MeasureContext ctx;
  ctx.h_kappa = entropy(order);
  if ((sel.nmi || sel.ami || sel.emi) && ctx.h_kappa <= 0)
    raise(ErrorKind::DegenerateOrder, "similarity is undefined for a zero-entropy order");
  if (sel.ami) {
    ctx.expected_I =
        expected_mi_sizes(order.n, order.closure.sizes, order.closure.sizes).expected_I;
    if (ctx.h_kappa - ctx.expected_I <= 1e-12)
      raise(ErrorKind::DegenerateOrder, "null-adjusted denominator is not positive");
  }
  if (sel.emi) {
    DagNullSpec spec{order.n, static_cast<long long>(order.hasse_edges.size()),
                     opts.emi_null_samples, derive_seed(opts.seed, stream(kStreamNull, experiment_tag))};
    ctx.null_mean = empirical_expected_mi(spec, opts.threads).mean_I;
    if (ctx.h_kappa - ctx.null_mean <= 1e-12)
      raise(ErrorKind::DegenerateOrder, "null-adjusted denominator is not positive");
  }
  return ctx;
}

// Recording fractions: multiples of `step` strictly inside (0, 1), then 1.0
// exactly. The f = 0 point is emitted separately as a definitional row.
inline std::vector<double> walk_grid(double step) {
  if (!(step > 0) || step > 1)
    raise(ErrorKind::InfeasibleSpec, "grid step must be in (0, 1]");
  std::vector<double> grid;
  for (int k = 1; k * step < 1.0 - 1e-9; ++k) grid.push_back(k * step);
  grid.push_back(1.0);
  return grid;
}

// Candidates sorted by (BFS depth from the roots, id); reversed = bottom_up.
inline std::vector<int> depth_visit_order(const PartialOrder& order, bool reversed) {
  std::vector<int> visit(order.n);
  std::iota(visit.begin(), visit.end(), 0);
  std::vector<int> depth = order.depths();
  std::stable_sort(visit.begin(), visit.end(), [&](int a, int b) { return depth[a] < depth[b]; });
  if (reversed) std::reverse(visit.begin(), visit.end());
  return visit;
}

inline std::pair<double, double> mean_and_std(const double* first, std::size_t stride, int runs) {
  double sum = 0;
  for (int r = 0; r < runs; ++r) sum += first[static_cast<std::size_t>(r) * stride];
  const double mean = sum / runs;
  double ss = 0;
  for (int r = 0; r < runs; ++r) {
    const double d = first[static_cast<std::size_t>(r) * stride] - mean;
    ss += d * d;
  }
  return {mean, runs > 1 ? std::sqrt(ss / (runs - 1)) : 0.0};
}

// values layout: [run][record][slot]. Appends one row per selected measure
// per record, records in ascending x order (fixed iteration order keeps the
// aggregate independent of the thread count used to fill `values`).
inline void append_aggregated_rows(ExperimentTrace& trace, const std::vector<double>& x_values,
                                   const MeasureSelection& sel, const std::vector<double>& values,
                                   int runs) {
  const std::size_t n_rec = x_values.size();
  const std::size_t run_stride = n_rec * kMeasureSlots;
  for (std::size_t rec = 0; rec < n_rec; ++rec)
    for (int slot = 0; slot < kMeasureSlots; ++slot) {
      if (!measure_selected(sel, slot)) continue;
      auto [mean, sd] = mean_and_std(&values[rec * kMeasureSlots + slot], run_stride, runs);
      trace.rows.push_back({x_values[rec], kMeasureNames[slot], mean, sd, runs});
    }
}

// x = 0 has not moved the walk: similarity is 1 and the inversion count 0 by
// definition, so the row is written without sampling.
inline void append_baseline_rows(ExperimentTrace& trace, const MeasureSelection& sel, int runs) {
  for (int slot = 0; slot < kMeasureSlots; ++slot)
    if (measure_selected(sel, slot))
      trace.rows.push_back({0.0, kMeasureNames[slot], slot == 3 ? 0.0 : 1.0, 0.0, runs});
}

}  // namespace detail

// Same-level swap: build the regular tree, and for each level l = 2..depth
// (the root is level 1) relabel `runs` sampled same-level pairs and compare
// against the original. Pairs of sibling leaves are excluded — swapping them
// is an automorphism, so they would dilute the averages with exact 1s. All
// four measures are reported; kendall is a structural zero for every
// same-level swap and acts as a cross-check column.
inline ExperimentTrace swap_experiment(int branching, int depth, const ExperimentOptions& opts) {
  if (branching < 2) raise(ErrorKind::InfeasibleSpec, "swap experiment needs branching >= 2");
  if (depth < 2) raise(ErrorKind::InfeasibleSpec, "swap experiment needs depth >= 2");
  if (opts.runs < 1) raise(ErrorKind::InfeasibleSpec, "runs must be >= 1");

  const PartialOrder order = gen_regular_tree(branching, depth);
  const int n = order.n;
  MeasureSelection sel;
  sel.nmi = sel.ami = sel.emi = sel.kendall = true;
  const detail::MeasureContext ctx = detail::make_context(order, sel, opts, detail::kStreamSwap);
  const double denom_ami = ctx.h_kappa - ctx.expected_I;
  const double denom_emi = ctx.h_kappa - ctx.null_mean;

  std::vector<int> parent(n, -1);
  for (const auto& [u, v] : order.hasse_edges) parent[v] = u;
  const std::vector<int> node_depth = order.depths();

  ExperimentTrace trace;
  std::vector<int> level_nodes;
  for (int level = 2; level <= depth; ++level) {
    level_nodes.clear();
    for (int i = 0; i < n; ++i)
      if (node_depth[i] == level - 1) level_nodes.push_back(i);
    const int m = static_cast<int>(level_nodes.size());
    if (m < 2)
      raise(ErrorKind::InfeasibleSpec,
            "level " + std::to_string(level) + " has fewer than two candidates");
    bool same_parent = true, all_leaves = true;
    for (int i : level_nodes) {
      same_parent = same_parent && parent[i] == parent[level_nodes[0]];
      all_leaves = all_leaves && order.closure.sizes[i] == 0;
    }
    if (same_parent && all_leaves)
      raise(ErrorKind::InfeasibleSpec,
            "level " + std::to_string(level) + " has only automorphic sibling-leaf pairs");

    std::vector<double> values(static_cast<std::size_t>(opts.runs) * detail::kMeasureSlots, 0.0);
    parallel_for(opts.runs, opts.threads, [&](std::size_t run) {
      Rng rng(derive_seed(opts.seed, detail::stream(detail::kStreamSwap, level), run));
      int u, v;
      do {
        const int i = rng.below_int(m);
        int j = rng.below_int(m - 1);
        if (j >= i) ++j;
        u = level_nodes[i];
        v = level_nodes[j];
      } while (parent[u] == parent[v] && order.closure.sizes[u] == 0 &&
               order.closure.sizes[v] == 0);
      std::vector<int> sigma(n);
      std::iota(sigma.begin(), sigma.end(), 0);
      sigma[u] = v;
      sigma[v] = u;  // a transposition is its own inverse
      const double i_total = mi_relabelled(order, sigma, sigma);
      double* out = &values[run * detail::kMeasureSlots];
      out[0] = i_total / ctx.h_kappa;
      out[1] = (i_total - ctx.expected_I) / denom_ami;
      out[2] = (i_total - ctx.null_mean) / denom_emi;
      out[3] = static_cast<double>(kendall_tau_relabelled(order, sigma));
    });
    detail::append_aggregated_rows(trace, {static_cast<double>(level)}, sel, values, opts.runs);
  }
  return trace;
}

// Progressive label randomization: candidates are visited in scheme order
// and the visited candidate's current label is swapped with the label of a
// uniformly drawn other candidate. Measures are recorded on the fraction
// grid against the unperturbed order; rows aggregate the runs.
inline ExperimentTrace permutation_randomization(const PartialOrder& order, Scheme scheme,
                                                 const ExperimentOptions& opts) {
  if (order.n < 2)
    raise(ErrorKind::InfeasibleSpec, "randomization walk needs at least two candidates");
  if (opts.runs < 1) raise(ErrorKind::InfeasibleSpec, "runs must be >= 1");
  if (opts.measures.count() == 0) raise(ErrorKind::InfeasibleSpec, "no measures selected");

  const int n = order.n;
  const MeasureSelection sel = opts.measures;
  const detail::MeasureContext ctx =
      detail::make_context(order, sel, opts, detail::kStreamPermute);
  const double denom_ami = ctx.h_kappa - ctx.expected_I;
  const double denom_emi = ctx.h_kappa - ctx.null_mean;
  const bool need_mi = sel.nmi || sel.ami || sel.emi;

  const std::vector<double> grid = detail::walk_grid(opts.grid_step);
  const std::size_t n_rec = grid.size();
  std::vector<long long> target(n_rec);
  for (std::size_t k = 0; k < n_rec; ++k) target[k] = std::llround(grid[k] * n);

  std::vector<int> scheme_visit;
  if (scheme != Scheme::random)
    scheme_visit = detail::depth_visit_order(order, scheme == Scheme::bottom_up);

  std::vector<double> values(static_cast<std::size_t>(opts.runs) * n_rec * detail::kMeasureSlots,
                             0.0);
  parallel_for(opts.runs, opts.threads, [&](std::size_t run) {
    Rng rng(derive_seed(opts.seed,
                        detail::stream(detail::kStreamPermute, static_cast<std::uint64_t>(scheme)),
                        run));
    std::vector<int> visit = scheme_visit;
    if (scheme == Scheme::random) {
      visit.resize(n);
      std::iota(visit.begin(), visit.end(), 0);
      rng.shuffle(visit);
    }
    std::vector<int> sigma(n), inv(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::iota(inv.begin(), inv.end(), 0);
    long long t = 0;
    double* out = &values[run * n_rec * detail::kMeasureSlots];
    for (std::size_t rec = 0; rec < n_rec; ++rec) {
      for (; t < target[rec]; ++t) {
        const int x = visit[t];
        int y = rng.below_int(n - 1);
        if (y >= x) ++y;
        const int lx = sigma[x], ly = sigma[y];
        sigma[x] = ly;
        sigma[y] = lx;
        inv[ly] = x;
        inv[lx] = y;
      }
      double* slot = out + rec * detail::kMeasureSlots;
      if (need_mi) {
        const double i_total = mi_relabelled(order, sigma, inv);
        if (sel.nmi) slot[0] = i_total / ctx.h_kappa;
        if (sel.ami) slot[1] = (i_total - ctx.expected_I) / denom_ami;
        if (sel.emi) slot[2] = (i_total - ctx.null_mean) / denom_emi;
      }
      if (sel.kendall) slot[3] = static_cast<double>(kendall_tau_relabelled(order, inv));
    }
  });

  ExperimentTrace trace;
  detail::append_baseline_rows(trace, sel, opts.runs);
  detail::append_aggregated_rows(trace, grid, sel, values, opts.runs);
  return trace;
}

// Progressive structure randomization: each Hasse link of the (single
// rooted) order is relocated once, in scheme order keyed by the depth of the
// link's child. A relocation keeps the child and draws a new parent
// uniformly among the nodes that preserve acyclicity and simple links; the
// walk therefore stays a valid single-rooted DAG at every step. Closures are
// rebuilt only at the recording grid. The empirical null for emi is pinned
// to the original (n, m) — relocation preserves the generative link count
// even when a link becomes transitively redundant.
inline ExperimentTrace rewiring_randomization(const PartialOrder& order, Scheme scheme,
                                              const ExperimentOptions& opts) {
  require_single_root(order, "rewiring walk");
  const int n = order.n;
  const long long m = static_cast<long long>(order.hasse_edges.size());
  if (m < 1) raise(ErrorKind::InfeasibleSpec, "rewiring walk needs at least one link");
  if (opts.runs < 1) raise(ErrorKind::InfeasibleSpec, "runs must be >= 1");
  if (opts.measures.count() == 0) raise(ErrorKind::InfeasibleSpec, "no measures selected");

  const MeasureSelection sel = opts.measures;
  const detail::MeasureContext ctx = detail::make_context(order, sel, opts, detail::kStreamRewire);

  const std::vector<double> grid = detail::walk_grid(opts.grid_step);
  const std::size_t n_rec = grid.size();
  std::vector<long long> target(n_rec);
  for (std::size_t k = 0; k < n_rec; ++k) target[k] = std::llround(grid[k] * m);

  std::vector<std::size_t> scheme_visit(m);
  std::iota(scheme_visit.begin(), scheme_visit.end(), std::size_t{0});
  if (scheme != Scheme::random) {
    const std::vector<int> depth = order.depths();
    const auto& links = order.hasse_edges;
    std::stable_sort(scheme_visit.begin(), scheme_visit.end(), [&](std::size_t a, std::size_t b) {
      return depth[links[a].second] < depth[links[b].second];
    });
    if (scheme == Scheme::bottom_up) std::reverse(scheme_visit.begin(), scheme_visit.end());
  }

  std::vector<double> values(static_cast<std::size_t>(opts.runs) * n_rec * detail::kMeasureSlots,
                             0.0);
  parallel_for(opts.runs, opts.threads, [&](std::size_t run) {
    Rng rng(derive_seed(opts.seed,
                        detail::stream(detail::kStreamRewire, static_cast<std::uint64_t>(scheme)),
                        run));
    std::vector<std::size_t> visit = scheme_visit;
    if (scheme == Scheme::random) rng.shuffle(visit);
    std::vector<Edge> links = order.hasse_edges;
    std::vector<std::vector<int>> children(n);
    for (const auto& [u, v] : links) children[u].push_back(v);
    std::vector<int> stack;
    std::vector<char> mark;
    long long t = 0;
    double* out = &values[run * n_rec * detail::kMeasureSlots];
    for (std::size_t rec = 0; rec < n_rec; ++rec) {
      for (; t < target[rec]; ++t)
        detail::relocate_link(n, links, visit[t], children, rng, stack, mark);
      const DownSetTable mu = transitive_closure(n, links);
      double* slot = out + rec * detail::kMeasureSlots;
      if (sel.nmi || sel.ami || sel.emi) {
        const double i_total = mi_total(order.closure, mu);
        const double h_mu = entropy_from_sizes(n, mu.sizes);
        if (sel.nmi) slot[0] = nmi_from(i_total, ctx.h_kappa, h_mu);
        if (sel.ami) {
          const double e_i = expected_mi_sizes(n, order.closure.sizes, mu.sizes).expected_I;
          const double denom = 0.5 * (ctx.h_kappa + h_mu) - e_i;
          if (denom <= 1e-12)
            raise(ErrorKind::DegenerateOrder, "null-adjusted denominator is not positive");
          slot[1] = (i_total - e_i) / denom;
        }
        if (sel.emi) slot[2] = emi_from(i_total, ctx.h_kappa, h_mu, ctx.null_mean);
      }
      if (sel.kendall) slot[3] = static_cast<double>(kendall_tau(order.closure, mu));
    }
  });

  ExperimentTrace trace;
  detail::append_baseline_rows(trace, sel, opts.runs);
  detail::append_aggregated_rows(trace, grid, sel, values, opts.runs);
  return trace;
}

// ---------------------------------------------------------------------------
// Overlap integrals between per-fraction measure distributions
// ---------------------------------------------------------------------------

enum class OverlapMeasure { kendall, ami };

inline const char* overlap_measure_name(OverlapMeasure m) {
  return m == OverlapMeasure::kendall ? "kendall" : "ami";
}

struct OverlapMatrix {
  std::vector<double> f_grid;
  std::vector<std::vector<double>> L;  // symmetric; dimensionless (see below)
  std::string measure_id;
};

// For each run, one random-scheme label walk is recorded at every grid
// fraction; the per-fraction samples form empirical densities whose pairwise
// inner products are returned. Histograms share one fixed binning over the
// rescaled global sample range [0, 1], which makes L dimensionless: two
// identical uniform densities give L = 1, disjoint ones give 0, so a single
// "significant overlap" threshold works for measures of any natural scale.
inline OverlapMatrix overlap_matrix(const PartialOrder& order, const std::vector<double>& f_grid,
                                    int runs_per_f, int bins, std::uint64_t seed,
                                    OverlapMeasure measure, int threads = 0) {
  if (order.n < 2)
    raise(ErrorKind::InfeasibleSpec, "randomization walk needs at least two candidates");
  if (runs_per_f < 30) raise(ErrorKind::InfeasibleSpec, "overlap matrix needs runs_per_f >= 30");
  if (bins < 10) raise(ErrorKind::InfeasibleSpec, "overlap matrix needs bins >= 10");
  if (f_grid.empty()) raise(ErrorKind::InfeasibleSpec, "overlap matrix needs a non-empty f grid");
  for (std::size_t i = 0; i < f_grid.size(); ++i) {
    if (f_grid[i] < 0 || f_grid[i] > 1)
      raise(ErrorKind::InfeasibleSpec, "overlap fractions must lie in [0, 1]");
    if (i > 0 && f_grid[i] <= f_grid[i - 1])
      raise(ErrorKind::InfeasibleSpec, "overlap f grid must be strictly increasing");
  }

  const int n = order.n;
  const double h = entropy(order);
  double expected_I = 0, denom_ami = 0;
  if (measure == OverlapMeasure::ami) {
    if (h <= 0) raise(ErrorKind::DegenerateOrder, "similarity is undefined for a zero-entropy order");
    expected_I = expected_mi_sizes(n, order.closure.sizes, order.closure.sizes).expected_I;
    denom_ami = h - expected_I;
    if (denom_ami <= 1e-12)
      raise(ErrorKind::DegenerateOrder, "null-adjusted denominator is not positive");
  }

  const std::size_t n_f = f_grid.size();
  std::vector<long long> target(n_f);
  for (std::size_t k = 0; k < n_f; ++k) target[k] = std::llround(f_grid[k] * n);

  std::vector<double> samples(static_cast<std::size_t>(runs_per_f) * n_f, 0.0);
  parallel_for(runs_per_f, threads, [&](std::size_t run) {
    Rng rng(derive_seed(seed,
                        detail::stream(detail::kStreamOverlap, static_cast<std::uint64_t>(measure)),
                        run));
    std::vector<int> visit(n);
    std::iota(visit.begin(), visit.end(), 0);
    rng.shuffle(visit);
    std::vector<int> sigma(n), inv(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::iota(inv.begin(), inv.end(), 0);
    long long t = 0;
    double* out = &samples[run * n_f];
    for (std::size_t rec = 0; rec < n_f; ++rec) {
      for (; t < target[rec]; ++t) {
        const int x = visit[t];
        int y = rng.below_int(n - 1);
        if (y >= x) ++y;
        const int lx = sigma[x], ly = sigma[y];
        sigma[x] = ly;
        sigma[y] = lx;
        inv[ly] = x;
        inv[lx] = y;
      }
      if (measure == OverlapMeasure::kendall) {
        out[rec] = static_cast<double>(kendall_tau_relabelled(order, inv));
      } else {
        out[rec] = (mi_relabelled(order, sigma, inv) - expected_I) / denom_ami;
      }
    }
  });

  double lo = samples[0], hi = samples[0];
  for (double v : samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span = hi - lo;
  if (span <= 0) span = 1;  // degenerate: every sample identical, all mass in bin 0

  std::vector<std::vector<long long>> counts(n_f, std::vector<long long>(bins, 0));
  for (int run = 0; run < runs_per_f; ++run)
    for (std::size_t rec = 0; rec < n_f; ++rec) {
      const double u = (samples[static_cast<std::size_t>(run) * n_f + rec] - lo) / span;
      const int b = std::min(bins - 1, static_cast<int>(u * bins));
      ++counts[rec][b];
    }

  // With unit-range histograms, density p[b] = count[b] * bins / N and the
  // integral of p1*p2 collapses to (bins / N^2) * sum of count products.
  OverlapMatrix out;
  out.f_grid = f_grid;
  out.measure_id = overlap_measure_name(measure);
  out.L.assign(n_f, std::vector<double>(n_f, 0.0));
  const double scale =
      static_cast<double>(bins) / (static_cast<double>(runs_per_f) * runs_per_f);
  for (std::size_t i = 0; i < n_f; ++i)
    for (std::size_t j = i; j < n_f; ++j) {
      long long dot = 0;
      for (int b = 0; b < bins; ++b) dot += counts[i][b] * counts[j][b];
      out.L[i][j] = out.L[j][i] = scale * static_cast<double>(dot);
    }
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

inline void write_trace_csv(std::ostream& os, const ExperimentTrace& trace) {
  os << "x,measure,mean,std,runs\n";
  for (const auto& r : trace.rows)
    os << detail::fmt_g12(r.x) << ',' << r.measure << ',' << detail::fmt_g12(r.mean) << ','
       << detail::fmt_g12(r.std_dev) << ',' << r.runs << '\n';
}

inline void write_overlap_csv(std::ostream& os, const OverlapMatrix& m) {
  os << "f1,f2,L\n";
  for (std::size_t i = 0; i < m.f_grid.size(); ++i)
    for (std::size_t j = 0; j < m.f_grid.size(); ++j)
      os << detail::fmt_g12(m.f_grid[i]) << ',' << detail::fmt_g12(m.f_grid[j]) << ','
         << detail::fmt_g12(m.L[i][j]) << '\n';
}

}  // namespace posim
