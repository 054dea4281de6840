#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "posim/order.hpp"

namespace posim {

// Joint distribution of the two down-set indicator variables at one
// candidate x: p11 = P(y in both down sets), p10 = P(only kappa's), etc.,
// with y drawn uniformly from all candidates.
struct Joint2x2 {
  double p11 = 0, p10 = 0, p01 = 0, p00 = 0;
};

// Counts: |C| = n, a = |D_kappa(x)|, b = |D_mu(x)|, c = |intersection|.
inline Joint2x2 joint_from_counts(int n, int a, int b, int c) {
  const double C = n;
  return {c / C, (a - c) / C, (b - c) / C, (n - a - b + c) / C};
}

inline Joint2x2 joint_dist(const PartialOrder& kappa, const PartialOrder& mu, int x) {
  if (kappa.n != mu.n)
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(kappa.n) + " vs " + std::to_string(mu.n) + " candidates");
  const int a = kappa.closure.sizes[x];
  const int b = mu.closure.sizes[x];
  const int c = static_cast<int>(and_count(kappa.closure.sets[x], mu.closure.sets[x]));
  return joint_from_counts(kappa.n, a, b, c);
}

// Mutual information (nats) of one 2x2 joint; 0*ln(0) := 0. The off-diagonal
// cells are grouped so that transposing the joint gives a bit-identical
// result (fp addition and multiplication commute), which makes every measure
// built on top exactly symmetric in its two arguments.
inline double candidate_mi(const Joint2x2& j) {
  const double r1 = j.p11 + j.p10, r0 = j.p01 + j.p00;
  const double c1 = j.p11 + j.p01, c0 = j.p10 + j.p00;
  auto cell = [](double p, double row, double col) {
    return p > 0 ? p * std::log(p / (row * col)) : 0.0;
  };
  double mi = cell(j.p11, r1, c1) + (cell(j.p10, r1, c0) + cell(j.p01, r0, c1)) +
              cell(j.p00, r0, c0);
  // True MI is >= 0; tiny negatives (magnitude < 1e-12) are rounding residue.
  return mi < 0 ? 0.0 : mi;
}

inline double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0.0;
  return -(p * std::log(p) + (1 - p) * std::log(1 - p));
}

// H(kappa) = sum over candidates of the binary entropy of the down-set
// membership indicator. Summed over sorted sizes, so the value depends only
// on the multiset of down-set sizes (bit-identical under relabelling).
inline double entropy_from_sizes(int n, std::vector<int> sizes) {
  std::sort(sizes.begin(), sizes.end());
  const double C = n;
  double h = 0;
  for (int s : sizes) h += binary_entropy(s / C);
  return h;
}

inline double entropy(const PartialOrder& order) {
  return entropy_from_sizes(order.n, order.closure.sizes);
}

struct MiBreakdown {
  std::vector<double> per_candidate;
  double total = 0;
  double h_kappa = 0;
  double h_mu = 0;
};

inline MiBreakdown mutual_information(const PartialOrder& kappa, const PartialOrder& mu) {
  if (kappa.n != mu.n)
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(kappa.n) + " vs " + std::to_string(mu.n) + " candidates");
  MiBreakdown out;
  out.per_candidate.resize(kappa.n);
  for (int x = 0; x < kappa.n; ++x) {
    const int a = kappa.closure.sizes[x];
    const int b = mu.closure.sizes[x];
    const int c = static_cast<int>(and_count(kappa.closure.sets[x], mu.closure.sets[x]));
    out.per_candidate[x] = candidate_mi(joint_from_counts(kappa.n, a, b, c));
    out.total += out.per_candidate[x];
  }
  out.h_kappa = entropy(kappa);
  out.h_mu = entropy(mu);
  return out;
}

// Total I only, without the per-candidate vector (hot paths). The table
// overload exists for callers that rebuild closures in a loop (rewiring
// walks) and never materialize a full order.
inline double mi_total(const DownSetTable& kappa, const DownSetTable& mu) {
  const int n = kappa.n();
  if (n != mu.n())
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(n) + " vs " + std::to_string(mu.n()) + " candidates");
  double total = 0;
  for (int x = 0; x < n; ++x) {
    const int a = kappa.sizes[x];
    const int b = mu.sizes[x];
    const int c = static_cast<int>(and_count(kappa.sets[x], mu.sets[x]));
    total += candidate_mi(joint_from_counts(n, a, b, c));
  }
  return total;
}

inline double mi_total(const PartialOrder& kappa, const PartialOrder& mu) {
  return mi_total(kappa.closure, mu.closure);
}

// I(kappa, relabel(kappa, sigma)) without materializing the relabelled
// order. The relabelled down set of x is sigma(D(sigma_inv[x])), so the
// intersection count is gathered by iterating the base row of sigma_inv[x]
// and testing mapped members against the base row of x. O(comparable pairs)
// per call; bit-identical to the materialized path (same integer counts).
inline double mi_relabelled(const PartialOrder& base, const std::vector<int>& sigma,
                            const std::vector<int>& sigma_inv) {
  const int n = base.n;
  double total = 0;
  for (int x = 0; x < n; ++x) {
    const int xs = sigma_inv[x];
    const int a = base.closure.sizes[x];
    const int b = base.closure.sizes[xs];
    int c = 0;
    const DynBitset& mine = base.closure.sets[x];
    base.closure.sets[xs].for_each([&](int y) { c += mine.test(sigma[y]); });
    total += candidate_mi(joint_from_counts(n, a, b, c));
  }
  return total;
}

inline double nmi_from(double i_total, double h_kappa, double h_mu) {
  const double denom = 0.5 * (h_kappa + h_mu);
  if (denom <= 0)
    raise(ErrorKind::DegenerateOrder, "both orders are antichains (zero entropy)");
  return i_total / denom;
}

// Normalized mutual information in [0, 1]; 1 iff the orders coincide.
inline double nmi(const PartialOrder& kappa, const PartialOrder& mu) {
  MiBreakdown mi = mutual_information(kappa, mu);
  return nmi_from(mi.total, mi.h_kappa, mi.h_mu);
}

// ---------------------------------------------------------------------------
// Diagnostic-only "naive" variant: one global joint over candidate pairs,
// P(i,j) proportional to |D_kappa(i) ∩ D_mu(j)|. Kept because it demonstrates
// why the per-candidate construction above is needed: it fails the
// self-comparison identity (naive_nmi(k, k) < 1 in general).
// ---------------------------------------------------------------------------

struct NaiveNmiResult {
  double value = 0;
  double self_defect = 0;  // 1 - naive value of kappa against itself
};

namespace detail {

inline double naive_nmi_value(const PartialOrder& kappa, const PartialOrder& mu) {
  const int n = kappa.n;
  std::vector<double> row(n, 0), col(n, 0);
  double total = 0;
  std::vector<std::vector<int>> counts(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      counts[i][j] = static_cast<int>(and_count(kappa.closure.sets[i], mu.closure.sets[j]));
      total += counts[i][j];
    }
  if (total <= 0)
    raise(ErrorKind::AllEmptyDownSets, "no overlapping down sets (antichain input?)");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      row[i] += counts[i][j] / total;
      col[j] += counts[i][j] / total;
    }
  double mi = 0, h_row = 0, h_col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = counts[i][j] / total;
      if (p > 0) mi += p * std::log(p / (row[i] * col[j]));
    }
  for (int i = 0; i < n; ++i) {
    if (row[i] > 0) h_row -= row[i] * std::log(row[i]);
    if (col[i] > 0) h_col -= col[i] * std::log(col[i]);
  }
  const double denom = 0.5 * (h_row + h_col);
  if (denom <= 0)
    raise(ErrorKind::DegenerateOrder, "naive joint has zero marginal entropy");
  return mi / denom;
}

}  // namespace detail

inline NaiveNmiResult naive_nmi(const PartialOrder& kappa, const PartialOrder& mu) {
  if (kappa.n != mu.n)
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(kappa.n) + " vs " + std::to_string(mu.n) + " candidates");
  NaiveNmiResult out;
  out.value = detail::naive_nmi_value(kappa, mu);
  out.self_defect = 1.0 - detail::naive_nmi_value(kappa, kappa);
  return out;
}

}  // namespace posim
