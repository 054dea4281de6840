#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "posim/mutual_information.hpp"
#include "posim/order.hpp"

namespace posim {

// lf[k] = ln(k!), built by accumulation so lf[k] - lf[k-1] == ln(k) exactly.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(int max_n) : lf_(static_cast<std::size_t>(max_n) + 1, 0.0) {
    for (int k = 2; k <= max_n; ++k) lf_[k] = lf_[k - 1] + std::log(static_cast<double>(k));
  }

  double operator[](int k) const { return lf_[k]; }
  int max_n() const { return static_cast<int>(lf_.size()) - 1; }

 private:
  std::vector<double> lf_;
};

namespace detail {

inline void check_term_range(int C, int a, int b, int c) {
  if (C < 2 || a < 0 || b < 0 || a > C - 1 || b > C - 1)
    raise(ErrorKind::RangeViolation,
          "down-set sizes out of range: C=" + std::to_string(C) + " a=" + std::to_string(a) +
              " b=" + std::to_string(b));
  const int c_min = std::max(0, a + b - (C - 1));
  const int c_max = std::min(a, b);
  if (c < c_min || c > c_max)
    raise(ErrorKind::RangeViolation,
          "intersection size out of range: c=" + std::to_string(c) + " allowed [" +
              std::to_string(c_min) + ", " + std::to_string(c_max) + "]");
}

}  // namespace detail

// MI contribution (nats) of a hypothetical candidate whose down sets have
// sizes a and b with intersection c, out of C candidates. Counts-based form;
// agrees with candidate_mi(joint_from_counts(...)) — kept as a separate
// arithmetic path so the two can be checked against each other.
inline double term_mi(int C, int a, int b, int c) {
  detail::check_term_range(C, a, b, c);
  const double Cd = C;
  auto piece = [Cd](int num, int rd, int cd) {
    if (num == 0) return 0.0;
    return (num / Cd) * std::log((static_cast<double>(num) * Cd) /
                                 (static_cast<double>(rd) * static_cast<double>(cd)));
  };
  return piece(c, a, b) + (piece(a - c, a, C - b) + piece(b - c, C - a, b)) +
         piece(C - a - b + c, C - a, C - b);
}

// ln N(x,y,c): log count of relabellings that map a fixed candidate onto one
// with down-set size b such that the intersection with the fixed size-a down
// set is exactly c. The fixed candidate is excluded from the pool, hence the
// C-1 terms; summing exp over the c range gives (C-1)! exactly.
inline double log_term_count(int C, int a, int b, int c, const LogFactorialTable& lf) {
  detail::check_term_range(C, a, b, c);
  return lf[a] + lf[b] + lf[C - 1 - a] + lf[C - 1 - b] - lf[c] - lf[a - c] - lf[b - c] -
         lf[C - 1 - a - b + c];
}

struct NullModelReport {
  double expected_I = 0;
  long long term_count = 0;
  double elapsed_seconds = 0;
};

// Exact expected mutual information over all |C|! relabellings of mu,
// evaluated in closed form. Terms are grouped by distinct down-set-size
// pairs; each unordered (a, b) pair is evaluated once in ascending order, so
// the result is bit-identical under argument swap. Sizes 0 contribute no MI
// and are skipped. Depends only on the two down-set-size multisets, hence
// the sizes-based entry point.
inline NullModelReport expected_mi_sizes(int C, const std::vector<int>& sizes_a,
                                         const std::vector<int>& sizes_b) {
  const auto t0 = std::chrono::steady_clock::now();
  NullModelReport report;

  std::vector<long long> count_a(C, 0), count_b(C, 0);
  for (int s : sizes_a)
    if (s > 0) ++count_a[s];
  for (int s : sizes_b)
    if (s > 0) ++count_b[s];
  std::vector<int> values;
  for (int s = 1; s < C; ++s)
    if (count_a[s] + count_b[s] > 0) values.push_back(s);

  LogFactorialTable lf(C);
  double total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i; j < values.size(); ++j) {
      const int a = values[i], b = values[j];
      const double weight =
          static_cast<double>(count_a[a]) * static_cast<double>(count_b[b]) +
          (a < b ? static_cast<double>(count_a[b]) * static_cast<double>(count_b[a]) : 0.0);
      if (weight == 0) continue;
      const int c_min = std::max(0, a + b - (C - 1));
      const int c_max = std::min(a, b);
      double inner = 0;
      for (int c = c_min; c <= c_max; ++c) {
        inner += std::exp(log_term_count(C, a, b, c, lf) - lf[C]) * term_mi(C, a, b, c);
        ++report.term_count;
      }
      total += weight * inner;
    }
  }
  report.expected_I = total;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline NullModelReport expected_mi(const PartialOrder& kappa, const PartialOrder& mu) {
  if (kappa.n != mu.n)
    raise(ErrorKind::DomainMismatch,
          "orders have " + std::to_string(kappa.n) + " vs " + std::to_string(mu.n) + " candidates");
  return expected_mi_sizes(kappa.n, kappa.closure.sizes, mu.closure.sizes);
}

// Adjusted mutual information: 0-centered under random relabelling, 1 at
// identity. AMI = (I - <I>) / ((H_kappa + H_mu)/2 - <I>).
inline double ami(const PartialOrder& kappa, const PartialOrder& mu) {
  MiBreakdown mi = mutual_information(kappa, mu);
  NullModelReport null_model = expected_mi(kappa, mu);
  const double denom = 0.5 * (mi.h_kappa + mi.h_mu) - null_model.expected_I;
  if (denom <= 1e-12)
    raise(ErrorKind::DegenerateOrder, "null-adjusted denominator is not positive");
  return (mi.total - null_model.expected_I) / denom;
}

}  // namespace posim
