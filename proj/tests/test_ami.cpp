#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "posim/ami.hpp"
#include "posim/emi.hpp"
#include "posim/mutual_information.hpp"
#include "posim/order.hpp"
#include "posim/rng.hpp"

using namespace posim;
using Catch::Matchers::WithinAbs;

namespace {

// Brute-force ⟨I⟩: average mi_total over every relabelling of mu.
double exhaustive_expected_mi(const PartialOrder& kappa, const PartialOrder& mu) {
  std::vector<int> sigma(mu.n);
  std::iota(sigma.begin(), sigma.end(), 0);
  double sum = 0;
  long long count = 0;
  do {
    sum += mi_total(kappa, relabel(mu, sigma));
    ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return sum / static_cast<double>(count);
}

// Brute-force N(x,y,c): among all permutations of the C-1 other candidates,
// count those mapping the b reference members so the overlap with a fixed
// a-subset is exactly c.
std::vector<long long> exhaustive_term_counts(int C, int a, int b) {
  std::vector<int> perm(C - 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<long long> by_c(C, 0);
  do {
    int c = 0;
    for (int i = 0; i < b; ++i) c += perm[i] < a;  // image of the b-set vs the fixed a-prefix
    ++by_c[c];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return by_c;
}

}  // namespace

TEST_CASE("log factorial table accumulates exactly") {
  LogFactorialTable lf(40);
  REQUIRE(lf[0] == 0.0);
  REQUIRE(lf[1] == 0.0);
  for (int k = 2; k <= 40; ++k) REQUIRE_THAT(lf[k] - lf[k - 1], WithinAbs(std::log(double(k)), 1e-12));
  REQUIRE_THAT(lf[10], WithinAbs(std::log(3628800.0), 1e-9));
}

TEST_CASE("term_mi equals candidate_mi on the induced joint") {
  Rng rng(5);
  for (int iter = 0; iter < 300; ++iter) {
    const int C = 2 + rng.below_int(30);
    const int a = rng.below_int(C);  // 0..C-1
    const int b = rng.below_int(C);
    const int c_min = std::max(0, a + b - (C - 1));
    const int c = c_min + rng.below_int(std::min(a, b) - c_min + 1);
    REQUIRE_THAT(term_mi(C, a, b, c),
                 WithinAbs(candidate_mi(joint_from_counts(C, a, b, c)), 1e-12));
  }
}

TEST_CASE("term_mi fixed points") {
  // identical sets: the indicator pair is fully correlated
  REQUIRE_THAT(term_mi(10, 4, 4, 4), WithinAbs(binary_entropy(0.4), 1e-14));
  // independence crossing: c = a*b/C exactly
  REQUIRE_THAT(term_mi(4, 2, 2, 1), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(term_mi(9, 3, 3, 1), WithinAbs(0.0, 1e-14));
}

TEST_CASE("term range violations") {
  REQUIRE_THROWS_AS(term_mi(5, 5, 2, 1), DomainError);    // a > C-1
  REQUIRE_THROWS_AS(term_mi(5, 2, 2, 3), DomainError);    // c > min(a,b)
  REQUIRE_THROWS_AS(term_mi(5, 3, 3, 1), DomainError);    // c < a+b-(C-1)
  REQUIRE_THROWS_AS(term_mi(1, 0, 0, 0), DomainError);    // C too small
  REQUIRE_THROWS_AS(log_term_count(5, 2, 2, 3, LogFactorialTable(5)), DomainError);
}

TEST_CASE("log_term_count matches exhaustive placement counting") {
  LogFactorialTable lf(8);
  for (int C : {3, 4, 5, 6, 7}) {
    for (int a = 0; a < C; ++a)
      for (int b = 0; b < C; ++b) {
        auto by_c = exhaustive_term_counts(C, a, b);
        const int c_min = std::max(0, a + b - (C - 1));
        const int c_max = std::min(a, b);
        for (int c = 0; c < C; ++c) {
          if (c < c_min || c > c_max) {
            REQUIRE(by_c[c] == 0);
            continue;
          }
          REQUIRE(by_c[c] > 0);
          REQUIRE_THAT(log_term_count(C, a, b, c, lf),
                       WithinAbs(std::log(double(by_c[c])), 1e-10));
        }
      }
  }
}

TEST_CASE("hypergeometric counts cover all (C-1)! placements") {
  LogFactorialTable lf(64);
  Rng rng(19);
  for (int iter = 0; iter < 200; ++iter) {
    const int C = 2 + rng.below_int(60);
    const int a = rng.below_int(C);
    const int b = rng.below_int(C);
    const int c_min = std::max(0, a + b - (C - 1));
    const int c_max = std::min(a, b);
    // sum in linear space relative to the largest term to avoid overflow
    double peak = -1e300;
    for (int c = c_min; c <= c_max; ++c)
      peak = std::max(peak, log_term_count(C, a, b, c, lf));
    double sum = 0;
    for (int c = c_min; c <= c_max; ++c)
      sum += std::exp(log_term_count(C, a, b, c, lf) - peak);
    REQUIRE_THAT(peak + std::log(sum), WithinAbs(lf[C - 1], 1e-9));
  }
}

TEST_CASE("expected_mi matches the exhaustive relabelling oracle") {
  std::vector<std::pair<PartialOrder, PartialOrder>> pairs;
  pairs.emplace_back(gen_total_order(4), gen_total_order(4));
  pairs.emplace_back(gen_total_order(5), gen_bucket_order({2, 3}));
  pairs.emplace_back(gen_regular_tree(2, 3), gen_bucket_order({1, 2, 4}));
  pairs.emplace_back(order_from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), gen_total_order(4));
  pairs.emplace_back(gen_bucket_order({2, 2}), gen_antichain(4));
  pairs.emplace_back(gen_regular_tree(5, 2), gen_total_order(6));
  for (const auto& [a, b] : pairs) {
    INFO("n=" << a.n);
    const double closed = expected_mi(a, b).expected_I;
    REQUIRE_THAT(closed, WithinAbs(exhaustive_expected_mi(a, b), 1e-10));
  }
}

TEST_CASE("frozen oracle: expected MI of two 3-chains") {
  NullModelReport r = expected_mi(gen_total_order(3), gen_total_order(3));
  REQUIRE_THAT(r.expected_I, WithinAbs(0.46360379074866975, 1e-15));
  REQUIRE(r.term_count > 0);
}

TEST_CASE("expected_mi is exactly symmetric and label-invariant") {
  Rng rng(31);
  PartialOrder a = gen_regular_tree(2, 4);
  PartialOrder b = gen_bucket_order({4, 5, 6});
  REQUIRE(expected_mi(a, b).expected_I == expected_mi(b, a).expected_I);

  std::vector<int> sigma(b.n);
  std::iota(sigma.begin(), sigma.end(), 0);
  rng.shuffle(sigma);
  REQUIRE(expected_mi(a, relabel(b, sigma)).expected_I == expected_mi(a, b).expected_I);

  // antichain on either side silences every term
  REQUIRE(expected_mi(a, gen_antichain(a.n)).expected_I == 0.0);
  REQUIRE(expected_mi(a, gen_antichain(a.n)).term_count == 0);
}

TEST_CASE("expected_mi never exceeds the smaller entropy") {
  Rng rng(37);
  for (int iter = 0; iter < 20; ++iter) {
    const int n = 3 + rng.below_int(30);
    DagNullSpec spec{n, n - 1, 2, 1};
    PartialOrder a = sample_random_dag(spec, rng);
    PartialOrder b = sample_random_dag(spec, rng);
    NullModelReport r = expected_mi(a, b);
    REQUIRE(r.expected_I >= 0.0);
    REQUIRE(r.expected_I <= std::min(entropy(a), entropy(b)) + 1e-9);
  }
}

TEST_CASE("ami is 1 at identity and 0-mean under exhaustive relabelling") {
  PartialOrder c = gen_total_order(3);
  REQUIRE_THAT(ami(c, c), WithinAbs(1.0, 1e-12));

  // mean AMI over all 6 relabellings is 0: the numerator averages to I-<I>=0
  const double h = entropy(c);
  const double ei = expected_mi(c, c).expected_I;
  std::vector<int> sigma{0, 1, 2};
  double mean = 0;
  do {
    mean += (mi_total(c, relabel(c, sigma)) - ei) / (h - ei);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  mean /= 6.0;
  REQUIRE_THAT(mean, WithinAbs(0.0, 1e-10));
}

TEST_CASE("ami of a 2-chain against its reversal is -1") {
  PartialOrder up = gen_total_order(2);
  PartialOrder down = order_from_edges(2, {{1, 0}});
  // I=0, <I>=ln2/2, H=ln2: (0 - ln2/2)/(ln2 - ln2/2) = -1
  REQUIRE_THAT(ami(up, down), WithinAbs(-1.0, 1e-12));
}

TEST_CASE("ami degenerate denominator") {
  REQUIRE_THROWS_AS(ami(gen_antichain(3), gen_antichain(3)), DomainError);
}
