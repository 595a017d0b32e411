#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "errors.hpp"
#include "kahan.hpp"
#include "reduced.hpp"
#include "series.hpp"
#include "test_util.hpp"

using riso::Error;
using riso::FitResult;
using riso::ReducedPath;
using riso::Series;

TEST_CASE("two-piece fit of a two-step sequence") {
  Series x({1.0, 2.0, 10.0, 11.0});
  ReducedPath path = riso::fit_all_k(x);
  CHECK(path.n_blocks == 4);
  CHECK(path.pava_knots == std::vector<std::size_t>{1, 2, 3, 4});

  FitResult f = riso::fit_from_path(path, x, 2);
  CHECK(f.sse == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.k_used == 2);
  CHECK(f.fit.knots() == std::vector<std::size_t>{2, 4});
  CHECK(f.fit.levels() == std::vector<double>{1.5, 10.5});
  CHECK(f.method == "reduced");

  // Table values for the full prefix.
  CHECK(path.loss_at(1) == doctest::Approx(82.0).epsilon(1e-12));
  CHECK(path.loss_at(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(path.loss_at(3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(path.loss_at(4) == doctest::Approx(0.0).epsilon(1e-12));

  // Three pieces: both {1,2} and {2,3} splits of the first pair tie at 0.5;
  // the leftmost split wins.
  CHECK(path.knots_for(3) == std::vector<std::size_t>{1, 2, 4});
  CHECK(path.knots_for(2) == std::vector<std::size_t>{2, 4});
}

TEST_CASE("decreasing data collapse to one block") {
  Series x({3.0, 1.0, 2.0});
  ReducedPath path = riso::fit_all_k(x);
  CHECK(path.n_blocks == 1);
  CHECK(path.loss_at(1) == doctest::Approx(2.0).epsilon(1e-12));

  // Any budget saturates at the single-block fit.
  for (std::size_t k = 1; k <= 3; ++k) {
    FitResult f = riso::fit_from_path(path, x, k);
    CHECK(f.k_used == 1);
    CHECK(f.fit.levels() == std::vector<double>{2.0});
  }
}

TEST_CASE("budget caps at the block count") {
  Series x({1.0, 2.0, 10.0, 11.0});
  FitResult f = riso::fit_k(x, 10);
  CHECK(f.k_used == 4);
  CHECK(f.sse == doctest::Approx(0.0));
}

TEST_CASE("rejects weighted input and bad budgets") {
  Series w({1.0, 2.0}, {1.0, 2.0});
  CHECK_THROWS_AS(riso::fit_all_k(w), Error);
  Series x({1.0, 2.0});
  CHECK_THROWS_AS(riso::fit_k(x, 0), Error);
}

TEST_CASE("oracle on a two-point violation") {
  Series x({2.0, 1.0});
  FitResult f = riso::brute_force_oracle(x, 2);
  CHECK(f.sse == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.fit.pieces() == 1);
  CHECK(f.fit.levels() == std::vector<double>{1.5});

  CHECK_THROWS_AS(riso::brute_force_oracle(Series(std::vector<double>(17, 0.0)), 2),
                  Error);
}

TEST_CASE("matches the exhaustive oracle on small inputs") {
  // Spot check; the full-size sweep runs in the acceptance suite.
  std::mt19937_64 rng(90210);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = testutil::random_size(rng, 1, 10);
    auto vals = trial % 2 == 0 ? testutil::continuous_values(rng, n)
                               : testutil::grid_values(rng, n);
    Series x(vals);
    ReducedPath path = riso::fit_all_k(x);
    for (std::size_t k = 1; k <= n; ++k) {
      FitResult mine = riso::fit_from_path(path, x, k);
      FitResult oracle = riso::brute_force_oracle(x, k);
      CHECK(std::abs(mine.sse - oracle.sse) <= 1e-9);
    }
  }
}

TEST_CASE("fitted levels are block means and knots nest") {
  std::mt19937_64 rng(1861);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = testutil::random_size(rng, 1, 50);
    auto vals = trial % 2 == 0 ? testutil::continuous_values(rng, n)
                               : testutil::grid_values(rng, n);
    Series x(vals);
    ReducedPath path = riso::fit_all_k(x);
    auto prefix = riso::prefix_sums(vals, [](double v) { return v; });

    for (std::size_t k = 1; k <= n; ++k) {
      FitResult f = riso::fit_from_path(path, x, k);
      CHECK(f.k_used == std::min(k, path.n_blocks));
      CHECK(f.fit.pieces() == f.k_used);

      // Levels are plain means over the fitted blocks.
      std::size_t start = 0;
      const auto& kn = f.fit.knots();
      for (std::size_t b = 0; b < kn.size(); ++b) {
        double mean = (prefix[kn[b]] - prefix[start]) /
                      static_cast<double>(kn[b] - start);
        CHECK(testutil::close(f.fit.levels()[b], mean, 1e-10));
        start = kn[b];
      }

      // Fitted vector is nondecreasing.
      auto dense = f.fit.dense();
      for (std::size_t i = 1; i < n; ++i) CHECK(dense[i] >= dense[i - 1]);

      // Selected knots are a subset of the full isotonic knots.
      CHECK(std::includes(path.pava_knots.begin(), path.pava_knots.end(),
                          kn.begin(), kn.end()));
    }

    // Loss path is nonincreasing in the budget.
    for (std::size_t k = 1; k < n; ++k) {
      CHECK(path.loss_at(k + 1) <= path.loss_at(k) + 1e-12);
    }
  }
}

TEST_CASE("midpoint inequalities at interior knots") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = testutil::random_size(rng, 2, 50);
    auto vals = trial % 2 == 0 ? testutil::continuous_values(rng, n)
                               : testutil::grid_values(rng, n);
    Series x(vals);
    ReducedPath path = riso::fit_all_k(x);
    auto prefix = riso::prefix_sums(vals, [](double v) { return v; });
    auto mean = [&](std::size_t a, std::size_t b) {  // over (a, b], 1-based
      return (prefix[b] - prefix[a]) / static_cast<double>(b - a);
    };

    for (std::size_t k = 1; k <= path.n_blocks; ++k) {
      FitResult f = riso::fit_from_path(path, x, k);
      const auto& kn = f.fit.knots();
      for (std::size_t j = 0; j + 1 < kn.size(); ++j) {
        double mid = 0.5 * (f.fit.levels()[j] + f.fit.levels()[j + 1]);
        double worst_left = -1e300;
        for (std::size_t s = 0; s < kn[j]; ++s) {
          worst_left = std::max(worst_left, mean(s, kn[j]));
        }
        double worst_right = 1e300;
        for (std::size_t t = kn[j] + 1; t <= n; ++t) {
          worst_right = std::min(worst_right, mean(kn[j], t));
        }
        CHECK(worst_left - mid <= 1e-12);
        CHECK(mid - worst_right <= 1e-12);
      }
    }
  }
}

TEST_CASE("tie-breaking picks the leftmost split") {
  // Four identical values; every split position ties, so the chosen knots
  // must be the smallest in lexicographic order.
  Series x({0.0, 0.0, 0.0, 0.0});
  ReducedPath path = riso::fit_all_k(x);
  CHECK(path.n_blocks == 1);

  // A strictly increasing ramp keeps all blocks distinct; k = 2 then has a
  // symmetric tie on [0,1,2,3] between splitting after 2 and after... the
  // costs differ, so check a genuinely tied case instead.
  Series y({0.0, 1.0, 2.0, 3.0});
  ReducedPath py = riso::fit_all_k(y);
  // split after 2 gives (0,1)(2,3): sse 0.5+0.5 = 1.0
  // split after 1 gives (0)(1,2,3): sse 0 + 2 = 2
  // split after 3 gives (0,1,2)(3): sse 2 + 0 = 2
  CHECK(py.knots_for(2) == std::vector<std::size_t>{2, 4});
  CHECK(py.loss_at(2) == doctest::Approx(1.0).epsilon(1e-12));
  // k = 3 ties between {1,2,4} and {2,3,4}; leftmost wins.
  CHECK(py.knots_for(3) == std::vector<std::size_t>{1, 2, 4});
}

TEST_CASE("path losses match refit residuals") {
  std::mt19937_64 rng(5555);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = testutil::random_size(rng, 1, 40);
    Series x(testutil::continuous_values(rng, n));
    ReducedPath path = riso::fit_all_k(x);
    for (std::size_t k = 1; k <= path.n_blocks; ++k) {
      FitResult f = riso::fit_from_path(path, x, k);
      CHECK(testutil::close(f.sse, path.loss_at(k), 1e-9));
      CHECK(testutil::close(f.sse, riso::sse(f.fit, x), 1e-9));
    }
  }
}
