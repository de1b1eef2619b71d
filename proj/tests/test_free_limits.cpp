#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "freefock/free_limits.hpp"

using namespace freefock;

TEST_CASE("walk summand count is the number of grid points before t") {
  CHECK(walk_summands(1, 1.0) == 1);
  CHECK(walk_summands(8, 1.0) == 8);
  CHECK(walk_summands(2, 0.5) == 1);
  CHECK(walk_summands(3, 0.5) == 2);
  CHECK(walk_summands(4, 0.75) == 3);
  CHECK(walk_summands(1000000, 1.0) == 1000000);
  CHECK(walk_summands(2, 1.25) == 3);
  CHECK_THROWS_AS(walk_summands(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(walk_summands(2, 0.0), std::invalid_argument);
}

TEST_CASE("step matrices and their two-atom laws agree") {
  {
    const auto mu = step_law(WalkKind::brownian, 3);
    REQUIRE(mu.size() == 2);
    CHECK(mu[0].location == -1.0);
    CHECK(mu[1].location == 1.0);
    const auto m = walk_step_matrix(WalkKind::brownian, 3, 0);
    for (int k = 0; k <= 10; ++k)
      CHECK(m.power(k).vacuum_entry().real() == Catch::Approx(law_moment(mu, k)).margin(1e-12));
  }
  {
    const auto mu1 = step_law(WalkKind::poisson, 1);
    CHECK(mu1[0].location == 2.0);
    CHECK(mu1[0].weight == 0.5);
    CHECK(mu1[1].location == 0.0);
    for (int k = 1; k <= 4; ++k) CHECK(law_moment(mu1, k) == Catch::Approx(std::pow(2.0, k - 1)));

    const auto mu4 = step_law(WalkKind::poisson, 4);
    CHECK(mu4[0].location == 2.5);
    CHECK(mu4[0].weight == 0.2);
    CHECK(mu4[1].weight == 0.8);

    for (int n : {1, 2, 4}) {
      const auto mu = step_law(WalkKind::poisson, n);
      const auto m = walk_step_matrix(WalkKind::poisson, n, 0);
      for (int k = 0; k <= 10; ++k) {
        const double want = law_moment(mu, k);
        CHECK(m.power(k).vacuum_entry().real() ==
              Catch::Approx(want).margin(1e-12 * std::max(1.0, std::abs(want))));
      }
    }
  }
}

TEST_CASE("poisson step moments have the closed product form") {
  for (int n : {1, 2, 4}) {
    const auto m = walk_step_matrix(WalkKind::poisson, n, 0);
    const double base = (n + 1.0) / std::sqrt(static_cast<double>(n));
    double pw = 1.0;
    for (int k = 1; k <= 8; ++k) {
      pw *= base;
      const double want = pw / (n + 1.0);
      CHECK(m.power(k).vacuum_entry().real() == Catch::Approx(want).epsilon(1e-12));
    }
  }
  // single summand at rate one, third power
  CHECK(walk_step_matrix(WalkKind::poisson, 1, 0).power(3).vacuum_entry().real() == Catch::Approx(4.0));
}

TEST_CASE("walk moments match the free-cumulant oracle") {
  for (WalkKind kind : {WalkKind::brownian, WalkKind::poisson})
    for (int n : {1, 2, 4, 8}) {
      const auto oracle = walk_moments_oracle(kind, n, 1.0, 8);
      for (int k = 1; k <= 8; ++k) {
        const double direct = walk_moment(kind, n, 1.0, k);
        CHECK(direct == Catch::Approx(oracle[k - 1]).margin(1e-9 * std::max(1.0, std::abs(oracle[k - 1]))));
      }
    }

  CHECK(walk_moment(WalkKind::brownian, 1, 1.0, 2) == Catch::Approx(1.0));
  CHECK(walk_moment(WalkKind::brownian, 2, 1.0, 4) == Catch::Approx(1.5));
  for (int n : {1, 2, 4, 8})
    CHECK(walk_moment(WalkKind::brownian, n, 1.0, 4) == Catch::Approx(2.0 - 1.0 / n).margin(1e-12));
}

TEST_CASE("walk moments scale with time") {
  CHECK(walk_moment(WalkKind::brownian, 4, 0.5, 2) == Catch::Approx(0.5).margin(1e-13));
  CHECK(walk_moment(WalkKind::brownian, 8, 0.25, 2) == Catch::Approx(0.25).margin(1e-13));
  CHECK(walk_moment(WalkKind::poisson, 4, 0.5, 1) == Catch::Approx(0.5).margin(1e-13));
}

TEST_CASE("odd bernoulli walk moments vanish") {
  for (int n : {1, 2, 4, 8})
    for (double t : {0.5, 1.0})
      for (int k : {1, 3, 5, 7}) CHECK(std::abs(walk_moment(WalkKind::brownian, n, t, k)) < 1e-12);
}

TEST_CASE("bernoulli walk approaches the semicircle") {
  for (int k : {2, 4, 6, 8}) {
    const double target = semicircle_moment(1.0, k);
    double prev = std::abs(walk_moment(WalkKind::brownian, 1, 1.0, k) - target);
    for (int n : {2, 4, 8}) {
      const double gap = std::abs(walk_moment(WalkKind::brownian, n, 1.0, k) - target);
      CHECK(gap <= prev + 1e-12);
      prev = gap;
    }
  }
  const auto far = walk_moments_oracle(WalkKind::brownian, 1000000, 1.0, 8);
  for (int k = 1; k <= 8; ++k)
    CHECK(far[k - 1] == Catch::Approx(semicircle_moment(1.0, k)).margin(1e-3));
}

TEST_CASE("poisson walk approaches the free poisson law") {
  const auto far = walk_moments_oracle(WalkKind::poisson, 1000000, 1.0, 8);
  for (int k = 1; k <= 8; ++k)
    CHECK(far[k - 1] ==
          Catch::Approx(free_poisson_moment(1.0, k)).margin(1e-3 * std::max(1.0, free_poisson_moment(1.0, k))));
}

TEST_CASE("limit moment formulas") {
  CHECK(semicircle_moment(1.0, 2) == 1.0);
  CHECK(semicircle_moment(1.0, 4) == 2.0);
  CHECK(semicircle_moment(1.0, 6) == 5.0);
  CHECK(semicircle_moment(1.0, 8) == 14.0);
  CHECK(semicircle_moment(4.0, 2) == 4.0);
  CHECK(semicircle_moment(2.0, 3) == 0.0);

  CHECK(free_poisson_moment(1.0, 1) == 1.0);
  CHECK(free_poisson_moment(1.0, 3) == 5.0);
  CHECK(free_poisson_moment(0.5, 2) == Catch::Approx(0.75));
  for (int k = 1; k <= 8; ++k)
    CHECK(free_poisson_moment(1.0, k) == Catch::Approx(static_cast<double>(catalan(k))));
  CHECK_THROWS_AS(free_poisson_moment(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(semicircle_moment(1.0, -1), std::invalid_argument);
}

TEST_CASE("adaptive midpoint integrates smooth functions") {
  const double third = adaptive_midpoint([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(third == Catch::Approx(1.0 / 3.0).margin(1e-10));
  CHECK(adaptive_midpoint([](double) { return 1.0; }, 2.0, 2.0, 1e-9) == 0.0);
}

TEST_CASE("semicircle density reproduces its moments by quadrature") {
  for (int k = 0; k <= 8; ++k)
    CHECK(semicircle_moment_quad(k) == Catch::Approx(semicircle_moment(1.0, k)).margin(1e-8));
}

TEST_CASE("free poisson density reproduces the partition sums by quadrature") {
  for (double lambda : {0.5, 1.0, 2.0})
    for (int k = 0; k <= 6; ++k) {
      const double want = free_poisson_moment(lambda, k);
      const double tol = 1e-7 * std::max(1.0, std::abs(want));
      CHECK(free_poisson_moment_quad(lambda, k, tol) ==
            Catch::Approx(want).margin(1e-6 * std::max(1.0, std::abs(want))));
    }
  // the continuous part alone carries mass lambda when lambda < 1
  const double mass = adaptive_midpoint([](double x) { return free_poisson_density(0.5, x); }, 0.0, 4.0, 1e-9);
  CHECK(mass == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("pair matrices commute exactly in one family only") {
  const auto c = commutator(commuting_pair_matrix(1), commuting_pair_matrix(2));
  CHECK(c.is_zero(0.0));

  const auto nc = commutator(noncommuting_pair_matrix(1), noncommuting_pair_matrix(2));
  CHECK(nc.frobenius_norm() == Catch::Approx(std::sqrt(2.0)));

  const auto prod = commuting_pair_matrix(1) * commuting_pair_matrix(2);
  CHECK(prod(0, 2).real() == -1.0);
  CHECK(prod(1, 2).real() == 1.0);
  CHECK(prod(2, 0).real() == -1.0);
  CHECK(prod(2, 1).real() == 1.0);
  CHECK(prod(2, 2).real() == 1.0);
  CHECK(prod(0, 0) == Complex{});

  CHECK_THROWS_AS(commuting_pair_matrix(3), std::invalid_argument);
}

TEST_CASE("commuting pair joint moments equal the three-atom law") {
  CHECK(pair_law_moment(0, 0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(pair_law_moment(1, 0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(pair_law_moment(0, 1) == Catch::Approx(0.0).margin(1e-15));
  CHECK(pair_law_moment(2, 0) == Catch::Approx(1.0));
  CHECK(pair_law_moment(0, 2) == Catch::Approx(1.0));
  CHECK(pair_law_moment(1, 1) == Catch::Approx(0.0).margin(1e-15));

  const auto demo = multiplicity_demo();
  CHECK(demo.commuting_commutator_norm == 0.0);
  CHECK(demo.noncommuting_commutator_norm == Catch::Approx(std::sqrt(2.0)));
  REQUIRE(demo.joint.size() == 28);  // all (m, n) with m + n <= 6
  for (const auto& row : demo.joint)
    CHECK(row.matrix_value == Catch::Approx(row.law_value).margin(1e-12));
}

TEST_CASE("two dimensional walks separate colors") {
  for (PairFamily fam : {PairFamily::noncommuting, PairFamily::commuting})
    for (int n : {2, 4}) {
      CHECK(std::abs(pair_mixed_moment(fam, {1, 2}, n, 1.0)) < 1e-13);
      CHECK(std::abs(pair_mixed_moment(fam, {2, 1}, n, 1.0)) < 1e-13);
      CHECK(pair_mixed_moment(fam, {1, 1}, n, 1.0) == Catch::Approx(1.0).margin(1e-12));
      CHECK(pair_mixed_moment(fam, {2, 2}, n, 1.0) == Catch::Approx(1.0).margin(1e-12));
    }
  CHECK(pair_mixed_moment(PairFamily::commuting, {1, 1}, 4, 0.5) == Catch::Approx(0.5).margin(1e-13));
  CHECK(pair_mixed_moment(PairFamily::noncommuting, {1, 2, 1, 2}, 4, 1.0) ==
        Catch::Approx(0.0).margin(1e-13));
  CHECK(pair_mixed_moment(PairFamily::noncommuting, {1, 1, 2, 2}, 4, 1.0) ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(pair_mixed_moment(PairFamily::commuting, {}, 4, 1.0) == 1.0);
}

TEST_CASE("walk evaluation budgets throw") {
  CHECK_THROWS_AS(walk_moment(WalkKind::brownian, 9, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(walk_moment(WalkKind::brownian, 8, 1.0, 9), std::invalid_argument);
  CHECK_THROWS_AS(walk_moments_oracle(WalkKind::brownian, 4, 1.0, 13), std::invalid_argument);
  CHECK_THROWS_AS(pair_mixed_moment(PairFamily::commuting, {1, 2}, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pair_mixed_moment(PairFamily::commuting, {1, 2, 1, 2, 1, 2, 1}, 4, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pair_mixed_moment(PairFamily::commuting, {3}, 4, 1.0), std::invalid_argument);
}
