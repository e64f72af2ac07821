#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "pcut/dataset.hpp"
#include "pcut/density.hpp"
#include "pcut/errors.hpp"
#include "pcut/graph.hpp"
#include "pcut/rank.hpp"
#include "pcut/rng.hpp"

using namespace pcut;

namespace {

Dataset collinear3() {
  Dataset ds;
  ds.points.resize(3, 1);
  ds.points << 0, 1, 3;
  return ds;
}

Dataset random_dataset(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.points.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) ds.points(i, j) = rng.gaussian();
  return ds;
}

}  // namespace

TEST_CASE("eta on three collinear points with 1-NN baseline") {
  Dataset ds = collinear3();
  Graph baseline = build_baseline(ds, 1);
  // union symmetrization leaves node 1 with neighbors {0, 2}
  Eigen::VectorXd eta = compute_eta(ds, baseline);
  CHECK(eta(0) == doctest::Approx(1.0));
  CHECK(eta(1) == doctest::Approx(1.5));
  CHECK(eta(2) == doctest::Approx(2.0));
}

TEST_CASE("constant pairwise distances give constant eta") {
  // equilateral triangle
  Dataset ds;
  ds.points.resize(3, 2);
  ds.points << 0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2;
  Graph baseline = build_baseline(ds, 2);
  Eigen::VectorXd eta = compute_eta(ds, baseline);
  for (int v = 0; v < 3; ++v) CHECK(eta(v) == doctest::Approx(1.0));
}

TEST_CASE("duplicate points give zero eta") {
  Dataset ds;
  ds.points.resize(3, 2);
  ds.points << 1, 1, 1, 1, 5, 5;
  Graph baseline = build_baseline(ds, 1);
  // node 2's nearest neighbor is node 0 (tie to lower id), so after the
  // union node 0 averages distances 0 and sqrt(32) while node 1 keeps 0
  Eigen::VectorXd eta = compute_eta(ds, baseline);
  CHECK(eta(1) == 0.0);
  CHECK(eta(0) == doctest::Approx(std::sqrt(32.0) / 2.0));
  CHECK(eta(2) == doctest::Approx(std::sqrt(32.0)));
}

TEST_CASE("rank from eta: ties share the higher rank") {
  Eigen::VectorXd eta(3);
  eta << 1, 1, 2;
  RankVector rv = compute_rank(eta);
  CHECK(rv.rank(0) == doctest::Approx(1.0));
  CHECK(rv.rank(1) == doctest::Approx(1.0));
  CHECK(rv.rank(2) == doctest::Approx(1.0 / 3));
}

TEST_CASE("all-equal eta ranks everyone at 1") {
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(5, 2.5);
  RankVector rv = compute_rank(eta);
  for (int v = 0; v < 5; ++v) CHECK(rv.rank(v) == doctest::Approx(1.0));
}

TEST_CASE("strictly increasing eta gives descending ranks") {
  Eigen::VectorXd eta(4);
  eta << 1, 2, 3, 4;
  RankVector rv = compute_rank(eta);
  CHECK(rv.rank(0) == doctest::Approx(1.0));
  CHECK(rv.rank(1) == doctest::Approx(0.75));
  CHECK(rv.rank(2) == doctest::Approx(0.5));
  CHECK(rv.rank(3) == doctest::Approx(0.25));
}

TEST_CASE("rank uniformity without ties") {
  Dataset ds = random_dataset(60, 3, 17);
  Graph baseline = build_baseline(ds, 8);
  RankVector rv = compute_rank(ds, baseline);
  std::vector<double> sorted(rv.rank.data(), rv.rank.data() + rv.n());
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < rv.n(); ++i)
    CHECK(sorted[i] == doctest::Approx((i + 1.0) / rv.n()));
}

TEST_CASE("eta monotonicity implies rank anti-monotonicity") {
  Dataset ds = random_dataset(40, 2, 23);
  Graph baseline = build_baseline(ds, 5);
  RankVector rv = compute_rank(ds, baseline);
  for (int u = 0; u < rv.n(); ++u)
    for (int v = 0; v < rv.n(); ++v)
      if (rv.eta(u) < rv.eta(v)) CHECK(rv.rank(u) > rv.rank(v));
}

TEST_CASE("scaling coordinates scales eta and fixes ranks") {
  Dataset ds = random_dataset(30, 2, 31);
  Dataset scaled = ds;
  scaled.points *= 3.5;
  Graph b1 = build_baseline(ds, 4);
  Graph b2 = build_baseline(scaled, 4);
  RankVector r1 = compute_rank(ds, b1);
  RankVector r2 = compute_rank(scaled, b2);
  for (int v = 0; v < 30; ++v) {
    CHECK(r2.eta(v) == doctest::Approx(3.5 * r1.eta(v)));
    CHECK(r2.rank(v) == doctest::Approx(r1.rank(v)));
  }
}

TEST_CASE("weighted eta on a hand-computed example") {
  // 5 collinear points, baseline connects everyone: distances from node 0
  // are 1,2,3,4 -> m=4, l=2, window i in {2,3}
  Dataset ds;
  ds.points.resize(5, 1);
  ds.points << 0, 1, 2, 3, 4;
  Graph baseline = build_baseline(ds, 4);
  Eigen::VectorXd eta = compute_eta(ds, baseline, true);
  double expect0 = 0.5 * ((2.0 / 2.0) * 2.0 + (2.0 / 3.0) * 3.0);
  CHECK(eta(0) == doctest::Approx(expect0));
}

TEST_CASE("isolated node raises") {
  Dataset ds = collinear3();
  Graph g;
  g.n = 3;
  g.adj.resize(3, 3);
  std::vector<Eigen::Triplet<double>> trips = {{0, 1, 1.0}, {1, 0, 1.0}};
  g.adj.setFromTriplets(trips.begin(), trips.end());
  CHECK_THROWS_AS(compute_eta(ds, g), IsolatedNodeError);
}

TEST_CASE("analytic p-value of the standard 1-D Gaussian") {
  GaussianMixtureSpec s;
  s.weights = {1.0};
  s.means = {Eigen::VectorXd::Zero(1)};
  s.covariances = {Eigen::VectorXd::Ones(1)};
  Eigen::VectorXd y(1);
  y << 0.0;
  CHECK(analytic_pvalue(s, y) == doctest::Approx(1.0));
  y << 1.96;
  CHECK(analytic_pvalue(s, y) ==
        doctest::Approx(2.0 * (1.0 - normal_cdf(1.96))).epsilon(1e-6));
  CHECK(analytic_pvalue(s, y) == doctest::Approx(0.05).epsilon(0.01));
  y << 10.0;
  CHECK(analytic_pvalue(s, y) < 1e-6);
}

TEST_CASE("numeric p-value agrees with the closed form") {
  // a fake two-component mixture that is really one Gaussian forces the
  // level-mass path; compare against the chi-square closed form
  GaussianMixtureSpec s;
  s.weights = {0.5, 0.5};
  s.means = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  s.covariances = {Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)};
  GaussianMixtureSpec single;
  single.weights = {1.0};
  single.means = {Eigen::VectorXd::Zero(1)};
  single.covariances = {Eigen::VectorXd::Ones(1)};
  for (double yy : {0.3, 1.0, 2.2}) {
    Eigen::VectorXd y(1);
    y << yy;
    CHECK(analytic_pvalue(s, y) ==
          doctest::Approx(analytic_pvalue(single, y)).epsilon(1e-3));
  }
}
