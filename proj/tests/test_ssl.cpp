#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcut/dataset.hpp"
#include "pcut/graph.hpp"
#include "pcut/rng.hpp"
#include "pcut/ssl.hpp"

using namespace pcut;

namespace {

Graph from_triplets(int n, std::vector<Eigen::Triplet<double>> t) {
  Graph g;
  g.n = n;
  g.adj.resize(n, n);
  g.adj.setFromTriplets(t.begin(), t.end());
  return g;
}

Graph path_graph(int n) {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i + 1 < n; ++i) {
    t.push_back({i, i + 1, 1.0});
    t.push_back({i + 1, i, 1.0});
  }
  return from_triplets(n, std::move(t));
}

Graph two_cliques(int a, int b) {
  std::vector<Eigen::Triplet<double>> t;
  for (int u = 0; u < a; ++u)
    for (int v = 0; v < a; ++v)
      if (u != v) t.push_back({u, v, 1.0});
  for (int u = 0; u < b; ++u)
    for (int v = 0; v < b; ++v)
      if (u != v) t.push_back({a + u, a + v, 1.0});
  return from_triplets(a + b, std::move(t));
}

}  // namespace

TEST_CASE("middle of a labeled path splits 50/50 and ties to class 0") {
  Graph g = path_graph(3);
  LabelMask mask;
  mask.labels = {{0, 0}, {2, 1}};
  Eigen::MatrixXd scores;
  Partition p = grf_propagate({g, mask, 2}, &scores);
  CHECK(scores(1, 0) == doctest::Approx(0.5));
  CHECK(scores(1, 1) == doctest::Approx(0.5));
  CHECK(p.assignment == std::vector<int>{0, 0, 1});
}

TEST_CASE("harmonic interpolation on a longer path") {
  Graph g = path_graph(5);
  LabelMask mask;
  mask.labels = {{0, 0}, {4, 1}};
  Eigen::MatrixXd scores;
  Partition p = grf_propagate({g, mask, 2}, &scores);
  // class-1 score rises linearly along the path
  for (int v = 0; v < 5; ++v)
    CHECK(scores(v, 1) == doctest::Approx(v / 4.0));
  CHECK(p.assignment == std::vector<int>{0, 0, 0, 1, 1});
}

TEST_CASE("fully labeled problem is returned exactly") {
  Graph g = path_graph(4);
  LabelMask mask;
  mask.labels = {{0, 1}, {1, 0}, {2, 1}, {3, 0}};
  Partition p = grf_propagate({g, mask, 2});
  CHECK(p.assignment == std::vector<int>{1, 0, 1, 0});
}

TEST_CASE("one label per clique labels both cliques") {
  Graph g = two_cliques(6, 4);
  LabelMask mask;
  mask.labels = {{0, 0}, {6, 1}};
  Partition p = grf_propagate({g, mask, 2});
  for (int v = 0; v < 6; ++v) CHECK(p.assignment[v] == 0);
  for (int v = 6; v < 10; ++v) CHECK(p.assignment[v] == 1);
}

TEST_CASE("unseeded component falls back to the majority seed class") {
  Graph g = two_cliques(5, 3);
  LabelMask mask;
  mask.labels = {{0, 1}, {1, 1}, {2, 0}};  // all in the first clique
  Partition p = grf_propagate({g, mask, 2});
  for (int v = 5; v < 8; ++v) CHECK(p.assignment[v] == 1);
}

TEST_CASE("maximum principle and row-stochastic scores") {
  Rng rng(9);
  Dataset ds;
  ds.points.resize(60, 2);
  for (int i = 0; i < 60; ++i) {
    double cx = i < 30 ? 0.0 : 4.0;
    ds.points(i, 0) = cx + rng.gaussian();
    ds.points(i, 1) = rng.gaussian();
  }
  GraphParams gp;
  gp.kind = GraphKind::knn;
  gp.k = 5;
  gp.sigma = 1.0;
  Graph g = build_knn(ds, gp);
  LabelMask mask;
  mask.labels = {{0, 0}, {3, 0}, {31, 1}, {40, 1}};
  Eigen::MatrixXd scores;
  grf_propagate({g, mask, 2}, &scores);
  for (int v = 0; v < 60; ++v) {
    for (int c = 0; c < 2; ++c) {
      CHECK(scores(v, c) >= -1e-9);
      CHECK(scores(v, c) <= 1.0 + 1e-9);
    }
    CHECK(scores.row(v).sum() == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("labeled nodes keep their labels") {
  Graph g = two_cliques(6, 4);
  LabelMask mask;
  // a deliberately wrong seed inside the first clique
  mask.labels = {{0, 0}, {1, 1}, {6, 1}, {7, 0}};
  Partition p = grf_propagate({g, mask, 2});
  CHECK(p.assignment[0] == 0);
  CHECK(p.assignment[1] == 1);
  CHECK(p.assignment[6] == 1);
  CHECK(p.assignment[7] == 0);
}

TEST_CASE("ssl error rate counts only unlabeled nodes") {
  Dataset ds;
  ds.points.resize(10, 1);
  ds.points.setZero();
  ds.true_labels = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  LabelMask mask;
  mask.labels = {{0, 0}, {5, 1}};
  Partition p;
  p.K = 2;
  p.assignment = ds.true_labels;
  CHECK(ssl_error_rate(p, ds, mask) == doctest::Approx(0.0));
  // flip every unlabeled prediction
  for (int v = 0; v < 10; ++v)
    if (!mask.labels.count(v)) p.assignment[v] = 1 - p.assignment[v];
  CHECK(ssl_error_rate(p, ds, mask) == doctest::Approx(1.0));
  // flip 4 of 8 unlabeled back
  p.assignment[1] = 0;
  p.assignment[2] = 0;
  p.assignment[6] = 1;
  p.assignment[7] = 1;
  CHECK(ssl_error_rate(p, ds, mask) == doctest::Approx(0.5));
}
