#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <string>
#include <vector>

#include "pcut/dataset.hpp"

namespace pcut {

enum class GraphKind { baseline_knn, rmd, knn, epsilon, full_rbf, full_arbf };

std::string to_string(GraphKind k);

struct GraphParams {
  GraphKind kind = GraphKind::knn;
  std::optional<double> lambda;  // in [0,1], RMD only
  std::optional<int> k;
  std::optional<double> sigma;    // RBF scale; absent -> binary weights
  std::optional<double> epsilon;  // epsilon-graph radius
};

/// Weighted undirected graph over a dataset's node set.
/// adj is symmetric with zero diagonal; weights are strictly positive.
struct Graph {
  int n = 0;
  GraphParams params;
  Eigen::SparseMatrix<double> adj;

  Eigen::VectorXd degrees() const;  // weighted degree per node
  bool has_edges() const { return adj.nonZeros() > 0; }
};

/// Per-node nearest-neighbor lists (self excluded), precomputed once per
/// dataset so every graph in a parameter sweep is a cheap slice. Exact
/// O(n^2) search; ties broken by lower node id.
struct NeighborIndex {
  Eigen::MatrixXi ids;    // n x kmax, v's neighbors in ascending distance
  Eigen::MatrixXd dists;  // matching distances
  int kmax = 0;

  NeighborIndex(const Dataset& ds, int kmax);

  // mean distance to the k-th nearest neighbor (the RBF scale d~_k)
  double mean_knn_distance(int k) const;
};

struct RankVector;  // rank_estimation

Graph build_baseline(const Dataset& ds, int k0);
Graph build_baseline(const NeighborIndex& index, int k0);

// Eq-style target degrees round(k * (lambda + 2(1-lambda) rank_v)),
// clamped to [1, n-1].
std::vector<int> modulated_degrees(const RankVector& rank, double lambda,
                                   int k, int n);

Graph build_rmd(const Dataset& ds, const RankVector& rank,
                const GraphParams& params);
Graph build_rmd(const NeighborIndex& index, const RankVector& rank,
                const GraphParams& params);

Graph build_knn(const Dataset& ds, const GraphParams& params);
Graph build_knn(const NeighborIndex& index, const GraphParams& params);
Graph build_epsilon(const Dataset& ds, const GraphParams& params);
Graph build_full_rbf(const Dataset& ds, const GraphParams& params);
Graph build_full_arbf(const Dataset& ds, const GraphParams& params);

struct Partition;  // spectral_engine

/// Cut value: K=2 -> sum of crossing-edge weights; K>2 -> sum over clusters
/// of Cut(C_i, C-bar_i), i.e. twice the total crossing weight.
double cut_value(const Graph& g, const Partition& p);

/// Selection objective evaluated on the baseline graph: always the K-way sum
/// over clusters (twice the crossing weight, for any K).
double cut0_objective(const Graph& g, const Partition& p);

int connected_components(const Graph& g, std::vector<int>* comp = nullptr);

void save_edge_list(const Graph& g, const std::string& path);
Graph load_edge_list(const std::string& path);

}  // namespace pcut
