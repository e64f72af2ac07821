#pragma once

#include <Eigen/Dense>

#include "pcut/dataset.hpp"
#include "pcut/graph.hpp"

namespace pcut {

/// Per-node density surrogate eta and empirical rank in [1/n, 1].
/// High rank = high density (small eta).
struct RankVector {
  Eigen::VectorXd eta;
  Eigen::VectorXd rank;

  int n() const { return static_cast<int>(rank.size()); }
};

// Average distance from each node to its baseline-graph neighbors.
// weighted mode uses the (l/i)^(1/d)-weighted order-statistic window over
// the sorted neighbor distances, l = floor(|N(v)|/2), indices clamped to
// the available neighbor list.
Eigen::VectorXd compute_eta(const Dataset& ds, const Graph& baseline,
                            bool weighted = false);

// rank[v] = |{w : eta[v] <= eta[w]}| / n (self included, so min rank 1/n;
// ties share the higher rank).
RankVector compute_rank(const Eigen::VectorXd& eta);

RankVector compute_rank(const Dataset& ds, const Graph& baseline,
                        bool weighted = false);

// p(y) = mass of the density sublevel set {x : f(x) <= f(y)}, the population
// limit of the empirical rank. Closed form for a single component or d=1
// single-Gaussian; numeric level-mass quadrature otherwise (d <= 2).
double analytic_pvalue(const GaussianMixtureSpec& spec,
                       const Eigen::VectorXd& y);

}  // namespace pcut
