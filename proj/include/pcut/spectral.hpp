#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "pcut/graph.hpp"

namespace pcut {

enum class Objective { rcut, ncut };

/// K-way node assignment plus the graph parameters that produced it.
struct Partition {
  std::vector<int> assignment;  // n entries in 0..K-1
  int K = 0;
  GraphParams provenance;
  Objective objective = Objective::rcut;

  std::vector<int> cluster_sizes() const;
  int min_cluster_size() const;
};

struct SpectralEmbedding {
  Eigen::MatrixXd vectors;     // n x K, rows = nodes
  Eigen::VectorXd eigenvalues; // ascending
};

// rcut -> L = D - W; ncut -> L_sym = I - D^{-1/2} W D^{-1/2}
// (isolated nodes get D^{-1/2} = 0).
Eigen::SparseMatrix<double> laplacian(const Graph& g, Objective obj);

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // matching columns
};

// K smallest eigenpairs of a symmetric PSD sparse matrix. Dense solver for
// small n, shift-invert Lanczos with full reorthogonalization otherwise;
// residual-checked (|Av - lv| <= 1e-6 |v|) with a dense fallback.
EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& L, int K);

SpectralEmbedding embed(const Graph& g, int K, Objective obj);

Partition kmeans(const SpectralEmbedding& emb, int K, int restarts,
                 std::uint64_t seed);

Partition spectral_cluster(const Graph& g, int K, Objective obj,
                           std::uint64_t seed, int restarts = 10);

// Eq.-4 style objective value of a partition; +inf when a cluster is empty
// (zero volume for ncut).
double rcut_ncut_value(const Graph& g, const Partition& p);

}  // namespace pcut
