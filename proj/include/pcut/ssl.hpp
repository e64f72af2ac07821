#pragma once

#include <Eigen/Dense>

#include "pcut/dataset.hpp"
#include "pcut/graph.hpp"
#include "pcut/spectral.hpp"

namespace pcut {

struct SSLProblem {
  const Graph& graph;
  const LabelMask& mask;
  int K;
};

/// Harmonic label propagation (Gaussian random fields): solve
/// L_uu F_u = -L_ul Y_l per class column, assign by row-wise argmax
/// (ties to the lower class index). Components with no labeled node take the
/// globally most frequent seed class. Returns the scores too when requested.
Partition grf_propagate(const SSLProblem& problem,
                        Eigen::MatrixXd* scores = nullptr);

// fraction of unlabeled nodes whose predicted class differs from the truth
double ssl_error_rate(const Partition& p, const Dataset& ds,
                      const LabelMask& mask);

}  // namespace pcut
