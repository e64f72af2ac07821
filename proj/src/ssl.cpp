#include "pcut/ssl.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <vector>

#include "pcut/errors.hpp"

namespace pcut {

Partition grf_propagate(const SSLProblem& problem, Eigen::MatrixXd* scores) {
  const Graph& g = problem.graph;
  const LabelMask& mask = problem.mask;
  const int n = g.n;
  const int K = problem.K;
  mask.validate(n, K);

  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, K);
  std::vector<char> labeled(n, 0);
  for (const auto& [id, cls] : mask.labels) {
    labeled[id] = 1;
    F(id, cls) = 1.0;
  }

  // most frequent seed class, ties to the lower index
  int majority = 0;
  {
    std::vector<int> counts(K, 0);
    for (const auto& [id, cls] : mask.labels) counts[cls] += 1;
    majority = static_cast<int>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
  }

  std::vector<int> comp;
  connected_components(g, &comp);
  const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<char> comp_labeled(ncomp, 0);
  for (const auto& [id, cls] : mask.labels) comp_labeled[comp[id]] = 1;

  // unlabeled nodes of labeled components form the harmonic system
  std::vector<int> unl;
  for (int v = 0; v < n; ++v)
    if (!labeled[v] && comp_labeled[comp[v]]) unl.push_back(v);

  if (!unl.empty()) {
    const int m = static_cast<int>(unl.size());
    std::vector<int> pos(n, -1);
    for (int i = 0; i < m; ++i) pos[unl[i]] = i;
    Eigen::VectorXd deg = g.degrees();
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, K);
    for (int i = 0; i < m; ++i) {
      int v = unl[i];
      trips.emplace_back(i, i, deg(v));
      for (Eigen::SparseMatrix<double>::InnerIterator it(g.adj, v); it; ++it) {
        int u = static_cast<int>(it.row());
        if (pos[u] >= 0) {
          trips.emplace_back(i, pos[u], -it.value());
        } else if (labeled[u]) {
          // -L_ul Y_l contribution
          rhs.row(i) += it.value() * F.row(u);
        }
      }
    }
    Eigen::SparseMatrix<double> Luu(m, m);
    Luu.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Luu);
    if (solver.info() != Eigen::Success)
      throw NumericalError("L_uu factorization failed");
    Eigen::MatrixXd Fu = solver.solve(rhs);
    if (solver.info() != Eigen::Success ||
        (Luu * Fu - rhs).norm() > 1e-10 * (1.0 + rhs.norm()))
      throw NumericalError("harmonic solve did not reach residual 1e-10");
    for (int i = 0; i < m; ++i) F.row(unl[i]) = Fu.row(i);
  }

  Partition p;
  p.K = K;
  p.objective = Objective::rcut;
  p.provenance = g.params;
  p.assignment.resize(n);
  for (int v = 0; v < n; ++v) {
    if (!comp_labeled[comp[v]] && !labeled[v]) {
      p.assignment[v] = majority;
      F(v, majority) = 1.0;
      continue;
    }
    int best = 0;
    for (int c = 1; c < K; ++c)
      if (F(v, c) > F(v, best)) best = c;
    p.assignment[v] = best;
  }
  // labeled nodes keep their labels
  for (const auto& [id, cls] : mask.labels) p.assignment[id] = cls;
  if (scores) *scores = F;
  return p;
}

double ssl_error_rate(const Partition& p, const Dataset& ds,
                      const LabelMask& mask) {
  if (!ds.has_labels()) throw DataError("dataset has no true labels");
  if (static_cast<int>(p.assignment.size()) != ds.n())
    throw ShapeError("partition size mismatch");
  int wrong = 0, total = 0;
  for (int v = 0; v < ds.n(); ++v) {
    if (mask.labels.count(v)) continue;
    total += 1;
    if (p.assignment[v] != ds.true_labels[v]) wrong += 1;
  }
  return total == 0 ? 0.0 : static_cast<double>(wrong) / total;
}

}  // namespace pcut
