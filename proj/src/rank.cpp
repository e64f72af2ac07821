#include "pcut/rank.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pcut/density.hpp"
#include "pcut/errors.hpp"

namespace pcut {

Eigen::VectorXd compute_eta(const Dataset& ds, const Graph& baseline,
                            bool weighted) {
  const int n = ds.n();
  if (baseline.n != n) throw ShapeError("baseline graph size mismatch");
  const int d = ds.dim();
  Eigen::VectorXd eta(n);
  std::vector<double> nbr_dists;
  for (int v = 0; v < n; ++v) {
    nbr_dists.clear();
    for (Eigen::SparseMatrix<double>::InnerIterator it(baseline.adj, v); it;
         ++it) {
      int u = static_cast<int>(it.row());
      nbr_dists.push_back((ds.points.row(v) - ds.points.row(u)).norm());
    }
    const int m = static_cast<int>(nbr_dists.size());
    if (m == 0) throw IsolatedNodeError(v);
    const int l = m / 2;
    if (!weighted || l < 1) {
      double sum = 0.0;
      for (double x : nbr_dists) sum += x;
      eta(v) = sum / m;
    } else {
      // weighted order-statistic window around the l-th NN distance
      std::sort(nbr_dists.begin(), nbr_dists.end());
      const int i_lo = std::max(1, l - (l - 1) / 2);
      const int i_hi = std::min(m, l + l / 2);
      double sum = 0.0;
      for (int i = i_lo; i <= i_hi; ++i)
        sum += std::pow(static_cast<double>(l) / i, 1.0 / d) *
               nbr_dists[i - 1];
      eta(v) = sum / l;
    }
  }
  return eta;
}

RankVector compute_rank(const Eigen::VectorXd& eta) {
  const int n = static_cast<int>(eta.size());
  for (int v = 0; v < n; ++v)
    if (!std::isfinite(eta(v))) throw NumericalError("eta is not finite");
  std::vector<double> sorted(eta.data(), eta.data() + n);
  std::sort(sorted.begin(), sorted.end());
  RankVector rv;
  rv.eta = eta;
  rv.rank.resize(n);
  for (int v = 0; v < n; ++v) {
    // count of w with eta[w] >= eta[v], self included
    auto it = std::lower_bound(sorted.begin(), sorted.end(), eta(v));
    int count_ge = n - static_cast<int>(it - sorted.begin());
    rv.rank(v) = static_cast<double>(count_ge) / n;
  }
  return rv;
}

RankVector compute_rank(const Dataset& ds, const Graph& baseline,
                        bool weighted) {
  return compute_rank(compute_eta(ds, baseline, weighted));
}

double analytic_pvalue(const GaussianMixtureSpec& spec,
                       const Eigen::VectorXd& y) {
  return make_density(spec).pvalue(y);
}

}  // namespace pcut
