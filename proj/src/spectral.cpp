#include "pcut/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pcut/errors.hpp"
#include "pcut/rng.hpp"

namespace pcut {

std::vector<int> Partition::cluster_sizes() const {
  std::vector<int> sizes(K, 0);
  for (int c : assignment) {
    if (c < 0 || c >= K) throw ShapeError("cluster index out of range");
    sizes[c] += 1;
  }
  return sizes;
}

int Partition::min_cluster_size() const {
  auto sizes = cluster_sizes();
  return *std::min_element(sizes.begin(), sizes.end());
}

Eigen::SparseMatrix<double> laplacian(const Graph& g, Objective obj) {
  if (g.n < 1) throw ParamError("laplacian of empty graph");
  Eigen::VectorXd deg = g.degrees();
  Eigen::SparseMatrix<double> L(g.n, g.n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.adj.nonZeros() + g.n);
  if (obj == Objective::rcut) {
    for (int j = 0; j < g.adj.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(g.adj, j); it; ++it)
        trips.emplace_back(it.row(), it.col(), -it.value());
    for (int v = 0; v < g.n; ++v) trips.emplace_back(v, v, deg(v));
  } else {
    Eigen::VectorXd dinv_sqrt(g.n);
    for (int v = 0; v < g.n; ++v)
      dinv_sqrt(v) = deg(v) > 0.0 ? 1.0 / std::sqrt(deg(v)) : 0.0;
    for (int j = 0; j < g.adj.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(g.adj, j); it; ++it)
        trips.emplace_back(it.row(), it.col(),
                           -it.value() * dinv_sqrt(it.row()) *
                               dinv_sqrt(it.col()));
    for (int v = 0; v < g.n; ++v) trips.emplace_back(v, v, 1.0);
  }
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

namespace {

EigenPairs dense_smallest(const Eigen::SparseMatrix<double>& L, int K) {
  Eigen::MatrixXd Ld(L);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ld);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense eigensolver failed");
  EigenPairs out;
  out.values = es.eigenvalues().head(K);
  out.vectors = es.eigenvectors().leftCols(K);
  return out;
}

double max_residual(const Eigen::SparseMatrix<double>& L,
                    const EigenPairs& ep) {
  double worst = 0.0;
  for (int j = 0; j < ep.values.size(); ++j) {
    Eigen::VectorXd v = ep.vectors.col(j);
    double r = (L * v - ep.values(j) * v).norm() / v.norm();
    worst = std::max(worst, r);
  }
  return worst;
}

// Shift-invert Lanczos: largest Ritz pairs of (L + eps I)^{-1} give the
// smallest eigenpairs of L. Full reorthogonalization; solver is dense LLT
// when the matrix is small or dense-ish, sparse LLT otherwise.
EigenPairs lanczos_smallest(const Eigen::SparseMatrix<double>& L, int K,
                            int steps) {
  const int n = static_cast<int>(L.rows());
  double scale = 1.0;
  for (int v = 0; v < n; ++v) scale = std::max(scale, L.coeff(v, v));
  const double eps = 1e-8 * scale;

  const double density =
      static_cast<double>(L.nonZeros()) / (static_cast<double>(n) * n);
  const bool use_dense_solver = (n <= 1500) || density > 0.15;

  Eigen::LLT<Eigen::MatrixXd> dense_llt;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> sparse_llt;
  if (use_dense_solver) {
    Eigen::MatrixXd M(L);
    M.diagonal().array() += eps;
    dense_llt.compute(M);
    if (dense_llt.info() != Eigen::Success)
      throw NumericalError("Cholesky factorization failed");
  } else {
    Eigen::SparseMatrix<double> M = L;
    for (int v = 0; v < n; ++v) M.coeffRef(v, v) += eps;
    sparse_llt.compute(M);
    if (sparse_llt.info() != Eigen::Success)
      throw NumericalError("sparse Cholesky factorization failed");
  }
  auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (use_dense_solver) return dense_llt.solve(x);
    return sparse_llt.solve(x);
  };

  const int m = std::min(n, steps);
  Eigen::MatrixXd V(n, m);
  Eigen::VectorXd alpha(m), beta(m);
  Rng rng(0x9e3779b97f4a7c15ULL);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform() - 0.5;
  v.normalize();
  V.col(0) = v;
  Eigen::VectorXd w;
  int built = 0;
  for (int j = 0; j < m; ++j) {
    w = apply(V.col(j));
    alpha(j) = V.col(j).dot(w);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    double b = w.norm();
    built = j + 1;
    if (j + 1 < m) {
      if (b < 1e-12) {
        // invariant subspace hit; restart direction
        for (int i = 0; i < n; ++i) w(i) = rng.uniform() - 0.5;
        for (int pass = 0; pass < 2; ++pass)
          w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
        b = w.norm();
        if (b < 1e-12) break;  // space exhausted
        beta(j) = 0.0;
      } else {
        beta(j) = b;
      }
      V.col(j + 1) = w / b;
    }
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
  for (int j = 0; j < built; ++j) {
    T(j, j) = alpha(j);
    if (j + 1 < built) {
      T(j, j + 1) = beta(j);
      T(j + 1, j) = beta(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success)
    throw NumericalError("tridiagonal eigensolver failed");
  // largest theta -> smallest lambda
  EigenPairs out;
  const int kk = std::min(K, built);
  out.values.resize(kk);
  out.vectors.resize(n, kk);
  for (int j = 0; j < kk; ++j) {
    int idx = built - 1 - j;
    double theta = es.eigenvalues()(idx);
    out.values(j) = theta > 0.0 ? 1.0 / theta - eps
                                : std::numeric_limits<double>::infinity();
    Eigen::VectorXd y = V.leftCols(built) * es.eigenvectors().col(idx);
    y.normalize();
    out.vectors.col(j) = y;
  }
  return out;
}

}  // namespace

EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& L, int K) {
  const int n = static_cast<int>(L.rows());
  if (K < 1 || K > n) throw ParamError("smallest_eigenpairs: bad K");
  if (n <= 600) return dense_smallest(L, K);
  for (int steps : {std::max(2 * K + 28, 40), 120, 300}) {
    EigenPairs ep = lanczos_smallest(L, K, steps);
    if (ep.values.size() == K && max_residual(L, ep) <= 1e-6) return ep;
  }
  if (n <= 4000) {
    EigenPairs ep = dense_smallest(L, K);
    if (max_residual(L, ep) <= 1e-6) return ep;
  }
  throw NumericalError("eigensolver did not converge to residual 1e-6");
}

SpectralEmbedding embed(const Graph& g, int K, Objective obj) {
  if (K < 2 || K > g.n) throw ParamError("embed: K must be in [2, n]");
  Eigen::SparseMatrix<double> L = laplacian(g, obj);
  EigenPairs ep = smallest_eigenpairs(L, K);
  SpectralEmbedding emb;
  emb.eigenvalues = ep.values;
  emb.vectors = ep.vectors;
  if (obj == Objective::ncut) {
    for (int i = 0; i < g.n; ++i) {
      double norm = emb.vectors.row(i).norm();
      if (norm > 0.0) emb.vectors.row(i) /= norm;
    }
  }
  return emb;
}

namespace {

double lloyd(const Eigen::MatrixXd& X, int K, Rng& rng,
             std::vector<int>& assign) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  Eigen::MatrixXd centers(K, d);
  // k-means++ seeding
  centers.row(0) = X.row(rng.index(n));
  Eigen::VectorXd d2 =
      (X.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < K; ++c) {
    double total = d2.sum();
    int pick = 0;
    if (total > 0.0) {
      double r = rng.uniform() * total, acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc >= r) { pick = i; break; }
      }
    } else {
      pick = static_cast<int>(rng.index(n));
    }
    centers.row(c) = X.row(pick);
    d2 = d2.cwiseMin(
        (X.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }

  assign.assign(n, 0);
  double wcss = 0.0;
  for (int iter = 0; iter < 300; ++iter) {
    wcss = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bestd = (X.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < K; ++c) {
        double dd = (X.row(i) - centers.row(c)).squaredNorm();
        if (dd < bestd) { bestd = dd; best = c; }
      }
      assign[i] = best;
      wcss += bestd;
    }
    Eigen::MatrixXd newc = Eigen::MatrixXd::Zero(K, d);
    std::vector<int> counts(K, 0);
    for (int i = 0; i < n; ++i) {
      newc.row(assign[i]) += X.row(i);
      counts[assign[i]] += 1;
    }
    for (int c = 0; c < K; ++c) {
      if (counts[c] > 0) {
        newc.row(c) /= counts[c];
      } else {
        // empty cluster: reseed at the point farthest from its center
        int far = 0;
        double fard = -1.0;
        for (int i = 0; i < n; ++i) {
          double dd = (X.row(i) - centers.row(assign[i])).squaredNorm();
          if (dd > fard) { fard = dd; far = i; }
        }
        newc.row(c) = X.row(far);
      }
    }
    if ((newc - centers).norm() < 1e-12) { centers = newc; break; }
    centers = newc;
  }
  // final assignment pass
  wcss = 0.0;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bestd = (X.row(i) - centers.row(0)).squaredNorm();
    for (int c = 1; c < K; ++c) {
      double dd = (X.row(i) - centers.row(c)).squaredNorm();
      if (dd < bestd) { bestd = dd; best = c; }
    }
    assign[i] = best;
    wcss += bestd;
  }
  return wcss;
}

}  // namespace

Partition kmeans(const SpectralEmbedding& emb, int K, int restarts,
                 std::uint64_t seed) {
  const int n = static_cast<int>(emb.vectors.rows());
  if (n < K) throw ParamError("kmeans: n < K");
  if (restarts < 1) throw ParamError("kmeans: restarts must be >= 1");
  Partition best;
  best.K = K;
  if (K == 1) {
    best.assignment.assign(n, 0);
    return best;
  }
  double best_wcss = std::numeric_limits<double>::infinity();
  std::vector<int> assign;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    double wcss = lloyd(emb.vectors, K, rng, assign);
    if (wcss < best_wcss) {
      best_wcss = wcss;
      best.assignment = assign;
    }
  }
  return best;
}

Partition spectral_cluster(const Graph& g, int K, Objective obj,
                           std::uint64_t seed, int restarts) {
  SpectralEmbedding emb = embed(g, K, obj);
  Partition p = kmeans(emb, K, restarts, seed);
  p.provenance = g.params;
  p.objective = obj;
  return p;
}

double rcut_ncut_value(const Graph& g, const Partition& p) {
  if (static_cast<int>(p.assignment.size()) != g.n)
    throw ShapeError("partition size does not match graph");
  const int K = p.K;
  std::vector<double> size(K, 0.0), cut(K, 0.0);
  Eigen::VectorXd deg;
  if (p.objective == Objective::ncut) deg = g.degrees();
  for (int v = 0; v < g.n; ++v)
    size[p.assignment[v]] +=
        p.objective == Objective::rcut ? 1.0 : deg(v);
  for (int j = 0; j < g.adj.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.adj, j); it; ++it)
      if (it.row() < it.col()) {
        int a = p.assignment[it.row()], b = p.assignment[it.col()];
        if (a != b) {
          cut[a] += it.value();
          cut[b] += it.value();
        }
      }
  for (int c = 0; c < K; ++c)
    if (size[c] <= 0.0) return std::numeric_limits<double>::infinity();
  if (K == 2) {
    if (p.objective == Objective::rcut) {
      double total_size = size[0] + size[1];
      return cut[0] * (total_size / size[0] + total_size / size[1]);
    }
    return cut[0] * (1.0 / size[0] + 1.0 / size[1]);
  }
  double value = 0.0;
  for (int c = 0; c < K; ++c) value += cut[c] / size[c];
  return value;
}

}  // namespace pcut
