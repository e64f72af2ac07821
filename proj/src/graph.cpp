#include "pcut/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "pcut/errors.hpp"
#include "pcut/rank.hpp"
#include "pcut/spectral.hpp"

namespace pcut {

std::string to_string(GraphKind k) {
  switch (k) {
    case GraphKind::baseline_knn: return "baseline_knn";
    case GraphKind::rmd: return "rmd";
    case GraphKind::knn: return "knn";
    case GraphKind::epsilon: return "epsilon";
    case GraphKind::full_rbf: return "full_rbf";
    case GraphKind::full_arbf: return "full_arbf";
  }
  return "unknown";
}

Eigen::VectorXd Graph::degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < adj.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(adj, j); it; ++it)
      d(it.row()) += it.value();
  return d;
}

NeighborIndex::NeighborIndex(const Dataset& ds, int kmax_arg) {
  const int n = ds.n();
  kmax = std::min(kmax_arg, n - 1);
  if (kmax < 1) throw ParamError("NeighborIndex needs kmax >= 1 and n >= 2");
  ids.resize(n, kmax);
  dists.resize(n, kmax);
  std::vector<std::pair<double, int>> cand(n - 1);
  for (int v = 0; v < n; ++v) {
    int m = 0;
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      cand[m++] = {(ds.points.row(v) - ds.points.row(u)).norm(), u};
    }
    std::partial_sort(cand.begin(), cand.begin() + kmax, cand.end());
    for (int j = 0; j < kmax; ++j) {
      ids(v, j) = cand[j].second;
      dists(v, j) = cand[j].first;
    }
  }
}

double NeighborIndex::mean_knn_distance(int k) const {
  if (k < 1 || k > kmax) throw ParamError("mean_knn_distance: k out of range");
  return dists.col(k - 1).mean();
}

namespace {

double rbf_weight(double dist, double sigma) {
  return std::exp(-dist * dist / (2.0 * sigma * sigma));
}

// Union-symmetrized graph from per-node neighbor counts.
Graph from_neighbor_counts(const NeighborIndex& index,
                           const std::vector<int>& deg,
                           const GraphParams& params) {
  const int n = static_cast<int>(index.ids.rows());
  // collect directed picks as (min,max) pairs, dedupe
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * 8);
  for (int v = 0; v < n; ++v) {
    const int kv = std::min(deg[v], index.kmax);
    for (int j = 0; j < kv; ++j) {
      int u = index.ids(v, j);
      pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(pairs.size() * 2);
  for (const auto& [u, v] : pairs) {
    double w = 1.0;
    if (params.sigma) {
      // the pair came from at least one of the two NN lists
      double dist = -1.0;
      for (int j = 0; j < index.kmax; ++j)
        if (index.ids(u, j) == v) { dist = index.dists(u, j); break; }
      if (dist < 0.0)
        for (int j = 0; j < index.kmax; ++j)
          if (index.ids(v, j) == u) { dist = index.dists(v, j); break; }
      w = rbf_weight(dist, *params.sigma);
    }
    if (w <= 0.0) w = std::numeric_limits<double>::min();
    trips.emplace_back(u, v, w);
    trips.emplace_back(v, u, w);
  }
  Graph g;
  g.n = n;
  g.params = params;
  g.adj.resize(n, n);
  g.adj.setFromTriplets(trips.begin(), trips.end());
  return g;
}

}  // namespace

Graph build_baseline(const NeighborIndex& index, int k0) {
  const int n = static_cast<int>(index.ids.rows());
  if (k0 < 1 || k0 >= n) throw ParamError("baseline k0 must be in [1, n-1]");
  GraphParams p;
  p.kind = GraphKind::baseline_knn;
  p.k = k0;
  p.sigma = index.mean_knn_distance(k0);
  Graph g = from_neighbor_counts(index, std::vector<int>(n, k0), p);
  if (connected_components(g) > 1)
    std::cerr << "warning: baseline k0-NN graph (k0=" << k0
              << ") is disconnected\n";
  return g;
}

Graph build_baseline(const Dataset& ds, int k0) {
  if (k0 >= ds.n()) throw ParamError("baseline k0 must be in [1, n-1]");
  NeighborIndex index(ds, k0);
  return build_baseline(index, k0);
}

std::vector<int> modulated_degrees(const RankVector& rank, double lambda,
                                   int k, int n) {
  if (lambda < 0.0 || lambda > 1.0) throw ParamError("lambda must be in [0,1]");
  if (k < 1) throw ParamError("k must be >= 1");
  std::vector<int> deg(rank.n());
  for (int v = 0; v < rank.n(); ++v) {
    double target = k * (lambda + 2.0 * (1.0 - lambda) * rank.rank(v));
    int rounded = static_cast<int>(std::floor(target + 0.5));
    deg[v] = std::clamp(rounded, 1, n - 1);
  }
  return deg;
}

Graph build_rmd(const NeighborIndex& index, const RankVector& rank,
                const GraphParams& params) {
  if (params.kind != GraphKind::rmd) throw ParamError("params.kind must be rmd");
  if (!params.lambda || !params.k) throw ParamError("rmd needs lambda and k");
  const int n = static_cast<int>(index.ids.rows());
  return from_neighbor_counts(
      index, modulated_degrees(rank, *params.lambda, *params.k, n), params);
}

Graph build_rmd(const Dataset& ds, const RankVector& rank,
                const GraphParams& params) {
  int kmax = params.k ? std::min(2 * *params.k + 1, ds.n() - 1) : ds.n() - 1;
  NeighborIndex index(ds, kmax);
  return build_rmd(index, rank, params);
}

Graph build_knn(const NeighborIndex& index, const GraphParams& params) {
  if (!params.k) throw ParamError("knn needs k");
  const int n = static_cast<int>(index.ids.rows());
  if (*params.k >= n) throw ParamError("k must be < n");
  return from_neighbor_counts(index, std::vector<int>(n, *params.k), params);
}

Graph build_knn(const Dataset& ds, const GraphParams& params) {
  if (!params.k) throw ParamError("knn needs k");
  NeighborIndex index(ds, std::min(*params.k, ds.n() - 1));
  return build_knn(index, params);
}

Graph build_epsilon(const Dataset& ds, const GraphParams& params) {
  if (!params.epsilon) throw ParamError("epsilon graph needs epsilon");
  const int n = ds.n();
  const double eps = *params.epsilon;
  std::vector<Eigen::Triplet<double>> trips;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double d = (ds.points.row(u) - ds.points.row(v)).norm();
      if (d <= eps) {
        double w = params.sigma ? rbf_weight(d, *params.sigma) : 1.0;
        trips.emplace_back(u, v, w);
        trips.emplace_back(v, u, w);
      }
    }
  Graph g;
  g.n = n;
  g.params = params;
  g.adj.resize(n, n);
  g.adj.setFromTriplets(trips.begin(), trips.end());
  if (!g.has_edges())
    std::cerr << "warning: epsilon graph has no edges (eps=" << eps << ")\n";
  return g;
}

Graph build_full_rbf(const Dataset& ds, const GraphParams& params) {
  if (!params.sigma) throw ParamError("full_rbf needs sigma");
  const int n = ds.n();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double d = (ds.points.row(u) - ds.points.row(v)).norm();
      double w = rbf_weight(d, *params.sigma);
      if (w <= 0.0) w = std::numeric_limits<double>::min();
      trips.emplace_back(u, v, w);
      trips.emplace_back(v, u, w);
    }
  Graph g;
  g.n = n;
  g.params = params;
  g.adj.resize(n, n);
  g.adj.setFromTriplets(trips.begin(), trips.end());
  return g;
}

Graph build_full_arbf(const Dataset& ds, const GraphParams& params) {
  const int n = ds.n();
  const int k_local = std::min(7, n - 1);  // 7th-NN local scale
  NeighborIndex index(ds, k_local);
  Eigen::VectorXd local = index.dists.col(k_local - 1);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double d2 = (ds.points.row(u) - ds.points.row(v)).squaredNorm();
      double denom = local(u) * local(v);
      double w = denom > 0.0 ? std::exp(-d2 / denom) : (d2 == 0.0 ? 1.0 : 0.0);
      if (w <= 0.0) w = std::numeric_limits<double>::min();
      trips.emplace_back(u, v, w);
      trips.emplace_back(v, u, w);
    }
  Graph g;
  g.n = n;
  g.params = params;
  g.params.kind = GraphKind::full_arbf;
  g.adj.resize(n, n);
  g.adj.setFromTriplets(trips.begin(), trips.end());
  return g;
}

static double crossing_weight(const Graph& g, const Partition& p) {
  if (static_cast<int>(p.assignment.size()) != g.n)
    throw ShapeError("partition size does not match graph");
  double total = 0.0;
  for (int j = 0; j < g.adj.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.adj, j); it; ++it)
      if (it.row() < it.col() &&
          p.assignment[it.row()] != p.assignment[it.col()])
        total += it.value();
  return total;
}

double cut_value(const Graph& g, const Partition& p) {
  double crossing = crossing_weight(g, p);
  return p.K == 2 ? crossing : 2.0 * crossing;
}

double cut0_objective(const Graph& g, const Partition& p) {
  return 2.0 * crossing_weight(g, p);
}

int connected_components(const Graph& g, std::vector<int>* comp_out) {
  std::vector<int> comp(g.n, -1);
  int count = 0;
  std::deque<int> queue;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = count;
    queue.push_back(s);
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (Eigen::SparseMatrix<double>::InnerIterator it(g.adj, v); it; ++it) {
        int u = static_cast<int>(it.row());
        if (comp[u] < 0) {
          comp[u] = count;
          queue.push_back(u);
        }
      }
    }
    ++count;
  }
  if (comp_out) *comp_out = std::move(comp);
  return count;
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(17);
  out << "n=" << g.n << " kind=" << to_string(g.params.kind)
      << " lambda=" << (g.params.lambda ? std::to_string(*g.params.lambda) : "null")
      << " k=" << (g.params.k ? std::to_string(*g.params.k) : "null")
      << " sigma=" << (g.params.sigma ? std::to_string(*g.params.sigma) : "null")
      << '\n';
  for (int j = 0; j < g.adj.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.adj, j); it; ++it)
      if (it.row() < it.col())
        out << it.row() << ',' << it.col() << ',' << it.value() << '\n';
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("missing header in " + path);
  Graph g;
  {
    std::stringstream ss(header);
    std::string tok;
    while (ss >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "n") g.n = std::stoi(val);
      else if (key == "kind") {
        for (GraphKind k : {GraphKind::baseline_knn, GraphKind::rmd,
                            GraphKind::knn, GraphKind::epsilon,
                            GraphKind::full_rbf, GraphKind::full_arbf})
          if (to_string(k) == val) g.params.kind = k;
      } else if (val != "null") {
        if (key == "lambda") g.params.lambda = std::stod(val);
        else if (key == "k") g.params.k = std::stoi(val);
        else if (key == "sigma") g.params.sigma = std::stod(val);
      }
    }
  }
  if (g.n < 1) throw ParseError("bad n in header of " + path);
  std::vector<Eigen::Triplet<double>> trips;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
        !std::getline(ss, c, ','))
      throw ParseError("bad edge row in " + path);
    int u = std::stoi(a), v = std::stoi(b);
    double w = std::stod(c);
    trips.emplace_back(u, v, w);
    trips.emplace_back(v, u, w);
  }
  g.adj.resize(g.n, g.n);
  g.adj.setFromTriplets(trips.begin(), trips.end());
  return g;
}

}  // namespace pcut
