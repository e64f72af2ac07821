#include "pcut/selector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <nlohmann/json.hpp>

#include "pcut/errors.hpp"
#include "pcut/rng.hpp"
#include "pcut/ssl.hpp"

namespace pcut {

int default_k0(int n) { return static_cast<int>(std::ceil(std::sqrt(n))); }

SearchGrid SearchGrid::defaults(int n) {
  SearchGrid g;
  for (int i = 0; i <= 5; ++i) g.lambdas.push_back(0.2 * i);
  for (int k : {5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 120, 150})
    if (k >= 1 && k < n) g.ks.push_back(k);
  for (int j = -3; j <= 3; ++j) g.sigma_multipliers.push_back(std::pow(2.0, j));
  return g;
}

const Partition& PCutReport::selected_partition() const {
  if (!selected) throw NoFeasiblePartition("no feasible candidate selected");
  return candidates[*selected].partition;
}

Partition balanced_reference(const Graph& baseline) {
  SpectralEmbedding emb = embed(baseline, 2, Objective::rcut);
  // sort by Fiedler coordinate, ties by id; lower half is cluster 0
  const int n = baseline.n;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (emb.vectors(a, 1) != emb.vectors(b, 1))
      return emb.vectors(a, 1) < emb.vectors(b, 1);
    return a < b;
  });
  Partition p;
  p.K = 2;
  p.assignment.assign(n, 1);
  for (int i = 0; i < n / 2; ++i) p.assignment[order[i]] = 0;
  return p;
}

std::pair<std::optional<double>, double> diagnostics_qy(
    const Graph& baseline, const Partition& partition,
    const Partition& balanced_ref) {
  double y = static_cast<double>(partition.min_cluster_size()) /
             partition.assignment.size();
  if (partition.K != 2) return {std::nullopt, y};
  double num = cut_value(baseline, partition);
  double den = cut_value(baseline, balanced_ref);
  if (den == 0.0) return {std::nullopt, y};
  return {num / den, y};
}

namespace {

struct GridPoint {
  GraphParams params;
};

std::vector<GridPoint> enumerate_grid(const SearchGrid& grid, int n,
                                      const NeighborIndex& index) {
  std::vector<GridPoint> points;
  const bool uses_lambda = grid.kind == GraphKind::rmd;
  std::vector<double> lambdas = uses_lambda ? grid.lambdas
                                            : std::vector<double>{1.0};
  if (lambdas.empty() || grid.ks.empty())
    throw ParamError("search grid must have nonempty lambda and k lists");
  std::vector<double> mults =
      grid.binary_weights ? std::vector<double>{0.0} : grid.sigma_multipliers;
  if (mults.empty())
    throw ParamError("search grid needs sigma multipliers or binary weights");
  for (double lam : lambdas) {
    if (lam < 0.0 || lam > 1.0) throw ParamError("lambda outside [0,1]");
    for (int k : grid.ks) {
      if (k < 1 || k >= n) throw ParamError("grid k outside [1, n-1]");
      const double dk = index.mean_knn_distance(std::min(k, index.kmax));
      for (double mult : mults) {
        GridPoint gp;
        gp.params.kind = grid.kind;
        gp.params.k = k;
        if (uses_lambda) gp.params.lambda = lam;
        if (!grid.binary_weights) gp.params.sigma = mult * dk;
        if (grid.kind == GraphKind::epsilon) gp.params.epsilon = mult * dk;
        points.push_back(gp);
      }
    }
  }
  return points;
}

Graph build_candidate_graph(const Dataset& ds, const NeighborIndex& index,
                            const RankVector& rank, const GraphParams& params) {
  switch (params.kind) {
    case GraphKind::rmd:
      return build_rmd(index, rank, params);
    case GraphKind::knn:
      return build_knn(index, params);
    case GraphKind::epsilon:
      return build_epsilon(ds, params);
    case GraphKind::full_rbf:
      return build_full_rbf(ds, params);
    case GraphKind::full_arbf:
      return build_full_arbf(ds, params);
    default:
      throw ParamError("unsupported candidate graph kind");
  }
}

}  // namespace

CandidatePool build_candidate_pool(const Dataset& ds, const SearchGrid& grid,
                                   int K, int k0, std::uint64_t seed,
                                   const LabelMask* mask,
                                   const std::vector<Partition>* extra,
                                   int threads) {
  ds.validate();
  const int n = ds.n();
  if (k0 < 1 || k0 >= n) throw ParamError("k0 must be in [1, n-1]");
  if (grid.mode == RunMode::ssl) {
    if (!mask) throw ParamError("ssl mode needs a label mask");
    mask->validate(n, K);
  }
  int kmax = k0;
  for (int k : grid.ks)
    kmax = std::max(kmax, grid.kind == GraphKind::rmd ? 2 * k : k);
  kmax = std::min(kmax, n - 1);
  NeighborIndex index(ds, kmax);

  CandidatePool pool;
  pool.k0 = k0;
  pool.baseline = build_baseline(index, k0);
  pool.sigma0 = *pool.baseline.params.sigma;
  pool.rank = compute_rank(ds, pool.baseline);
  pool.balanced_ref = balanced_reference(pool.baseline);
  pool.balanced_cut0 = cut_value(pool.baseline, pool.balanced_ref);

  auto points = enumerate_grid(grid, n, index);
  pool.candidates.resize(points.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      CandidateRecord rec;
      rec.params = points[i].params;
      Graph cand = build_candidate_graph(ds, index, pool.rank, rec.params);
      if (grid.mode == RunMode::clustering) {
        rec.partition = spectral_cluster(cand, K, grid.objective,
                                         derive_seed(seed, i));
      } else {
        SSLProblem prob{cand, *mask, K};
        rec.partition = grf_propagate(prob);
      }
      rec.cut0 = cut0_objective(pool.baseline, rec.partition);
      rec.min_cluster_size = rec.partition.min_cluster_size();
      auto [q, y] =
          diagnostics_qy(pool.baseline, rec.partition, pool.balanced_ref);
      rec.q = q;
      rec.y = y;
      pool.candidates[i] = std::move(rec);
    }
  };
  int nthreads = threads > 0
                     ? threads
                     : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads,
                                       static_cast<int>(points.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> ts;
    for (int t = 0; t < nthreads; ++t) ts.emplace_back(worker);
    for (auto& t : ts) t.join();
  }

  if (extra) {
    for (const Partition& p : *extra) {
      CandidateRecord rec;
      rec.params = p.provenance;
      rec.partition = p;
      rec.cut0 = cut0_objective(pool.baseline, rec.partition);
      rec.min_cluster_size = rec.partition.min_cluster_size();
      auto [q, y] =
          diagnostics_qy(pool.baseline, rec.partition, pool.balanced_ref);
      rec.q = q;
      rec.y = y;
      pool.candidates.push_back(std::move(rec));
    }
  }
  return pool;
}

PCutReport select_from_pool(const CandidatePool& pool, int n, double delta,
                            int K) {
  if (delta <= 0.0 || delta >= 1.0 / K)
    throw ParamError("delta must satisfy 0 < delta < 1/K");
  const int min_size = static_cast<int>(std::ceil(delta * n));
  PCutReport report;
  report.candidates = pool.candidates;
  report.delta = delta;
  report.k0 = pool.k0;
  report.sigma0 = pool.sigma0;
  report.balanced_cut0 = pool.balanced_cut0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    auto& rec = report.candidates[i];
    rec.feasible = rec.min_cluster_size >= min_size;
    if (rec.feasible && rec.cut0 < best) {
      best = rec.cut0;
      report.selected = static_cast<int>(i);
    }
  }
  return report;
}

PCutReport run_pcut(const Dataset& ds, const SearchGrid& grid, int K,
                    double delta, int k0, std::uint64_t seed,
                    const LabelMask* mask,
                    const std::vector<Partition>* extra, int threads) {
  CandidatePool pool =
      build_candidate_pool(ds, grid, K, k0, seed, mask, extra, threads);
  return select_from_pool(pool, ds.n(), delta, K);
}

std::pair<std::vector<SweepEntry>, CandidatePool> delta_sweep(
    const Dataset& ds, const SearchGrid& grid, int K,
    const std::vector<double>& deltas, int k0, std::uint64_t seed,
    int threads) {
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (deltas[i] >= deltas[i - 1])
      throw ParamError("deltas must be strictly descending");
  CandidatePool pool =
      build_candidate_pool(ds, grid, K, k0, seed, nullptr, nullptr, threads);
  std::vector<SweepEntry> sweep;
  for (double d : deltas) {
    PCutReport r = select_from_pool(pool, ds.n(), d, K);
    SweepEntry e;
    e.delta = d;
    if (r.selected) {
      e.selected = r.selected;
      e.cut0 = r.candidates[*r.selected].cut0;
    }
    sweep.push_back(e);
  }
  return {sweep, std::move(pool)};
}

std::vector<std::pair<double, double>> flat_spot_detect(
    const std::vector<SweepEntry>& sweep) {
  std::vector<std::pair<double, int>> vals;  // (cut0, index into sweep)
  for (std::size_t i = 0; i < sweep.size(); ++i)
    if (sweep[i].cut0) vals.push_back({*sweep[i].cut0, static_cast<int>(i)});
  std::vector<std::pair<double, double>> intervals;
  std::size_t start = 0;
  auto close_run = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo + 1 >= 2)
      intervals.push_back({sweep[vals[lo].second].delta,
                           sweep[vals[hi].second].delta});
  };
  for (std::size_t i = 1; i <= vals.size(); ++i) {
    bool same =
        i < vals.size() &&
        std::abs(vals[i].first - vals[i - 1].first) <=
            1e-6 * std::max(std::abs(vals[i].first),
                            std::abs(vals[i - 1].first)) + 1e-300;
    if (!same) {
      close_run(start, i - 1);
      start = i;
    }
  }
  return intervals;
}

std::pair<Partition, double> brute_force_pcut(const Graph& g, int K,
                                              double delta) {
  const int n = g.n;
  if (n > 14) throw ParamError("brute_force_pcut limited to n <= 14");
  if (K < 2) throw ParamError("K must be >= 2");
  const int min_size = static_cast<int>(std::ceil(delta * n));
  std::vector<int> assign(n, 0);
  Partition best;
  best.K = K;
  double best_cut = std::numeric_limits<double>::infinity();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(K);
  Partition trial;
  trial.K = K;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    int max_used = -1;
    bool canonical = true;
    for (int i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(c % K);
      c /= K;
      // canonical labeling: cluster ids appear in first-member order
      if (assign[i] > max_used + 1) { canonical = false; break; }
      max_used = std::max(max_used, assign[i]);
    }
    if (!canonical || max_used != K - 1) continue;
    std::vector<int> sizes(K, 0);
    for (int i = 0; i < n; ++i) sizes[assign[i]] += 1;
    if (*std::min_element(sizes.begin(), sizes.end()) < min_size) continue;
    trial.assignment = assign;
    double cut = cut0_objective(g, trial);
    if (cut < best_cut) {
      best_cut = cut;
      best.assignment = assign;
    }
  }
  if (best.assignment.empty())
    throw NoFeasiblePartition("no labeling satisfies the size constraint");
  return {best, best_cut};
}

namespace {

// Hungarian algorithm (potentials form) for a square min-cost assignment.
std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double d = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
          if (minv[j] < d) { d = minv[j]; j1 = j; }
        }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) { u[p[j]] += d; v[j] -= d; }
        else minv[j] -= d;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n);  // row -> column
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  return match;
}

}  // namespace

double clustering_error_rate(const Partition& p, const Dataset& ds) {
  if (!ds.has_labels()) throw DataError("dataset has no true labels");
  if (static_cast<int>(p.assignment.size()) != ds.n())
    throw ShapeError("partition size mismatch");
  int max_label = *std::max_element(ds.true_labels.begin(),
                                    ds.true_labels.end());
  if (max_label + 1 != p.K)
    throw DataError("partition K does not match label count");
  const int K = p.K;
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(K, K);
  for (int i = 0; i < ds.n(); ++i)
    confusion(p.assignment[i], ds.true_labels[i]) += 1.0;
  std::vector<int> match = hungarian(-confusion);
  double matched = 0.0;
  for (int c = 0; c < K; ++c) matched += confusion(c, match[c]);
  return 1.0 - matched / ds.n();
}

namespace {

nlohmann::json params_to_json(const GraphParams& p) {
  nlohmann::json j;
  j["kind"] = to_string(p.kind);
  j["lambda"] = p.lambda ? nlohmann::json(*p.lambda) : nlohmann::json();
  j["k"] = p.k ? nlohmann::json(*p.k) : nlohmann::json();
  j["sigma"] = p.sigma ? nlohmann::json(*p.sigma) : nlohmann::json();
  j["epsilon"] = p.epsilon ? nlohmann::json(*p.epsilon) : nlohmann::json();
  return j;
}

}  // namespace

std::string report_to_json(const PCutReport& report) {
  nlohmann::json j;
  j["delta"] = report.delta;
  j["baseline"] = {{"k0", report.k0}, {"sigma0", report.sigma0}};
  j["balanced_cut0"] = report.balanced_cut0;
  j["selected"] = report.selected ? nlohmann::json(*report.selected)
                                  : nlohmann::json();
  j["candidates"] = nlohmann::json::array();
  for (const auto& rec : report.candidates) {
    nlohmann::json c;
    c["params"] = params_to_json(rec.params);
    c["cut0"] = rec.cut0;
    c["min_cluster_size"] = rec.min_cluster_size;
    c["feasible"] = rec.feasible;
    c["q"] = rec.q ? nlohmann::json(*rec.q) : nlohmann::json();
    c["y"] = rec.y;
    j["candidates"].push_back(c);
  }
  return j.dump(2);
}

void save_report_json(const PCutReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << report_to_json(report) << '\n';
}

void save_report_csv(const PCutReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(17);
  out << "lambda,k,sigma,cut0,min_cluster,feasible\n";
  for (const auto& rec : report.candidates) {
    if (rec.params.lambda) out << *rec.params.lambda;
    out << ',';
    if (rec.params.k) out << *rec.params.k;
    out << ',';
    if (rec.params.sigma) out << *rec.params.sigma;
    out << ',' << rec.cut0 << ',' << rec.min_cluster_size << ','
        << (rec.feasible ? 1 : 0) << '\n';
  }
}

void save_partition_csv(const Partition& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "id,cluster\n";
  for (std::size_t i = 0; i < p.assignment.size(); ++i)
    out << i << ',' << p.assignment[i] << '\n';
}

}  // namespace pcut
