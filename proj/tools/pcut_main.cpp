#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcut/analysis.hpp"
#include "pcut/density.hpp"
#include "pcut/errors.hpp"
#include "pcut/rank.hpp"
#include "pcut/selector.hpp"
#include "pcut/ssl.hpp"

namespace {

using namespace pcut;

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

struct CommonOpts {
  std::string input;
  std::string gen;
  int n = 1000;
  std::string out = ".";
  std::uint64_t seed = 42;
  int threads = 0;
  bool has_labels = false;
  bool header = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_data = true) {
  if (needs_data) {
    cmd->add_option("--input", o.input, "input CSV file");
    cmd->add_option("--gen", o.gen, "named generator: fig2, fig5, moons");
    cmd->add_option("--n", o.n, "sample size for generators");
    cmd->add_flag("--labels", o.has_labels, "input CSV has a label column");
    cmd->add_flag("--header", o.header, "skip the first CSV line");
  }
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = auto)");
}

Dataset get_dataset(const CommonOpts& o) {
  if (!o.gen.empty()) {
    if (o.gen == "fig2") return sample_gaussian_mixture(fig2_spec(), o.n, o.seed);
    if (o.gen == "fig5") return sample_gaussian_mixture(fig5_spec(), o.n, o.seed);
    if (o.gen == "moons") return sample_two_moons_plus_gaussian(o.n, o.seed);
    throw ParamError("unknown generator: " + o.gen);
  }
  if (o.input.empty()) throw ParamError("need --input or --gen");
  return load_csv(o.input, o.has_labels, o.header);
}

struct GridOpts {
  std::string lambdas, ks, sigmas;
  bool binary = false;
  std::string objective = "rcut";
  std::string kind = "rmd";
  int k0 = 0;
};

void add_grid(CLI::App* cmd, GridOpts& g) {
  cmd->add_option("--lambdas", g.lambdas, "comma list of lambda values");
  cmd->add_option("--ks", g.ks, "comma list of k values");
  cmd->add_option("--sigma-mults", g.sigmas, "comma list of sigma multipliers");
  cmd->add_flag("--binary", g.binary, "binary edge weights");
  cmd->add_option("--objective", g.objective, "rcut or ncut");
  cmd->add_option("--kind", g.kind, "candidate family: rmd, knn, epsilon, full_rbf, full_arbf");
  cmd->add_option("--k0", g.k0, "baseline k0 (default ceil(sqrt(n)))");
}

SearchGrid make_grid(const GridOpts& g, int n, RunMode mode) {
  SearchGrid grid = SearchGrid::defaults(n);
  if (!g.lambdas.empty()) grid.lambdas = parse_doubles(g.lambdas);
  if (!g.ks.empty()) grid.ks = parse_ints(g.ks);
  if (!g.sigmas.empty()) grid.sigma_multipliers = parse_doubles(g.sigmas);
  grid.binary_weights = g.binary;
  if (g.objective == "rcut") grid.objective = Objective::rcut;
  else if (g.objective == "ncut") grid.objective = Objective::ncut;
  else throw ParamError("objective must be rcut or ncut");
  for (GraphKind k : {GraphKind::rmd, GraphKind::knn, GraphKind::epsilon,
                      GraphKind::full_rbf, GraphKind::full_arbf})
    if (to_string(k) == g.kind) grid.kind = k;
  grid.mode = mode;
  return grid;
}

std::filesystem::path out_path(const CommonOpts& o, const std::string& name) {
  std::filesystem::create_directories(o.out);
  return std::filesystem::path(o.out) / name;
}

int run(int argc, char** argv) {
  CLI::App app{"PCut: size-constrained min-cut clustering on rank-modulated-degree graphs"};
  app.require_subcommand(1);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "PCut clustering");
  CommonOpts c_common; GridOpts c_grid;
  int c_K = 2; double c_delta = 0.05;
  add_common(cluster, c_common);
  add_grid(cluster, c_grid);
  cluster->add_option("--k-classes", c_K, "number of clusters K");
  cluster->add_option("--delta", c_delta, "min cluster-size fraction");

  // ssl
  auto* ssl = app.add_subcommand("ssl", "semi-supervised PCut via GRF");
  CommonOpts s_common; GridOpts s_grid;
  int s_K = 2; double s_delta = 0.05; std::string s_mask; int s_num_labeled = 20;
  add_common(ssl, s_common);
  add_grid(ssl, s_grid);
  ssl->add_option("--k-classes", s_K, "number of classes K");
  ssl->add_option("--delta", s_delta, "min cluster-size fraction");
  ssl->add_option("--mask", s_mask, "label mask CSV (id,class)");
  ssl->add_option("--num-labeled", s_num_labeled,
                  "sample this many seed labels from true labels");

  // sweep-delta
  auto* sweep = app.add_subcommand("sweep-delta", "PCut over descending deltas");
  CommonOpts w_common; GridOpts w_grid;
  int w_K = 2; std::string w_deltas = "0.3,0.25,0.2,0.15,0.1,0.05";
  add_common(sweep, w_common);
  add_grid(sweep, w_grid);
  sweep->add_option("--k-classes", w_K, "number of clusters K");
  sweep->add_option("--deltas", w_deltas, "descending comma list");

  // rank
  auto* rankc = app.add_subcommand("rank", "emit per-node eta and rank");
  CommonOpts r_common;
  int r_k0 = 0; bool r_weighted = false;
  add_common(rankc, r_common);
  rankc->add_option("--k0", r_k0, "baseline k0 (default ceil(sqrt(n)))");
  rankc->add_flag("--weighted", r_weighted, "weighted eta statistic");

  // curve
  auto* curve = app.add_subcommand("curve", "hyperplane cut-value curve");
  CommonOpts v_common;
  int v_axis = 0; double v_tmin = -3, v_tmax = 8, v_tstep = 0.1;
  std::string v_obj = "rcut", v_kind = "rmd";
  double v_lambda = 0.3, v_sigma_mult = 0.0; int v_k = 30, v_k0 = 0;
  add_common(curve, v_common);
  curve->add_option("--axis", v_axis);
  curve->add_option("--t-min", v_tmin);
  curve->add_option("--t-max", v_tmax);
  curve->add_option("--t-step", v_tstep);
  curve->add_option("--curve-objective", v_obj, "cut, rcut or ncut");
  curve->add_option("--kind", v_kind, "graph family for the curve");
  curve->add_option("--lambda", v_lambda);
  curve->add_option("--k", v_k);
  curve->add_option("--sigma-mult", v_sigma_mult, "0 = binary weights");
  curve->add_option("--k0", v_k0, "baseline k0 for ranks");

  // validate
  auto* validate = app.add_subcommand("validate", "rank/limit consistency checks");
  CommonOpts a_common;
  int a_theorem = 1; std::string a_nvalues = "500,1000,2000,4000";
  std::string a_density = "gauss1d";
  double a_lambda = 1.0, a_cut = 0.5; int a_axis = 0;
  add_common(validate, a_common, false);
  validate->add_option("--theorem", a_theorem, "1 or 2");
  validate->add_option("--n-values", a_nvalues, "comma list of sample sizes");
  validate->add_option("--density", a_density, "gauss1d, uniform1d, fig2, fig5");
  validate->add_option("--lambda", a_lambda);
  validate->add_option("--cut", a_cut, "hyperplane threshold");
  validate->add_option("--axis", a_axis);

  // gen
  auto* gen = app.add_subcommand("gen", "write a synthetic dataset CSV");
  CommonOpts g_common;
  add_common(gen, g_common);

  CLI11_PARSE(app, argc, argv);

  if (cluster->parsed()) {
    Dataset ds = get_dataset(c_common);
    SearchGrid grid = make_grid(c_grid, ds.n(), RunMode::clustering);
    int k0 = c_grid.k0 > 0 ? c_grid.k0 : default_k0(ds.n());
    PCutReport report = run_pcut(ds, grid, c_K, c_delta, k0, c_common.seed,
                                 nullptr, nullptr, c_common.threads);
    save_report_json(report, out_path(c_common, "report.json").string());
    save_report_csv(report, out_path(c_common, "summary.csv").string());
    if (!report.selected) {
      std::cerr << "no feasible partition at delta=" << c_delta << "\n";
      return 2;
    }
    save_partition_csv(report.selected_partition(),
                       out_path(c_common, "partition.csv").string());
    return 0;
  }

  if (ssl->parsed()) {
    Dataset ds = get_dataset(s_common);
    LabelMask mask = !s_mask.empty()
                         ? load_label_mask(s_mask)
                         : sample_label_mask(ds, s_num_labeled, s_K,
                                             s_common.seed);
    SearchGrid grid = make_grid(s_grid, ds.n(), RunMode::ssl);
    int k0 = s_grid.k0 > 0 ? s_grid.k0 : default_k0(ds.n());
    PCutReport report = run_pcut(ds, grid, s_K, s_delta, k0, s_common.seed,
                                 &mask, nullptr, s_common.threads);
    save_report_json(report, out_path(s_common, "report.json").string());
    save_report_csv(report, out_path(s_common, "summary.csv").string());
    if (!report.selected) {
      std::cerr << "no feasible partition at delta=" << s_delta << "\n";
      return 2;
    }
    save_partition_csv(report.selected_partition(),
                       out_path(s_common, "partition.csv").string());
    if (ds.has_labels())
      std::cout << "ssl_error_rate="
                << ssl_error_rate(report.selected_partition(), ds, mask)
                << "\n";
    return 0;
  }

  if (sweep->parsed()) {
    Dataset ds = get_dataset(w_common);
    SearchGrid grid = make_grid(w_grid, ds.n(), RunMode::clustering);
    int k0 = w_grid.k0 > 0 ? w_grid.k0 : default_k0(ds.n());
    auto [entries, pool] = delta_sweep(ds, grid, w_K, parse_doubles(w_deltas),
                                       k0, w_common.seed, w_common.threads);
    std::ofstream out(out_path(w_common, "sweep.csv"));
    out.precision(17);
    out << "delta,cut0,selected\n";
    for (const auto& e : entries) {
      out << e.delta << ',';
      if (e.cut0) out << *e.cut0;
      out << ',';
      if (e.selected) out << *e.selected;
      out << '\n';
    }
    for (const auto& [hi, lo] : flat_spot_detect(entries))
      out << "flat_spot," << hi << ',' << lo << '\n';
    return 0;
  }

  if (rankc->parsed()) {
    Dataset ds = get_dataset(r_common);
    int k0 = r_k0 > 0 ? r_k0 : default_k0(ds.n());
    Graph baseline = build_baseline(ds, k0);
    Eigen::VectorXd eta = compute_eta(ds, baseline, r_weighted);
    RankVector rv = compute_rank(eta);
    std::ofstream out(out_path(r_common, "rank.csv"));
    out.precision(17);
    out << "id,eta,rank\n";
    for (int v = 0; v < ds.n(); ++v)
      out << v << ',' << rv.eta(v) << ',' << rv.rank(v) << '\n';
    return 0;
  }

  if (curve->parsed()) {
    Dataset ds = get_dataset(v_common);
    int k0 = v_k0 > 0 ? v_k0 : default_k0(ds.n());
    int kmax = std::min(ds.n() - 1, std::max(2 * v_k + 1, k0));
    NeighborIndex index(ds, kmax);
    Graph baseline = build_baseline(index, k0);
    RankVector rank = compute_rank(ds, baseline);
    GraphParams params;
    params.k = v_k;
    if (v_sigma_mult > 0.0)
      params.sigma = v_sigma_mult * index.mean_knn_distance(v_k);
    Graph g;
    if (v_kind == "rmd") {
      params.kind = GraphKind::rmd;
      params.lambda = v_lambda;
      g = build_rmd(index, rank, params);
    } else if (v_kind == "knn") {
      params.kind = GraphKind::knn;
      g = build_knn(index, params);
    } else if (v_kind == "baseline") {
      g = baseline;
    } else {
      throw ParamError("curve supports kinds rmd, knn, baseline");
    }
    CurveObjective obj = v_obj == "cut" ? CurveObjective::cut
                         : v_obj == "rcut" ? CurveObjective::rcut
                                           : CurveObjective::ncut;
    std::vector<double> ts;
    for (double t = v_tmin; t <= v_tmax + 1e-12; t += v_tstep) ts.push_back(t);
    auto pts = cut_curve(ds, g, v_axis, ts, obj);
    std::ofstream out(out_path(v_common, "curve.csv"));
    out.precision(17);
    out << "t,value\n";
    for (const auto& [t, val] : pts) {
      out << t << ',';
      if (val) out << *val;
      out << '\n';
    }
    return 0;
  }

  if (validate->parsed()) {
    DensityModel density;
    if (a_density == "gauss1d") {
      GaussianMixtureSpec s;
      s.weights = {1.0};
      s.means = {Eigen::VectorXd::Zero(1)};
      s.covariances = {Eigen::VectorXd::Ones(1)};
      density = make_density(s);
    } else if (a_density == "uniform1d") {
      density = make_uniform_1d();
    } else if (a_density == "fig2") {
      density = make_density(fig2_spec());
    } else if (a_density == "fig5") {
      density = make_density(fig5_spec());
    } else {
      throw ParamError("unknown density: " + a_density);
    }
    auto ns = parse_ints(a_nvalues);
    std::ofstream out(out_path(a_common, "validate.csv"));
    out.precision(17);
    if (a_theorem == 1) {
      out << "n,mean_abs_error\n";
      for (const auto& [n, err] : verify_thm1(density, ns, a_common.seed))
        out << n << ',' << err << '\n';
    } else if (a_theorem == 2) {
      HyperplaneCut hc{a_axis, a_cut};
      LimitCheckResult res = verify_thm2(density, hc, a_lambda, ns,
                                         a_common.seed);
      out << "n,empirical,predicted,rel_error\n";
      for (std::size_t i = 0; i < res.n_values.size(); ++i)
        out << res.n_values[i] << ',' << res.empirical[i] << ','
            << res.predicted << ',' << res.relative_errors[i] << '\n';
    } else {
      throw ParamError("--theorem must be 1 or 2");
    }
    return 0;
  }

  if (gen->parsed()) {
    Dataset ds = get_dataset(g_common);
    save_csv(ds, out_path(g_common, "data.csv").string());
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pcut::NoFeasiblePartition& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pcut::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
