#include "pcut/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "pcut/errors.hpp"
#include "pcut/rank.hpp"
#include "pcut/rng.hpp"
#include "pcut/selector.hpp"

namespace pcut {

Partition hyperplane_partition(const Dataset& ds, const HyperplaneCut& cut) {
  if (cut.axis < 0 || cut.axis >= ds.dim())
    throw ParamError("hyperplane axis out of range");
  Partition p;
  p.K = 2;
  p.assignment.resize(ds.n());
  for (int i = 0; i < ds.n(); ++i)
    p.assignment[i] = ds.points(i, cut.axis) <= cut.threshold ? 0 : 1;
  return p;
}

std::vector<std::pair<double, std::optional<double>>> cut_curve(
    const Dataset& ds, const Graph& g, int axis,
    const std::vector<double>& thresholds, CurveObjective obj) {
  std::vector<std::pair<double, std::optional<double>>> curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    Partition p = hyperplane_partition(ds, {axis, t});
    auto sizes = p.cluster_sizes();
    if (sizes[0] == 0 || sizes[1] == 0) {
      curve.push_back({t, std::nullopt});
      continue;
    }
    double value;
    if (obj == CurveObjective::cut) {
      value = cut_value(g, p);
    } else {
      p.objective = obj == CurveObjective::rcut ? Objective::rcut
                                                : Objective::ncut;
      value = rcut_ncut_value(g, p);
      if (!std::isfinite(value)) {
        curve.push_back({t, std::nullopt});
        continue;
      }
    }
    curve.push_back({t, value});
  }
  return curve;
}

double unit_ball_volume(int d) {
  if (d < 0) throw ParamError("dimension must be >= 0");
  const double pi = 3.14159265358979323846;
  return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double limit_constant(int d) {
  if (d < 1) throw ParamError("dimension must be >= 1");
  double eta_dm1 = unit_ball_volume(d - 1);
  double eta_d = unit_ball_volume(d);
  return 2.0 * eta_dm1 / ((d + 1) * std::pow(eta_d, 1.0 + 1.0 / d));
}

double predicted_limit(const DensityModel& density, const HyperplaneCut& cut,
                       double lambda) {
  const int d = density.dim;
  if (d > 2)
    throw NumericalError("predicted_limit implemented for d <= 2");
  const double mu_minus = density.axis_cdf(cut.axis, cut.threshold);
  const double mu_plus = 1.0 - mu_minus;
  if (mu_minus <= 0.0 || mu_plus <= 0.0)
    throw NumericalError("hyperplane leaves an empty side");
  const double bs = 1.0 / mu_plus + 1.0 / mu_minus;
  const double cd = limit_constant(d);
  auto rho = [&](const Eigen::VectorXd& x) {
    return lambda + 2.0 * (1.0 - lambda) * density.pvalue(x);
  };
  double integral;
  if (d == 1) {
    Eigen::VectorXd s(1);
    s(0) = cut.threshold;
    // f^{1-1/d} = f^0 = 1 along a zero-dimensional section
    integral = std::pow(rho(s), 2.0);
  } else {
    const int other = 1 - cut.axis;
    auto integrand = [&](double y) {
      Eigen::VectorXd s(2);
      s(cut.axis) = cut.threshold;
      s(other) = y;
      double f = density.pdf(s);
      if (f <= 0.0) return 0.0;
      return std::sqrt(f) * std::pow(rho(s), 1.5);
    };
    integral = integrate(integrand, density.box_lo(other),
                         density.box_hi(other), 1e-8);
  }
  return cd * bs * integral;
}

std::vector<std::pair<int, double>> verify_thm1(
    const DensityModel& density, const std::vector<int>& n_values,
    std::uint64_t seed) {
  std::vector<std::pair<int, double>> out;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    Dataset ds = density.sample(n, derive_seed(seed, i));
    const int k0 = default_k0(n);
    Graph baseline = build_baseline(ds, k0);
    RankVector rv = compute_rank(ds, baseline);
    double err = 0.0;
    for (int v = 0; v < n; ++v) {
      Eigen::VectorXd x = ds.points.row(v).transpose();
      err += std::abs(rv.rank(v) - density.pvalue(x));
    }
    out.push_back({n, err / n});
  }
  return out;
}

double scaled_rmd_rcut(const Dataset& ds, const HyperplaneCut& cut,
                       double lambda, int k_n) {
  const int n = ds.n();
  const int k0 = default_k0(n);
  int kmax = std::min(n - 1, std::max(2 * k_n + 1, k0));
  NeighborIndex index(ds, kmax);
  Graph baseline = build_baseline(index, k0);
  RankVector rank = compute_rank(ds, baseline);
  GraphParams params;
  params.kind = GraphKind::rmd;
  params.lambda = lambda;
  params.k = k_n;
  // binary weights: the limit statement is about the unweighted RMD graph
  Graph rmd = build_rmd(index, rank, params);
  Partition p = hyperplane_partition(ds, cut);
  auto sizes = p.cluster_sizes();
  if (sizes[0] == 0 || sizes[1] == 0)
    throw NumericalError("hyperplane leaves an empty side of the sample");
  // the limit counts ordered crossing pairs, i.e. twice the edge weight
  double crossing = 2.0 * cut_value(rmd, p);
  double rcut = crossing * (1.0 / sizes[0] + 1.0 / sizes[1]);
  const int d = ds.dim();
  return rcut / k_n * std::pow(static_cast<double>(n) / k_n, 1.0 / d);
}

LimitCheckResult verify_thm2(const DensityModel& density,
                             const HyperplaneCut& cut, double lambda,
                             const std::vector<int>& n_values,
                             std::uint64_t seed) {
  LimitCheckResult res;
  res.predicted = predicted_limit(density, cut, lambda);
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    const int k_n = density.dim == 1
                        ? static_cast<int>(std::ceil(std::pow(n, 0.7)))
                        : static_cast<int>(std::ceil(std::pow(n, 2.0 / 3.0)));
    Dataset ds = density.sample(n, derive_seed(seed, i));
    double emp = scaled_rmd_rcut(ds, cut, lambda, k_n);
    res.n_values.push_back(n);
    res.empirical.push_back(emp);
    res.relative_errors.push_back(
        std::abs(emp - res.predicted) / std::abs(res.predicted));
  }
  return res;
}

}  // namespace pcut
