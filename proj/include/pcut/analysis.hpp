#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcut/dataset.hpp"
#include "pcut/density.hpp"
#include "pcut/graph.hpp"
#include "pcut/spectral.hpp"

namespace pcut {

/// Axis-aligned separating hyperplane {x : x[axis] <= threshold}.
struct HyperplaneCut {
  int axis = 0;
  double threshold = 0.0;
};

struct LimitCheckResult {
  std::vector<int> n_values;
  std::vector<double> empirical;  // scaled cut values
  double predicted = 0.0;
  std::vector<double> relative_errors;
};

enum class CurveObjective { cut, rcut, ncut };

// binary partition by threshold test; cluster 0 holds x[axis] <= t
Partition hyperplane_partition(const Dataset& ds, const HyperplaneCut& cut);

// objective value of the hyperplane partition at each threshold; null when a
// side is empty
std::vector<std::pair<double, std::optional<double>>> cut_curve(
    const Dataset& ds, const Graph& g, int axis,
    const std::vector<double>& thresholds, CurveObjective obj);

double unit_ball_volume(int d);   // eta_d, with eta_0 = 1
double limit_constant(int d);     // C_d = 2 eta_{d-1} / ((d+1) eta_d^{1+1/d})

// C_d B_S int_S f^{1-1/d} rho^{1+1/d} ds with rho = lambda + 2(1-lambda)p;
// point evaluation for d=1, adaptive quadrature along the line for d=2
double predicted_limit(const DensityModel& density, const HyperplaneCut& cut,
                       double lambda);

// per n: sample, rank on the sqrt-n baseline, mean |rank - p| over all points
std::vector<std::pair<int, double>> verify_thm1(
    const DensityModel& density, const std::vector<int>& n_values,
    std::uint64_t seed);

// empirical scaled RCut on unweighted RMD graphs vs the predicted limit;
// k_n = ceil(n^0.7) for d=1, ceil(n^(2/3)) for d >= 2
LimitCheckResult verify_thm2(const DensityModel& density,
                             const HyperplaneCut& cut, double lambda,
                             const std::vector<int>& n_values,
                             std::uint64_t seed);

// one sample's scaled RCut at a fixed cut (building block of verify_thm2)
double scaled_rmd_rcut(const Dataset& ds, const HyperplaneCut& cut,
                       double lambda, int k_n);

}  // namespace pcut
