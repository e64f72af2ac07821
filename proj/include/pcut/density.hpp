#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "pcut/dataset.hpp"

namespace pcut {

double normal_cdf(double z);
// regularized upper incomplete gamma Q(a, x)
double gamma_q(double a, double x);

double mixture_pdf(const GaussianMixtureSpec& spec, const Eigen::VectorXd& x);

// adaptive Gauss-Kronrod (G7/K15) on [a, b]
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-8, int max_depth = 30);

/// Tabulated level-mass function M(t) = mass of {x : f(x) <= t}, built once
/// on a grid so p(y) = M(f(y)) is cheap to evaluate along curves.
class LevelMass {
 public:
  // 1-D over [lo, hi]
  LevelMass(std::function<double(double)> pdf, double lo, double hi,
            int cells = 20000);
  // 2-D over the box [lo, hi] x [lo2, hi2]
  LevelMass(std::function<double(double, double)> pdf, double lo, double hi,
            double lo2, double hi2, int cells_per_axis = 600);

  double mass_below(double level) const;  // in [0, 1]

 private:
  void finalize(std::vector<std::pair<double, double>>& cells);
  std::vector<double> levels_;  // ascending f values
  std::vector<double> cum_;     // normalized cumulative mass
};

/// A density with everything the validation harness needs: pdf, p-value,
/// axis-aligned CDF, and a sampler.
struct DensityModel {
  int dim = 1;
  Eigen::VectorXd box_lo, box_hi;  // support box for quadrature
  std::function<double(const Eigen::VectorXd&)> pdf;
  std::function<double(const Eigen::VectorXd&)> pvalue;
  // mass of {x : x[axis] <= t}
  std::function<double(int, double)> axis_cdf;
  std::function<Dataset(int, std::uint64_t)> sample;
};

DensityModel make_density(const GaussianMixtureSpec& spec);
DensityModel make_uniform_1d(double lo = 0.0, double hi = 1.0);

}  // namespace pcut
