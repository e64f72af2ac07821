#include "pcut/density.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "pcut/errors.hpp"
#include "pcut/rng.hpp"

namespace pcut {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Numerical-Recipes style series / continued fraction for the regularized
// incomplete gamma functions.
double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw NumericalError("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double mixture_pdf(const GaussianMixtureSpec& spec, const Eigen::VectorXd& x) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  double f = 0.0;
  for (int c = 0; c < spec.components(); ++c) {
    double logp = 0.0;
    for (int j = 0; j < spec.dim(); ++j) {
      double var = spec.covariances[c](j);
      double diff = x(j) - spec.means[c](j);
      logp += -0.5 * diff * diff / var - 0.5 * std::log(two_pi * var);
    }
    f += spec.weights[c] * std::exp(logp);
  }
  return f;
}

namespace {

// Kronrod-15 nodes/weights on [-1, 1] with embedded Gauss-7.
const double kXgk[8] = {0.991455371120813, 0.949107912342759,
                        0.864864423359769, 0.741531185599394,
                        0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.0};
const double kWgk[8] = {0.022935322010529, 0.063092092629979,
                        0.104790010322250, 0.140653259715525,
                        0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277,
                       0.381830050505119, 0.417959183673469};

void gk15(const std::function<double(double)>& f, double a, double b,
          double* result, double* err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resg = 0.0, resk = 0.0;
  for (int j = 0; j < 8; ++j) {
    double fv;
    if (j == 7) {
      fv = f(c);
      resk += kWgk[7] * fv;
      resg += kWg[3] * fv;
    } else {
      double f1 = f(c - h * kXgk[j]), f2 = f(c + h * kXgk[j]);
      resk += kWgk[j] * (f1 + f2);
      if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
  }
  *result = resk * h;
  *err = std::abs((resk - resg) * h);
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth, int max_depth) {
  double r, e;
  gk15(f, a, b, &r, &e);
  if (e <= tol || depth >= max_depth) {
    if (depth >= max_depth && e > tol * 100.0)
      throw NumericalError("quadrature did not converge");
    return r;
  }
  double m = 0.5 * (a + b);
  return integrate_rec(f, a, m, tol * 0.5, depth + 1, max_depth) +
         integrate_rec(f, m, b, tol * 0.5, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  return integrate_rec(f, a, b, abs_tol, 0, max_depth);
}

LevelMass::LevelMass(std::function<double(double)> pdf, double lo, double hi,
                     int cells) {
  std::vector<std::pair<double, double>> cv;
  cv.reserve(cells);
  const double dx = (hi - lo) / cells;
  for (int i = 0; i < cells; ++i) {
    double x = lo + (i + 0.5) * dx;
    double f = pdf(x);
    cv.push_back({f, f * dx});
  }
  finalize(cv);
}

LevelMass::LevelMass(std::function<double(double, double)> pdf, double lo,
                     double hi, double lo2, double hi2, int cells_per_axis) {
  std::vector<std::pair<double, double>> cv;
  cv.reserve(static_cast<std::size_t>(cells_per_axis) * cells_per_axis);
  const double dx = (hi - lo) / cells_per_axis;
  const double dy = (hi2 - lo2) / cells_per_axis;
  for (int i = 0; i < cells_per_axis; ++i)
    for (int j = 0; j < cells_per_axis; ++j) {
      double f = pdf(lo + (i + 0.5) * dx, lo2 + (j + 0.5) * dy);
      cv.push_back({f, f * dx * dy});
    }
  finalize(cv);
}

void LevelMass::finalize(std::vector<std::pair<double, double>>& cells) {
  std::sort(cells.begin(), cells.end());
  levels_.resize(cells.size());
  cum_.resize(cells.size());
  double total = 0.0;
  for (const auto& [f, m] : cells) total += m;
  if (total <= 0.0) throw NumericalError("level mass: zero total mass");
  double acc = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    acc += cells[i].second;
    levels_[i] = cells[i].first;
    cum_[i] = acc / total;
  }
}

double LevelMass::mass_below(double level) const {
  auto it = std::upper_bound(levels_.begin(), levels_.end(), level);
  if (it == levels_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - levels_.begin()) - 1];
}

DensityModel make_density(const GaussianMixtureSpec& spec) {
  spec.validate();
  DensityModel m;
  m.dim = spec.dim();
  m.box_lo.resize(spec.dim());
  m.box_hi.resize(spec.dim());
  for (int j = 0; j < spec.dim(); ++j) {
    double lo_j = 1e300, hi_j = -1e300;
    for (int c = 0; c < spec.components(); ++c) {
      double s = std::sqrt(spec.covariances[c](j));
      lo_j = std::min(lo_j, spec.means[c](j) - 10.0 * s);
      hi_j = std::max(hi_j, spec.means[c](j) + 10.0 * s);
    }
    m.box_lo(j) = lo_j;
    m.box_hi(j) = hi_j;
  }
  m.pdf = [spec](const Eigen::VectorXd& x) { return mixture_pdf(spec, x); };
  m.axis_cdf = [spec](int axis, double t) {
    double p = 0.0;
    for (int c = 0; c < spec.components(); ++c)
      p += spec.weights[c] *
           normal_cdf((t - spec.means[c](axis)) /
                      std::sqrt(spec.covariances[c](axis)));
    return p;
  };
  m.sample = [spec](int n, std::uint64_t seed) {
    return sample_gaussian_mixture(spec, n, seed);
  };

  if (spec.components() == 1) {
    // single diagonal Gaussian: sublevel sets are ellipsoids, the mass is a
    // chi-square tail
    const int d = spec.dim();
    m.pvalue = [spec, d](const Eigen::VectorXd& y) {
      double r2 = 0.0;
      for (int j = 0; j < d; ++j) {
        double diff = y(j) - spec.means[0](j);
        r2 += diff * diff / spec.covariances[0](j);
      }
      return gamma_q(0.5 * d, 0.5 * r2);
    };
    return m;
  }

  // numeric level-mass table
  double lo = 1e300, hi = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (int c = 0; c < spec.components(); ++c) {
    double s0 = std::sqrt(spec.covariances[c](0));
    lo = std::min(lo, spec.means[c](0) - 10.0 * s0);
    hi = std::max(hi, spec.means[c](0) + 10.0 * s0);
    if (spec.dim() >= 2) {
      double s1 = std::sqrt(spec.covariances[c](1));
      lo2 = std::min(lo2, spec.means[c](1) - 10.0 * s1);
      hi2 = std::max(hi2, spec.means[c](1) + 10.0 * s1);
    }
  }
  if (spec.dim() == 1) {
    auto lm = std::make_shared<LevelMass>(
        [spec](double x) {
          Eigen::VectorXd v(1);
          v(0) = x;
          return mixture_pdf(spec, v);
        },
        lo, hi);
    m.pvalue = [spec, lm](const Eigen::VectorXd& y) {
      return lm->mass_below(mixture_pdf(spec, y));
    };
  } else if (spec.dim() == 2) {
    auto lm = std::make_shared<LevelMass>(
        [spec](double x, double y) {
          Eigen::Vector2d v(x, y);
          return mixture_pdf(spec, v);
        },
        lo, hi, lo2, hi2);
    m.pvalue = [spec, lm](const Eigen::VectorXd& y) {
      return lm->mass_below(mixture_pdf(spec, y));
    };
  } else {
    m.pvalue = [](const Eigen::VectorXd&) -> double {
      throw NumericalError(
          "p-value only available for d <= 2 multi-component mixtures");
    };
  }
  return m;
}

DensityModel make_uniform_1d(double lo, double hi) {
  if (hi <= lo) throw ParamError("uniform density needs hi > lo");
  DensityModel m;
  m.dim = 1;
  m.box_lo = Eigen::VectorXd::Constant(1, lo);
  m.box_hi = Eigen::VectorXd::Constant(1, hi);
  const double h = 1.0 / (hi - lo);
  m.pdf = [lo, hi, h](const Eigen::VectorXd& x) {
    return (x(0) >= lo && x(0) <= hi) ? h : 0.0;
  };
  // all interior density is equal, so the whole mass is at or below f(y)
  m.pvalue = [lo, hi, h](const Eigen::VectorXd& x) {
    return (x(0) >= lo && x(0) <= hi) ? 1.0 : 0.0;
  };
  m.axis_cdf = [lo, hi](int, double t) {
    return std::clamp((t - lo) / (hi - lo), 0.0, 1.0);
  };
  m.sample = [lo, hi](int n, std::uint64_t seed) {
    Rng rng(seed);
    Dataset ds;
    ds.points.resize(n, 1);
    for (int i = 0; i < n; ++i) ds.points(i, 0) = rng.uniform(lo, hi);
    return ds;
  };
  return m;
}

}  // namespace pcut
