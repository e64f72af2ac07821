#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pcut {

/// n points in R^d with optional ground-truth cluster labels.
/// Immutable after construction; node ids are row indices 0..n-1.
struct Dataset {
  Eigen::MatrixXd points;        // n x d, one row per point
  std::vector<int> true_labels;  // empty, or size n

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  bool has_labels() const { return !true_labels.empty(); }

  void validate() const;  // throws on broken invariants
};

/// Labeled seed set for SSL: which nodes carry a known class.
struct LabelMask {
  std::unordered_map<int, int> labels;  // id -> class index

  std::vector<int> labeled_ids() const;
  void validate(int n, int num_classes) const;
};

/// Diagonal-covariance Gaussian mixture.
struct GaussianMixtureSpec {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::VectorXd> covariances;  // diagonal entries

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return means.empty() ? 0 : static_cast<int>(means[0].size()); }
  void validate() const;
};

Dataset load_csv(const std::string& path, bool has_labels,
                 bool skip_header = false);
void save_csv(const Dataset& ds, const std::string& path);

Dataset sample_gaussian_mixture(const GaussianMixtureSpec& spec, int n,
                                std::uint64_t seed);

// 45% / 45% / 10% across moon-1 / moon-2 / small gaussian, largest-remainder
// rounding so counts sum to n.
Dataset sample_two_moons_plus_gaussian(int n, std::uint64_t seed);

// The imbalanced two-Gaussian mixture: proportions 0.85/0.15, means
// [4.5,0],[0,0], covariances diag(2,1), I.
GaussianMixtureSpec fig2_spec();

// One large and two small proximal components, 2:8:1.
GaussianMixtureSpec fig5_spec();

LabelMask load_label_mask(const std::string& path);
LabelMask sample_label_mask(const Dataset& ds, int num_labeled,
                            int num_classes, std::uint64_t seed);

}  // namespace pcut
