#include "pcut/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pcut/errors.hpp"
#include "pcut/rng.hpp"

namespace pcut {

void Dataset::validate() const {
  if (n() < 2) throw TooFewPoints("dataset needs at least 2 points");
  if (dim() < 1) throw DataError("dataset dimension must be >= 1");
  if (!true_labels.empty() &&
      static_cast<int>(true_labels.size()) != n())
    throw DataError("true_labels length does not match point count");
}

std::vector<int> LabelMask::labeled_ids() const {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& [id, cls] : labels) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void LabelMask::validate(int n, int num_classes) const {
  if (labels.empty()) throw DataError("label mask is empty");
  std::vector<char> seen(num_classes, 0);
  for (const auto& [id, cls] : labels) {
    if (id < 0 || id >= n)
      throw DataError("labeled id " + std::to_string(id) + " out of range");
    if (cls < 0 || cls >= num_classes)
      throw DataError("label class " + std::to_string(cls) + " out of range");
    seen[cls] = 1;
  }
  for (int c = 0; c < num_classes; ++c)
    if (!seen[c])
      throw DataError("class " + std::to_string(c) + " has no labeled point");
}

void GaussianMixtureSpec::validate() const {
  if (weights.empty() || weights.size() != means.size() ||
      weights.size() != covariances.size())
    throw SpecError("mixture spec: weights/means/covariances size mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw SpecError("mixture weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw SpecError("mixture weights must sum to 1");
  const int d = dim();
  for (std::size_t i = 0; i < means.size(); ++i)
    if (means[i].size() != d || covariances[i].size() != d)
      throw SpecError("mixture component dimension mismatch");
}

Dataset load_csv(const std::string& path, bool has_labels, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  int lineno = 0;
  int width = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_header && lineno == 1) continue;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (width < 0)
      width = static_cast<int>(cells.size());
    else if (static_cast<int>(cells.size()) != width)
      throw ParseError("ragged row " + std::to_string(lineno));
    const int float_cols = has_labels ? width - 1 : width;
    if (float_cols < 1) throw ParseError("row " + std::to_string(lineno) +
                                         " has no coordinate columns");
    std::vector<double> row(float_cols);
    for (int j = 0; j < float_cols; ++j) {
      try {
        std::size_t pos = 0;
        row[j] = std::stod(cells[j], &pos);
        while (pos < cells[j].size() && std::isspace(cells[j][pos])) ++pos;
        if (pos != cells[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("non-numeric cell in row " + std::to_string(lineno));
      }
    }
    if (has_labels) {
      try {
        labels.push_back(std::stoi(cells.back()));
      } catch (const std::exception&) {
        throw ParseError("non-integer label in row " + std::to_string(lineno));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw TooFewPoints("fewer than 2 data rows in " + path);
  Dataset ds;
  ds.points.resize(static_cast<int>(rows.size()), width - (has_labels ? 1 : 0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      ds.points(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  ds.true_labels = std::move(labels);
  ds.validate();
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(17);
  for (int i = 0; i < ds.n(); ++i) {
    for (int j = 0; j < ds.dim(); ++j) {
      if (j) out << ',';
      out << ds.points(i, j);
    }
    if (ds.has_labels()) out << ',' << ds.true_labels[i];
    out << '\n';
  }
}

Dataset sample_gaussian_mixture(const GaussianMixtureSpec& spec, int n,
                                std::uint64_t seed) {
  spec.validate();
  if (n < 2) throw TooFewPoints("n must be >= 2");
  const int d = spec.dim();
  std::vector<double> cum(spec.weights.size());
  std::partial_sum(spec.weights.begin(), spec.weights.end(), cum.begin());
  Rng rng(seed);
  Dataset ds;
  ds.points.resize(n, d);
  ds.true_labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    int c = static_cast<int>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (c >= spec.components()) c = spec.components() - 1;
    for (int j = 0; j < d; ++j)
      ds.points(i, j) =
          spec.means[c](j) + std::sqrt(spec.covariances[c](j)) * rng.gaussian();
    ds.true_labels[i] = c;
  }
  return ds;
}

namespace {

// largest-remainder apportionment of n across the given fractions
std::vector<int> apportion(int n, const std::vector<double>& fracs) {
  std::vector<int> counts(fracs.size());
  std::vector<std::pair<double, int>> rem;
  int total = 0;
  for (std::size_t i = 0; i < fracs.size(); ++i) {
    double exact = fracs[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    total += counts[i];
    rem.push_back({exact - counts[i], static_cast<int>(i)});
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  for (int r = 0; r < n - total; ++r) counts[rem[r].second] += 1;
  return counts;
}

}  // namespace

Dataset sample_two_moons_plus_gaussian(int n, std::uint64_t seed) {
  if (n < 3) throw TooFewPoints("n must be >= 3");
  const auto counts = apportion(n, {0.45, 0.45, 0.10});
  const double pi = 3.14159265358979323846;
  const double noise = 0.1;
  Rng rng(seed);
  Dataset ds;
  ds.points.resize(n, 2);
  ds.true_labels.resize(n);
  int row = 0;
  // upper moon: (cos t, sin t), t in [0, pi]
  for (int i = 0; i < counts[0]; ++i, ++row) {
    double t = rng.uniform() * pi;
    ds.points(row, 0) = std::cos(t) + noise * rng.gaussian();
    ds.points(row, 1) = std::sin(t) + noise * rng.gaussian();
    ds.true_labels[row] = 0;
  }
  // lower moon, shifted right and down by the 0.5 offset
  for (int i = 0; i < counts[1]; ++i, ++row) {
    double t = rng.uniform() * pi;
    ds.points(row, 0) = 1.0 - std::cos(t) + noise * rng.gaussian();
    ds.points(row, 1) = 0.5 - std::sin(t) + noise * rng.gaussian();
    ds.true_labels[row] = 1;
  }
  // small gaussian to the right of the moons
  for (int i = 0; i < counts[2]; ++i, ++row) {
    ds.points(row, 0) = 3.0 + std::sqrt(0.1) * rng.gaussian();
    ds.points(row, 1) = 0.5 + std::sqrt(0.1) * rng.gaussian();
    ds.true_labels[row] = 2;
  }
  return ds;
}

GaussianMixtureSpec fig2_spec() {
  GaussianMixtureSpec s;
  s.weights = {0.85, 0.15};
  s.means = {Eigen::Vector2d(4.5, 0.0), Eigen::Vector2d(0.0, 0.0)};
  s.covariances = {Eigen::Vector2d(2.0, 1.0), Eigen::Vector2d(1.0, 1.0)};
  return s;
}

GaussianMixtureSpec fig5_spec() {
  GaussianMixtureSpec s;
  s.weights = {2.0 / 11.0, 8.0 / 11.0, 1.0 / 11.0};
  s.means = {Eigen::Vector2d(-0.7, 0.0), Eigen::Vector2d(4.5, 0.0),
             Eigen::Vector2d(9.7, 0.0)};
  s.covariances = {Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(2.0, 1.0),
                   Eigen::Vector2d(0.7, 0.7)};
  return s;
}

LabelMask load_label_mask(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  LabelMask mask;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw ParseError("bad mask row " + std::to_string(lineno));
    try {
      mask.labels[std::stoi(a)] = std::stoi(b);
    } catch (const std::exception&) {
      throw ParseError("non-integer mask row " + std::to_string(lineno));
    }
  }
  return mask;
}

LabelMask sample_label_mask(const Dataset& ds, int num_labeled,
                            int num_classes, std::uint64_t seed) {
  if (!ds.has_labels()) throw DataError("dataset has no true labels");
  if (num_labeled < num_classes)
    throw ParamError("need at least one labeled point per class");
  Rng rng(seed);
  LabelMask mask;
  // one forced seed per class, then uniform fill
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> members;
    for (int i = 0; i < ds.n(); ++i)
      if (ds.true_labels[i] == c) members.push_back(i);
    if (members.empty())
      throw DataError("class " + std::to_string(c) + " absent from dataset");
    mask.labels[members[rng.index(members.size())]] = c;
  }
  int guard = 0;
  while (static_cast<int>(mask.labels.size()) < num_labeled) {
    int id = static_cast<int>(rng.index(ds.n()));
    mask.labels.emplace(id, ds.true_labels[id]);
    if (++guard > 100 * num_labeled + 1000) break;
  }
  return mask;
}

}  // namespace pcut
