#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "pcut/dataset.hpp"
#include "pcut/errors.hpp"

using namespace pcut;

namespace {

std::string write_temp(const std::string& contents) {
  static int counter = 0;
  std::string path = "test_dataset_tmp_" + std::to_string(counter++) + ".csv";
  std::ofstream out(path);
  out << contents;
  return path;
}

}  // namespace

TEST_CASE("load_csv parses plain rows") {
  auto path = write_temp("0,0\n1,1\n2,2\n");
  Dataset ds = load_csv(path, false);
  CHECK(ds.n() == 3);
  CHECK(ds.dim() == 2);
  CHECK(!ds.has_labels());
  std::remove(path.c_str());
}

TEST_CASE("load_csv parses label column") {
  auto path = write_temp("0,0,0\n1,1,1\n");
  Dataset ds = load_csv(path, true);
  CHECK(ds.n() == 2);
  CHECK(ds.dim() == 2);
  REQUIRE(ds.has_labels());
  CHECK(ds.true_labels[0] == 0);
  CHECK(ds.true_labels[1] == 1);
  std::remove(path.c_str());
}

TEST_CASE("load_csv rejects ragged rows") {
  auto path = write_temp("0,0\n1\n");
  CHECK_THROWS_AS(load_csv(path, false), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("load_csv rejects non-numeric cells and tiny files") {
  auto bad = write_temp("0,a\n1,2\n");
  CHECK_THROWS_AS(load_csv(bad, false), ParseError);
  std::remove(bad.c_str());
  auto tiny = write_temp("0,0\n");
  CHECK_THROWS_AS(load_csv(tiny, false), TooFewPoints);
  std::remove(tiny.c_str());
}

TEST_CASE("csv round trip is exact") {
  Dataset ds = sample_gaussian_mixture(fig2_spec(), 50, 99);
  auto path = write_temp("");
  save_csv(ds, path);
  Dataset back = load_csv(path, true);
  CHECK(back.points == ds.points);
  CHECK(back.true_labels == ds.true_labels);
  std::remove(path.c_str());
}

TEST_CASE("gaussian mixture sampling is deterministic and near proportions") {
  Dataset a = sample_gaussian_mixture(fig2_spec(), 1000, 7);
  Dataset b = sample_gaussian_mixture(fig2_spec(), 1000, 7);
  CHECK(a.points == b.points);
  CHECK(a.true_labels == b.true_labels);
  int c0 = 0;
  for (int l : a.true_labels) c0 += l == 0;
  CHECK(c0 > 800);
  CHECK(c0 < 900);
}

TEST_CASE("mixture law over 10000 draws") {
  Dataset ds = sample_gaussian_mixture(fig2_spec(), 10000, 3);
  int c0 = 0;
  for (int l : ds.true_labels) c0 += l == 0;
  double frac = c0 / 10000.0;
  CHECK(frac > 0.83);
  CHECK(frac < 0.87);
}

TEST_CASE("bad mixture weights rejected") {
  GaussianMixtureSpec s = fig2_spec();
  s.weights = {0.85, 0.16};
  CHECK_THROWS_AS(sample_gaussian_mixture(s, 10, 1), SpecError);
}

TEST_CASE("degenerate single-component mixture") {
  GaussianMixtureSpec s;
  s.weights = {1.0};
  s.means = {Eigen::VectorXd::Zero(2)};
  s.covariances = {Eigen::VectorXd::Ones(2)};
  Dataset ds = sample_gaussian_mixture(s, 2, 5);
  CHECK(ds.n() == 2);
  CHECK(ds.true_labels == std::vector<int>{0, 0});
}

TEST_CASE("moons generator counts and determinism") {
  Dataset ds = sample_two_moons_plus_gaussian(1000, 11);
  int counts[3] = {0, 0, 0};
  for (int l : ds.true_labels) counts[l] += 1;
  CHECK(counts[0] == 450);
  CHECK(counts[1] == 450);
  CHECK(counts[2] == 100);

  Dataset small = sample_two_moons_plus_gaussian(20, 11);
  int sc[3] = {0, 0, 0};
  for (int l : small.true_labels) sc[l] += 1;
  CHECK(sc[0] == 9);
  CHECK(sc[1] == 9);
  CHECK(sc[2] == 2);

  Dataset again = sample_two_moons_plus_gaussian(1000, 11);
  CHECK(ds.points == again.points);
}

TEST_CASE("fig5 spec matches the 2:8:1 proportions") {
  GaussianMixtureSpec s = fig5_spec();
  CHECK(s.weights[0] == doctest::Approx(2.0 / 11.0));
  CHECK(s.weights[1] == doctest::Approx(8.0 / 11.0));
  CHECK(s.weights[2] == doctest::Approx(1.0 / 11.0));
  CHECK(s.means[1](0) == 4.5);
  CHECK(s.covariances[2](0) == doctest::Approx(0.7));
}

TEST_CASE("label mask validation") {
  LabelMask mask;
  mask.labels = {{0, 0}, {5, 1}};
  CHECK_NOTHROW(mask.validate(10, 2));
  CHECK_THROWS_AS(mask.validate(10, 3), DataError);  // class 2 unseeded
  mask.labels[12] = 0;
  CHECK_THROWS_AS(mask.validate(10, 2), DataError);  // id out of range
}
