#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcut/dataset.hpp"
#include "pcut/graph.hpp"
#include "pcut/rank.hpp"
#include "pcut/spectral.hpp"

namespace pcut {

enum class RunMode { clustering, ssl };

struct SearchGrid {
  std::vector<double> lambdas;
  std::vector<int> ks;
  std::vector<double> sigma_multipliers;  // sigma = mult * d~_k
  bool binary_weights = false;            // overrides sigma_multipliers
  Objective objective = Objective::rcut;
  RunMode mode = RunMode::clustering;
  GraphKind kind = GraphKind::rmd;

  // k in {5,10,20,...,100,120,150} intersected with [1, n-1],
  // sigma multipliers 2^j for j=-3..3, lambda in steps of 0.2.
  static SearchGrid defaults(int n);
};

struct CandidateRecord {
  GraphParams params;
  Partition partition;
  double cut0 = 0.0;
  int min_cluster_size = 0;
  bool feasible = false;
  std::optional<double> q;  // cut ratio vs balanced reference (K=2 only)
  double y = 0.0;           // min cluster fraction
};

struct PCutReport {
  std::vector<CandidateRecord> candidates;
  std::optional<int> selected;
  double delta = 0.0;
  int k0 = 0;
  double sigma0 = 0.0;
  double balanced_cut0 = 0.0;

  const Partition& selected_partition() const;
};

/// Candidate pool shared by every delta in a sweep: the baseline graph, the
/// rank vector, and one generated partition per grid point.
struct CandidatePool {
  Graph baseline;
  RankVector rank;
  Partition balanced_ref;
  std::vector<CandidateRecord> candidates;  // cut0/q/y filled, feasibility not
  int k0 = 0;
  double sigma0 = 0.0;
  double balanced_cut0 = 0.0;
};

CandidatePool build_candidate_pool(
    const Dataset& ds, const SearchGrid& grid, int K, int k0,
    std::uint64_t seed, const LabelMask* mask = nullptr,
    const std::vector<Partition>* extra_candidates = nullptr, int threads = 0);

PCutReport select_from_pool(const CandidatePool& pool, int n, double delta,
                            int K);

// Full pipeline: baseline + ranks once, one partition per grid point, Eq.-9
// selection on the baseline graph. selected is null when nothing is feasible.
PCutReport run_pcut(const Dataset& ds, const SearchGrid& grid, int K,
                    double delta, int k0, std::uint64_t seed,
                    const LabelMask* mask = nullptr,
                    const std::vector<Partition>* extra_candidates = nullptr,
                    int threads = 0);

// (q, y) against a balanced reference partition; q null when the reference
// cut is zero.
std::pair<std::optional<double>, double> diagnostics_qy(
    const Graph& baseline, const Partition& partition,
    const Partition& balanced_ref);

// median split along the Fiedler coordinate of the baseline graph
Partition balanced_reference(const Graph& baseline);

struct SweepEntry {
  double delta = 0.0;
  std::optional<double> cut0;
  std::optional<int> selected;
};

std::pair<std::vector<SweepEntry>, CandidatePool> delta_sweep(
    const Dataset& ds, const SearchGrid& grid, int K,
    const std::vector<double>& deltas, int k0, std::uint64_t seed,
    int threads = 0);

// maximal runs (length >= 2) of consecutive deltas whose selected cut0
// agree within relative tolerance 1e-6; entries without a selection skipped
std::vector<std::pair<double, double>> flat_spot_detect(
    const std::vector<SweepEntry>& sweep);

// exact PCut by enumeration, n <= 14
std::pair<Partition, double> brute_force_pcut(const Graph& g, int K,
                                              double delta);

// min misassignment fraction over cluster-to-label bijections (Hungarian)
double clustering_error_rate(const Partition& p, const Dataset& ds);

int default_k0(int n);  // ceil(sqrt(n))

std::string report_to_json(const PCutReport& report);
void save_report_json(const PCutReport& report, const std::string& path);
void save_report_csv(const PCutReport& report, const std::string& path);
void save_partition_csv(const Partition& p, const std::string& path);

}  // namespace pcut
