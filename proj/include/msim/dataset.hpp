#pragma once

#include <cstdint>
#include <vector>

#include "msim/features.hpp"
#include "msim/scenario.hpp"

namespace msim {

// ---------------------------------------------------------------------------
// experiment assembly
//
// An experiment turns a scenario into model-ready matrices: simulate a batch
// of runs, extract one feature row per sample per run (with the experiment's
// noise-merge plan applied), draw a stratified 60/10/30 split, fit the scaler
// on the training rows, and project to the requested feature prefix.  The
// merge pairing and the split are derived from the master seed, so the whole
// experiment replays from (scenario, runs, master_seed, merge, n_features).

// experiment-level seed streams, derived from the master seed well outside
// the per-run index range; exported so that artifact-driven pipelines and
// in-memory experiments draw identical plans and splits
uint64_t experiment_merge_seed(uint64_t master_seed);
uint64_t experiment_split_seed(uint64_t master_seed);

// simulates `runs` runs and collects every sample's feature row; rows appear
// run by run, samples in extraction order, so the layout is deterministic
Dataset assemble_dataset(const Scenario& sc, int runs, uint64_t master_seed,
                         const MergePlan& plan);

// scaled feature matrix for the selected rows, truncated to n_features
std::vector<std::vector<double>> matrix_of(const Dataset& ds,
                                           const std::vector<size_t>& rows,
                                           const Scaler& scaler,
                                           int n_features);
std::vector<int> labels_of(const Dataset& ds, const std::vector<size_t>& rows);

struct Experiment {
    MergeMode merge = MergeMode::None;
    int n_features = kFeatureCount;
    uint64_t master_seed = 0;
    MergePlan plan;
    Dataset dataset;     // raw rows, all 18 features, unscaled
    SplitIndices split;  // stratified 60/10/30
    Scaler scaler;       // fitted on the training rows

    std::vector<std::vector<double>> x(const std::vector<size_t>& rows) const;
    std::vector<int> y(const std::vector<size_t>& rows) const;
    // training + validation rows, in that order: the portion the clustering
    // stage fits on
    std::vector<size_t> fit_rows() const;
};

Experiment run_experiment(const Scenario& sc, int runs, uint64_t master_seed,
                          MergeMode merge, int n_features = kFeatureCount);

}  // namespace msim
