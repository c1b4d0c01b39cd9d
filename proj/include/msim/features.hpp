#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msim/record.hpp"
#include "msim/scenario.hpp"

namespace msim {

// ---------------------------------------------------------------------------
// per-sample behavioral features
//
// A sample is one (agent, run) pair; its feature vector is computed from the
// orders that agent submitted during one run.  The first nine features use
// only the sample's own activity; the trend block compares submission times
// against the run's mid-price path; the profit block looks at orders placed
// shortly after a regime change and measures the subsequent mid move in the
// order's direction.  The nine-feature view used by the reduced experiments
// is exactly the first nine entries of the vector.

constexpr int kFeatureCount = 18;
constexpr int kBasicFeatureCount = 9;

const std::array<std::string, kFeatureCount>& feature_names();

struct FeatureRow {
    int agent = 0;   // primary agent id of the sample
    int run = 0;
    int label = 0;   // class id of the primary agent
    bool empty_activity = false;  // no records at all: vector is all zeros
    std::array<double, kFeatureCount> x{};
};

// ---------------------------------------------------------------------------
// noise merging
//
// The harder experiment settings blend each strategic agent's stream with
// one or two noise traders' streams before features are computed, keeping
// the strategic label.  The pairing is drawn once per experiment from the
// given seed and persisted, so every run of the experiment sees the same
// assignment.

enum class MergeMode { None, Half, TwoThirds };

const char* merge_mode_name(MergeMode m);
std::optional<MergeMode> merge_mode_from(const std::string& name);

struct MergeGroup {
    int primary = 0;             // keeps its label
    std::vector<int> partners;   // noise agents folded into the sample
};

struct MergePlan {
    MergeMode mode = MergeMode::None;
    uint64_t seed = 0;
    std::vector<MergeGroup> groups;  // empty in None mode
};

// pairs every non-noise agent with 1 (Half) or 2 (TwoThirds) distinct noise
// traders drawn without replacement; throws if the population cannot supply
// enough noise traders
MergePlan make_merge_plan(const Scenario& sc, MergeMode mode, uint64_t seed);

// ---------------------------------------------------------------------------
// extraction

// last-known mid lookup over a run's recorded mid path
class MidLookup {
public:
    explicit MidLookup(const std::vector<MidPoint>& pts) : pts_(&pts) {}
    // value of the last mid change at or before t; empty before the first
    std::optional<double> at(double t) const;

private:
    const std::vector<MidPoint>* pts_;
};

// feature vectors for every sample of one run.  Deterministic: recomputing
// over the same log yields bit-identical values.
std::vector<FeatureRow> extract_run_features(const RunLog& log,
                                             const Scenario& sc,
                                             const MergePlan& plan);

// ---------------------------------------------------------------------------
// dataset assembly

struct Dataset {
    int n_features = kFeatureCount;
    std::vector<FeatureRow> rows;
};

// row indices per split
struct SplitIndices {
    std::vector<size_t> train, val, test;
};

// stratified random split by label; fractions must sum to 1.  Every class
// needs at least three rows.  Per-class counts match the fractions to within
// one sample.
SplitIndices stratified_split(const Dataset& ds, double f_train, double f_val,
                              double f_test, uint64_t seed);

// per-feature z-scoring fitted on the training rows only (population
// standard deviation); constant features are centered but not divided
class Scaler {
public:
    void fit(const Dataset& ds, const std::vector<size_t>& rows, int n_features);
    void transform(std::array<double, kFeatureCount>& x) const;
    void inverse(std::array<double, kFeatureCount>& x) const;
    void apply(Dataset& ds) const;  // transforms every row

    int n_features() const { return n_; }
    const std::vector<double>& means() const { return mean_; }
    const std::vector<double>& stds() const { return std_; }
    void set(std::vector<double> mean, std::vector<double> std);

private:
    int n_ = 0;
    std::vector<double> mean_, std_;
};

}  // namespace msim
