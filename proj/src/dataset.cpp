#include "msim/dataset.hpp"

#include <stdexcept>

#include "msim/rng.hpp"

namespace msim {

namespace {

// seed streams for experiment-level draws; far outside the run-index range
// used by the per-run seeds
constexpr uint64_t kMergeStream = 0x6d65726765ull;  // noise-merge pairing
constexpr uint64_t kSplitStream = 0x73706c6974ull;  // split membership

}  // namespace

uint64_t experiment_merge_seed(uint64_t master_seed) {
    return derive_seed(master_seed, kMergeStream);
}

uint64_t experiment_split_seed(uint64_t master_seed) {
    return derive_seed(master_seed, kSplitStream);
}

Dataset assemble_dataset(const Scenario& sc, int runs, uint64_t master_seed,
                         const MergePlan& plan) {
    if (runs < 1) throw std::invalid_argument("assemble_dataset: runs < 1");
    Dataset ds;
    ds.rows.reserve(static_cast<size_t>(runs) * static_cast<size_t>(sc.total_agents()));
    run_batch(sc, master_seed, runs, [&](RunLog&& log) {
        std::vector<FeatureRow> rows = extract_run_features(log, sc, plan);
        ds.rows.insert(ds.rows.end(), rows.begin(), rows.end());
    });
    return ds;
}

std::vector<std::vector<double>> matrix_of(const Dataset& ds,
                                           const std::vector<size_t>& rows,
                                           const Scaler& scaler,
                                           int n_features) {
    if (n_features < 1 || n_features > kFeatureCount)
        throw std::invalid_argument("matrix_of: bad feature count");
    std::vector<std::vector<double>> X;
    X.reserve(rows.size());
    for (size_t r : rows) {
        std::array<double, kFeatureCount> x = ds.rows[r].x;
        scaler.transform(x);
        X.emplace_back(x.begin(), x.begin() + n_features);
    }
    return X;
}

std::vector<int> labels_of(const Dataset& ds, const std::vector<size_t>& rows) {
    std::vector<int> y;
    y.reserve(rows.size());
    for (size_t r : rows) y.push_back(ds.rows[r].label);
    return y;
}

std::vector<std::vector<double>> Experiment::x(const std::vector<size_t>& rows) const {
    return matrix_of(dataset, rows, scaler, n_features);
}

std::vector<int> Experiment::y(const std::vector<size_t>& rows) const {
    return labels_of(dataset, rows);
}

std::vector<size_t> Experiment::fit_rows() const {
    std::vector<size_t> rows = split.train;
    rows.insert(rows.end(), split.val.begin(), split.val.end());
    return rows;
}

Experiment run_experiment(const Scenario& sc, int runs, uint64_t master_seed,
                          MergeMode merge, int n_features) {
    if (n_features < 1 || n_features > kFeatureCount)
        throw std::invalid_argument("run_experiment: bad feature count");
    Experiment ex;
    ex.merge = merge;
    ex.n_features = n_features;
    ex.master_seed = master_seed;
    ex.plan = make_merge_plan(sc, merge, experiment_merge_seed(master_seed));
    ex.dataset = assemble_dataset(sc, runs, master_seed, ex.plan);
    ex.split = stratified_split(ex.dataset, 0.60, 0.10, 0.30,
                                experiment_split_seed(master_seed));
    ex.scaler.fit(ex.dataset, ex.split.train, kFeatureCount);
    return ex;
}

}  // namespace msim
