#include "msim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "msim/cluster.hpp"
#include "msim/dataset.hpp"
#include "msim/diagnostics.hpp"
#include "msim/io.hpp"
#include "msim/svm.hpp"
#include "msim/util.hpp"

namespace fs = std::filesystem;

namespace msim {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

// ---------------------------------------------------------------------------
// option bags

struct SimulateOpts {
    std::string out_dir = "out";
    std::string population = "canonical";
    int runs = 1;
    double span = 720000.0;
    double burn_in = 20000.0;
    uint64_t seed = 7;
    int jobs = 1;
};

struct FeaturesOpts {
    std::string out_dir = "out";
    std::string merge = "none";
    int features = 18;
};

struct ClassifyOpts {
    std::string out_dir = "out";
    std::string dataset;   // explicit artifact; otherwise discovered
    int features = 0;      // 0: use the dataset's configured view
    std::string kernel = "linear";
    double C = 1.0;
    double gamma = 0.1;
    int degree = 3;
    bool grid = false;
};

struct ClusterOpts {
    std::string out_dir = "out";
    std::string dataset;
    int features = 0;
    std::vector<int> ks = {9};
    std::string linkage = "ward";
    bool skip_diagnostics = false;
};

struct StylizedOpts {
    std::string out_dir = "out";
};

struct ReproduceOpts {
    std::string out_dir = "out";
    int table = 1;
    int runs = 8;
    double span = 144000.0;
    uint64_t seed = 7;
};

// ---------------------------------------------------------------------------
// shared helpers

Scenario build_scenario(const std::string& population, double span,
                        double burn_in) {
    Scenario sc =
        population == "small" ? small_scenario(span) : canonical_scenario(span);
    sc.burn_in = burn_in;
    return sc;
}

MergeMode parse_merge(const std::string& name) {
    auto m = merge_mode_from(name);
    if (!m) throw std::invalid_argument("unknown merge mode: " + name);
    return *m;
}

struct LoadedLog {
    fs::path path;
    Json artifact;
    Manifest manifest;
    int run_index = 0;
};

// every run log under out_dir/logs, ordered by run index
std::vector<LoadedLog> load_logs(const fs::path& out_dir) {
    fs::path dir = out_dir / "logs";
    std::vector<fs::path> paths;
    if (fs::exists(dir))
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".json") paths.push_back(entry.path());
    if (paths.empty())
        throw std::runtime_error("no run logs under " + dir.string() +
                                 "; run the simulate command first");
    std::vector<LoadedLog> logs;
    for (const fs::path& p : paths) {
        LoadedLog ll;
        ll.path = p;
        ll.artifact = read_json_file(p);
        ll.manifest = manifest_of(ll.artifact);
        if (ll.manifest.kind != "run_log")
            throw std::runtime_error("expected a run_log manifest in " +
                                     p.string() + ", found kind '" +
                                     ll.manifest.kind + "'");
        ll.run_index = ll.manifest.params.at("run_index").get<int>();
        logs.push_back(std::move(ll));
    }
    std::sort(logs.begin(), logs.end(),
              [](const LoadedLog& a, const LoadedLog& b) {
                  return a.run_index < b.run_index;
              });
    return logs;
}

// the dataset artifact: an explicit path, or the only file in out_dir/datasets
fs::path find_dataset(const fs::path& out_dir, const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    fs::path dir = out_dir / "datasets";
    std::vector<fs::path> found;
    if (fs::exists(dir))
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".json") found.push_back(entry.path());
    if (found.empty())
        throw std::runtime_error("no dataset under " + dir.string() +
                                 "; run the features command first");
    if (found.size() > 1) {
        std::string msg = "several datasets under " + dir.string() +
                          "; pass --dataset to pick one of:";
        std::sort(found.begin(), found.end());
        for (const fs::path& p : found) msg += "\n  " + p.string();
        throw std::runtime_error(msg);
    }
    return found.front();
}

struct LoadedDataset {
    Dataset ds;
    Manifest manifest;
    uint64_t master_seed = 0;
    SplitIndices split;
    Scaler scaler;
};

// loads a dataset artifact and re-derives its split and scaler from the
// master seed recorded in the manifest
LoadedDataset load_dataset(const fs::path& out_dir,
                           const std::string& explicit_path) {
    fs::path path = find_dataset(out_dir, explicit_path);
    Json j = read_json_file(path);
    LoadedDataset out;
    out.manifest = manifest_of(j);
    if (out.manifest.kind != "dataset")
        throw std::runtime_error("expected a dataset manifest in " +
                                 path.string() + ", found kind '" +
                                 out.manifest.kind + "'");
    out.ds = dataset_from_json(j);
    out.master_seed = out.manifest.params.at("master_seed").get<uint64_t>();
    out.split = stratified_split(out.ds, 0.60, 0.10, 0.30,
                                 experiment_split_seed(out.master_seed));
    out.scaler.fit(out.ds, out.split.train, kFeatureCount);
    return out;
}

int feature_view(int requested, const Dataset& ds) {
    int nf = requested > 0 ? requested : ds.n_features;
    if (nf != kBasicFeatureCount && nf != kFeatureCount)
        throw std::invalid_argument("feature view must be 9 or 18");
    return nf;
}

void emit(const std::string& text) { std::fputs(text.c_str(), stdout); }

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const SimulateOpts& o) {
    Scenario sc = build_scenario(o.population, o.span, o.burn_in);
    fs::path dir = fs::path(o.out_dir) / "logs";
    int jobs = std::max(1, o.jobs);

    for (int base = 0; base < o.runs; base += jobs) {
        int count = std::min(jobs, o.runs - base);
        std::vector<RunLog> batch(static_cast<size_t>(count));
        if (count == 1) {
            batch[0] = run_one(sc, o.seed, base);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < count; ++t)
                pool.emplace_back([&, t] {
                    batch[static_cast<size_t>(t)] = run_one(sc, o.seed, base + t);
                });
            for (std::thread& th : pool) th.join();
        }
        for (int t = 0; t < count; ++t) {
            int run = base + t;
            Manifest m;
            m.kind = "run_log";
            m.params = {{"population", o.population}, {"span", o.span},
                        {"burn_in", o.burn_in},       {"master_seed", o.seed},
                        {"runs", o.runs},             {"run_index", run}};
            fs::path path = dir / (m.short_hash() + strf("_run_%03d.json", run));
            write_json_file(path, log_to_json(batch[static_cast<size_t>(t)], m));
            emit(strf("run %d: %zu records, %zu trades -> %s\n", run,
                      batch[static_cast<size_t>(t)].records.size(),
                      batch[static_cast<size_t>(t)].trades.size(),
                      path.string().c_str()));
        }
    }
    emit(strf("wrote %d run log(s) under %s\n", o.runs, dir.string().c_str()));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// features

int cmd_features(const FeaturesOpts& o) {
    std::vector<LoadedLog> logs = load_logs(o.out_dir);
    const Json& first = logs.front().manifest.params;
    for (const LoadedLog& ll : logs) {
        Json p = ll.manifest.params;
        p.erase("run_index");
        Json f = first;
        f.erase("run_index");
        if (p != f)
            throw std::runtime_error("run log " + ll.path.string() +
                                     " comes from a different simulate "
                                     "configuration than its siblings");
    }
    Scenario sc = build_scenario(first.at("population").get<std::string>(),
                                 first.at("span").get<double>(),
                                 first.at("burn_in").get<double>());
    uint64_t master_seed = first.at("master_seed").get<uint64_t>();
    MergeMode merge = parse_merge(o.merge);
    MergePlan plan = make_merge_plan(sc, merge, experiment_merge_seed(master_seed));

    Dataset ds;
    ds.n_features = o.features;
    Manifest m;
    m.kind = "dataset";
    m.params = {{"merge", merge_mode_name(merge)},
                {"n_features", o.features},
                {"population", first.at("population")},
                {"span", first.at("span")},
                {"burn_in", first.at("burn_in")},
                {"master_seed", master_seed},
                {"runs", static_cast<int>(logs.size())}};
    for (const LoadedLog& ll : logs) {
        RunLog log = log_from_json(ll.artifact);
        std::vector<FeatureRow> rows = extract_run_features(log, sc, plan);
        ds.rows.insert(ds.rows.end(), rows.begin(), rows.end());
        m.inputs[strf("run_%03d", ll.run_index)] = ll.manifest.hash();
    }

    fs::path path = fs::path(o.out_dir) / "datasets" /
                    (m.short_hash() + "_dataset_" + merge_mode_name(merge) + ".json");
    write_json_file(path, dataset_to_json(ds, m));

    std::vector<int> classes;
    for (const FeatureRow& r : ds.rows)
        if (std::find(classes.begin(), classes.end(), r.label) == classes.end())
            classes.push_back(r.label);
    emit(strf("dataset: %zu samples, %zu classes, %d-feature view -> %s\n",
              ds.rows.size(), classes.size(), o.features, path.string().c_str()));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const ClassifyOpts& o) {
    LoadedDataset data = load_dataset(o.out_dir, o.dataset);
    int nf = feature_view(o.features, data.ds);

    auto Xtr = matrix_of(data.ds, data.split.train, data.scaler, nf);
    auto ytr = labels_of(data.ds, data.split.train);
    auto Xva = matrix_of(data.ds, data.split.val, data.scaler, nf);
    auto yva = labels_of(data.ds, data.split.val);
    auto Xte = matrix_of(data.ds, data.split.test, data.scaler, nf);
    auto yte = labels_of(data.ds, data.split.test);

    SvmHyperParams hp;
    auto kernel = kernel_from(o.kernel);
    if (!kernel) throw std::invalid_argument("unknown kernel: " + o.kernel);
    hp.kernel = *kernel;
    hp.C = o.C;
    hp.gamma = o.gamma;
    hp.degree = o.degree;
    if (o.grid) {
        GridResult gr = grid_search(Xtr, ytr, Xva, yva, default_grid());
        hp = gr.best;
        emit(strf("grid: best %s C=%g gamma=%g degree=%d (val accuracy %.4f)\n",
                  kernel_name(hp.kernel), hp.C, hp.gamma, hp.degree,
                  gr.best_val_accuracy));
    }

    OvoSvm model = train_ovo(Xtr, ytr, hp);
    ClassificationReport report = evaluate(model, Xte, yte);

    Manifest mm;
    mm.kind = "model";
    mm.params = {{"model", "ovo_svm"},
                 {"kernel", kernel_name(hp.kernel)},
                 {"C", hp.C},
                 {"gamma", hp.gamma},
                 {"degree", hp.degree},
                 {"n_features", nf},
                 {"grid", o.grid},
                 {"split", "60/10/30"}};
    mm.inputs["dataset"] = data.manifest.hash();
    Json model_json = svm_to_json(model, mm);
    if (hp.kernel == Kernel::Linear) {
        std::vector<std::vector<double>> w = explain_weights(model);
        Json wj = Json::array();
        for (size_t p = 0; p < w.size(); ++p) {
            Json row;
            row["class_pos"] = model.pairs[p].class_pos;
            row["class_neg"] = model.pairs[p].class_neg;
            row["weights"] = w[p];
            wj.push_back(std::move(row));
        }
        model_json["feature_attribution"] = std::move(wj);
    }
    fs::path model_path =
        fs::path(o.out_dir) / "models" / (mm.short_hash() + "_svm.json");
    write_json_file(model_path, model_json);

    Manifest rm;
    rm.kind = "report";
    rm.params = mm.params;
    rm.params["report"] = "classification";
    rm.inputs["dataset"] = data.manifest.hash();
    rm.inputs["model"] = mm.hash();
    std::string text = classification_report_text(report, rm);
    fs::path report_path = fs::path(o.out_dir) / "reports" /
                           (rm.short_hash() + "_classification.tsv");
    write_text_file(report_path, text);

    emit(text);
    emit(strf("model -> %s\nreport -> %s\n", model_path.string().c_str(),
              report_path.string().c_str()));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// cluster

int cmd_cluster(const ClusterOpts& o) {
    if (o.ks.empty()) throw std::invalid_argument("need at least one --k");
    LoadedDataset data = load_dataset(o.out_dir, o.dataset);
    int nf = feature_view(o.features, data.ds);
    auto link = linkage_from(o.linkage);
    if (!link) throw std::invalid_argument("unknown linkage: " + o.linkage);

    std::vector<size_t> fit_rows = data.split.train;
    fit_rows.insert(fit_rows.end(), data.split.val.begin(), data.split.val.end());
    auto Xfit = matrix_of(data.ds, fit_rows, data.scaler, nf);
    auto yfit = labels_of(data.ds, fit_rows);
    auto Xte = matrix_of(data.ds, data.split.test, data.scaler, nf);
    auto yte = labels_of(data.ds, data.split.test);

    Dendrogram tree = agglomerate(Xfit, *link);

    Manifest tm;
    tm.kind = "model";
    tm.params = {{"model", "dendrogram"},
                 {"linkage", linkage_name(*link)},
                 {"n_features", nf},
                 {"fit", "train+val"}};
    tm.inputs["dataset"] = data.manifest.hash();
    fs::path tree_path =
        fs::path(o.out_dir) / "models" / (tm.short_hash() + "_dendrogram.json");
    write_json_file(tree_path, dendrogram_to_json(tree, tm));

    Manifest rm;
    rm.kind = "report";
    rm.params = tm.params;
    rm.params["report"] = "cluster";
    rm.params["k"] = o.ks;
    rm.inputs["dataset"] = data.manifest.hash();
    rm.inputs["dendrogram"] = tm.hash();

    std::string text;
    for (int k : o.ks) {
        ClusterModel model = fit_clusters_cut(Xfit, yfit, k, tree);
        ClusterEvaluation ev = evaluate_clusters(model, Xte, yte);
        text += cluster_report_text(ev, k, rm);
        text += "\n";
    }
    fs::path report_path =
        fs::path(o.out_dir) / "reports" / (rm.short_hash() + "_cluster.tsv");
    write_text_file(report_path, text);
    emit(text);

    if (!o.skip_diagnostics) {
        int hi = std::max(20, *std::max_element(o.ks.begin(), o.ks.end()));
        hi = std::min(hi, static_cast<int>(Xfit.size()));
        std::vector<int> ks;
        for (int k = 2; k <= hi; ++k) ks.push_back(k);
        KDiagnostics diag = k_diagnostics(Xfit, tree, ks);
        std::string dt = "# manifest " + rm.hash() + " kind cluster_diagnostics\n";
        dt += "k\tsilhouette\twcss\n";
        for (size_t i = 0; i < ks.size(); ++i)
            dt += strf("%d\t%.6f\t%.6g\n", ks[i], diag.silhouette[i], diag.wcss[i]);
        dt += strf("silhouette_peak_k\t%d\n", diag.silhouette_peak_k);
        dt += strf("elbow_k\t%d\n", diag.elbow_k);
        dt += strf("cophenetic\t%.6f\n", diag.cophenetic);
        fs::path diag_path = fs::path(o.out_dir) / "reports" /
                             (rm.short_hash() + "_cluster_diag.tsv");
        write_text_file(diag_path, dt);
        emit(dt);
    }
    emit(strf("dendrogram -> %s\nreport -> %s\n", tree_path.string().c_str(),
              report_path.string().c_str()));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// stylized

int cmd_stylized(const StylizedOpts& o) {
    std::vector<LoadedLog> logs = load_logs(o.out_dir);
    for (const LoadedLog& ll : logs) {
        RunLog log = log_from_json(ll.artifact);
        StylizedReport rep;
        try {
            rep = stylized_report(log);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("log " + ll.path.string() +
                                     " is too short for the stylized report (" +
                                     e.what() + ")");
        }

        Manifest rm;
        rm.kind = "report";
        rm.params = {{"report", "stylized"}, {"run_index", ll.run_index}};
        rm.inputs[strf("run_%03d", ll.run_index)] = ll.manifest.hash();

        std::string text = "# manifest " + rm.hash() + " kind stylized_report\n";
        text += strf("trades_per_hour\t%.4f\n", rep.trades_per_hour);
        text += strf("excess_kurtosis_1s\t%.6f\n", rep.hist_1s.excess_kurtosis);
        text += strf("excess_kurtosis_1min\t%.6f\n", rep.hist_1min.excess_kurtosis);
        text += strf("acf_lag1\t%.6f\n", rep.acf_returns[1]);
        text += strf("mean_acf_raw_1_50\t%.6f\n", rep.mean_acf_raw);
        text += strf("mean_acf_abs_1_50\t%.6f\n", rep.mean_acf_abs);
        for (const auto& [name, hist] :
             {std::pair<const char*, const ReturnHistogram*>{"histogram_1s",
                                                             &rep.hist_1s},
              {"histogram_1min", &rep.hist_1min}}) {
            text += strf("section\t%s\tn\t%lld\tfit_mean\t%.6g\tfit_std\t%.6g\n",
                         name, hist->n, hist->fit_mean, hist->fit_std);
            text += "lo\thi\tcount\tgaussian_expected\n";
            for (const HistogramBin& b : hist->bins) {
                double expected = 0.0;
                if (hist->fit_std > 0.0) {
                    double z = (0.5 * (b.lo + b.hi) - hist->fit_mean) / hist->fit_std;
                    expected = static_cast<double>(hist->n) * (b.hi - b.lo) *
                               std::exp(-0.5 * z * z) /
                               (hist->fit_std * std::sqrt(2.0 * 3.14159265358979324));
                }
                text += strf("%.6g\t%.6g\t%lld\t%.4f\n", b.lo, b.hi, b.count,
                             expected);
            }
        }
        text += "section\tacf\nlag\traw\tabs\n";
        for (size_t lag = 0; lag < rep.acf_returns.size(); ++lag)
            text += strf("%zu\t%.6f\t%.6f\n", lag, rep.acf_returns[lag],
                         rep.acf_abs_returns[lag]);

        fs::path path =
            fs::path(o.out_dir) / "reports" /
            (rm.short_hash() + strf("_stylized_run_%03d.tsv", ll.run_index));
        write_text_file(path, text);
        emit(strf("run %d: trades/hour %.1f, excess kurtosis 1s %.2f / 1min %.2f, "
                  "lag-1 acf %.3f, mean acf |r| %.3f vs raw %.3f -> %s\n",
                  ll.run_index, rep.trades_per_hour, rep.hist_1s.excess_kurtosis,
                  rep.hist_1min.excess_kurtosis, rep.acf_returns[1],
                  rep.mean_acf_abs, rep.mean_acf_raw, path.string().c_str()));
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// reproduce

struct BenchmarkRow {
    std::string name;
    double target = 0.0;
    double tolerance = 0.0;
    double obtained = 0.0;
};

double classification_accuracy(const Experiment& ex) {
    auto Xtr = ex.x(ex.split.train);
    auto ytr = ex.y(ex.split.train);
    auto Xte = ex.x(ex.split.test);
    auto yte = ex.y(ex.split.test);
    SvmHyperParams hp;  // linear, C = 1
    OvoSvm model = train_ovo(Xtr, ytr, hp);
    return evaluate(model, Xte, yte).accuracy;
}

double clustering_accuracy(const Experiment& ex, int k, const Dendrogram& tree,
                           const std::vector<std::vector<double>>& Xfit,
                           const std::vector<int>& yfit) {
    ClusterModel model = fit_clusters_cut(Xfit, yfit, k, tree);
    return evaluate_clusters(model, ex.x(ex.split.test), ex.y(ex.split.test))
        .accuracy;
}

int cmd_reproduce(const ReproduceOpts& o) {
    // reference targets for the benchmark tables; classification rows use the
    // linear kernel at C = 1, clustering rows cut a Ward tree fitted on the
    // train+val rows
    constexpr double kClsTol = 0.05;
    constexpr double kCluTol = 0.10;
    Scenario sc = canonical_scenario(o.span);
    std::vector<BenchmarkRow> rows;

    auto classification_table = [&](int nf, double target_none,
                                    double target_merged) {
        Experiment none = run_experiment(sc, o.runs, o.seed, MergeMode::None, nf);
        rows.push_back({strf("classification_%dfeat_none", nf), target_none,
                        kClsTol, classification_accuracy(none)});
        Experiment merged =
            run_experiment(sc, o.runs, o.seed, MergeMode::TwoThirds, nf);
        rows.push_back({strf("classification_%dfeat_twothirds", nf),
                        target_merged, kClsTol, classification_accuracy(merged)});
    };
    auto clustering_table = [&](int nf, MergeMode merge, int k_low, double t_low,
                                int k_high, double t_high) {
        Experiment ex = run_experiment(sc, o.runs, o.seed, merge, nf);
        std::vector<size_t> fit = ex.fit_rows();
        auto Xfit = ex.x(fit);
        auto yfit = ex.y(fit);
        Dendrogram tree = agglomerate(Xfit, Linkage::Ward);
        rows.push_back({strf("clustering_%dfeat_%s_k%d", nf,
                             merge_mode_name(merge), k_low),
                        t_low, kCluTol,
                        clustering_accuracy(ex, k_low, tree, Xfit, yfit)});
        rows.push_back({strf("clustering_%dfeat_%s_k%d", nf,
                             merge_mode_name(merge), k_high),
                        t_high, kCluTol,
                        clustering_accuracy(ex, k_high, tree, Xfit, yfit)});
    };

    switch (o.table) {
        case 1: classification_table(18, 0.99, 0.91); break;
        case 2: classification_table(9, 0.85, 0.58); break;
        case 5: clustering_table(18, MergeMode::None, 9, 0.9439, 15, 0.7533); break;
        case 6: clustering_table(18, MergeMode::TwoThirds, 9, 0.6321, 14, 0.9097); break;
        case 7: clustering_table(9, MergeMode::None, 9, 0.7443, 15, 0.7640); break;
        case 8: clustering_table(9, MergeMode::TwoThirds, 9, 0.6200, 14, 0.5583); break;
        default:
            throw std::invalid_argument(
                "unknown benchmark table (supported: 1, 2, 5, 6, 7, 8)");
    }

    Manifest rm;
    rm.kind = "report";
    rm.params = {{"report", "reproduce"},
                 {"table", o.table},
                 {"runs", o.runs},
                 {"span", o.span},
                 {"master_seed", o.seed},
                 {"population", "canonical"}};
    std::string text = "# manifest " + rm.hash() + " kind reproduce_report\n";
    text += strf("table\t%d\n", o.table);
    text += "experiment\ttarget\tobtained\ttolerance\tverdict\n";
    for (const BenchmarkRow& row : rows)
        text += strf("%s\t%.4f\t%.4f\t%.4f\t%s\n", row.name.c_str(), row.target,
                     row.obtained, row.tolerance,
                     std::fabs(row.obtained - row.target) <= row.tolerance
                         ? "within"
                         : "outside");

    fs::path path = fs::path(o.out_dir) / "reports" /
                    (rm.short_hash() + strf("_reproduce_table_%d.txt", o.table));
    write_text_file(path, text);
    emit(text);
    emit(strf("report -> %s\n", path.string().c_str()));
    return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// entry point

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"event-driven limit order book market simulator with a "
                 "trading-agent classification and clustering pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "INI configuration file (command-line flags take precedence)");

    SimulateOpts sim;
    CLI::App* s = app.add_subcommand("simulate", "simulate runs and write logs");
    s->add_option("--out-dir", sim.out_dir, "artifact directory");
    s->add_option("--runs", sim.runs, "number of runs")->check(CLI::PositiveNumber);
    s->add_option("--span", sim.span, "session length, 0.1 s units")
        ->check(CLI::PositiveNumber);
    s->add_option("--burn-in", sim.burn_in, "warm-up length before t=0")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--population", sim.population, "agent population")
        ->check(CLI::IsMember({"canonical", "small"}));
    s->add_option("--seed", sim.seed, "master seed");
    s->add_option("--jobs", sim.jobs, "parallel runs in flight")
        ->check(CLI::PositiveNumber);

    FeaturesOpts feat;
    CLI::App* f = app.add_subcommand("features",
                                     "extract per-sample features from logs");
    f->add_option("--out-dir", feat.out_dir, "artifact directory");
    f->add_option("--merge", feat.merge, "noise merge setting")
        ->check(CLI::IsMember({"none", "half", "twothirds"}));
    f->add_option("--features", feat.features, "feature view (9 or 18)")
        ->check(CLI::IsMember({9, 18}));

    ClassifyOpts cls;
    CLI::App* c = app.add_subcommand("classify", "train and evaluate the classifier");
    c->add_option("--out-dir", cls.out_dir, "artifact directory");
    c->add_option("--dataset", cls.dataset, "dataset artifact path");
    c->add_option("--features", cls.features, "feature view override (9 or 18)")
        ->check(CLI::IsMember({0, 9, 18}));
    c->add_option("--kernel", cls.kernel, "kernel")
        ->check(CLI::IsMember({"linear", "poly", "rbf"}));
    c->add_option("--C", cls.C, "soft-margin parameter")->check(CLI::PositiveNumber);
    c->add_option("--gamma", cls.gamma, "kernel width")->check(CLI::PositiveNumber);
    c->add_option("--degree", cls.degree, "polynomial degree")
        ->check(CLI::PositiveNumber);
    c->add_flag("--grid", cls.grid, "pick hyperparameters on the validation set");

    ClusterOpts clu;
    CLI::App* u = app.add_subcommand("cluster", "fit and evaluate the clustering");
    u->add_option("--out-dir", clu.out_dir, "artifact directory");
    u->add_option("--dataset", clu.dataset, "dataset artifact path");
    u->add_option("--features", clu.features, "feature view override (9 or 18)")
        ->check(CLI::IsMember({0, 9, 18}));
    u->add_option("--k", clu.ks, "cluster counts to report");
    u->add_option("--linkage", clu.linkage, "linkage rule")
        ->check(CLI::IsMember({"ward", "complete", "average", "centroid"}));
    u->add_flag("--skip-diagnostics", clu.skip_diagnostics,
                "skip the per-k silhouette/scatter sweep");

    StylizedOpts sty;
    CLI::App* y = app.add_subcommand("stylized", "stylized-fact report from logs");
    y->add_option("--out-dir", sty.out_dir, "artifact directory");

    ReproduceOpts rep;
    CLI::App* r = app.add_subcommand(
        "reproduce", "run a benchmark table end to end and compare targets");
    r->add_option("--out-dir", rep.out_dir, "artifact directory");
    r->add_option("--table", rep.table, "benchmark table id (1, 2, 5, 6, 7, 8)");
    r->add_option("--runs", rep.runs, "runs per experiment")
        ->check(CLI::PositiveNumber);
    r->add_option("--span", rep.span, "session length, 0.1 s units")
        ->check(CLI::PositiveNumber);
    r->add_option("--seed", rep.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (s->parsed()) return cmd_simulate(sim);
        if (f->parsed()) return cmd_features(feat);
        if (c->parsed()) return cmd_classify(cls);
        if (u->parsed()) return cmd_cluster(clu);
        if (y->parsed()) return cmd_stylized(sty);
        if (r->parsed()) return cmd_reproduce(rep);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitConfig;
}

}  // namespace msim
