// tests for artifact serialization, manifests, and the command-line driver

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "msim/cli.hpp"
#include "msim/cluster.hpp"
#include "msim/dataset.hpp"
#include "msim/io.hpp"
#include "msim/scenario.hpp"
#include "msim/svm.hpp"

using namespace msim;
namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "msim");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<fs::path> files_in(const fs::path& dir) {
    std::vector<fs::path> out;
    if (fs::exists(dir))
        for (const auto& entry : fs::directory_iterator(dir))
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

RunLog small_log(uint64_t seed) {
    Scenario sc = small_scenario(6000.0);
    sc.burn_in = 1000.0;
    return run_one(sc, seed, 0);
}

}  // namespace

// ---------------------------------------------------------------------------
// manifests

TEST_CASE("manifest hash: stable, sensitive to params and inputs") {
    Manifest a;
    a.kind = "run_log";
    a.params = {{"span", 6000.0}, {"seed", 7}};

    Manifest b = a;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    CHECK(a.short_hash() == a.hash().substr(0, 8));

    b.params["seed"] = 8;
    CHECK(a.hash() != b.hash());

    // key order in the params object must not matter
    Manifest c;
    c.kind = "run_log";
    c.params = {{"seed", 7}, {"span", 6000.0}};
    CHECK(c.hash() == a.hash());

    // input hashes chain: downstream manifests change when an input does
    Manifest d1;
    d1.kind = "dataset";
    d1.inputs["run_000"] = a.hash();
    Manifest d2 = d1;
    d2.inputs["run_000"] = b.hash();
    CHECK(d1.hash() != d2.hash());
}

TEST_CASE("manifest json round-trip and malformed rejection") {
    Manifest a;
    a.kind = "model";
    a.params = {{"kernel", "linear"}, {"C", 1.0}};
    a.inputs["dataset"] = "0123456789abcdef";

    Manifest back = Manifest::from_json(a.to_json());
    CHECK(back.kind == a.kind);
    CHECK(back.params == a.params);
    CHECK(back.inputs == a.inputs);
    CHECK(back.hash() == a.hash());

    CHECK(a.to_json().at("tool_version").get<std::string>() == kToolVersion);
    CHECK_THROWS_AS(Manifest::from_json(Json{{"schema", "1"}}),
                    std::runtime_error);
}

// ---------------------------------------------------------------------------
// artifact round-trips

TEST_CASE("run log json round-trip preserves every column") {
    RunLog log = small_log(11);
    REQUIRE(!log.records.empty());
    REQUIRE(!log.trades.empty());

    Manifest m;
    m.kind = "run_log";
    m.params = {{"seed", 11}};
    Json j = log_to_json(log, m);
    CHECK(manifest_of(j).hash() == m.hash());

    RunLog back = log_from_json(j);
    CHECK(back.run_id == log.run_id);
    CHECK(back.seed == log.seed);
    CHECK(back.span == log.span);
    CHECK(back.burn_in == log.burn_in);
    CHECK(back.fundamental_breakpoints == log.fundamental_breakpoints);
    CHECK(back.skipped_actions == log.skipped_actions);
    CHECK(back.discarded_volume == log.discarded_volume);

    REQUIRE(back.records.size() == log.records.size());
    for (size_t i = 0; i < log.records.size(); ++i) {
        const EventLogRecord& x = log.records[i];
        const EventLogRecord& y = back.records[i];
        CHECK(y.time == x.time);
        CHECK(y.agent == x.agent);
        CHECK(y.class_id == x.class_id);
        CHECK(y.action == x.action);
        CHECK(y.side == x.side);
        CHECK(y.price == x.price);
        CHECK(y.size == x.size);
        CHECK(y.mid_ticks == x.mid_ticks);
        CHECK(y.order_id == x.order_id);
        REQUIRE(y.fills.size() == x.fills.size());
        for (size_t f = 0; f < x.fills.size(); ++f) {
            CHECK(y.fills[f].price == x.fills[f].price);
            CHECK(y.fills[f].size == x.fills[f].size);
        }
    }
    REQUIRE(back.trades.size() == log.trades.size());
    for (size_t i = 0; i < log.trades.size(); ++i) {
        CHECK(back.trades[i].time == log.trades[i].time);
        CHECK(back.trades[i].price == log.trades[i].price);
        CHECK(back.trades[i].size == log.trades[i].size);
    }
    REQUIRE(back.mids.size() == log.mids.size());
    for (size_t i = 0; i < log.mids.size(); ++i) {
        CHECK(back.mids[i].time == log.mids[i].time);
        CHECK(back.mids[i].mid_ticks == log.mids[i].mid_ticks);
    }
    REQUIRE(back.quotes.size() == log.quotes.size());

    // the round-tripped log feeds feature extraction identically
    Scenario sc = small_scenario(6000.0);
    sc.burn_in = 1000.0;
    MergePlan plan = make_merge_plan(sc, MergeMode::None, 1);
    std::vector<FeatureRow> r1 = extract_run_features(log, sc, plan);
    std::vector<FeatureRow> r2 = extract_run_features(back, sc, plan);
    REQUIRE(r1.size() == r2.size());
    for (size_t i = 0; i < r1.size(); ++i) CHECK(r1[i].x == r2[i].x);

    // schema gate
    Json bad = j;
    bad["schema"] = "999";
    CHECK_THROWS_AS(log_from_json(bad), std::runtime_error);
}

TEST_CASE("dataset, split, and scaler artifacts round-trip") {
    Scenario sc = small_scenario(6000.0);
    sc.burn_in = 1000.0;
    MergePlan plan = make_merge_plan(sc, MergeMode::None, 1);
    Dataset ds = assemble_dataset(sc, 3, 21, plan);
    REQUIRE(!ds.rows.empty());

    Manifest m;
    m.kind = "dataset";
    m.params = {{"seed", 21}};
    Dataset back = dataset_from_json(dataset_to_json(ds, m));
    CHECK(back.n_features == ds.n_features);
    REQUIRE(back.rows.size() == ds.rows.size());
    for (size_t i = 0; i < ds.rows.size(); ++i) {
        CHECK(back.rows[i].agent == ds.rows[i].agent);
        CHECK(back.rows[i].run == ds.rows[i].run);
        CHECK(back.rows[i].label == ds.rows[i].label);
        CHECK(back.rows[i].empty_activity == ds.rows[i].empty_activity);
        CHECK(back.rows[i].x == ds.rows[i].x);
    }

    SplitIndices split = stratified_split(ds, 0.60, 0.10, 0.30, 5);
    Manifest ms;
    ms.kind = "split";
    SplitIndices sback = split_from_json(split_to_json(split, ms));
    CHECK(sback.train == split.train);
    CHECK(sback.val == split.val);
    CHECK(sback.test == split.test);

    Scaler scaler;
    scaler.fit(ds, split.train, kFeatureCount);
    Scaler zback = scaler_from_json(scaler_to_json(scaler));
    CHECK(zback.means() == scaler.means());
    CHECK(zback.stds() == scaler.stds());
}

TEST_CASE("svm artifact round-trip preserves predictions") {
    // two interleaved 3-class blobs, trained both linear and rbf
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
        double t = 0.2 * i;
        X.push_back({t, 1.0 + 0.1 * (i % 3)});
        y.push_back(1 + i % 3);
        X[X.size() - 1][0] += (i % 3) * 4.0;
    }
    for (Kernel k : {Kernel::Linear, Kernel::Rbf}) {
        SvmHyperParams hp;
        hp.kernel = k;
        hp.C = 10.0;
        hp.gamma = 0.5;
        OvoSvm model = train_ovo(X, y, hp);
        Manifest m;
        m.kind = "model";
        OvoSvm back = svm_from_json(svm_to_json(model, m));
        CHECK(back.classes == model.classes);
        REQUIRE(back.pairs.size() == model.pairs.size());
        for (const std::vector<double>& x : X)
            CHECK(back.predict(x) == model.predict(x));
    }
}

TEST_CASE("dendrogram artifact round-trip preserves merges and cuts") {
    std::vector<std::vector<double>> X;
    for (int i = 0; i < 12; ++i)
        X.push_back({static_cast<double>(i % 4) * 5.0, static_cast<double>(i / 4)});
    Dendrogram tree = agglomerate(X, Linkage::Ward);
    Manifest m;
    m.kind = "model";
    Dendrogram back = dendrogram_from_json(dendrogram_to_json(tree, m));
    CHECK(back.n_leaves == tree.n_leaves);
    REQUIRE(back.merges.size() == tree.merges.size());
    for (size_t i = 0; i < tree.merges.size(); ++i) {
        CHECK(back.merges[i].a == tree.merges[i].a);
        CHECK(back.merges[i].b == tree.merges[i].b);
        CHECK(back.merges[i].height == doctest::Approx(tree.merges[i].height));
        CHECK(back.merges[i].size == tree.merges[i].size);
    }
    CHECK(cut(back, 4) == cut(tree, 4));
}

TEST_CASE("report text carries the manifest line and the expected rows") {
    ClassificationReport rep;
    rep.accuracy = 0.875;
    rep.classes = {1};
    rep.precision = {0.5};
    rep.recall = {0.25};
    rep.f1 = {1.0 / 3.0};
    rep.support = {8};
    Manifest m;
    m.kind = "report";
    m.inputs["dataset"] = "aaaabbbbccccdddd";
    std::string text = classification_report_text(rep, m);
    CHECK(text.find("# manifest " + m.hash()) == 0);
    CHECK(text.find("dataset=aaaabbbbccccdddd") != std::string::npos);
    CHECK(text.find("market_maker_1\t0.5000\t0.2500\t0.3333\t8") !=
          std::string::npos);
    CHECK(text.find("overall_accuracy\t0.8750") != std::string::npos);

    ClusterEvaluation ev;
    ev.accuracy = 0.75;
    ev.rows.push_back({{1, 2}, {0, 3}, 0.9, 0.8, 0.847, 12});
    std::string ct = cluster_report_text(ev, 9, m);
    CHECK(ct.find("# manifest ") == 0);
    CHECK(ct.find("k\t9") != std::string::npos);
    CHECK(ct.find("market_maker_1+market_maker_2\t0+3") != std::string::npos);
    CHECK(ct.find("overall_accuracy\t0.7500") != std::string::npos);
}

// ---------------------------------------------------------------------------
// command-line driver

TEST_CASE("cli pipeline: simulate, features, classify, cluster") {
    fs::path dir = fresh_dir("msim_test_cli_pipe");
    std::string out = dir.string();

    CHECK(cli({"simulate", "--runs", "3", "--span", "6000", "--burn-in", "1000",
               "--population", "small", "--seed", "7", "--out-dir", out}) == 0);
    std::vector<fs::path> logs = files_in(dir / "logs");
    REQUIRE(logs.size() == 3);

    // log artifacts carry consistent manifests keyed by run index
    for (const fs::path& p : logs) {
        Manifest m = manifest_of(read_json_file(p));
        CHECK(m.kind == "run_log");
        CHECK(m.params.at("master_seed").get<uint64_t>() == 7);
    }

    CHECK(cli({"features", "--out-dir", out, "--merge", "none", "--features",
               "18"}) == 0);
    std::vector<fs::path> datasets = files_in(dir / "datasets");
    REQUIRE(datasets.size() == 1);
    Json dj = read_json_file(datasets.front());
    Manifest dm = manifest_of(dj);
    CHECK(dm.kind == "dataset");
    CHECK(dm.inputs.size() == 3);  // one chained hash per run log
    Dataset ds = dataset_from_json(dj);
    Scenario sc = small_scenario(6000.0);
    CHECK(ds.rows.size() == 3 * static_cast<size_t>(sc.total_agents()));

    CHECK(cli({"classify", "--out-dir", out}) == 0);
    CHECK(files_in(dir / "models").size() == 1);
    std::vector<fs::path> reports = files_in(dir / "reports");
    REQUIRE(reports.size() == 1);
    std::string rt = read_text_file(reports.front());
    CHECK(rt.find("overall_accuracy") != std::string::npos);
    CHECK(rt.find("# manifest ") == 0);

    // linear models carry a per-pair feature attribution block
    Json mj = read_json_file(files_in(dir / "models").front());
    CHECK(mj.contains("feature_attribution"));
    OvoSvm model = svm_from_json(mj);
    CHECK(model.classes.size() == 15);

    CHECK(cli({"cluster", "--out-dir", out, "--k", "3", "--k", "5",
               "--skip-diagnostics"}) == 0);
    reports = files_in(dir / "reports");
    bool found_cluster = false;
    for (const fs::path& p : reports)
        if (p.string().find("_cluster.tsv") != std::string::npos) {
            found_cluster = true;
            std::string ct = read_text_file(p);
            CHECK(ct.find("k\t3") != std::string::npos);
            CHECK(ct.find("k\t5") != std::string::npos);
        }
    CHECK(found_cluster);
}

TEST_CASE("cli simulate: reruns and parallel runs are byte-identical") {
    fs::path a = fresh_dir("msim_test_cli_rerun_a");
    fs::path b = fresh_dir("msim_test_cli_rerun_b");
    std::vector<std::string> base = {"simulate", "--runs",      "2",
                                     "--span",   "4000",        "--burn-in",
                                     "500",      "--population", "small",
                                     "--seed",   "3"};
    std::vector<std::string> run_a = base;
    run_a.insert(run_a.end(), {"--out-dir", a.string()});
    std::vector<std::string> run_b = base;
    run_b.insert(run_b.end(), {"--out-dir", b.string(), "--jobs", "2"});
    CHECK(cli(run_a) == 0);
    CHECK(cli(run_b) == 0);

    std::vector<fs::path> fa = files_in(a / "logs");
    std::vector<fs::path> fb = files_in(b / "logs");
    REQUIRE(fa.size() == fb.size());
    for (size_t i = 0; i < fa.size(); ++i) {
        CHECK(fa[i].filename() == fb[i].filename());
        CHECK(read_text_file(fa[i]) == read_text_file(fb[i]));
    }
}

TEST_CASE("cli error paths map to the documented exit codes") {
    fs::path dir = fresh_dir("msim_test_cli_err");
    std::string out = dir.string();

    // 2: artifacts missing or inconsistent
    CHECK(cli({"features", "--out-dir", out}) == 2);
    CHECK(cli({"classify", "--out-dir", out}) == 2);

    // 1: configuration problems
    CHECK(cli({"reproduce", "--table", "3", "--out-dir", out}) == 1);
    CHECK(cli({"simulate", "--runs", "0", "--out-dir", out}) == 1);
    CHECK(cli({"bogus"}) == 1);
    CHECK(cli({"simulate", "--population", "medium", "--out-dir", out}) == 1);

    // 2: logs too short for the stylized report
    CHECK(cli({"simulate", "--runs", "1", "--span", "4000", "--burn-in", "500",
               "--population", "small", "--seed", "1", "--out-dir", out}) == 0);
    CHECK(cli({"stylized", "--out-dir", out}) == 2);

    // 1: the small population has too few noise traders to merge
    CHECK(cli({"features", "--out-dir", out, "--merge", "half"}) == 1);

    // 2: several datasets and no --dataset to disambiguate
    CHECK(cli({"features", "--out-dir", out, "--merge", "none"}) == 0);
    CHECK(cli({"features", "--out-dir", out, "--merge", "none", "--features",
               "9"}) == 0);
    CHECK(cli({"classify", "--out-dir", out}) == 2);
}

TEST_CASE("cli reproduce: reruns write byte-identical reports") {
    fs::path a = fresh_dir("msim_test_cli_rep_a");
    fs::path b = fresh_dir("msim_test_cli_rep_b");
    std::vector<std::string> base = {"reproduce", "--table", "2",
                                     "--runs",    "3",       "--span",
                                     "20000",     "--seed",  "5"};
    std::vector<std::string> run_a = base;
    run_a.insert(run_a.end(), {"--out-dir", a.string()});
    std::vector<std::string> run_b = base;
    run_b.insert(run_b.end(), {"--out-dir", b.string()});
    CHECK(cli(run_a) == 0);
    CHECK(cli(run_b) == 0);

    std::vector<fs::path> fa = files_in(a / "reports");
    std::vector<fs::path> fb = files_in(b / "reports");
    REQUIRE(fa.size() == 1);
    REQUIRE(fb.size() == 1);
    CHECK(fa.front().filename() == fb.front().filename());
    std::string text = read_text_file(fa.front());
    CHECK(text == read_text_file(fb.front()));
    CHECK(text.find("classification_9feat_none") != std::string::npos);
    CHECK(text.find("classification_9feat_twothirds") != std::string::npos);
    CHECK(text.find("\ttarget\tobtained\ttolerance\tverdict") != std::string::npos);
}
