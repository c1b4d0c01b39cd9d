#include "msim/io.hpp"

#include <fstream>
#include <stdexcept>

#include "msim/scenario.hpp"
#include "msim/util.hpp"

namespace msim {

namespace {

Json optional_ticks(const std::optional<Ticks>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json optional_double(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::string join_plus(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '+';
        out += parts[i];
    }
    return out;
}

std::string manifest_comment(const Manifest& m) {
    std::string line = "# manifest " + m.hash() + " kind " + m.kind;
    if (!m.inputs.empty()) {
        line += " inputs";
        for (auto it = m.inputs.begin(); it != m.inputs.end(); ++it)
            line += " " + it.key() + "=" + it.value().get<std::string>();
    }
    return line + "\n";
}

}  // namespace

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(1, '\t') << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing artifact: " + path.string());
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw std::runtime_error("unparsable artifact: " + path.string());
    return j;
}

Manifest manifest_of(const Json& artifact) {
    if (!artifact.contains("manifest"))
        throw std::runtime_error("artifact has no embedded manifest");
    return Manifest::from_json(artifact.at("manifest"));
}

// ---------------------------------------------------------------------------
// run logs

Json log_to_json(const RunLog& log, const Manifest& manifest) {
    Json j;
    j["manifest"] = manifest.to_json();
    j["schema"] = 1;
    j["run_id"] = log.run_id;
    j["seed"] = log.seed;
    j["span"] = log.span;
    j["burn_in"] = log.burn_in;
    j["breakpoints"] = log.fundamental_breakpoints;
    j["action_codes"] = Json::array({"limit", "market", "cancel", "expire"});

    Json rec;
    Json time = Json::array(), agent = Json::array(), cls = Json::array();
    Json action = Json::array(), side = Json::array(), price = Json::array();
    Json size = Json::array(), fills = Json::array(), mid = Json::array();
    Json order_id = Json::array();
    for (const EventLogRecord& r : log.records) {
        time.push_back(r.time);
        agent.push_back(r.agent);
        cls.push_back(r.class_id);
        action.push_back(static_cast<int>(r.action));
        side.push_back(r.side == Side::Bid ? 0 : 1);
        price.push_back(optional_ticks(r.price));
        size.push_back(r.size);
        Json fl = Json::array();
        for (const RecFill& f : r.fills) fl.push_back(Json::array({f.price, f.size}));
        fills.push_back(std::move(fl));
        mid.push_back(optional_double(r.mid_ticks));
        order_id.push_back(r.order_id);
    }
    rec["time"] = std::move(time);
    rec["agent"] = std::move(agent);
    rec["class"] = std::move(cls);
    rec["action"] = std::move(action);
    rec["side"] = std::move(side);
    rec["price"] = std::move(price);
    rec["size"] = std::move(size);
    rec["fills"] = std::move(fills);
    rec["mid"] = std::move(mid);
    rec["order_id"] = std::move(order_id);
    j["records"] = std::move(rec);

    Json quotes;
    Json qt = Json::array(), qb = Json::array(), qa = Json::array();
    for (const QuotePoint& q : log.quotes) {
        qt.push_back(q.time);
        qb.push_back(optional_ticks(q.bid));
        qa.push_back(optional_ticks(q.ask));
    }
    quotes["time"] = std::move(qt);
    quotes["bid"] = std::move(qb);
    quotes["ask"] = std::move(qa);
    j["quotes"] = std::move(quotes);

    Json mids;
    Json mt = Json::array(), mv = Json::array();
    for (const MidPoint& m : log.mids) {
        mt.push_back(m.time);
        mv.push_back(m.mid_ticks);
    }
    mids["time"] = std::move(mt);
    mids["mid"] = std::move(mv);
    j["mids"] = std::move(mids);

    Json trades;
    Json tt = Json::array(), tp = Json::array(), ts = Json::array();
    for (const Trade& t : log.trades) {
        tt.push_back(t.time);
        tp.push_back(t.price);
        ts.push_back(t.size);
    }
    trades["time"] = std::move(tt);
    trades["price"] = std::move(tp);
    trades["size"] = std::move(ts);
    j["trades"] = std::move(trades);

    j["skipped_actions"] = log.skipped_actions;
    j["discarded_volume"] = log.discarded_volume;
    return j;
}

RunLog log_from_json(const Json& j) {
    if (!j.contains("schema") || !j["schema"].is_number_integer() ||
        j["schema"].get<int>() != 1)
        throw std::runtime_error("run log has an unsupported schema");
    RunLog log;
    log.run_id = j.at("run_id").get<int>();
    log.seed = j.at("seed").get<uint64_t>();
    log.span = j.at("span").get<double>();
    log.burn_in = j.at("burn_in").get<double>();
    log.fundamental_breakpoints =
        j.at("breakpoints").get<std::vector<double>>();

    const Json& rec = j.at("records");
    size_t n = rec.at("time").size();
    log.records.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        EventLogRecord r;
        r.time = rec.at("time")[i].get<double>();
        r.agent = rec.at("agent")[i].get<AgentId>();
        r.class_id = rec.at("class")[i].get<int>();
        r.action = static_cast<Action>(rec.at("action")[i].get<int>());
        r.side = rec.at("side")[i].get<int>() == 0 ? Side::Bid : Side::Ask;
        if (!rec.at("price")[i].is_null())
            r.price = rec.at("price")[i].get<Ticks>();
        r.size = rec.at("size")[i].get<long long>();
        for (const Json& f : rec.at("fills")[i])
            r.fills.push_back(RecFill{f[0].get<Ticks>(), f[1].get<long long>()});
        if (!rec.at("mid")[i].is_null())
            r.mid_ticks = rec.at("mid")[i].get<double>();
        r.order_id = rec.at("order_id")[i].get<OrderId>();
        log.records.push_back(std::move(r));
    }

    const Json& quotes = j.at("quotes");
    for (size_t i = 0; i < quotes.at("time").size(); ++i) {
        QuotePoint q;
        q.time = quotes.at("time")[i].get<double>();
        if (!quotes.at("bid")[i].is_null()) q.bid = quotes.at("bid")[i].get<Ticks>();
        if (!quotes.at("ask")[i].is_null()) q.ask = quotes.at("ask")[i].get<Ticks>();
        log.quotes.push_back(q);
    }
    const Json& mids = j.at("mids");
    for (size_t i = 0; i < mids.at("time").size(); ++i)
        log.mids.push_back(MidPoint{mids.at("time")[i].get<double>(),
                                    mids.at("mid")[i].get<double>()});
    const Json& trades = j.at("trades");
    for (size_t i = 0; i < trades.at("time").size(); ++i)
        log.trades.push_back(Trade{trades.at("time")[i].get<double>(),
                                   trades.at("price")[i].get<Ticks>(),
                                   trades.at("size")[i].get<long long>()});

    log.skipped_actions = j.at("skipped_actions").get<long long>();
    log.discarded_volume = j.at("discarded_volume").get<long long>();
    return log;
}

// ---------------------------------------------------------------------------
// datasets

Json dataset_to_json(const Dataset& ds, const Manifest& manifest) {
    Json j;
    j["manifest"] = manifest.to_json();
    j["n_features"] = ds.n_features;
    j["feature_names"] = feature_names();
    Json rows = Json::array();
    for (const FeatureRow& r : ds.rows) {
        Json row;
        row["agent"] = r.agent;
        row["run"] = r.run;
        row["label"] = r.label;
        row["empty"] = r.empty_activity;
        row["x"] = r.x;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

Dataset dataset_from_json(const Json& j) {
    Dataset ds;
    ds.n_features = j.at("n_features").get<int>();
    for (const Json& row : j.at("rows")) {
        FeatureRow r;
        r.agent = row.at("agent").get<int>();
        r.run = row.at("run").get<int>();
        r.label = row.at("label").get<int>();
        r.empty_activity = row.at("empty").get<bool>();
        auto x = row.at("x").get<std::vector<double>>();
        if (x.size() != kFeatureCount)
            throw std::runtime_error("dataset row has a bad feature count");
        std::copy(x.begin(), x.end(), r.x.begin());
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

Json split_to_json(const SplitIndices& split, const Manifest& manifest) {
    Json j;
    j["manifest"] = manifest.to_json();
    j["train"] = split.train;
    j["val"] = split.val;
    j["test"] = split.test;
    return j;
}

SplitIndices split_from_json(const Json& j) {
    SplitIndices s;
    s.train = j.at("train").get<std::vector<size_t>>();
    s.val = j.at("val").get<std::vector<size_t>>();
    s.test = j.at("test").get<std::vector<size_t>>();
    return s;
}

Json scaler_to_json(const Scaler& scaler) {
    Json j;
    j["mean"] = scaler.means();
    j["std"] = scaler.stds();
    return j;
}

Scaler scaler_from_json(const Json& j) {
    Scaler s;
    s.set(j.at("mean").get<std::vector<double>>(),
          j.at("std").get<std::vector<double>>());
    return s;
}

// ---------------------------------------------------------------------------
// models

namespace {

Json hp_to_json(const SvmHyperParams& hp) {
    Json j;
    j["kernel"] = kernel_name(hp.kernel);
    j["C"] = hp.C;
    j["gamma"] = hp.gamma;
    j["degree"] = hp.degree;
    return j;
}

SvmHyperParams hp_from_json(const Json& j) {
    SvmHyperParams hp;
    auto k = kernel_from(j.at("kernel").get<std::string>());
    if (!k) throw std::runtime_error("unknown kernel in model artifact");
    hp.kernel = *k;
    hp.C = j.at("C").get<double>();
    hp.gamma = j.at("gamma").get<double>();
    hp.degree = j.at("degree").get<int>();
    return hp;
}

}  // namespace

Json svm_to_json(const OvoSvm& model, const Manifest& manifest) {
    Json j;
    j["manifest"] = manifest.to_json();
    j["hyperparams"] = hp_to_json(model.hp);
    j["classes"] = model.classes;
    Json pairs = Json::array();
    for (const BinarySvm& p : model.pairs) {
        Json pj;
        pj["class_pos"] = p.class_pos;
        pj["class_neg"] = p.class_neg;
        pj["bias"] = p.bias;
        pj["sv_x"] = p.sv_x;
        pj["sv_coef"] = p.sv_coef;
        pj["w"] = p.w;
        pj["objective"] = p.objective;
        pj["iterations"] = p.iterations;
        pj["converged"] = p.converged;
        pairs.push_back(std::move(pj));
    }
    j["pairs"] = std::move(pairs);
    return j;
}

OvoSvm svm_from_json(const Json& j) {
    OvoSvm model;
    model.hp = hp_from_json(j.at("hyperparams"));
    model.classes = j.at("classes").get<std::vector<int>>();
    for (const Json& pj : j.at("pairs")) {
        BinarySvm p;
        p.hp = model.hp;
        p.class_pos = pj.at("class_pos").get<int>();
        p.class_neg = pj.at("class_neg").get<int>();
        p.bias = pj.at("bias").get<double>();
        p.sv_x = pj.at("sv_x").get<std::vector<std::vector<double>>>();
        p.sv_coef = pj.at("sv_coef").get<std::vector<double>>();
        p.w = pj.at("w").get<std::vector<double>>();
        p.objective = pj.at("objective").get<double>();
        p.iterations = pj.at("iterations").get<int>();
        p.converged = pj.at("converged").get<bool>();
        model.pairs.push_back(std::move(p));
    }
    return model;
}

Json dendrogram_to_json(const Dendrogram& tree, const Manifest& manifest) {
    Json j;
    j["manifest"] = manifest.to_json();
    j["n_leaves"] = tree.n_leaves;
    Json merges = Json::array();
    for (const Dendrogram::Merge& m : tree.merges)
        merges.push_back(Json::array({m.a, m.b, m.height, m.size}));
    j["merges"] = std::move(merges);
    return j;
}

Dendrogram dendrogram_from_json(const Json& j) {
    Dendrogram tree;
    tree.n_leaves = j.at("n_leaves").get<int>();
    for (const Json& m : j.at("merges"))
        tree.merges.push_back(Dendrogram::Merge{
            m[0].get<int>(), m[1].get<int>(), m[2].get<double>(), m[3].get<int>()});
    return tree;
}

// ---------------------------------------------------------------------------
// report text

std::string classification_report_text(const ClassificationReport& report,
                                       const Manifest& manifest) {
    std::string out = manifest_comment(manifest);
    out += "class\tprecision\trecall\tf1\tsupport\n";
    for (size_t i = 0; i < report.classes.size(); ++i) {
        out += strf("%s\t%.4f\t%.4f\t%.4f\t%lld\n", class_name(report.classes[i]),
                    report.precision[i], report.recall[i], report.f1[i],
                    report.support[i]);
    }
    out += strf("overall_accuracy\t%.4f\n", report.accuracy);
    return out;
}

std::string cluster_report_text(const ClusterEvaluation& ev, int k,
                                const Manifest& manifest) {
    std::string out = manifest_comment(manifest);
    out += strf("k\t%d\n", k);
    out += "classes\tclusters\tprecision\trecall\tf1\tsupport\n";
    for (const ClusterEvalRow& row : ev.rows) {
        std::vector<std::string> cls, cl;
        for (int c : row.classes) cls.push_back(class_name(c));
        for (int c : row.clusters) cl.push_back(strf("%d", c));
        out += strf("%s\t%s\t%.4f\t%.4f\t%.4f\t%lld\n", join_plus(cls).c_str(),
                    join_plus(cl).c_str(), row.precision, row.recall, row.f1,
                    row.support);
    }
    out += strf("overall_accuracy\t%.4f\n", ev.accuracy);
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing artifact: " + path.string());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace msim
