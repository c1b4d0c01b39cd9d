#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <set>

#include "msim/features.hpp"
#include "msim/scenario.hpp"

using namespace msim;

namespace {

// minimal population descriptions for synthetic logs
Scenario lone(int class_id, AgentClassSpec::Kind kind) {
    Scenario sc;
    sc.name = "synthetic";
    sc.span = 200000.0;
    AgentClassSpec s;
    s.kind = kind;
    s.class_id = class_id;
    s.count = 1;
    sc.classes = {s};
    return sc;
}

Scenario taker_plus_noise(int n_noise) {
    Scenario sc = lone(kTaker1, AgentClassSpec::Taker);
    AgentClassSpec nz;
    nz.kind = AgentClassSpec::Noise;
    nz.class_id = kNoise;
    nz.count = n_noise;
    sc.classes.push_back(nz);
    return sc;
}

EventLogRecord rec(double t, int agent, int cls, Action a, Side side,
                   std::optional<Ticks> px, long long size,
                   std::vector<RecFill> fills = {},
                   std::optional<double> mid = std::nullopt) {
    EventLogRecord r;
    r.time = t;
    r.agent = agent;
    r.class_id = cls;
    r.action = a;
    r.side = side;
    r.price = px;
    r.size = size;
    r.fills = std::move(fills);
    r.mid_ticks = mid;
    return r;
}

const MergePlan kNoMerge;

}  // namespace

TEST_CASE("hand-built five-record stream reproduces the basic features") {
    Scenario sc = lone(kTaker1, AgentClassSpec::Taker);
    RunLog log;
    log.run_id = 3;
    log.span = 200000.0;
    log.records = {
        rec(10, 0, kTaker1, Action::SubmitLimit, Side::Bid, 10000, 10,
            {{10000, 4}}, 9999.5),
        rec(20, 0, kTaker1, Action::SubmitMarket, Side::Ask, std::nullopt, 5,
            {{9999, 5}}, 9999.5),
        rec(35, 0, kTaker1, Action::SubmitLimit, Side::Ask, 10010, 8, {}, 10000.0),
        rec(50, 0, kTaker1, Action::Cancel, Side::Ask, 10010, 8),
        rec(60, 0, kTaker1, Action::SubmitLimit, Side::Bid, 9990, 2, {}, 10005.0),
    };

    auto rows = extract_run_features(log, sc, kNoMerge);
    REQUIRE(rows.size() == 1);
    const auto& x = rows[0].x;
    CHECK(rows[0].agent == 0);
    CHECK(rows[0].run == 3);
    CHECK(rows[0].label == kTaker1);
    CHECK(!rows[0].empty_activity);

    CHECK(x[0] == doctest::Approx(2.0 / 4.0));          // buy ratio
    CHECK(x[1] == doctest::Approx(1.0 / 4.0));          // cancel ratio
    CHECK(x[2] == doctest::Approx(2.0));                // two fills
    CHECK(x[3] == doctest::Approx(1.0 / 4.0));          // market ratio
    // submission gaps 10, 15, 25 (the cancel is not a submission)
    CHECK(x[4] == doctest::Approx(50.0 / 3.0));
    CHECK(x[5] == doctest::Approx(std::sqrt(950.0 / 3.0 - 2500.0 / 9.0)));
    // sizes 10, 5, 8, 2
    CHECK(x[6] == doctest::Approx(25.0 / 4.0));
    CHECK(x[7] == doctest::Approx(std::sqrt(193.0 / 4.0 - 625.0 / 16.0)));
    CHECK(x[8] == doctest::Approx(9.0));                // 4 + 5 shares traded
}

TEST_CASE("pure market-order stream: market ratio one, cancel ratio zero") {
    Scenario sc = lone(kTaker2, AgentClassSpec::Taker);
    RunLog log;
    log.span = 200000.0;
    for (int i = 0; i < 7; ++i)
        log.records.push_back(rec(100.0 * (i + 1), 0, kTaker2,
                                  Action::SubmitMarket,
                                  i % 2 ? Side::Ask : Side::Bid, std::nullopt,
                                  5, {{10000, 5}}, 10000.0));
    auto rows = extract_run_features(log, sc, kNoMerge);
    CHECK(rows[0].x[3] == doctest::Approx(1.0));
    CHECK(rows[0].x[1] == doctest::Approx(0.0));
}

TEST_CASE("single unfilled order: no trades, no volume, zero gap spread") {
    Scenario sc = lone(kChartist1, AgentClassSpec::Chartist);
    RunLog log;
    log.span = 200000.0;
    log.records = {rec(500, 0, kChartist1, Action::SubmitLimit, Side::Bid,
                       9990, 6, {}, 10000.0)};
    auto rows = extract_run_features(log, sc, kNoMerge);
    CHECK(rows[0].x[2] == 0.0);
    CHECK(rows[0].x[8] == 0.0);
    CHECK(rows[0].x[4] == 0.0);
    CHECK(rows[0].x[5] == 0.0);
    CHECK(rows[0].x[6] == doctest::Approx(6.0));
}

TEST_CASE("agent with no records is flagged and all-zero") {
    Scenario sc = taker_plus_noise(1);
    RunLog log;
    log.span = 200000.0;
    log.records = {rec(10, 0, kTaker1, Action::SubmitMarket, Side::Bid,
                       std::nullopt, 5, {}, 10000.0)};
    auto rows = extract_run_features(log, sc, kNoMerge);
    REQUIRE(rows.size() == 2);
    CHECK(!rows[0].empty_activity);
    CHECK(rows[1].empty_activity);
    for (double v : rows[1].x) CHECK(v == 0.0);
}

TEST_CASE("flat mid path zeroes every trend feature") {
    Scenario sc = lone(kChartist1, AgentClassSpec::Chartist);
    RunLog log;
    log.span = 200000.0;
    log.mids = {{-20000.0, 10000.0}};
    for (int i = 0; i < 4; ++i)
        log.records.push_back(rec(50000.0 + i * 1000.0, 0, kChartist1,
                                  Action::SubmitLimit, Side::Bid, 9990, 5, {},
                                  10000.0));
    auto rows = extract_run_features(log, sc, kNoMerge);
    for (int f = 9; f <= 14; ++f) CHECK(rows[0].x[static_cast<size_t>(f)] == 0.0);
}

TEST_CASE("one buy after a +2 move: short trend pair, longer lookbacks skip") {
    Scenario sc = lone(kChartist1, AgentClassSpec::Chartist);
    RunLog log;
    log.span = 200000.0;
    // recorded mids start at -5000: the short lookback (10000) from t=10000
    // lands at 0 where the last change says 100; medium and long precede the
    // data and are skipped
    log.mids = {{-5000.0, 100.0}, {4000.0, 102.0}};
    log.records = {rec(10000, 0, kChartist1, Action::SubmitLimit, Side::Bid,
                       10200, 5, {}, 102.0)};
    auto rows = extract_run_features(log, sc, kNoMerge);
    const auto& x = rows[0].x;
    CHECK(x[9] == doctest::Approx(2.0));    // |102 - 100|
    CHECK(x[10] == doctest::Approx(2.0));   // buy direction
    CHECK(x[11] == 0.0);
    CHECK(x[12] == 0.0);
    CHECK(x[13] == 0.0);
    CHECK(x[14] == 0.0);
}

TEST_CASE("sell direction flips the directed trend sign") {
    Scenario sc = lone(kChartist3, AgentClassSpec::Chartist);
    RunLog log;
    log.span = 200000.0;
    log.mids = {{-15000.0, 100.0}, {4000.0, 103.0}};
    log.records = {rec(10000, 0, kChartist3, Action::SubmitLimit, Side::Ask,
                       10300, 5, {}, 103.0)};
    auto rows = extract_run_features(log, sc, kNoMerge);
    CHECK(rows[0].x[9] == doctest::Approx(3.0));
    CHECK(rows[0].x[10] == doctest::Approx(-3.0));
}

TEST_CASE("profit features follow the worked single-order example") {
    Scenario sc = lone(kFundamentalist1, AgentClassSpec::Fundamentalist);
    RunLog log;
    log.span = 200000.0;
    log.fundamental_breakpoints = {1000.0};
    log.mids = {{-1000.0, 10000.0}, {50000.0, 10100.0}};
    // buy of 10 shares at t=2000 (eligible), mid 10000 -> after 80000 units
    // the mid is 10100: relative move +0.01 in the buy direction
    log.records = {rec(2000, 0, kFundamentalist1, Action::SubmitLimit,
                       Side::Bid, 10000, 10, {}, 10000.0)};
    auto rows = extract_run_features(log, sc, kNoMerge);
    CHECK(rows[0].x[15] == doctest::Approx(0.01));
    CHECK(rows[0].x[16] == doctest::Approx(0.01));  // 162000 <= span: same path
    CHECK(rows[0].x[17] == doctest::Approx(0.01));  // single order: same mean

    SUBCASE("look-forward beyond the run is skipped") {
        log.span = 100000.0;  // 2000+80000 fits, 2000+160000 does not
        auto rows2 = extract_run_features(log, sc, kNoMerge);
        CHECK(rows2[0].x[15] == doctest::Approx(0.01));
        CHECK(rows2[0].x[16] == 0.0);
    }
    SUBCASE("orders away from every breakpoint contribute nothing") {
        log.records[0].time = 30000.0;  // outside (1000, 21000]
        auto rows2 = extract_run_features(log, sc, kNoMerge);
        CHECK(rows2[0].x[15] == 0.0);
        CHECK(rows2[0].x[16] == 0.0);
        CHECK(rows2[0].x[17] == 0.0);
    }
}

TEST_CASE("weighted profit weights by order size") {
    Scenario sc = lone(kFundamentalist2, AgentClassSpec::Fundamentalist);
    RunLog log;
    log.span = 300000.0;
    log.fundamental_breakpoints = {0.0};
    log.mids = {{-1000.0, 10000.0}, {81500.0, 10200.0}};
    // two eligible buys: size 1 at t=1000 (forward mid 10000, profit 0) and
    // size 9 at t=2000 (forward mid 10200... both forwards land after 81500?
    // t=1000+80000=81000 -> mid 10000; t=2000+80000=82000 -> mid 10200
    log.records = {
        rec(1000, 0, kFundamentalist2, Action::SubmitLimit, Side::Bid, 10000,
            1, {}, 10000.0),
        rec(2000, 0, kFundamentalist2, Action::SubmitLimit, Side::Bid, 10000,
            9, {}, 10000.0),
    };
    auto rows = extract_run_features(log, sc, kNoMerge);
    CHECK(rows[0].x[15] == doctest::Approx(0.01));          // (0 + 0.02) / 2
    CHECK(rows[0].x[17] == doctest::Approx(0.02 * 9 / 10));  // size-weighted
}

TEST_CASE("merge plans pair each strategic agent with distinct noise traders") {
    Scenario sc = canonical_scenario(144000.0);

    MergePlan none = make_merge_plan(sc, MergeMode::None, 5);
    CHECK(none.groups.empty());

    MergePlan half = make_merge_plan(sc, MergeMode::Half, 5);
    REQUIRE(half.groups.size() == 530);
    std::set<int> used;
    for (const auto& g : half.groups) {
        CHECK(g.partners.size() == 1);
        for (int p : g.partners) CHECK(used.insert(p).second);
    }
    CHECK(used.size() == 530);

    MergePlan two = make_merge_plan(sc, MergeMode::TwoThirds, 5);
    REQUIRE(two.groups.size() == 530);
    used.clear();
    for (const auto& g : two.groups) {
        CHECK(g.partners.size() == 2);
        for (int p : g.partners) CHECK(used.insert(p).second);
    }
    CHECK(used.size() == 1060);

    MergePlan again = make_merge_plan(sc, MergeMode::Half, 5);
    CHECK(again.groups[0].partners == half.groups[0].partners);
    MergePlan other = make_merge_plan(sc, MergeMode::Half, 6);
    bool same = true;
    for (size_t i = 0; i < 530; ++i)
        if (other.groups[i].partners != half.groups[i].partners) same = false;
    CHECK(!same);
}

TEST_CASE("merging is rejected when noise traders run out") {
    Scenario sc = small_scenario();
    CHECK_THROWS_AS(make_merge_plan(sc, MergeMode::TwoThirds, 1),
                    std::invalid_argument);
}

TEST_CASE("merged samples blend streams and keep the strategic label") {
    Scenario sc = taker_plus_noise(2);
    RunLog log;
    log.span = 200000.0;
    // taker: two market orders; noise agents 1 and 2: limit orders
    log.records = {
        rec(10, 0, kTaker1, Action::SubmitMarket, Side::Bid, std::nullopt, 5,
            {{10000, 5}}, 10000.0),
        rec(20, 1, kNoise, Action::SubmitLimit, Side::Ask, 10010, 5, {},
            10000.0),
        rec(30, 0, kTaker1, Action::SubmitMarket, Side::Ask, std::nullopt, 5,
            {{10000, 5}}, 10000.0),
        rec(40, 2, kNoise, Action::SubmitLimit, Side::Bid, 9990, 5, {},
            10000.0),
    };

    SUBCASE("two-thirds: one sample, market ratio diluted, total preserved") {
        MergePlan plan = make_merge_plan(sc, MergeMode::TwoThirds, 9);
        auto rows = extract_run_features(log, sc, plan);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].label == kTaker1);
        CHECK(rows[0].x[3] == doctest::Approx(0.5));  // 2 of 4 are market
        // gaps over the interleaved stream: 10, 10, 10
        CHECK(rows[0].x[4] == doctest::Approx(10.0));
        CHECK(rows[0].x[5] == doctest::Approx(0.0));
    }
    SUBCASE("half: merged sample plus standalone noise, activity preserved") {
        MergePlan plan = make_merge_plan(sc, MergeMode::Half, 9);
        auto rows = extract_run_features(log, sc, plan);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].label == kTaker1);
        CHECK(rows[1].label == kNoise);
        // 4 records split 3 + 1 between the two samples
        double merged_orders = rows[0].x[3] > 0 ? 3 : 0;
        CHECK(merged_orders == 3);
        CHECK(rows[0].x[3] == doctest::Approx(2.0 / 3.0));
        CHECK(rows[1].x[3] == doctest::Approx(0.0));
    }
}

TEST_CASE("extraction is deterministic bit for bit") {
    Scenario sc = small_scenario();
    RunLog log = run_one(sc, 77, 0);
    auto a = extract_run_features(log, sc, kNoMerge);
    auto b = extract_run_features(log, sc, kNoMerge);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(std::memcmp(a[i].x.data(), b[i].x.data(),
                          sizeof(double) * kFeatureCount) == 0);
}

TEST_CASE("momentum chartists lean with the move, reverters against it") {
    Scenario sc = canonical_scenario(144000.0);
    RunLog log = run_one(sc, 21, 0);
    auto rows = extract_run_features(log, sc, kNoMerge);
    auto class_mean = [&](int cls, int f) {
        double s = 0;
        int n = 0;
        for (const auto& r : rows)
            if (r.label == cls) { s += r.x[static_cast<size_t>(f)]; ++n; }
        return s / n;
    };
    CHECK(class_mean(kChartist1, 10) > class_mean(kChartist3, 10));
    CHECK(class_mean(kChartist1, 10) > 0.0);
    CHECK(class_mean(kChartist3, 10) < 0.0);
    // makers quote both sides constantly: near-zero directed trend
    CHECK(std::fabs(class_mean(kMaker1, 10)) <
          std::fabs(class_mean(kChartist1, 10)));
}

TEST_CASE("nine-feature names form the documented prefix") {
    const auto& names = feature_names();
    CHECK(names[0] == "buy_ratio");
    CHECK(names[8] == "total_volume");
    CHECK(names[9] == "trend_short");
    CHECK(names[17] == "fund_profit_weighted");
}
