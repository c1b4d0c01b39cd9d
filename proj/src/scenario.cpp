#include "msim/scenario.hpp"

namespace msim {

const char* class_name(int class_id) {
    switch (class_id) {
        case kMaker1: return "market_maker_1";
        case kMaker2: return "market_maker_2";
        case kMaker3: return "market_maker_3";
        case kTaker1: return "market_taker_1";
        case kTaker2: return "market_taker_2";
        case kTaker3: return "market_taker_3";
        case kFundamentalist1: return "fundamentalist_1";
        case kFundamentalist2: return "fundamentalist_2";
        case kFundamentalist3: return "fundamentalist_3";
        case kFundamentalist4: return "fundamentalist_4";
        case kChartist1: return "chartist_1";
        case kChartist2: return "chartist_2";
        case kChartist3: return "chartist_3";
        case kChartist4: return "chartist_4";
        case kNoise: return "noise_trader";
    }
    return "unknown";
}

bool is_noise_class(int class_id) { return class_id == kNoise; }

int Scenario::total_agents() const {
    int n = 0;
    for (const auto& c : classes) n += c.count;
    return n;
}

std::vector<int> Scenario::class_of_agent() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(total_agents()));
    for (const auto& c : classes)
        for (int i = 0; i < c.count; ++i) out.push_back(c.class_id);
    return out;
}

namespace {

AgentClassSpec maker_spec(int class_id, int count, double update_mean, int rungs,
                          Ticks step) {
    AgentClassSpec s;
    s.kind = AgentClassSpec::Maker;
    s.class_id = class_id;
    s.count = count;
    s.maker.update_mean = update_mean;
    s.maker.ladder_rungs = rungs;
    s.maker.rung_step = step;
    s.maker.order_size = 5;
    return s;
}

AgentClassSpec taker_spec(int class_id, int count, double arrival, double exit_mean,
                          long long large) {
    AgentClassSpec s;
    s.kind = AgentClassSpec::Taker;
    s.class_id = class_id;
    s.count = count;
    s.taker.arrival_mean = arrival;
    s.taker.exit_mean = exit_mean;
    s.taker.exit_std = 200.0;
    s.taker.large_size = large;
    s.taker.chunk_mean = 5.0;
    s.taker.chunk_std = 1.5;
    return s;
}

AgentClassSpec trend_spec(AgentClassSpec::Kind kind, int class_id, int count,
                          double weight, double limit_mean, double market_mean,
                          double horizon) {
    AgentClassSpec s;
    s.kind = kind;
    s.class_id = class_id;
    s.count = count;
    s.trend.weight = weight;
    s.trend.limit_mean = limit_mean;
    s.trend.market_mean = market_mean;
    s.trend.noise_std_ticks = 10.0;  // 0.1 currency units
    s.trend.horizon = horizon;
    s.trend.size_mean = 5.0;
    s.trend.size_std = 1.5;
    return s;
}

AgentClassSpec noise_spec(int count) {
    AgentClassSpec s;
    s.kind = AgentClassSpec::Noise;
    s.class_id = kNoise;
    s.count = count;
    s.noise.limit_mean = 20000.0;
    s.noise.market_mean = 10000.0;
    s.noise.cancel_mean = 60000.0;
    s.noise.price_std_ticks = 100.0;  // 1.0 currency units
    s.noise.size_mean = 5.0;
    s.noise.size_std = 1.5;
    return s;
}

FundamentalSchedule four_regimes(double span) {
    FundamentalSchedule f;
    f.initial_value = 100.0;
    f.span = span;
    f.times = {span * 0.25, span * 0.50, span * 0.75};
    f.values = {70.0, 100.0, 70.0};
    return f;
}

Scenario population(double span, int scale_makers, int scale_takers,
                    int scale_fund, int scale_chart, int scale_noise) {
    Scenario sc;
    sc.span = span;
    sc.fundamental = four_regimes(span);
    sc.classes = {
        maker_spec(kMaker1, scale_makers, 3000.0, 5, 25),
        maker_spec(kMaker2, scale_makers, 30000.0, 10, 50),
        maker_spec(kMaker3, scale_makers, 15000.0, 15, 25),
        taker_spec(kTaker1, scale_takers, 30000.0, 2000.0, 100),
        taker_spec(kTaker2, scale_takers, 45000.0, 1000.0, 400),
        taker_spec(kTaker3, scale_takers, 15000.0, 3000.0, 50),
        trend_spec(AgentClassSpec::Fundamentalist, kFundamentalist1, scale_fund,
                   1.0, 20000.0, 10000.0, 10000.0),
        trend_spec(AgentClassSpec::Fundamentalist, kFundamentalist2, scale_fund,
                   0.5, 30000.0, 20000.0, 20000.0),
        trend_spec(AgentClassSpec::Fundamentalist, kFundamentalist3, scale_fund,
                   0.2, 40000.0, 20000.0, 40000.0),
        trend_spec(AgentClassSpec::Fundamentalist, kFundamentalist4, scale_fund,
                   0.5, 20000.0, 10000.0, 40000.0),
        trend_spec(AgentClassSpec::Chartist, kChartist1, scale_chart,
                   1.0, 20000.0, 10000.0, 10000.0),
        trend_spec(AgentClassSpec::Chartist, kChartist2, scale_chart,
                   0.5, 40000.0, 20000.0, 40000.0),
        trend_spec(AgentClassSpec::Chartist, kChartist3, scale_chart,
                   -1.0, 20000.0, 10000.0, 10000.0),
        trend_spec(AgentClassSpec::Chartist, kChartist4, scale_chart,
                   -0.5, 40000.0, 20000.0, 40000.0),
        noise_spec(scale_noise),
    };
    // bootstrap depth is sized to the session: resting stock laid down during
    // the warm-up has to absorb roughly span-proportional net consumption, so
    // longer sessions get denser seeding.  a short session gets a light floor,
    // which leaves the mid free to wander instead of pinning it in place.
    sc.classes.back().noise.warmup_limit_mean = 1.0e8 / span;
    return sc;
}

}  // namespace

Scenario canonical_scenario(double span) {
    Scenario sc = population(span, 20, 10, 10, 100, 1060);
    sc.name = "canonical";
    return sc;
}

Scenario small_scenario(double span) {
    // maker-heavy relative to the canonical mix: with too few resting shares a
    // single large-order burst can empty both sides, and a book with no
    // quotes never recovers (makers and noise limits both need a reference)
    Scenario sc = population(span, 8, 1, 2, 3, 20);
    sc.name = "small";
    sc.burn_in = 5000.0;
    return sc;
}

RunLog run_one(const Scenario& sc, uint64_t master_seed, int run_index) {
    uint64_t run_seed = derive_seed(master_seed, static_cast<uint64_t>(run_index));
    Simulation sim(sc.burn_in, sc.span);
    sim.log().run_id = run_index;
    sim.log().seed = run_seed;
    sim.log().fundamental_breakpoints = sc.fundamental.times;

    sim.set_warmup_anchors(sc.seed_bid, sc.seed_ask);
    sim.seed_order(Side::Bid, sc.seed_bid, sc.seed_depth);
    sim.seed_order(Side::Ask, sc.seed_ask, sc.seed_depth);

    AgentId next_id = 0;
    for (const auto& cls : sc.classes) {
        for (int i = 0; i < cls.count; ++i) {
            AgentId id = next_id++;
            switch (cls.kind) {
                case AgentClassSpec::Maker:
                    sim.add_agent(std::make_unique<MarketMaker>(id, cls.class_id,
                                                                run_seed, cls.maker));
                    break;
                case AgentClassSpec::Taker:
                    sim.add_agent(std::make_unique<MarketTaker>(id, cls.class_id,
                                                                run_seed, cls.taker));
                    break;
                case AgentClassSpec::Chartist:
                    sim.add_agent(std::make_unique<Chartist>(id, cls.class_id,
                                                             run_seed, cls.trend));
                    break;
                case AgentClassSpec::Fundamentalist:
                    sim.add_agent(std::make_unique<Fundamentalist>(
                        id, cls.class_id, run_seed, cls.trend, &sc.fundamental));
                    break;
                case AgentClassSpec::Noise:
                    sim.add_agent(std::make_unique<NoiseTrader>(id, cls.class_id,
                                                                run_seed, cls.noise));
                    break;
            }
        }
    }
    for (double t : sc.fundamental.times) sim.schedule_fundamental_step(t);

    sim.run_until(sc.span);
    return std::move(sim.log());
}

void run_batch(const Scenario& sc, uint64_t master_seed, int runs,
               const std::function<void(RunLog&&)>& consume) {
    for (int r = 0; r < runs; ++r) consume(run_one(sc, master_seed, r));
}

}  // namespace msim
