#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "msim/agents.hpp"

namespace msim {

// Agent classes, in report order.  Ids are fixed: they are the label space
// of every downstream dataset.
enum ClassId : int {
    kMaker1 = 1, kMaker2, kMaker3,
    kTaker1, kTaker2, kTaker3,
    kFundamentalist1, kFundamentalist2, kFundamentalist3, kFundamentalist4,
    kChartist1, kChartist2, kChartist3, kChartist4,
    kNoise,
};
constexpr int kClassCount = 15;

const char* class_name(int class_id);
bool is_noise_class(int class_id);

struct AgentClassSpec {
    enum Kind { Maker, Taker, Chartist, Fundamentalist, Noise } kind = Noise;
    int class_id = 0;
    int count = 0;
    MakerParams maker;
    TakerParams taker;
    TrendParams trend;
    NoiseParams noise;
};

struct Scenario {
    std::string name = "canonical";
    double span = 720000.0;      // measured session length, 0.1 s units
    double burn_in = 20000.0;    // warm-up before t = 0
    Ticks seed_bid = 9995;       // initial anchor quotes around 100.00
    Ticks seed_ask = 10005;
    long long seed_depth = 5;
    FundamentalSchedule fundamental;
    std::vector<AgentClassSpec> classes;

    int total_agents() const;
    // agent ids are dense, assigned class by class in declaration order
    std::vector<int> class_of_agent() const;
};

// The full 1590-agent population with the reference parameter set.  The
// fundamental alternates 100 / 70 over four equal regimes of span/4.
Scenario canonical_scenario(double span = 720000.0);

// A light population for unit tests and smoke runs (same class mix, far
// fewer agents).
Scenario small_scenario(double span = 20000.0);

RunLog run_one(const Scenario& sc, uint64_t master_seed, int run_index);

// Runs `runs` simulations and feeds each finished log to `consume` in run
// order.  Results depend only on (scenario, master_seed, run index).
void run_batch(const Scenario& sc, uint64_t master_seed, int runs,
               const std::function<void(RunLog&&)>& consume);

}  // namespace msim
