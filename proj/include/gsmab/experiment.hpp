// experiment.hpp — SBM benchmark orchestration: instance generation,
// per-graph training, mean-policy evaluation against RWS/URS, and the
// two-cluster chain analysis.
//
// Every random stream is derived from the master seed and a role string
// (see derive_seed), so all outputs are a pure function of the config.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsmab/bandit.hpp"
#include "gsmab/chain.hpp"
#include "gsmab/graph.hpp"
#include "gsmab/signal.hpp"
#include "gsmab/tv_recovery.hpp"

namespace gsmab {

struct ExperimentConfig {
    SbmConfig sbm;
    TrainerConfig trainer;
    SolverConfig solver;
    std::size_t train_graphs = 20;
    std::size_t test_graphs = 100;
    std::vector<double> budgets{0.1, 0.2, 0.3, 0.4, 0.5};
    // Relative budget used while training; the learned policy is reused
    // for every evaluation budget.
    double train_budget = 0.2;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "gsmab_out";
    std::size_t workers = 0;  // 0 = hardware concurrency
    double db_floor = kDefaultDbFloor;

    void validate() const;
};

// K=20, 2000 episodes, 100 test graphs.
ExperimentConfig desk_profile();
// K=500, 10000 episodes, 500 test graphs.
ExperimentConfig paper_profile();

// Overlays the keys present in a JSON config file onto `base`. A top-level
// "profile" key ("desk" or "paper") replaces `base` first.
ExperimentConfig load_config(const std::filesystem::path& file, ExperimentConfig base = desk_profile());
ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base = desk_profile());

// splitmix64(master ^ fnv1a64(role + "#" + index)).
std::uint64_t derive_seed(std::uint64_t master, std::string_view role, std::uint64_t index);

// max(1, round(relative * N)), capped at N.
std::size_t absolute_budget(double relative, std::size_t node_count);

struct Instance {
    Graph graph;
    Partition partition;
    GraphSignal signal;
};

enum class InstanceRole { Train, Test };

// Graph `index` of the training or test family, with coefficients 1..K.
Instance make_instance(const ExperimentConfig& cfg, InstanceRole role, std::size_t index);

// Runs fn(0..count-1) on up to `workers` threads. The first exception thrown
// by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

enum class Method { MAB, RWS, URS };
std::string_view method_name(Method m);

struct ResultRow {
    Method method;
    double budget;
    double nmse_linear;
    double nmse_db;
    bool db_clamped;
    std::size_t graphs;
    std::uint64_t seed;
};

// Header: method,budget,nmse_linear,nmse_db,graphs,seed
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);

struct GenerateReport {
    std::vector<std::filesystem::path> files;
};

// Writes graphs/<role>_NNNN.{graph,part,signal} under cfg.output_dir.
GenerateReport cmd_generate(const ExperimentConfig& cfg, std::size_t count, InstanceRole role = InstanceRole::Train);

struct TrainReport {
    std::vector<Policy> policies;
    std::vector<double> mean_distribution;
    std::vector<std::vector<double>> reward_traces;
    std::filesystem::path mean_policy_file;
};

// Trains one policy per training graph; writes policies/policy_NNNN.txt,
// policies/mean_policy.txt and traces/trace_NNNN.csv.
TrainReport cmd_train(const ExperimentConfig& cfg);

// Evaluates the frozen policy, RWS and URS on cfg.test_graphs fresh graphs
// per budget. Writes results.csv and returns its rows.
std::vector<ResultRow> cmd_eval(const ExperimentConfig& cfg, const Policy& policy);

struct AnalyzeRequest {
    TwoClusterModel model;
    bool empirical = false;
    std::size_t walk_steps = 100000;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
};

struct AnalyzeReport {
    ChainSummary summary;
    std::optional<std::vector<double>> occupancy;  // per cluster, when requested
};

AnalyzeReport cmd_analyze(const AnalyzeRequest& req);
void print_analysis(std::ostream& os, const AnalyzeRequest& req, const AnalyzeReport& report);

}  // namespace gsmab
