#include "gsmab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace gsmab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string numbered(std::string_view stem, std::size_t index, std::string_view ext) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zu", index);
    return std::string(stem) + "_" + buf + std::string(ext);
}

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

template <class T>
void take(const json& obj, const char* key, T& dst) {
    if (auto it = obj.find(key); it != obj.end()) dst = it->get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, std::string_view where) {
    for (const auto& [key, _] : obj.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::runtime_error("config: unknown key '" + key + "' in " + std::string(where));
}

std::string_view role_name(InstanceRole role) { return role == InstanceRole::Train ? "train" : "test"; }

}  // namespace

void ExperimentConfig::validate() const {
    sbm.validate();
    trainer.validate();
    if (solver.max_iters == 0 || !(solver.rel_tol > 0.0)) throw std::domain_error("invalid solver config");
    if (train_graphs == 0 || test_graphs == 0) throw std::domain_error("graph counts must be >= 1");
    if (budgets.empty()) throw std::domain_error("at least one evaluation budget is required");
    for (double b : budgets)
        if (!(b > 0.0 && b <= 1.0)) throw std::domain_error("relative budgets must lie in (0, 1]");
    if (!(train_budget > 0.0 && train_budget <= 1.0)) throw std::domain_error("train_budget must lie in (0, 1]");
}

ExperimentConfig desk_profile() {
    ExperimentConfig cfg;
    cfg.train_graphs = 20;
    cfg.trainer.episodes = 2000;
    cfg.test_graphs = 100;
    return cfg;
}

ExperimentConfig paper_profile() {
    ExperimentConfig cfg;
    cfg.train_graphs = 500;
    cfg.trainer.episodes = 10000;
    cfg.test_graphs = 500;
    return cfg;
}

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base) {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw std::runtime_error("config: top level must be an object");
    reject_unknown(doc,
                   {"profile", "seed", "output_dir", "train_graphs", "test_graphs", "budgets", "train_budget",
                    "workers", "db_floor", "sbm", "trainer", "solver"},
                   "top level");
    if (auto it = doc.find("profile"); it != doc.end()) {
        const auto name = it->get<std::string>();
        if (name == "desk")
            base = desk_profile();
        else if (name == "paper")
            base = paper_profile();
        else
            throw std::runtime_error("config: unknown profile '" + name + "'");
    }
    ExperimentConfig cfg = std::move(base);
    take(doc, "seed", cfg.master_seed);
    if (auto it = doc.find("output_dir"); it != doc.end()) cfg.output_dir = it->get<std::string>();
    take(doc, "train_graphs", cfg.train_graphs);
    take(doc, "test_graphs", cfg.test_graphs);
    take(doc, "budgets", cfg.budgets);
    take(doc, "train_budget", cfg.train_budget);
    take(doc, "workers", cfg.workers);
    take(doc, "db_floor", cfg.db_floor);
    if (auto it = doc.find("sbm"); it != doc.end()) {
        reject_unknown(*it, {"cluster_count", "size_success_prob", "intra_prob", "inter_prob", "max_regen_attempts"},
                       "sbm");
        take(*it, "cluster_count", cfg.sbm.cluster_count);
        take(*it, "size_success_prob", cfg.sbm.size_success_prob);
        take(*it, "intra_prob", cfg.sbm.intra_prob);
        take(*it, "inter_prob", cfg.sbm.inter_prob);
        take(*it, "max_regen_attempts", cfg.sbm.max_regen_attempts);
    }
    if (auto it = doc.find("trainer"); it != doc.end()) {
        reject_unknown(*it,
                       {"horizon", "learn_rate", "batch_size", "episodes", "rmsprop_decay", "rmsprop_eps",
                        "early_stop_threshold"},
                       "trainer");
        take(*it, "horizon", cfg.trainer.horizon);
        take(*it, "learn_rate", cfg.trainer.learn_rate);
        take(*it, "batch_size", cfg.trainer.batch_size);
        take(*it, "episodes", cfg.trainer.episodes);
        take(*it, "rmsprop_decay", cfg.trainer.rmsprop_decay);
        take(*it, "rmsprop_eps", cfg.trainer.rmsprop_eps);
        take(*it, "early_stop_threshold", cfg.trainer.early_stop_threshold);
    }
    if (auto it = doc.find("solver"); it != doc.end()) {
        reject_unknown(*it, {"max_iters", "rel_tol", "tau", "sigma"}, "solver");
        take(*it, "max_iters", cfg.solver.max_iters);
        take(*it, "rel_tol", cfg.solver.rel_tol);
        take(*it, "tau", cfg.solver.tau);
        take(*it, "sigma", cfg.solver.sigma);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const fs::path& file, ExperimentConfig base) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot read config " + file.string());
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return parse_config(ss.str(), std::move(base));
    } catch (const json::exception& e) {
        throw std::runtime_error("config " + file.string() + ": " + e.what());
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view role, std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (char c : role) feed(static_cast<unsigned char>(c));
    feed('#');
    for (char c : std::to_string(index)) feed(static_cast<unsigned char>(c));

    std::uint64_t z = master ^ h;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t absolute_budget(double relative, std::size_t node_count) {
    const auto m = static_cast<std::size_t>(std::llround(relative * static_cast<double>(node_count)));
    return std::clamp<std::size_t>(m, 1, node_count);
}

Instance make_instance(const ExperimentConfig& cfg, InstanceRole role, std::size_t index) {
    Rng rng(derive_seed(cfg.master_seed, std::string(role_name(role)) + "/graph", index));
    auto draw = sbm_generate(cfg.sbm, {}, rng);
    auto signal = realize({draw.partition, ascending_coefficients(draw.partition.cluster_count())});
    return {std::move(draw.graph), std::move(draw.partition), std::move(signal)};
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::MAB: return "MAB";
        case Method::RWS: return "RWS";
        case Method::URS: return "URS";
    }
    return "?";
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "method,budget,nmse_linear,nmse_db,graphs,seed\n";
    char budget[32];
    for (const auto& r : rows) {
        std::snprintf(budget, sizeof budget, "%g", r.budget);
        os << method_name(r.method) << ',' << budget << ',' << fmt17(r.nmse_linear) << ',' << fmt17(r.nmse_db) << ','
           << r.graphs << ',' << r.seed << '\n';
    }
}

GenerateReport cmd_generate(const ExperimentConfig& cfg, std::size_t count, InstanceRole role) {
    cfg.validate();
    GenerateReport report;
    const fs::path dir = cfg.output_dir / "graphs";
    for (std::size_t i = 0; i < count; ++i) {
        const auto inst = make_instance(cfg, role, i);
        const fs::path graph_file = dir / numbered(role_name(role), i, ".graph");
        const fs::path part_file = dir / numbered(role_name(role), i, ".part");
        const fs::path signal_file = dir / numbered(role_name(role), i, ".signal");
        {
            auto os = open_out(graph_file);
            write_graph(os, inst.graph);
        }
        {
            auto os = open_out(part_file);
            write_partition(os, inst.partition);
        }
        {
            auto os = open_out(signal_file);
            write_signal(os, inst.signal);
        }
        report.files.insert(report.files.end(), {graph_file, part_file, signal_file});
    }
    return report;
}

TrainReport cmd_train(const ExperimentConfig& cfg) {
    cfg.validate();
    TrainReport report;
    report.policies.resize(cfg.train_graphs);
    report.reward_traces.resize(cfg.train_graphs);

    parallel_for(cfg.train_graphs, cfg.workers, [&](std::size_t k) {
        const auto inst = make_instance(cfg, InstanceRole::Train, k);
        TrainerConfig tc = cfg.trainer;
        tc.budget = absolute_budget(cfg.train_budget, inst.graph.node_count());
        Rng rng(derive_seed(cfg.master_seed, "train/agent", k));
        auto run = train_on_graph(inst.graph, inst.signal, tc, cfg.solver, rng);
        report.policies[k] = std::move(run.policy);
        report.reward_traces[k] = std::move(run.rewards);
    });

    const fs::path policy_dir = cfg.output_dir / "policies";
    const fs::path trace_dir = cfg.output_dir / "traces";
    for (std::size_t k = 0; k < cfg.train_graphs; ++k) {
        auto ps = open_out(policy_dir / numbered("policy", k, ".txt"));
        write_policy(ps, report.policies[k]);
        auto ts = open_out(trace_dir / numbered("trace", k, ".csv"));
        ts << "episode,reward\n";
        const auto& trace = report.reward_traces[k];
        for (std::size_t e = 0; e < trace.size(); ++e) ts << e + 1 << ',' << fmt17(trace[e]) << '\n';
    }
    report.mean_distribution = mean_policy(report.policies);
    report.mean_policy_file = policy_dir / "mean_policy.txt";
    auto ms = open_out(report.mean_policy_file);
    write_policy(ms, Policy::from_distribution(report.mean_distribution));
    return report;
}

std::vector<ResultRow> cmd_eval(const ExperimentConfig& cfg, const Policy& policy) {
    cfg.validate();
    if (policy.horizon() == 0) throw std::domain_error("evaluation policy has no actions");
    constexpr Method kMethods[] = {Method::MAB, Method::RWS, Method::URS};
    constexpr std::size_t kMethodCount = std::size(kMethods);
    const std::size_t budgets = cfg.budgets.size();

    // nmse[i][b * methods + m] for test graph i.
    std::vector<std::vector<double>> nmse_table(cfg.test_graphs, std::vector<double>(budgets * kMethodCount));
    parallel_for(cfg.test_graphs, cfg.workers, [&](std::size_t i) {
        const auto inst = make_instance(cfg, InstanceRole::Test, i);
        const DistanceTable dist(inst.graph);
        for (std::size_t b = 0; b < budgets; ++b) {
            const std::size_t m = absolute_budget(cfg.budgets[b], inst.graph.node_count());
            for (std::size_t k = 0; k < kMethodCount; ++k) {
                const std::string role = "eval/" + std::string(method_name(kMethods[k])) + "/" + std::to_string(b);
                Rng rng(derive_seed(cfg.master_seed, role, i));
                std::vector<NodeId> nodes;
                switch (kMethods[k]) {
                    case Method::MAB: nodes = run_episode(dist, policy, m, rng).nodes; break;
                    case Method::RWS: nodes = sample_rws(inst.graph, m, rng); break;
                    case Method::URS: nodes = sample_urs(inst.graph, m, rng); break;
                }
                const auto rec = recover(inst.graph, SampleSet::from_nodes(nodes, inst.signal), cfg.solver);
                nmse_table[i][b * kMethodCount + k] = nmse(inst.signal, rec.signal);
            }
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t b = 0; b < budgets; ++b)
        for (std::size_t k = 0; k < kMethodCount; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < cfg.test_graphs; ++i) sum += nmse_table[i][b * kMethodCount + k];
            const double mean = sum / static_cast<double>(cfg.test_graphs);
            const auto db = to_db(mean, cfg.db_floor);
            rows.push_back({kMethods[k], cfg.budgets[b], mean, db.value, db.clamped, cfg.test_graphs, cfg.master_seed});
        }
    auto os = open_out(cfg.output_dir / "results.csv");
    write_results_csv(os, rows);
    return rows;
}

AnalyzeReport cmd_analyze(const AnalyzeRequest& req) {
    AnalyzeReport report{summarize(req.model), std::nullopt};
    if (req.empirical) {
        SbmConfig sbm;
        sbm.cluster_count = 2;
        sbm.intra_prob = req.model.p;
        sbm.inter_prob = req.model.q;
        Rng graph_rng(derive_seed(req.seed, "analyze/graph", 0));
        const auto draw = sbm_generate(sbm, {req.model.n1, req.model.n2}, graph_rng);
        Rng walk_rng(derive_seed(req.seed, "analyze/walk", 0));
        report.occupancy = empirical_occupancy(draw.graph, draw.partition, req.walk_steps, req.trials, walk_rng);
    }
    return report;
}

void print_analysis(std::ostream& os, const AnalyzeRequest& req, const AnalyzeReport& report) {
    const auto& t = report.summary.transition;
    const auto& v = report.summary.equilibrium;
    char line[160];
    std::snprintf(line, sizeof line, "model: N1=%zu N2=%zu p=%g q=%g\n", req.model.n1, req.model.n2, req.model.p,
                  req.model.q);
    os << line;
    std::snprintf(line, sizeof line, "transition:\n  [%.6f %.6f]\n  [%.6f %.6f]\n", t.p11, t.p12, t.p21, t.p22);
    os << line;
    std::snprintf(line, sizeof line, "equilibrium: v1=%.6f v2=%.6f (ratio v2/v1=%.3f)\n", v.v1, v.v2, v.v2 / v.v1);
    os << line;
    if (report.occupancy) {
        const auto& occ = *report.occupancy;
        std::snprintf(line, sizeof line, "empirical occupancy (%zu trials x %zu steps): C1=%.6f C2=%.6f\n", req.trials,
                      req.walk_steps, occ[0], occ[1]);
        os << line;
    }
}

}  // namespace gsmab
