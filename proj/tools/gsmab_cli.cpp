// gsmab — command-line driver for the sampling benchmark.
//
//   gsmab generate --config cfg.json --graphs 5
//   gsmab train    --config cfg.json --episodes 2000
//   gsmab eval     --config cfg.json --budgets 0.2,0.4
//   gsmab analyze  --n1 20 --n2 80 --p 0.7 --q 0.01 --empirical
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsmab/experiment.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::string profile = "desk";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> budgets;
    std::optional<std::size_t> episodes;
    std::optional<std::size_t> graphs;
    std::optional<std::size_t> workers;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--profile", o.profile, "base profile: desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--budgets", o.budgets, "comma-separated relative budgets, e.g. 0.2,0.4");
    cmd->add_option("--episodes", o.episodes, "training episodes per graph");
    cmd->add_option("--graphs", o.graphs, "graph count (generate: instances, train: K, eval: test graphs)");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
}

std::vector<double> parse_budgets(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::runtime_error("bad budget '" + item + "'");
    }
    return out;
}

enum class GraphCountTarget { Generate, Train, Eval };

gsmab::ExperimentConfig resolve(const CommonOptions& o, GraphCountTarget target, std::size_t& generate_count) {
    gsmab::ExperimentConfig cfg = o.profile == "paper" ? gsmab::paper_profile() : gsmab::desk_profile();
    if (!o.config.empty()) cfg = gsmab::load_config(o.config, cfg);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.out) cfg.output_dir = *o.out;
    if (o.budgets) cfg.budgets = parse_budgets(*o.budgets);
    if (o.episodes) cfg.trainer.episodes = *o.episodes;
    if (o.workers) cfg.workers = *o.workers;
    if (o.graphs) {
        switch (target) {
            case GraphCountTarget::Generate: generate_count = *o.graphs; break;
            case GraphCountTarget::Train: cfg.train_graphs = *o.graphs; break;
            case GraphCountTarget::Eval: cfg.test_graphs = *o.graphs; break;
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-bandit graph signal sampling benchmark"};
    app.require_subcommand(1);

    CommonOptions gen_opts, train_opts, eval_opts;
    std::string role = "train";
    std::size_t generate_count = 1;
    auto* gen = app.add_subcommand("generate", "write SBM graph/partition/signal instances");
    add_common(gen, gen_opts);
    gen->add_option("--role", role, "instance family")->check(CLI::IsMember({"train", "test"}))->capture_default_str();

    auto* train = app.add_subcommand("train", "train one policy per training graph and their mean policy");
    add_common(train, train_opts);

    std::string policy_file;
    auto* eval = app.add_subcommand("eval", "compare the mean policy against RWS and URS; writes results.csv");
    add_common(eval, eval_opts);
    eval->add_option("--policy", policy_file, "policy file (default <out>/policies/mean_policy.txt)");

    gsmab::AnalyzeRequest analyze_req;
    analyze_req.model = {20, 80, 0.7, 0.01};
    auto* analyze = app.add_subcommand("analyze", "two-cluster random-walk chain and equilibrium");
    analyze->add_option("--n1", analyze_req.model.n1, "size of cluster 1")->capture_default_str();
    analyze->add_option("--n2", analyze_req.model.n2, "size of cluster 2")->capture_default_str();
    analyze->add_option("--p", analyze_req.model.p, "intra-cluster edge probability")->capture_default_str();
    analyze->add_option("--q", analyze_req.model.q, "inter-cluster edge probability")->capture_default_str();
    analyze->add_flag("--empirical", analyze_req.empirical, "also measure walk occupancy on an SBM draw");
    analyze->add_option("--walk-steps", analyze_req.walk_steps, "steps per walk")->capture_default_str();
    analyze->add_option("--trials", analyze_req.trials, "independent walks")->capture_default_str();
    analyze->add_option("--seed", analyze_req.seed, "seed for the SBM draw and walks")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen) {
            auto cfg = resolve(gen_opts, GraphCountTarget::Generate, generate_count);
            const auto report = gsmab::cmd_generate(
                cfg, generate_count, role == "train" ? gsmab::InstanceRole::Train : gsmab::InstanceRole::Test);
            std::cout << "wrote " << report.files.size() << " files under " << (cfg.output_dir / "graphs").string()
                      << '\n';
        } else if (*train) {
            auto cfg = resolve(train_opts, GraphCountTarget::Train, generate_count);
            const auto report = gsmab::cmd_train(cfg);
            std::cout << "mean policy:";
            for (double p : report.mean_distribution) std::cout << ' ' << p;
            std::cout << "\nwrote " << report.mean_policy_file.string() << '\n';
        } else if (*eval) {
            auto cfg = resolve(eval_opts, GraphCountTarget::Eval, generate_count);
            const std::filesystem::path file =
                policy_file.empty() ? cfg.output_dir / "policies" / "mean_policy.txt" : std::filesystem::path(policy_file);
            std::ifstream is(file);
            if (!is) throw std::runtime_error("cannot read policy " + file.string());
            const auto rows = gsmab::cmd_eval(cfg, gsmab::read_policy(is));
            gsmab::write_results_csv(std::cout, rows);
        } else if (*analyze) {
            const auto report = gsmab::cmd_analyze(analyze_req);
            gsmab::print_analysis(std::cout, analyze_req, report);
        }
    } catch (const std::exception& e) {
        std::cerr << "gsmab: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
