// Command-line harness: single-configuration runs, experiment sweeps and the
// structural lemma checks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unimatch/oracle.hpp"
#include "unimatch/runner.hpp"

namespace
{

using namespace unimatch;

struct RunOptions
{
    std::string algo = "grab-plus";
    std::string instance = "exp1";
    std::size_t couples = 4;
    double delta = 0.1;
    double mu = 0.5;
    std::vector<double> theta;
    std::int64_t horizon = 100000;
    std::size_t seeds = 1;
    std::uint64_t base_seed = 0;
    std::string index = "simple-ucb";
    std::string out;
    std::int64_t trace_every = 0;
    bool relax = false;
    bool record_time = false;
    std::size_t threads = 0;
};

struct SweepOptions
{
    std::vector<std::string> algos{"grab", "grab-plus"};
    std::size_t l_min = 2;
    std::size_t l_max = 6;
    std::size_t couples = 4;
    std::vector<double> mus{0.5};
    double delta = 0.1;
    std::int64_t horizon = 1000000;
    std::size_t seeds = 10;
    std::uint64_t base_seed = 0;
    std::string index = "simple-ucb";
    std::string out;
    std::string runs_out;
    bool relax = false;
    std::size_t threads = 0;
};

struct VerifyOptions
{
    bool lemmas = false;
    std::size_t l_max = 4;
    std::size_t instances = 20;
    std::uint64_t seed = 0;
};

void add_common_sweep_options(CLI::App& cmd, SweepOptions& o)
{
    cmd.add_option("--algos", o.algos, "Algorithms to compare")->delimiter(',');
    cmd.add_option("--delta", o.delta, "Gap between consecutive couples");
    cmd.add_option("--horizon", o.horizon, "Rounds per run");
    cmd.add_option("--seeds", o.seeds, "Replications per cell");
    cmd.add_option("--base-seed", o.base_seed, "First seed");
    cmd.add_option("--index", o.index, "klucb | simple-ucb");
    cmd.add_option("--out", o.out, "Aggregated table (CSV)")->required();
    cmd.add_option("--runs-out", o.runs_out, "Per-seed checkpoint records (CSV)");
    cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

SweepConfig to_sweep(const SweepOptions& o)
{
    SweepConfig c;
    c.algos.clear();
    for (const auto& a : o.algos)
    {
        c.algos.push_back(parse_algorithm(a));
    }
    c.horizon = o.horizon;
    c.seeds = seed_range(o.base_seed, o.seeds);
    c.index = parse_index_kind(o.index);
    c.threads = o.threads;
    return c;
}

void write_sweep(const SweepOptions& o, const SweepResult& result, const std::vector<std::string>& comment)
{
    std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot open " + o.out);
    }
    write_sweep_csv(out, result.rows, comment);
    if (!o.runs_out.empty())
    {
        emit_csv(result.runs, o.runs_out, comment);
    }
    write_sweep_csv(std::cout, result.rows);
}

int run_command(const RunOptions& o)
{
    ExperimentConfig config;
    config.algo = parse_algorithm(o.algo);
    if (o.instance == "exp1")
    {
        config.instance.kind = InstanceSpec::Kind::exp1;
    }
    else if (o.instance == "exp2")
    {
        config.instance.kind = InstanceSpec::Kind::exp2;
    }
    else if (o.instance == "custom")
    {
        config.instance.kind = InstanceSpec::Kind::custom;
        if (o.theta.empty())
        {
            throw std::invalid_argument("--instance custom needs --theta");
        }
    }
    else
    {
        throw std::invalid_argument("unknown instance: " + o.instance);
    }
    config.instance.couples = o.couples;
    config.instance.delta = o.delta;
    config.instance.mu = o.mu;
    config.instance.theta = o.theta;
    config.instance.relax_exp2 = o.relax;
    config.horizon = o.horizon;
    config.seeds = seed_range(o.base_seed, o.seeds);
    config.index = parse_index_kind(o.index);
    config.trace_every = o.trace_every;
    config.record_time = o.record_time;
    config.threads = o.threads;
    config.validate();

    const auto records = run_all(config);
    const std::vector<std::string> comment{config.describe()};
    if (o.out.empty())
    {
        write_csv(std::cout, records, comment);
    }
    else
    {
        emit_csv(records, o.out, comment);
    }
    return 0;
}

int verify_command(const VerifyOptions& o)
{
    if (!o.lemmas)
    {
        std::cerr << "nothing to verify: pass --lemmas\n";
        return 2;
    }
    if (o.l_max < 2 || o.l_max > kMaxOrderedCouples)
    {
        std::cerr << "--L-max must lie in [2, " << kMaxOrderedCouples << "]\n";
        return 2;
    }
    const auto report = run_lemma_suite({o.l_max, o.instances, o.seed});
    for (const auto& m : report.messages)
    {
        std::cout << "counterexample: " << m << '\n';
    }
    std::cout << "instances checked:        " << report.instances << '\n'
              << "optimum (exhaustive):     " << (report.optimum_failures == 0 ? "ok" : "FAILED") << '\n'
              << "optimum leader unique:    " << (report.uniqueness_failures == 0 ? "ok" : "FAILED") << '\n'
              << "improving swap exists:    " << (report.unimodality_failures == 0 ? "ok" : "FAILED") << '\n'
              << "minimal gap in neighbors: " << (report.gap_failures == 0 ? "ok" : "FAILED") << '\n';
    return report.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Online mono-partite matching bandits: simulations and structural checks"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Simulate one algorithm on one instance over several seeds");
    run_cmd->add_option("--algo", run.algo, "grab | grab-plus | klcombucb | random");
    run_cmd->add_option("--instance", run.instance, "exp1 | exp2 | custom");
    run_cmd->add_option("--L", run.couples, "Number of couples");
    run_cmd->add_option("--delta", run.delta, "Gap between consecutive couples");
    run_cmd->add_option("--mu", run.mu, "Mean success rate (exp2)");
    run_cmd->add_option("--theta", run.theta, "Player success rates (custom)")->delimiter(',');
    run_cmd->add_option("--horizon", run.horizon, "Rounds per run");
    run_cmd->add_option("--seeds", run.seeds, "Number of replications");
    run_cmd->add_option("--base-seed", run.base_seed, "Seed of the first replication");
    run_cmd->add_option("--index", run.index, "klucb | simple-ucb");
    run_cmd->add_option("--out", run.out, "Output CSV (stdout when omitted)");
    run_cmd->add_option("--trace-every", run.trace_every, "Log every n rounds instead of geometric checkpoints");
    run_cmd->add_flag("--relax-exp2-constraint", run.relax, "Only require success rates in [0, 1] for exp2");
    run_cmd->add_flag("--record-time", run.record_time, "Fill elapsed_s with wall-clock seconds");
    run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Machine-check the structural properties on random instances");
    verify_cmd->add_flag("--lemmas", verify.lemmas, "Run the lemma suite");
    verify_cmd->add_option("--L-max", verify.l_max, "Largest number of couples (<= 4)");
    verify_cmd->add_option("--instances", verify.instances, "Random instances per L");
    verify_cmd->add_option("--seed", verify.seed, "Instance generator seed");

    SweepOptions exp1;
    auto* exp1_cmd = app.add_subcommand("exp1", "Sweep L on equal-gap instances, aggregate final regret");
    add_common_sweep_options(*exp1_cmd, exp1);
    exp1_cmd->add_option("--L-min", exp1.l_min, "Smallest L");
    exp1_cmd->add_option("--L-max", exp1.l_max, "Largest L");

    SweepOptions exp2;
    exp2.horizon = 1000000;
    auto* exp2_cmd = app.add_subcommand("exp2", "Sweep mu at fixed L and delta, aggregate final regret");
    add_common_sweep_options(*exp2_cmd, exp2);
    exp2_cmd->add_option("--mu", exp2.mus, "Mean success rates")->delimiter(',');
    exp2_cmd->add_option("--L", exp2.couples, "Number of couples");
    exp2_cmd->add_flag("--relax-exp2-constraint", exp2.relax, "Only require success rates in [0, 1]");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run_cmd->parsed())
        {
            return run_command(run);
        }
        if (verify_cmd->parsed())
        {
            return verify_command(verify);
        }
        if (exp1_cmd->parsed())
        {
            std::vector<std::size_t> Ls;
            for (std::size_t L = exp1.l_min; L <= exp1.l_max; ++L)
            {
                Ls.push_back(L);
            }
            const auto config = to_sweep(exp1);
            const auto result = run_experiment_1(Ls, exp1.delta, config);
            write_sweep(exp1, result,
                        {"exp1 sweep delta=" + format_double(exp1.delta) + " horizon=" + std::to_string(exp1.horizon) +
                             " index=" + exp1.index,
                         "normalized_regret = mean_regret * min_gap / L"});
            return 0;
        }
        if (exp2_cmd->parsed())
        {
            const auto config = to_sweep(exp2);
            const auto result = run_experiment_2(exp2.mus, exp2.couples, exp2.delta, exp2.relax, config);
            write_sweep(exp2, result,
                        {"exp2 sweep L=" + std::to_string(exp2.couples) + " delta=" + format_double(exp2.delta) +
                             " horizon=" + std::to_string(exp2.horizon) + " index=" + exp2.index,
                         "normalized_regret = mean_regret * min_gap / L"});
            return 0;
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
