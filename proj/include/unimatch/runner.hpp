#ifndef UNIMATCH_RUNNER_HPP
#define UNIMATCH_RUNNER_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unimatch/environment.hpp"
#include "unimatch/indices.hpp"

namespace unimatch
{

enum class Algorithm
{
    grab,      ///< GRAB with the V1 criterion
    grab_plus, ///< GRAB with the V2 criterion
    klcombucb, ///< exhaustive combinatorial KL-UCB baseline
    random,    ///< uniform random matchings
};

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

struct InstanceSpec
{
    enum class Kind
    {
        exp1,
        exp2,
        custom,
    };

    Kind kind = Kind::exp1;
    std::size_t couples = 2;
    double delta = 0.1;
    double mu = 0.5;
    std::vector<double> theta; ///< custom only
    bool relax_exp2 = false;

    /// Throws std::invalid_argument when the parameters are out of range.
    Instance build() const;
    /// e.g. "exp1:L=4:delta=0.1"; never contains a comma.
    std::string label() const;
};

struct ExperimentConfig
{
    Algorithm algo = Algorithm::grab_plus;
    InstanceSpec instance;
    std::int64_t horizon = 1000;
    std::vector<std::uint64_t> seeds{0};
    IndexKind index = IndexKind::simple_ucb;
    /// 0 selects geometric checkpoints; n > 0 logs every n rounds.
    std::int64_t trace_every = 0;
    /// Off by default so that output files are reproducible byte for byte.
    bool record_time = false;
    /// Worker threads; 0 uses the hardware concurrency. Never affects results.
    std::size_t threads = 0;

    /// Throws std::invalid_argument on a bad horizon, empty seed list, instance
    /// constraint violation, or an exhaustive baseline beyond 6 couples.
    void validate() const;
    /// One-line, thread-independent description for the CSV comment header.
    std::string describe() const;
};

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

struct RunRecord
{
    std::string algo;
    std::string instance;
    std::uint64_t seed = 0;
    std::int64_t t = 0;
    double cum_regret = 0.0;
    /// Fraction of rounds since the previous checkpoint that played the optimum matching.
    double frac_opt_play = 0.0;
    /// Same window; fraction of rounds whose elected leader was the optimum leader.
    double frac_opt_leader = 0.0;
    double elapsed_s = 0.0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Powers of ten and 30 log-spaced rounds up to `horizon` (always included), or every
/// `every` rounds when every > 0.
std::vector<std::int64_t> checkpoints(std::int64_t horizon, std::int64_t every);

/// One replication: recommend, sample, update for `horizon` rounds. Deterministic in
/// (config, seed).
std::vector<RunRecord> run_single(const ExperimentConfig& config, std::uint64_t seed);

/// All seeds of `config`, in parallel; records grouped by seed in seed-list order.
std::vector<RunRecord> run_all(const ExperimentConfig& config);

inline constexpr std::string_view kCsvHeader = "algo,instance,seed,t,cum_regret,frac_opt_play,frac_opt_leader,elapsed_s";

/// `comment` lines are written first, each prefixed with "# ".
void write_csv(std::ostream& os, std::span<const RunRecord> records, std::span<const std::string> comment = {});
/// Throws std::invalid_argument for empty records, std::runtime_error when the path is unwritable.
void emit_csv(std::span<const RunRecord> records, const std::filesystem::path& path,
              std::span<const std::string> comment = {});
/// Skips '#' lines; throws std::runtime_error on a malformed file.
std::vector<RunRecord> read_csv(std::istream& is);

/// One aggregated cell of a parameter sweep.
struct SweepRow
{
    std::string algo;
    std::string instance;
    double parameter = 0.0; ///< L for experiment 1, mu for experiment 2
    std::size_t seeds = 0;
    double mean_regret = 0.0;
    double stderr_regret = 0.0;
    double min_gap = 0.0;
    /// mean_regret * min_gap / L
    double normalized_regret = 0.0;
};

struct SweepConfig
{
    std::vector<Algorithm> algos{Algorithm::grab, Algorithm::grab_plus};
    std::int64_t horizon = 1000000;
    std::vector<std::uint64_t> seeds = seed_range(0, 10);
    IndexKind index = IndexKind::simple_ucb;
    std::int64_t trace_every = 0;
    std::size_t threads = 0;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    std::vector<RunRecord> runs;
};

/// Final-round mean and standard error of cumulative regret over the seeds of one
/// (algo, instance) group. `runs` must hold that group only.
SweepRow aggregate_final(std::span<const RunRecord> runs, const Instance& inst, double parameter);

/// Experiment 1 sweep over L at fixed delta.
SweepResult run_experiment_1(std::span<const std::size_t> couples, double delta, const SweepConfig& config);

/// Experiment 2 sweep over mu at fixed L and delta.
SweepResult run_experiment_2(std::span<const double> mus, std::size_t couples, double delta, bool relax,
                             const SweepConfig& config);

inline constexpr std::string_view kSweepHeader =
    "algo,instance,parameter,seeds,mean_regret,stderr_regret,min_gap,normalized_regret";

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, std::span<const std::string> comment = {});

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace unimatch

#endif // UNIMATCH_RUNNER_HPP
