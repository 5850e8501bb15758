#include "unimatch/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "unimatch/matching.hpp"
#include "unimatch/oracle.hpp"
#include "unimatch/policies.hpp"

namespace unimatch
{

namespace
{

constexpr int kLogSpacedCheckpoints = 30;

// Runs job(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <typename Job>
void parallel_for(std::size_t n, std::size_t threads, Job job)
{
    if (threads == 0)
    {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, n);
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w)
    {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    job(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                    {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    pool.clear(); // joins
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
        {
            return out;
        }
        start = pos + 1;
    }
}

template <typename T>
T parse_number(const std::string& field)
{
    T value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end)
    {
        throw std::runtime_error("malformed CSV field: '" + field + "'");
    }
    return value;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string_view to_string(Algorithm algo)
{
    switch (algo)
    {
    case Algorithm::grab:
        return "grab";
    case Algorithm::grab_plus:
        return "grab-plus";
    case Algorithm::klcombucb:
        return "klcombucb";
    case Algorithm::random:
        return "random";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (auto a : {Algorithm::grab, Algorithm::grab_plus, Algorithm::klcombucb, Algorithm::random})
    {
        if (name == to_string(a))
        {
            return a;
        }
    }
    throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

Instance InstanceSpec::build() const
{
    switch (kind)
    {
    case Kind::exp1:
        return make_exp1_instance(couples, delta);
    case Kind::exp2:
        return make_exp2_instance(couples, mu, delta, relax_exp2);
    case Kind::custom:
        return Instance(Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size())));
    }
    throw std::invalid_argument("unknown instance kind");
}

std::string InstanceSpec::label() const
{
    std::string out;
    switch (kind)
    {
    case Kind::exp1:
        return "exp1:L=" + std::to_string(couples) + ":delta=" + format_double(delta);
    case Kind::exp2:
        out = "exp2:L=" + std::to_string(couples) + ":mu=" + format_double(mu) + ":delta=" + format_double(delta);
        return relax_exp2 ? out + ":relaxed" : out;
    case Kind::custom:
        out = "custom:";
        for (std::size_t i = 0; i < theta.size(); ++i)
        {
            out += (i ? "|" : "") + format_double(theta[i]);
        }
        return out;
    }
    return "?";
}

void ExperimentConfig::validate() const
{
    if (horizon < 1)
    {
        throw std::invalid_argument("horizon must be at least 1");
    }
    if (seeds.empty())
    {
        throw std::invalid_argument("at least one seed is required");
    }
    if (trace_every < 0)
    {
        throw std::invalid_argument("trace interval must be non-negative");
    }
    const Instance inst = instance.build();
    if (algo == Algorithm::klcombucb && inst.couples() > kMaxEnumeratedCouples)
    {
        throw std::invalid_argument("klcombucb enumerates every matching and supports at most 6 couples");
    }
}

std::string ExperimentConfig::describe() const
{
    std::ostringstream os;
    os << "algo=" << to_string(algo) << " instance=" << instance.label() << " horizon=" << horizon
       << " index=" << to_string(index) << " checkpoints="
       << (trace_every > 0 ? "every-" + std::to_string(trace_every) : std::string("geometric")) << " seeds=";
    for (std::size_t i = 0; i < seeds.size(); ++i)
    {
        os << (i ? ";" : "") << seeds[i];
    }
    return os.str();
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count)
{
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        out[i] = base + i;
    }
    return out;
}

std::vector<std::int64_t> checkpoints(std::int64_t horizon, std::int64_t every)
{
    std::vector<std::int64_t> out;
    if (every > 0)
    {
        for (std::int64_t t = every; t < horizon; t += every)
        {
            out.push_back(t);
        }
    }
    else
    {
        for (std::int64_t p = 10; p < horizon; p *= 10)
        {
            out.push_back(p);
        }
        const double top = std::log(static_cast<double>(horizon));
        for (int k = 1; k < kLogSpacedCheckpoints; ++k)
        {
            const auto t = static_cast<std::int64_t>(std::llround(std::exp(top * k / kLogSpacedCheckpoints)));
            if (t >= 1 && t < horizon)
            {
                out.push_back(t);
            }
        }
    }
    out.push_back(horizon);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<RunRecord> run_single(const ExperimentConfig& config, std::uint64_t seed)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    const Instance inst = config.instance.build();
    const std::size_t L = inst.couples();
    const OrderedMatching reference_leader = sorted_pairing(inst.theta());
    const Matching& best = inst.optimum();
    const auto marks = checkpoints(config.horizon, config.trace_every);
    const std::string algo_name(to_string(config.algo));
    const std::string instance_name = config.instance.label();

    std::mt19937_64 rng(seed);
    std::optional<PolicyState> grab;
    std::optional<ExhaustiveState> exhaustive;
    std::optional<PairStats> observed; // random baseline
    switch (config.algo)
    {
    case Algorithm::grab:
        grab.emplace(L, Variant::v1, config.index);
        break;
    case Algorithm::grab_plus:
        grab.emplace(L, Variant::v2, config.index);
        break;
    case Algorithm::klcombucb:
        exhaustive.emplace(L);
        break;
    case Algorithm::random:
        observed.emplace(2 * L);
        break;
    }

    std::vector<RunRecord> records;
    records.reserve(marks.size());
    double cumulative = 0.0;
    std::int64_t window = 0;
    std::int64_t optimal_plays = 0;
    std::int64_t optimal_leaders = 0;
    auto mark = marks.begin();

    for (std::int64_t t = 1; t <= config.horizon; ++t)
    {
        Matching played;
        OrderedMatching leader;
        if (grab)
        {
            auto rec = grab_recommend(*grab, t);
            played = std::move(rec.played);
            leader = std::move(rec.leader);
        }
        else if (exhaustive)
        {
            // Baselines have no leader of their own; report the greedy empirical one.
            leader = g_argmax(exhaustive->pairs);
            played = klcombucb_recommend(*exhaustive, t);
        }
        else
        {
            leader = g_argmax(*observed);
            played = random_recommend(L, rng);
        }

        const FeedbackVector feedback = sample_feedback(inst, played, rng);
        if (grab)
        {
            policy_update(*grab, played, feedback, leader);
        }
        else
        {
            record_feedback(exhaustive ? exhaustive->pairs : *observed, played, feedback);
        }

        cumulative += pseudo_regret(inst, played);
        ++window;
        optimal_plays += played == best ? 1 : 0;
        optimal_leaders += leader == reference_leader ? 1 : 0;

        if (t == *mark)
        {
            RunRecord r;
            r.algo = algo_name;
            r.instance = instance_name;
            r.seed = seed;
            r.t = t;
            r.cum_regret = cumulative;
            r.frac_opt_play = static_cast<double>(optimal_plays) / static_cast<double>(window);
            r.frac_opt_leader = static_cast<double>(optimal_leaders) / static_cast<double>(window);
            if (config.record_time)
            {
                r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            }
            records.push_back(std::move(r));
            window = optimal_plays = optimal_leaders = 0;
            ++mark;
        }
    }
    return records;
}

std::vector<RunRecord> run_all(const ExperimentConfig& config)
{
    config.validate();
    std::vector<std::vector<RunRecord>> per_seed(config.seeds.size());
    parallel_for(config.seeds.size(), config.threads,
                 [&](std::size_t i) { per_seed[i] = run_single(config, config.seeds[i]); });
    std::vector<RunRecord> out;
    for (auto& part : per_seed)
    {
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

void write_csv(std::ostream& os, std::span<const RunRecord> records, std::span<const std::string> comment)
{
    for (const auto& line : comment)
    {
        os << "# " << line << '\n';
    }
    os << kCsvHeader << '\n';
    for (const auto& r : records)
    {
        os << r.algo << ',' << r.instance << ',' << r.seed << ',' << r.t << ',' << format_double(r.cum_regret) << ','
           << format_double(r.frac_opt_play) << ',' << format_double(r.frac_opt_leader) << ','
           << format_double(r.elapsed_s) << '\n';
    }
}

void emit_csv(std::span<const RunRecord> records, const std::filesystem::path& path,
              std::span<const std::string> comment)
{
    if (records.empty())
    {
        throw std::invalid_argument("no records to write");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_csv(out, records, comment);
    out.flush();
    if (!out)
    {
        throw std::runtime_error("failed writing " + path.string());
    }
}

std::vector<RunRecord> read_csv(std::istream& is)
{
    std::vector<RunRecord> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line))
    {
        if (line.empty() || line.front() == '#')
        {
            continue;
        }
        if (!header_seen)
        {
            if (line != kCsvHeader)
            {
                throw std::runtime_error("unexpected CSV header: " + line);
            }
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 8)
        {
            throw std::runtime_error("expected 8 fields: " + line);
        }
        RunRecord r;
        r.algo = f[0];
        r.instance = f[1];
        r.seed = parse_number<std::uint64_t>(f[2]);
        r.t = parse_number<std::int64_t>(f[3]);
        r.cum_regret = parse_number<double>(f[4]);
        r.frac_opt_play = parse_number<double>(f[5]);
        r.frac_opt_leader = parse_number<double>(f[6]);
        r.elapsed_s = parse_number<double>(f[7]);
        out.push_back(std::move(r));
    }
    if (!header_seen)
    {
        throw std::runtime_error("missing CSV header");
    }
    return out;
}

SweepRow aggregate_final(std::span<const RunRecord> runs, const Instance& inst, double parameter)
{
    if (runs.empty())
    {
        throw std::invalid_argument("nothing to aggregate");
    }
    std::map<std::uint64_t, const RunRecord*> last;
    for (const auto& r : runs)
    {
        auto& slot = last[r.seed];
        if (slot == nullptr || r.t > slot->t)
        {
            slot = &r;
        }
    }
    std::vector<double> finals;
    finals.reserve(last.size());
    for (const auto& [seed, r] : last)
    {
        finals.push_back(r->cum_regret);
    }
    const auto n = static_cast<double>(finals.size());
    double mean = 0.0;
    for (double v : finals)
    {
        mean += v;
    }
    mean /= n;
    double ss = 0.0;
    for (double v : finals)
    {
        ss += (v - mean) * (v - mean);
    }

    SweepRow row;
    row.algo = runs.front().algo;
    row.instance = runs.front().instance;
    row.parameter = parameter;
    row.seeds = finals.size();
    row.mean_regret = mean;
    row.stderr_regret = finals.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    row.min_gap = gap_constants(inst).min_gap;
    row.normalized_regret = mean * row.min_gap / static_cast<double>(inst.couples());
    return row;
}

namespace
{

struct SweepCell
{
    ExperimentConfig config;
    double parameter = 0.0;
};

SweepResult run_cells(const std::vector<SweepCell>& cells, const SweepConfig& sweep)
{
    for (const auto& c : cells)
    {
        c.config.validate();
    }
    const std::size_t per_cell = sweep.seeds.size();
    std::vector<std::vector<RunRecord>> results(cells.size() * per_cell);
    parallel_for(results.size(), sweep.threads, [&](std::size_t job) {
        const auto& cell = cells[job / per_cell];
        results[job] = run_single(cell.config, sweep.seeds[job % per_cell]);
    });

    SweepResult out;
    for (std::size_t c = 0; c < cells.size(); ++c)
    {
        std::vector<RunRecord> group;
        for (std::size_t s = 0; s < per_cell; ++s)
        {
            auto& part = results[c * per_cell + s];
            group.insert(group.end(), part.begin(), part.end());
        }
        out.rows.push_back(aggregate_final(group, cells[c].config.instance.build(), cells[c].parameter));
        out.runs.insert(out.runs.end(), std::make_move_iterator(group.begin()), std::make_move_iterator(group.end()));
    }
    return out;
}

ExperimentConfig cell_config(const SweepConfig& sweep, Algorithm algo, InstanceSpec spec)
{
    ExperimentConfig c;
    c.algo = algo;
    c.instance = std::move(spec);
    c.horizon = sweep.horizon;
    c.seeds = sweep.seeds;
    c.index = sweep.index;
    c.trace_every = sweep.trace_every;
    return c;
}

} // namespace

SweepResult run_experiment_1(std::span<const std::size_t> couples, double delta, const SweepConfig& config)
{
    std::vector<SweepCell> cells;
    for (std::size_t L : couples)
    {
        InstanceSpec spec;
        spec.kind = InstanceSpec::Kind::exp1;
        spec.couples = L;
        spec.delta = delta;
        for (auto algo : config.algos)
        {
            cells.push_back({cell_config(config, algo, spec), static_cast<double>(L)});
        }
    }
    return run_cells(cells, config);
}

SweepResult run_experiment_2(std::span<const double> mus, std::size_t couples, double delta, bool relax,
                             const SweepConfig& config)
{
    std::vector<SweepCell> cells;
    for (double mu : mus)
    {
        InstanceSpec spec;
        spec.kind = InstanceSpec::Kind::exp2;
        spec.couples = couples;
        spec.delta = delta;
        spec.mu = mu;
        spec.relax_exp2 = relax;
        for (auto algo : config.algos)
        {
            cells.push_back({cell_config(config, algo, spec), mu});
        }
    }
    return run_cells(cells, config);
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, std::span<const std::string> comment)
{
    for (const auto& line : comment)
    {
        os << "# " << line << '\n';
    }
    os << kSweepHeader << '\n';
    for (const auto& r : rows)
    {
        os << r.algo << ',' << r.instance << ',' << format_double(r.parameter) << ',' << r.seeds << ','
           << format_double(r.mean_regret) << ',' << format_double(r.stderr_regret) << ','
           << format_double(r.min_gap) << ',' << format_double(r.normalized_regret) << '\n';
    }
}

} // namespace unimatch
