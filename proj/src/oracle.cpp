#include "unimatch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace unimatch
{

namespace
{

constexpr double kGapTolerance = 1e-12;

void pair_up(std::vector<bool>& used, std::vector<Pair>& current, std::vector<Matching>& out)
{
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end())
    {
        out.emplace_back(current);
        return;
    }
    const auto a = static_cast<Player>(first - used.begin());
    used[static_cast<std::size_t>(a)] = true;
    for (auto b = static_cast<std::size_t>(a) + 1; b < used.size(); ++b)
    {
        if (used[b])
        {
            continue;
        }
        used[b] = true;
        current.push_back(Pair{a, static_cast<Player>(b)});
        pair_up(used, current, out);
        current.pop_back();
        used[b] = false;
    }
    used[static_cast<std::size_t>(a)] = false;
}

void require_ordered_scale(const Instance& inst)
{
    if (inst.couples() > kMaxOrderedCouples)
    {
        throw std::out_of_range("ordered-matching enumeration is limited to 4 couples");
    }
    if (!inter_pair_strict_order(inst.theta()))
    {
        throw std::invalid_argument("instance violates inter-pair strict order");
    }
}

// Couple written best player first.
std::pair<Player, Player> best_first(const Pair& p, const Eigen::VectorXd& theta)
{
    return theta[p.hi] > theta[p.lo] ? std::pair{p.hi, p.lo} : std::pair{p.lo, p.hi};
}

} // namespace

std::vector<Matching> enumerate_matchings(std::size_t couples)
{
    if (couples > kMaxEnumeratedCouples)
    {
        throw std::out_of_range("matching enumeration is limited to 6 couples");
    }
    std::vector<Matching> out;
    if (couples == 0)
    {
        return out;
    }
    std::vector<bool> used(2 * couples, false);
    std::vector<Pair> current;
    pair_up(used, current, out);
    return out;
}

std::vector<OrderedMatching> enumerate_ordered_matchings(std::size_t couples)
{
    if (couples > kMaxOrderedCouples)
    {
        throw std::out_of_range("ordered-matching enumeration is limited to 4 couples");
    }
    std::vector<OrderedMatching> out;
    for (const auto& m : enumerate_matchings(couples))
    {
        std::vector<Pair> order = m.pairs(); // sorted, so next_permutation visits all orders
        do
        {
            out.emplace_back(order);
        } while (std::next_permutation(order.begin(), order.end()));
    }
    return out;
}

BestMatching exhaustive_best(const Instance& inst)
{
    BestMatching best{Matching{}, -std::numeric_limits<double>::infinity()};
    for (auto& m : enumerate_matchings(inst.couples()))
    {
        const double v = inst.expected_reward(m);
        if (v > best.value)
        {
            best = {std::move(m), v};
        }
    }
    return best;
}

UnimodalityReport verify_unimodality(const Instance& inst)
{
    require_ordered_scale(inst);
    const OrderedMatching optimum = optimum_leader(inst.theta());
    UnimodalityReport report;
    for (const auto& m : enumerate_ordered_matchings(inst.couples()))
    {
        ++report.ordered_matchings;
        if (!satisfies_pi(m, inst.rho()))
        {
            continue;
        }
        ++report.satisfying_pi;
        if (m == optimum)
        {
            continue;
        }
        const double here = inst.expected_reward(set_of(m));
        const auto neighbors = neighborhood_set(m);
        const bool improves = std::any_of(neighbors.begin(), neighbors.end(), [&](const Neighbor& n) {
            return inst.expected_reward(n.matching) > here;
        });
        if (!improves)
        {
            report.counterexamples.push_back(m);
        }
    }
    return report;
}

bool verify_leader_uniqueness(const Instance& inst)
{
    require_ordered_scale(inst);
    const Matching& target = inst.optimum();
    std::size_t found = 0;
    for (const auto& m : enumerate_ordered_matchings(inst.couples()))
    {
        if (satisfies_pi(m, inst.rho()) && set_of(m) == target)
        {
            ++found;
        }
    }
    return found == 1;
}

double AnalysisConstants::grab_bound(std::int64_t horizon) const
{
    return grab_log_coefficient * std::log(static_cast<double>(horizon));
}

double AnalysisConstants::grab_plus_bound(std::int64_t horizon) const
{
    return grab_plus_log_coefficient * std::log(static_cast<double>(horizon));
}

AnalysisConstants gap_constants(const Instance& inst)
{
    const Eigen::VectorXd& theta = inst.theta();
    const OrderedMatching leader = optimum_leader(theta);
    const Matching& optimum = inst.optimum();

    AnalysisConstants out;
    out.min_gap = std::numeric_limits<double>::infinity();
    out.comparison_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < leader.size(); ++k)
    {
        const auto [i, i2] = best_first(leader[k], theta);
        const auto [j, j2] = best_first(leader[k + 1], theta);
        const double gap_k = (theta[i] - theta[j2]) * (theta[i2] - theta[j]);
        const double cmp_k = theta[i] * (theta[i2] - theta[j2]);
        out.min_gap = std::min(out.min_gap, gap_k);
        out.comparison_gap = std::min(out.comparison_gap, cmp_k);

        const Matching swapped = set_of(apply_swap(leader, SwapDescriptor{k, i2, j}));
        const double swapped_gap = inst.optimal_reward() - inst.expected_reward(swapped);
        out.grab_plus_log_coefficient += 8.0 * swapped_gap / (cmp_k * cmp_k);
    }
    if (leader.size() < 2)
    {
        out.min_gap = out.comparison_gap = 0.0;
    }
    for (const auto& n : neighborhood_set(leader))
    {
        NeighborGap g{n.matching, n.swap, inst.optimal_reward() - inst.expected_reward(n.matching), 0};
        g.differing = static_cast<std::size_t>(std::count_if(
            n.matching.begin(), n.matching.end(), [&](const Pair& p) { return !optimum.contains(p); }));
        out.grab_log_coefficient += 8.0 / g.gap;
        out.neighbors.push_back(std::move(g));
    }
    return out;
}

Instance random_strict_instance(std::size_t couples, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Player> players(2 * couples);
    std::iota(players.begin(), players.end(), 0);
    for (;;)
    {
        std::vector<double> values(2 * couples);
        for (auto& v : values)
        {
            v = unit(rng);
        }
        std::shuffle(players.begin(), players.end(), rng);
        Eigen::VectorXd theta(static_cast<Eigen::Index>(2 * couples));
        for (std::size_t r = 0; r < values.size(); ++r)
        {
            theta[players[r]] = values[r];
        }
        if (inter_pair_strict_order(theta))
        {
            return Instance(std::move(theta));
        }
    }
}

LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& config)
{
    LemmaSuiteReport report;
    std::mt19937_64 rng(config.seed);
    for (std::size_t L = 2; L <= config.max_couples; ++L)
    {
        for (std::size_t n = 0; n < config.instances; ++n)
        {
            const Instance inst = random_strict_instance(L, rng);
            ++report.instances;
            std::ostringstream tag;
            tag << "L=" << L << " instance " << n << " theta=(" << inst.theta().transpose() << "): ";

            const auto best = exhaustive_best(inst);
            const Matching leader_set = set_of(optimum_leader(inst.theta()));
            if (!(best.matching == inst.optimum() && best.matching == leader_set))
            {
                ++report.optimum_failures;
                report.messages.push_back(tag.str() + "exhaustive argmax " + to_string(best.matching) +
                                          " differs from " + to_string(leader_set));
            }

            if (!verify_leader_uniqueness(inst))
            {
                ++report.uniqueness_failures;
                report.messages.push_back(tag.str() + "optimum leader not unique");
            }

            const auto unimodal = verify_unimodality(inst);
            if (!unimodal.holds())
            {
                ++report.unimodality_failures;
                for (const auto& c : unimodal.counterexamples)
                {
                    report.messages.push_back(tag.str() + "no improving swap from " + to_string(c));
                }
            }

            double smallest_regret = std::numeric_limits<double>::infinity();
            for (const auto& m : enumerate_matchings(L))
            {
                if (!(m == inst.optimum()))
                {
                    smallest_regret = std::min(smallest_regret, pseudo_regret(inst, m));
                }
            }
            const auto constants = gap_constants(inst);
            double neighborhood_min = std::numeric_limits<double>::infinity();
            for (const auto& g : constants.neighbors)
            {
                neighborhood_min = std::min(neighborhood_min, g.gap);
            }
            if (std::abs(smallest_regret - neighborhood_min) > kGapTolerance ||
                std::abs(smallest_regret - constants.min_gap) > kGapTolerance)
            {
                ++report.gap_failures;
                std::ostringstream msg;
                msg << tag.str() << "smallest sub-optimal regret " << smallest_regret << " vs neighborhood "
                    << neighborhood_min << " vs min_gap " << constants.min_gap;
                report.messages.push_back(msg.str());
            }
        }
    }
    return report;
}

} // namespace unimatch
