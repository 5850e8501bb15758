#include "unimatch/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "unimatch/oracle.hpp"

namespace unimatch
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_leader(const OrderedMatching& leader, const Pair& p)
{
    return std::find(leader.begin(), leader.end(), p) != leader.end();
}

} // namespace

PairStats::PairStats(std::size_t players)
    : counts_(CountMatrix::Zero(static_cast<Eigen::Index>(players), static_cast<Eigen::Index>(players)))
    , successes_(CountMatrix::Zero(static_cast<Eigen::Index>(players), static_cast<Eigen::Index>(players)))
    , means_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(players), static_cast<Eigen::Index>(players)))
{
}

void PairStats::set(const Pair& p, std::int64_t count, std::int64_t successes)
{
    total_ += count - counts_(p.lo, p.hi);
    counts_(p.lo, p.hi) = counts_(p.hi, p.lo) = count;
    successes_(p.lo, p.hi) = successes_(p.hi, p.lo) = successes;
    const double m = count == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(count);
    means_(p.lo, p.hi) = means_(p.hi, p.lo) = m;
}

void PairStats::record(const Pair& p, bool success)
{
    set(p, count(p) + 1, successes(p) + (success ? 1 : 0));
}

void PairStats::assign(const Pair& p, std::int64_t count, std::int64_t successes)
{
    if (count < 0 || successes < 0 || successes > count)
    {
        throw std::invalid_argument("need 0 <= successes <= count");
    }
    set(p, count, successes);
}

std::int64_t LeaderStats::count(const OrderedMatching& m) const
{
    const auto it = counts_.find(m);
    return it == counts_.end() ? 0 : it->second;
}

void LeaderStats::increment(const OrderedMatching& m)
{
    ++counts_[m];
    ++total_;
}

PolicyState::PolicyState(std::size_t couples, Variant variant, IndexKind index)
    : pairs(2 * couples)
    , variant(variant)
    , index(index)
{
    if (couples < 1)
    {
        throw std::invalid_argument("a policy needs at least one couple");
    }
}

std::vector<Pair> greedy_couples(const Eigen::MatrixXd& weights, std::span<const Player> players)
{
    if (players.size() % 2 != 0)
    {
        throw std::invalid_argument("greedy_couples needs an even number of players");
    }
    std::vector<Player> pool(players.begin(), players.end());
    std::sort(pool.begin(), pool.end());
    if (std::adjacent_find(pool.begin(), pool.end()) != pool.end())
    {
        throw std::invalid_argument("greedy_couples: duplicated player");
    }
    if (!pool.empty() && (pool.front() < 0 || pool.back() >= weights.rows()))
    {
        throw std::invalid_argument("greedy_couples: player out of range");
    }

    struct Weighted
    {
        double w;
        Pair p;
    };
    std::vector<Weighted> ranked;
    ranked.reserve(pool.size() * (pool.size() - 1) / 2);
    for (std::size_t a = 0; a < pool.size(); ++a)
    {
        for (std::size_t b = a + 1; b < pool.size(); ++b)
        {
            ranked.push_back({weights(pool[a], pool[b]), Pair{pool[a], pool[b]}});
        }
    }
    // Scanning couples by (weight desc, pair asc) and keeping those whose players
    // are still free is the same as re-running the argmax after every pick.
    std::sort(ranked.begin(), ranked.end(), [](const Weighted& x, const Weighted& y) {
        if (x.w != y.w)
        {
            return x.w > y.w;
        }
        return x.p < y.p;
    });

    std::vector<bool> taken(static_cast<std::size_t>(weights.rows()), false);
    std::vector<Pair> couples;
    couples.reserve(pool.size() / 2);
    for (const auto& [w, p] : ranked)
    {
        if (couples.size() * 2 == pool.size())
        {
            break;
        }
        if (!taken[static_cast<std::size_t>(p.lo)] && !taken[static_cast<std::size_t>(p.hi)])
        {
            taken[static_cast<std::size_t>(p.lo)] = taken[static_cast<std::size_t>(p.hi)] = true;
            couples.push_back(p);
        }
    }
    return couples;
}

OrderedMatching g_argmax(const Eigen::MatrixXd& weights)
{
    std::vector<Player> all(static_cast<std::size_t>(weights.rows()));
    std::iota(all.begin(), all.end(), 0);
    return OrderedMatching(greedy_couples(weights, all));
}

OrderedMatching g_argmax(const PairStats& stats)
{
    return g_argmax(stats.means());
}

double v1_score(const Matching& candidate, const OrderedMatching& leader, const Eigen::MatrixXd& q)
{
    double added = 0.0;
    for (const auto& p : candidate)
    {
        if (!in_leader(leader, p))
        {
            added += q(p.lo, p.hi);
        }
    }
    if (std::isinf(added))
    {
        return kInf;
    }
    double removed = 0.0;
    for (const auto& p : leader)
    {
        if (!candidate.contains(p))
        {
            removed += q(p.lo, p.hi);
        }
    }
    return added - removed;
}

double v2_score(const SwapDescriptor& d, const OrderedMatching& leader, const Eigen::MatrixXd& q)
{
    if (!is_valid_swap(leader, d))
    {
        throw std::invalid_argument("invalid swap descriptor");
    }
    const Player i = d.e1;
    const Player i_other = leader[d.k].other(i);
    const Player j = d.e2;
    const Player j_other = leader[d.k + 1].other(j);
    const double q_i_jo = q(i, j_other);
    const double q_j_io = q(j, i_other);
    if (std::isinf(q_i_jo) || std::isinf(q_j_io))
    {
        return kInf;
    }
    const double base = q(i, i_other);
    return std::max({0.0, q_i_jo - base, q_j_io - base});
}

Recommendation grab_recommend(const PolicyState& state, std::int64_t t)
{
    if (t < 1)
    {
        throw std::invalid_argument("rounds are numbered from 1");
    }
    Recommendation rec;
    rec.leader = g_argmax(state.pairs);
    const auto period = static_cast<std::int64_t>(2 * state.couples() - 1);
    const std::int64_t elections = state.leaders.count(rec.leader);
    if (elections % period == 0)
    {
        rec.played = set_of(rec.leader);
        rec.forced = true;
        return rec;
    }

    // Leader-local clock for KL-UCB, global round for the simplified index.
    const std::int64_t clock = state.index == IndexKind::klucb ? elections + 1 : t;
    const auto n = static_cast<Eigen::Index>(state.pairs.players());
    Eigen::MatrixXd q = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    const auto fill = [&](const Pair& p) {
        if (std::isnan(q(p.lo, p.hi)))
        {
            q(p.lo, p.hi) = q(p.hi, p.lo) =
                optimistic_index(state.index, state.pairs.mean(p), state.pairs.count(p), clock);
        }
    };

    const auto neighbors = neighborhood_set(rec.leader);
    for (const auto& p : rec.leader)
    {
        fill(p);
    }
    for (const auto& nb : neighbors)
    {
        for (const auto& p : nb.matching)
        {
            fill(p);
        }
    }

    rec.scores.reserve(neighbors.size() + 1);
    rec.scores.push_back(0.0);
    double best = 0.0;
    for (std::size_t c = 0; c < neighbors.size(); ++c)
    {
        const double s = state.variant == Variant::v1 ? v1_score(neighbors[c].matching, rec.leader, q)
                                                      : v2_score(neighbors[c].swap, rec.leader, q);
        rec.scores.push_back(s);
        if (s > best)
        {
            best = s;
            rec.chosen = c + 1;
        }
    }
    rec.played = rec.chosen == 0 ? set_of(rec.leader) : neighbors[rec.chosen - 1].matching;
    return rec;
}

void record_feedback(PairStats& stats, const Matching& played, const FeedbackVector& feedback)
{
    if (feedback.size() != played.couples())
    {
        throw std::invalid_argument("feedback does not match the played matching");
    }
    for (const auto& o : feedback)
    {
        if (!played.contains(o.pair))
        {
            throw std::invalid_argument("feedback for unplayed couple " + to_string(o.pair));
        }
    }
    // Sizes agree and every outcome is for a played couple; reject repeats.
    for (std::size_t a = 0; a < feedback.size(); ++a)
    {
        for (std::size_t b = a + 1; b < feedback.size(); ++b)
        {
            if (feedback[a].pair == feedback[b].pair)
            {
                throw std::invalid_argument("duplicated feedback for " + to_string(feedback[a].pair));
            }
        }
    }
    for (const auto& o : feedback)
    {
        stats.record(o.pair, o.success);
    }
}

void policy_update(PolicyState& state, const Matching& played, const FeedbackVector& feedback,
                   const OrderedMatching& leader)
{
    record_feedback(state.pairs, played, feedback);
    state.leaders.increment(leader);
    ++state.rounds;
}

ExhaustiveState::ExhaustiveState(std::size_t couples)
    : pairs(2 * couples)
    , arms(enumerate_matchings(couples))
{
}

Matching klcombucb_recommend(const ExhaustiveState& state, std::int64_t t)
{
    const auto n = static_cast<Eigen::Index>(state.pairs.players());
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
    {
        for (Eigen::Index b = a + 1; b < n; ++b)
        {
            const Pair p{static_cast<Player>(a), static_cast<Player>(b)};
            q(a, b) = q(b, a) = klucb_index(state.pairs.mean(p), state.pairs.count(p), t);
        }
    }
    std::size_t best = 0;
    double best_value = -kInf;
    for (std::size_t c = 0; c < state.arms.size(); ++c)
    {
        double v = 0.0;
        for (const auto& p : state.arms[c])
        {
            v += q(p.lo, p.hi);
        }
        if (v > best_value)
        {
            best_value = v;
            best = c;
        }
    }
    return state.arms[best];
}

Matching random_recommend(std::size_t couples, std::mt19937_64& rng)
{
    std::vector<Player> players(2 * couples);
    std::iota(players.begin(), players.end(), 0);
    std::shuffle(players.begin(), players.end(), rng);
    std::vector<Pair> pairs;
    pairs.reserve(couples);
    for (std::size_t c = 0; c < couples; ++c)
    {
        pairs.push_back(make_pair(players[2 * c], players[2 * c + 1]));
    }
    return Matching(std::move(pairs));
}

} // namespace unimatch
