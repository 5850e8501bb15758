#include "unimatch/matching.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace unimatch
{

namespace
{

Pair canonical(const Pair& p)
{
    return make_pair(p.lo, p.hi);
}

// Every player 0..2L-1 appears exactly once.
void check_partition(const std::vector<Pair>& pairs)
{
    const auto n = static_cast<Player>(2 * pairs.size());
    std::uint64_t small = 0;
    std::vector<std::uint64_t> large(n > 64 ? static_cast<std::size_t>(n + 63) / 64 : 0, 0);
    for (const auto& p : pairs)
    {
        for (Player x : {p.lo, p.hi})
        {
            if (x >= n)
            {
                throw std::invalid_argument("player " + std::to_string(x) + " out of range for " +
                                            std::to_string(pairs.size()) + " couples");
            }
            const std::uint64_t bit = std::uint64_t{1} << (x % 64);
            auto& word = n > 64 ? large[static_cast<std::size_t>(x / 64)] : small;
            if (word & bit)
            {
                throw std::invalid_argument("player " + std::to_string(x) + " appears twice");
            }
            word |= bit;
        }
    }
}

} // namespace

Pair make_pair(Player a, Player b)
{
    if (a < 0 || b < 0)
    {
        throw std::invalid_argument("negative player index");
    }
    if (a == b)
    {
        throw std::invalid_argument("a player cannot be paired with itself");
    }
    return a < b ? Pair{a, b} : Pair{b, a};
}

Matching::Matching(std::vector<Pair> pairs)
    : pairs_(std::move(pairs))
{
    for (auto& p : pairs_)
    {
        p = canonical(p);
    }
    check_partition(pairs_);
    std::sort(pairs_.begin(), pairs_.end());
}

bool Matching::contains(const Pair& p) const
{
    return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

Matching make_matching(std::span<const std::pair<Player, Player>> pairs, std::size_t couples)
{
    if (pairs.size() != couples)
    {
        throw std::invalid_argument("expected " + std::to_string(couples) + " pairs, got " +
                                    std::to_string(pairs.size()));
    }
    std::vector<Pair> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs)
    {
        out.push_back(make_pair(a, b));
    }
    return Matching(std::move(out));
}

OrderedMatching::OrderedMatching(std::vector<Pair> couples)
    : couples_(std::move(couples))
{
    for (auto& p : couples_)
    {
        p = canonical(p);
    }
    check_partition(couples_);
}

std::size_t OrderedMatchingHash::operator()(const OrderedMatching& m) const noexcept
{
    // FNV-1a over the player sequence; at most 2L small integers.
    std::size_t h = 1469598103934665603ULL;
    for (const auto& p : m)
    {
        h = (h ^ static_cast<std::size_t>(p.lo)) * 1099511628211ULL;
        h = (h ^ static_cast<std::size_t>(p.hi)) * 1099511628211ULL;
    }
    return h;
}

bool is_valid_swap(const OrderedMatching& m, const SwapDescriptor& d)
{
    return m.size() >= 2 && d.k + 1 < m.size() && m[d.k].contains(d.e1) && m[d.k + 1].contains(d.e2);
}

OrderedMatching apply_swap(const OrderedMatching& m, const SwapDescriptor& d)
{
    if (!is_valid_swap(m, d))
    {
        throw std::invalid_argument("invalid swap descriptor");
    }
    std::vector<Pair> couples = m.couples();
    const Player keep_k = m[d.k].other(d.e1);
    const Player keep_next = m[d.k + 1].other(d.e2);
    couples[d.k] = make_pair(d.e2, keep_k);
    couples[d.k + 1] = make_pair(d.e1, keep_next);
    return OrderedMatching(std::move(couples));
}

Matching set_of(const OrderedMatching& m)
{
    return Matching(m.couples());
}

std::vector<Neighbor> neighborhood_set(const OrderedMatching& m)
{
    std::vector<Neighbor> out;
    if (m.size() < 2)
    {
        return out;
    }
    out.reserve(2 * (m.size() - 1));
    for (std::size_t k = 0; k + 1 < m.size(); ++k)
    {
        const Pair& a = m[k];
        const Pair& b = m[k + 1];
        // Enumerated in lexicographic (e1, e2) order, so the first representative wins.
        for (Player e1 : {a.lo, a.hi})
        {
            for (Player e2 : {b.lo, b.hi})
            {
                std::vector<Pair> pairs = m.couples();
                pairs[k] = make_pair(e2, a.other(e1));
                pairs[k + 1] = make_pair(e1, b.other(e2));
                Matching candidate(std::move(pairs));
                const bool seen = std::any_of(out.begin(), out.end(),
                                              [&](const Neighbor& n) { return n.matching == candidate; });
                if (!seen)
                {
                    out.push_back({std::move(candidate), SwapDescriptor{k, e1, e2}});
                }
            }
        }
    }
    return out;
}

bool satisfies_pi(const OrderedMatching& m, const Eigen::MatrixXd& rho)
{
    for (std::size_t k = 0; k + 1 < m.size(); ++k)
    {
        if (rho(m[k].lo, m[k].hi) < rho(m[k + 1].lo, m[k + 1].hi))
        {
            return false;
        }
    }
    return true;
}

std::vector<Player> rank_players(const Eigen::VectorXd& theta)
{
    std::vector<Player> order(static_cast<std::size_t>(theta.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Player a, Player b) { return theta[a] > theta[b]; });
    return order;
}

bool inter_pair_strict_order(const Eigen::VectorXd& theta)
{
    const auto order = rank_players(theta);
    // With players sorted, min of couple k is rank 2k+1 and max of couple k+1 is rank 2k+2.
    for (std::size_t r = 1; r + 1 < order.size(); r += 2)
    {
        if (!(theta[order[r]] > theta[order[r + 1]]))
        {
            return false;
        }
    }
    return true;
}

OrderedMatching sorted_pairing(const Eigen::VectorXd& theta)
{
    if (theta.size() < 2 || theta.size() % 2 != 0)
    {
        throw std::invalid_argument("theta must hold an even, positive number of players");
    }
    const auto order = rank_players(theta);
    std::vector<Pair> couples;
    for (std::size_t r = 0; r < order.size(); r += 2)
    {
        couples.push_back(make_pair(order[r], order[r + 1]));
    }
    std::stable_sort(couples.begin(), couples.end(), [&](const Pair& a, const Pair& b) {
        return theta[a.lo] * theta[a.hi] > theta[b.lo] * theta[b.hi];
    });
    return OrderedMatching(std::move(couples));
}

OrderedMatching optimum_leader(const Eigen::VectorXd& theta)
{
    if (!inter_pair_strict_order(theta))
    {
        throw std::invalid_argument("inter-pair strict order violated: optimum leader is not unique");
    }
    return sorted_pairing(theta);
}

std::string to_string(const Pair& p)
{
    return "{" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "}";
}

namespace
{

template <typename Range>
std::string join_pairs(const Range& pairs, char open, char close)
{
    std::ostringstream os;
    os << open;
    bool first = true;
    for (const auto& p : pairs)
    {
        if (!first)
        {
            os << ',';
        }
        os << to_string(p);
        first = false;
    }
    os << close;
    return os.str();
}

} // namespace

std::string to_string(const Matching& m)
{
    return join_pairs(m, '{', '}');
}

std::string to_string(const OrderedMatching& m)
{
    return join_pairs(m, '(', ')');
}

} // namespace unimatch
