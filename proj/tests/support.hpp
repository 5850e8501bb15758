#ifndef UNIMATCH_TESTS_SUPPORT_HPP
#define UNIMATCH_TESTS_SUPPORT_HPP

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "unimatch/matching.hpp"

namespace unimatch::testing
{

inline OrderedMatching random_ordered_matching(std::size_t couples, std::mt19937_64& rng)
{
    std::vector<Player> players(2 * couples);
    std::iota(players.begin(), players.end(), 0);
    std::shuffle(players.begin(), players.end(), rng);
    std::vector<Pair> pairs;
    for (std::size_t c = 0; c < couples; ++c)
    {
        pairs.push_back(make_pair(players[2 * c], players[2 * c + 1]));
    }
    return OrderedMatching(std::move(pairs));
}

inline SwapDescriptor random_swap(const OrderedMatching& m, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> pick_k(0, m.size() - 2);
    std::bernoulli_distribution coin(0.5);
    const std::size_t k = pick_k(rng);
    const Player e1 = coin(rng) ? m[k].lo : m[k].hi;
    const Player e2 = coin(rng) ? m[k + 1].lo : m[k + 1].hi;
    return {k, e1, e2};
}

/// Number of couples two matchings do not share.
inline std::size_t differing_couples(const Matching& a, const Matching& b)
{
    return static_cast<std::size_t>(
        std::count_if(a.begin(), a.end(), [&](const Pair& p) { return !b.contains(p); }));
}

} // namespace unimatch::testing

#endif // UNIMATCH_TESTS_SUPPORT_HPP
