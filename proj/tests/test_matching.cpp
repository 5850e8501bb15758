#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "support.hpp"
#include "unimatch/matching.hpp"
#include "unimatch/oracle.hpp"

using namespace unimatch;

namespace
{

OrderedMatching om(std::vector<Pair> couples)
{
    return OrderedMatching(std::move(couples));
}

Eigen::VectorXd vec(std::initializer_list<double> values)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values)
    {
        v[i++] = x;
    }
    return v;
}

} // namespace

TEST_CASE("make_matching canonicalizes and validates")
{
    const std::vector<std::pair<Player, Player>> plain{{0, 1}, {2, 3}};
    const std::vector<std::pair<Player, Player>> flipped{{1, 0}, {3, 2}};
    const Matching a = make_matching(plain, 2);
    CHECK(a.couples() == 2);
    CHECK(a.contains(Pair{0, 1}));
    CHECK(a.contains(Pair{2, 3}));
    CHECK(make_matching(flipped, 2) == a);

    const std::vector<std::pair<Player, Player>> dup{{0, 1}, {1, 2}};
    CHECK_THROWS_AS(make_matching(dup, 2), std::invalid_argument);
    const std::vector<std::pair<Player, Player>> out_of_range{{0, 1}, {2, 4}};
    CHECK_THROWS_AS(make_matching(out_of_range, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_matching(plain, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_pair(2, 2), std::invalid_argument);
}

TEST_CASE("swap follows the three-case definition")
{
    const auto m = om({{0, 1}, {2, 3}});
    const auto s = apply_swap(m, {0, 0, 2});
    CHECK(s == om({{1, 2}, {0, 3}}));
    CHECK(apply_swap(s, {0, 2, 0}) == m);

    const auto m3 = om({{0, 1}, {2, 3}, {4, 5}});
    CHECK(apply_swap(m3, {1, 3, 4}) == om({{0, 1}, {2, 4}, {3, 5}}));

    CHECK_THROWS_AS(apply_swap(m, {1, 2, 0}), std::invalid_argument); // k = L-1
    CHECK_THROWS_AS(apply_swap(m, {0, 2, 0}), std::invalid_argument); // e1 not in couple 0
}

TEST_CASE("set_of forgets order")
{
    CHECK(set_of(om({{2, 1}, {0, 3}})) == Matching({{1, 2}, {0, 3}}));
    CHECK(set_of(om({{0, 1}, {2, 3}})) == set_of(om({{2, 3}, {0, 1}})));

    // Swapping i with j or i' with j' yields the same couples.
    const auto m = om({{0, 1}, {2, 3}});
    CHECK(set_of(apply_swap(m, {0, 0, 2})) == set_of(apply_swap(m, {0, 1, 3})));
    CHECK(set_of(apply_swap(m, {0, 0, 2})) == Matching({{1, 2}, {0, 3}}));
}

TEST_CASE("neighborhood of a two-couple matching")
{
    const auto n = neighborhood_set(om({{0, 1}, {2, 3}}));
    REQUIRE(n.size() == 2);
    CHECK(n[0].matching == Matching({{1, 2}, {0, 3}}));
    CHECK(n[0].swap == SwapDescriptor{0, 0, 2});
    CHECK(n[1].matching == Matching({{0, 2}, {1, 3}}));
    CHECK(n[1].swap == SwapDescriptor{0, 0, 3});
}

TEST_CASE("neighborhood invariants, exhaustive over small L")
{
    for (std::size_t L = 2; L <= 4; ++L)
    {
        for (const auto& m : enumerate_ordered_matchings(L))
        {
            const auto nb = neighborhood_set(m);
            REQUIRE(nb.size() == 2 * L - 2);
            std::set<Matching> distinct;
            for (const auto& n : nb)
            {
                distinct.insert(n.matching);
                CHECK(testing::differing_couples(n.matching, set_of(m)) == 2);
                CHECK(set_of(apply_swap(m, n.swap)) == n.matching);
            }
            CHECK(distinct.size() == nb.size());
            CHECK(distinct.count(set_of(m)) == 0);
        }
    }
}

TEST_CASE("neighborhood size for larger L and representative choice")
{
    std::mt19937_64 rng(3);
    for (std::size_t L = 5; L <= 6; ++L)
    {
        for (int rep = 0; rep < 50; ++rep)
        {
            const auto m = testing::random_ordered_matching(L, rng);
            const auto nb = neighborhood_set(m);
            CHECK(nb.size() == 2 * L - 2);
            // Each kept descriptor is the smallest of the raw swaps reaching its matching.
            for (const auto& n : nb)
            {
                for (std::size_t k = 0; k + 1 < L; ++k)
                {
                    for (Player e1 : {m[k].lo, m[k].hi})
                    {
                        for (Player e2 : {m[k + 1].lo, m[k + 1].hi})
                        {
                            const SwapDescriptor d{k, e1, e2};
                            if (set_of(apply_swap(m, d)) == n.matching)
                            {
                                CHECK(!(d < n.swap));
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("satisfies_pi")
{
    const Eigen::VectorXd theta = vec({0.4, 0.3, 0.2, 0.1});
    const Eigen::MatrixXd rho = theta * theta.transpose();
    CHECK(satisfies_pi(om({{0, 1}, {2, 3}}), rho));
    CHECK_FALSE(satisfies_pi(om({{2, 3}, {0, 1}}), rho));
    CHECK(satisfies_pi(om({{0, 1}}), rho));

    // Equal consecutive values satisfy the non-strict inequality.
    const Eigen::VectorXd flat = vec({0.5, 0.5, 0.5, 0.5});
    CHECK(satisfies_pi(om({{0, 1}, {2, 3}}), flat * flat.transpose()));
}

TEST_CASE("optimum_leader")
{
    CHECK(optimum_leader(vec({0.4, 0.3, 0.2, 0.1})) == om({{0, 1}, {2, 3}}));

    const auto unsorted = optimum_leader(vec({0.1, 0.4, 0.2, 0.3}));
    CHECK(unsorted == om({{1, 3}, {0, 2}}));
    CHECK(set_of(unsorted) == Matching({{1, 3}, {0, 2}}));

    CHECK_THROWS_AS(optimum_leader(vec({0.3, 0.3, 0.3, 0.1})), std::invalid_argument);
    CHECK_FALSE(inter_pair_strict_order(vec({0.3, 0.3, 0.3, 0.1})));
    // Ties inside a couple are fine.
    CHECK(inter_pair_strict_order(vec({0.3, 0.3, 0.1, 0.1})));
}

TEST_CASE("optimum_leader satisfies pi and matches the exhaustive argmax")
{
    std::mt19937_64 rng(17);
    for (std::size_t L = 1; L <= 5; ++L)
    {
        for (int rep = 0; rep < 20; ++rep)
        {
            const Instance inst = random_strict_instance(L, rng);
            const auto leader = optimum_leader(inst.theta());
            CHECK(satisfies_pi(leader, inst.rho()));
            CHECK(set_of(leader) == exhaustive_best(inst).matching);
        }
    }
}

TEST_CASE("swap involution, random cases")
{
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 2000; ++rep)
    {
        const std::size_t L = 2 + static_cast<std::size_t>(rep % 5);
        const auto m = testing::random_ordered_matching(L, rng);
        const auto d = testing::random_swap(m, rng);
        const auto s = apply_swap(m, d);
        CHECK(apply_swap(s, SwapDescriptor{d.k, d.e2, d.e1}) == m);
    }
}
