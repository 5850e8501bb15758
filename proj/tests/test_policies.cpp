#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "support.hpp"
#include "unimatch/oracle.hpp"
#include "unimatch/policies.hpp"

using namespace unimatch;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

OrderedMatching om(std::vector<Pair> couples)
{
    return OrderedMatching(std::move(couples));
}

Eigen::MatrixXd table(std::size_t players, std::initializer_list<std::pair<Pair, double>> entries)
{
    const auto n = static_cast<Eigen::Index>(players);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [p, v] : entries)
    {
        q(p.lo, p.hi) = q(p.hi, p.lo) = v;
    }
    return q;
}

double total(const Matching& m, const Eigen::MatrixXd& q)
{
    double s = 0.0;
    for (const auto& p : m)
    {
        s += q(p.lo, p.hi);
    }
    return s;
}

// Fills every couple with a random count in [1, 200] and a matching success sum.
void randomize(PairStats& stats, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::int64_t> pulls(1, 200);
    const auto n = static_cast<Player>(stats.players());
    for (Player a = 0; a < n; ++a)
    {
        for (Player b = a + 1; b < n; ++b)
        {
            const std::int64_t c = pulls(rng);
            stats.assign(Pair{a, b}, c, std::uniform_int_distribution<std::int64_t>(0, c)(rng));
        }
    }
}

} // namespace

TEST_CASE("pair statistics")
{
    PairStats s(4);
    CHECK(s.count(Pair{0, 1}) == 0);
    CHECK(s.mean(Pair{0, 1}) == 0.0);
    s.record(Pair{0, 1}, true);
    s.record(Pair{0, 1}, false);
    CHECK(s.count(Pair{0, 1}) == 2);
    CHECK(s.successes(Pair{0, 1}) == 1);
    CHECK(s.mean(Pair{0, 1}) == 0.5);
    CHECK(s.means()(1, 0) == 0.5);
    CHECK(s.total_count() == 2);
    CHECK_THROWS_AS(s.assign(Pair{0, 2}, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(s.assign(Pair{0, 2}, -1, 0), std::invalid_argument);
}

TEST_CASE("g_argmax on exact products")
{
    const Instance inst(Eigen::Vector4d(0.4, 0.3, 0.2, 0.1));
    CHECK(g_argmax(inst.rho()) == om({{0, 1}, {2, 3}}));
}

TEST_CASE("g_argmax is greedy, not exact")
{
    const Eigen::MatrixXd q = table(4, {{{0, 2}, 0.6}, {{0, 1}, 0.5}, {{2, 3}, 0.55}, {{1, 3}, 0.1}});
    const auto greedy = g_argmax(q);
    CHECK(greedy == om({{0, 2}, {1, 3}}));
    CHECK(total(set_of(greedy), q) == doctest::Approx(0.7));

    double best = -1.0;
    Matching best_m;
    for (const auto& m : enumerate_matchings(2))
    {
        if (total(m, q) > best)
        {
            best = total(m, q);
            best_m = m;
        }
    }
    CHECK(best_m == Matching({{0, 1}, {2, 3}}));
    CHECK(best == doctest::Approx(1.05));
}

TEST_CASE("g_argmax fresh start follows the tie-break")
{
    CHECK(g_argmax(PairStats(6)) == om({{0, 1}, {2, 3}, {4, 5}}));
    const std::array<Player, 4> subset{5, 1, 3, 2};
    const auto couples = greedy_couples(Eigen::MatrixXd::Zero(6, 6), subset);
    REQUIRE(couples.size() == 2);
    CHECK(couples[0] == Pair{1, 2});
    CHECK(couples[1] == Pair{3, 5});
    const std::array<Player, 3> odd{0, 1, 2};
    CHECK_THROWS_AS(greedy_couples(Eigen::MatrixXd::Zero(6, 6), odd), std::invalid_argument);
    const std::array<Player, 2> dup{1, 1};
    CHECK_THROWS_AS(greedy_couples(Eigen::MatrixXd::Zero(6, 6), dup), std::invalid_argument);
}

TEST_CASE("g_argmax is invariant under increasing transforms")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep)
    {
        const std::size_t L = 2 + static_cast<std::size_t>(rep % 5);
        const auto n = static_cast<Eigen::Index>(2 * L);
        Eigen::MatrixXd q(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
        {
            for (Eigen::Index b = a; b < n; ++b)
            {
                q(a, b) = q(b, a) = unit(rng);
            }
        }
        const auto base = g_argmax(q);
        CHECK(g_argmax(Eigen::MatrixXd(q.array().exp())) == base);
        CHECK(g_argmax(Eigen::MatrixXd(q.array().cube() * 3.0 + 1.0)) == base);
        CHECK(g_argmax(Eigen::MatrixXd(q.array().sqrt())) == base);
    }
}

TEST_CASE("v1 score")
{
    const auto leader = om({{0, 1}, {2, 3}});
    const Eigen::MatrixXd q = table(4, {{{1, 2}, 0.9}, {{0, 3}, 0.2}, {{0, 1}, 0.5}, {{2, 3}, 0.4}});
    CHECK(v1_score(set_of(leader), leader, q) == 0.0);
    CHECK(v1_score(Matching({{1, 2}, {0, 3}}), leader, q) == doctest::Approx(0.2).epsilon(1e-14));

    Eigen::MatrixXd unexplored = q;
    unexplored(1, 2) = unexplored(2, 1) = kInf;
    CHECK(v1_score(Matching({{1, 2}, {0, 3}}), leader, unexplored) == kInf);
}

TEST_CASE("v2 score")
{
    // i = 0, i' = 1, j = 2, j' = 3.
    const auto leader = om({{0, 1}, {2, 3}});
    const SwapDescriptor d{0, 0, 2};
    CHECK(v2_score(d, leader, table(4, {{{0, 3}, 0.8}, {{2, 1}, 0.6}, {{0, 1}, 0.5}})) ==
          doctest::Approx(0.3).epsilon(1e-14));
    CHECK(v2_score(d, leader, table(4, {{{0, 3}, 0.2}, {{2, 1}, 0.1}, {{0, 1}, 0.5}})) == 0.0);
    CHECK(v2_score(d, leader, table(4, {{{0, 3}, kInf}, {{2, 1}, 0.1}, {{0, 1}, 0.5}})) == kInf);
    CHECK(v2_score(d, leader, table(4, {{{0, 3}, 0.1}, {{2, 1}, kInf}, {{0, 1}, 0.5}})) == kInf);
}

TEST_CASE("first round plays the tie-break leader")
{
    for (auto variant : {Variant::v1, Variant::v2})
    {
        const PolicyState state(3, variant, IndexKind::klucb);
        const auto rec = grab_recommend(state, 1);
        CHECK(rec.forced);
        CHECK(rec.leader == om({{0, 1}, {2, 3}, {4, 5}}));
        CHECK(rec.played == set_of(rec.leader));
        CHECK(rec.scores.empty());
    }
    CHECK_THROWS_AS(grab_recommend(PolicyState(2, Variant::v1, IndexKind::klucb), 0), std::invalid_argument);
}

TEST_CASE("second election explores an unplayed neighbor")
{
    PolicyState state(2, Variant::v2, IndexKind::klucb);
    const Matching first({{0, 1}, {2, 3}});
    policy_update(state, first, {{Pair{0, 1}, true}, {Pair{2, 3}, true}}, om({{0, 1}, {2, 3}}));
    const auto rec = grab_recommend(state, 2);
    CHECK_FALSE(rec.forced);
    CHECK(rec.leader == om({{0, 1}, {2, 3}}));
    REQUIRE(rec.scores.size() == 3);
    CHECK(rec.scores[1] == kInf);
    CHECK(rec.chosen == 1);
    CHECK(rec.played == Matching({{1, 2}, {0, 3}}));
}

TEST_CASE("GRAB dynamics: candidate set, forced period and counters")
{
    std::mt19937_64 rng(31);
    for (auto variant : {Variant::v1, Variant::v2})
    {
        for (auto index : {IndexKind::klucb, IndexKind::simple_ucb})
        {
            const std::size_t L = 3;
            Eigen::VectorXd theta(6);
            theta << 0.9, 0.3, 0.7, 0.5, 0.2, 0.6;
            const Instance inst(theta);
            PolicyState state(L, variant, index);
            std::map<OrderedMatching, std::int64_t> elections;
            for (std::int64_t t = 1; t <= 3000; ++t)
            {
                const auto rec = grab_recommend(state, t);
                const std::int64_t before = elections[rec.leader]++;
                CHECK(rec.forced == (before % static_cast<std::int64_t>(2 * L - 1) == 0));

                const auto nb = neighborhood_set(rec.leader);
                const bool allowed =
                    rec.played == set_of(rec.leader) ||
                    std::any_of(nb.begin(), nb.end(), [&](const Neighbor& n) { return n.matching == rec.played; });
                CHECK(allowed);

                policy_update(state, rec.played, sample_feedback(inst, rec.played, rng), rec.leader);
            }
            CHECK(state.rounds == 3000);
            CHECK(state.leaders.total() == 3000);
            CHECK(state.pairs.total_count() == 3000 * static_cast<std::int64_t>(L));
        }
    }
}

TEST_CASE("V1 picks the candidate with the largest optimistic total")
{
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 300; ++rep)
    {
        const std::size_t L = 2 + static_cast<std::size_t>(rep % 4);
        PolicyState state(L, Variant::v1, IndexKind::simple_ucb);
        randomize(state.pairs, rng);
        const auto leader = g_argmax(state.pairs);
        state.leaders.increment(leader);

        const std::int64_t t = 5000;
        const auto rec = grab_recommend(state, t);
        REQUIRE_FALSE(rec.forced);

        const auto n = static_cast<Eigen::Index>(2 * L);
        Eigen::MatrixXd q(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
        {
            for (Eigen::Index b = 0; b < n; ++b)
            {
                if (a != b)
                {
                    const Pair p = make_pair(static_cast<Player>(a), static_cast<Player>(b));
                    q(a, b) = simple_ucb(state.pairs.mean(p), state.pairs.count(p), t);
                }
            }
        }
        const double chosen = total(rec.played, q);
        CHECK(chosen >= total(set_of(leader), q) - 1e-12);
        for (const auto& nb : neighborhood_set(leader))
        {
            CHECK(chosen >= total(nb.matching, q) - 1e-12);
        }
    }
}

TEST_CASE("policy update")
{
    PolicyState state(2, Variant::v1, IndexKind::klucb);
    const Matching m({{0, 1}, {2, 3}});
    const auto leader = om({{0, 1}, {2, 3}});
    policy_update(state, m, {{Pair{0, 1}, true}, {Pair{2, 3}, false}}, leader);
    CHECK(state.pairs.count(Pair{0, 1}) == 1);
    CHECK(state.pairs.successes(Pair{0, 1}) == 1);
    CHECK(state.pairs.count(Pair{2, 3}) == 1);
    CHECK(state.pairs.successes(Pair{2, 3}) == 0);
    CHECK(state.pairs.mean(Pair{0, 1}) == 1.0);
    CHECK(state.pairs.mean(Pair{2, 3}) == 0.0);
    CHECK(state.pairs.count(Pair{0, 2}) == 0);
    CHECK(state.leaders.count(leader) == 1);
    CHECK(state.rounds == 1);

    CHECK_THROWS_AS(policy_update(state, m, {{Pair{0, 1}, true}}, leader), std::invalid_argument);
    CHECK_THROWS_AS(policy_update(state, m, {{Pair{0, 1}, true}, {Pair{0, 2}, true}}, leader),
                    std::invalid_argument);
    CHECK_THROWS_AS(policy_update(state, m, {{Pair{0, 1}, true}, {Pair{0, 1}, true}}, leader),
                    std::invalid_argument);
    CHECK(state.rounds == 1);
}

TEST_CASE("exhaustive KL-CombUCB")
{
    CHECK_THROWS_AS(ExhaustiveState(7), std::out_of_range);

    ExhaustiveState fresh(2);
    CHECK(fresh.arms.size() == 3);

    // Fresh start: every arm holds an unplayed couple until it is tried.
    std::vector<Matching> seen;
    for (std::int64_t t = 1; t <= 3; ++t)
    {
        const Matching m = klcombucb_recommend(fresh, t);
        CHECK(std::find(seen.begin(), seen.end(), m) == seen.end());
        seen.push_back(m);
        for (const auto& p : m)
        {
            fresh.pairs.record(p, false);
        }
    }

    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 20; ++rep)
    {
        const std::size_t L = 2 + static_cast<std::size_t>(rep % 3);
        const Instance inst = random_strict_instance(L, rng);
        ExhaustiveState state(L);
        const auto n = static_cast<Player>(2 * L);
        for (Player a = 0; a < n; ++a)
        {
            for (Player b = a + 1; b < n; ++b)
            {
                // Huge counts make the optimistic bonus negligible next to the gaps.
                const std::int64_t c = 1'000'000'000'000;
                state.pairs.assign(Pair{a, b}, c, static_cast<std::int64_t>(std::llround(inst.rho()(a, b) * c)));
            }
        }
        CHECK(klcombucb_recommend(state, 1000) == inst.optimum());
    }
}

TEST_CASE("random matchings are uniform")
{
    std::mt19937_64 rng(12);
    const auto arms = enumerate_matchings(2);
    std::array<int, 3> counts{};
    constexpr int kDraws = 100000;
    for (int r = 0; r < kDraws; ++r)
    {
        const Matching m = random_recommend(2, rng);
        const auto it = std::find(arms.begin(), arms.end(), m);
        REQUIRE(it != arms.end());
        ++counts[static_cast<std::size_t>(it - arms.begin())];
    }
    const double expected = kDraws / 3.0;
    const double sigma = std::sqrt(kDraws * (1.0 / 3.0) * (2.0 / 3.0));
    double chi2 = 0.0;
    for (int c : counts)
    {
        CHECK(std::abs(c - expected) <= 3.0 * sigma);
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 99.9% quantile of chi-square with 2 degrees of freedom.
    CHECK(chi2 < 13.82);

    std::mt19937_64 a(5), b(5);
    for (int r = 0; r < 50; ++r)
    {
        CHECK(random_recommend(4, a) == random_recommend(4, b));
    }
}
