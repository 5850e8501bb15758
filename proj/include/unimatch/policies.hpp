#ifndef UNIMATCH_POLICIES_HPP
#define UNIMATCH_POLICIES_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "unimatch/environment.hpp"
#include "unimatch/indices.hpp"
#include "unimatch/matching.hpp"

namespace unimatch
{

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-couple pull counts and success sums. Symmetric; the mean of an
/// unplayed couple is 0.
class PairStats
{
public:
    explicit PairStats(std::size_t players);

    std::size_t players() const { return static_cast<std::size_t>(means_.rows()); }

    std::int64_t count(const Pair& p) const { return counts_(p.lo, p.hi); }
    std::int64_t successes(const Pair& p) const { return successes_(p.lo, p.hi); }
    double mean(const Pair& p) const { return means_(p.lo, p.hi); }

    /// Symmetric table of empirical means, kept in sync with the counts.
    const Eigen::MatrixXd& means() const { return means_; }

    void record(const Pair& p, bool success);
    /// Overwrites one couple's statistics (warm starts and tests).
    void assign(const Pair& p, std::int64_t count, std::int64_t successes);

    /// Sum of counts over unordered couples.
    std::int64_t total_count() const { return total_; }

private:
    void set(const Pair& p, std::int64_t count, std::int64_t successes);

    CountMatrix counts_;
    CountMatrix successes_;
    Eigen::MatrixXd means_;
    std::int64_t total_ = 0;
};

/// How many times each ordered matching has been elected leader.
class LeaderStats
{
public:
    std::int64_t count(const OrderedMatching& m) const;
    void increment(const OrderedMatching& m);
    std::int64_t total() const { return total_; }
    std::size_t distinct() const { return counts_.size(); }

private:
    std::unordered_map<OrderedMatching, std::int64_t, OrderedMatchingHash> counts_;
    std::int64_t total_ = 0;
};

/// Candidate-scoring criterion: V1 compares optimistic matching totals,
/// V2 compares optimistic replacement gains of single couples.
enum class Variant
{
    v1,
    v2,
};

struct PolicyState
{
    PolicyState(std::size_t couples, Variant variant, IndexKind index);

    std::size_t couples() const { return pairs.players() / 2; }

    PairStats pairs;
    LeaderStats leaders;
    Variant variant;
    IndexKind index;
    std::int64_t rounds = 0;
};

/// Greedy approximation of argmax over ordered matchings of sum(weights):
/// repeatedly takes the heaviest remaining couple. Ties go to the
/// lexicographically smallest (lo, hi). Couples are returned in pick order.
///
/// `greedy_couples` runs on any even subset of players; g_argmax on all of them.
/// Throws std::invalid_argument for an odd or duplicated player set.
std::vector<Pair> greedy_couples(const Eigen::MatrixXd& weights, std::span<const Player> players);
OrderedMatching g_argmax(const Eigen::MatrixXd& weights);
OrderedMatching g_argmax(const PairStats& stats);

/// Sum of q over the couples `candidate` adds to the leader's matching, minus the sum
/// over the couples it removes. Zero for the leader's own matching; +inf when an
/// added couple has an infinite index.
double v1_score(const Matching& candidate, const OrderedMatching& leader, const Eigen::MatrixXd& q);

/// With {i, i'} = couple k and {j, j'} = couple k+1 of the leader, i = d.e1, j = d.e2:
/// max(0, q(i, j') - q(i, i'), q(j, i') - q(i, i')).
double v2_score(const SwapDescriptor& d, const OrderedMatching& leader, const Eigen::MatrixXd& q);

struct Recommendation
{
    Matching played;
    OrderedMatching leader;
    /// The leader's own matching was played because its election count is a multiple of 2L - 1.
    bool forced = false;
    /// Scores of [leader, neighbors...] in neighborhood_set order; empty when forced.
    std::vector<double> scores;
    /// Index into [leader, neighbors...] of the played candidate.
    std::size_t chosen = 0;
};

/// One GRAB decision at round t >= 1. Does not modify the state.
Recommendation grab_recommend(const PolicyState& state, std::int64_t t);

/// Adds every outcome to the couple statistics. Throws std::invalid_argument unless
/// the feedback covers exactly the couples of `played`.
void record_feedback(PairStats& stats, const Matching& played, const FeedbackVector& feedback);

/// Records the feedback and counts one more election of `leader`.
void policy_update(PolicyState& state, const Matching& played, const FeedbackVector& feedback,
                   const OrderedMatching& leader);

/// Exhaustive combinatorial UCB over every matching, with KL-UCB couple indices.
struct ExhaustiveState
{
    /// Throws std::out_of_range for more than 6 couples.
    explicit ExhaustiveState(std::size_t couples);

    PairStats pairs;
    std::vector<Matching> arms;
};

Matching klcombucb_recommend(const ExhaustiveState& state, std::int64_t t);

/// Uniformly random matching.
Matching random_recommend(std::size_t couples, std::mt19937_64& rng);

} // namespace unimatch

#endif // UNIMATCH_POLICIES_HPP
