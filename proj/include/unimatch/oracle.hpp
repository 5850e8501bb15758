#ifndef UNIMATCH_ORACLE_HPP
#define UNIMATCH_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "unimatch/environment.hpp"
#include "unimatch/matching.hpp"

namespace unimatch
{

inline constexpr std::size_t kMaxEnumeratedCouples = 6;
inline constexpr std::size_t kMaxOrderedCouples = 4;

/// All (2L-1)!! perfect matchings of 2L players. The lowest free player is paired
/// with each higher free player in turn, recursively. Throws std::out_of_range for L > 6.
std::vector<Matching> enumerate_matchings(std::size_t couples);

/// All (2L)!/2^L ordered matchings: every matching under every couple order.
/// Throws std::out_of_range for L > 4.
std::vector<OrderedMatching> enumerate_ordered_matchings(std::size_t couples);

struct BestMatching
{
    Matching matching;
    double value = 0.0;
};

/// Argmax of expected reward over enumerate_matchings; first in enumeration order wins ties.
BestMatching exhaustive_best(const Instance& inst);

struct UnimodalityReport
{
    std::size_t ordered_matchings = 0;
    std::size_t satisfying_pi = 0;
    std::vector<OrderedMatching> counterexamples;

    bool holds() const { return counterexamples.empty(); }
};

/// For every ordered matching satisfying pi other than the optimum leader, looks for an
/// adjacent-couple swap with strictly larger expected reward. Throws
/// std::invalid_argument without inter-pair strict order, std::out_of_range for L > 4.
UnimodalityReport verify_unimodality(const Instance& inst);

/// True iff exactly one ordered matching has the optimum matching as Set and satisfies pi.
/// Same preconditions as verify_unimodality.
bool verify_leader_uniqueness(const Instance& inst);

struct NeighborGap
{
    Matching matching;
    SwapDescriptor swap;
    double gap = 0.0;             ///< mu* - mu(matching)
    std::size_t differing = 0;    ///< couples of `matching` absent from the optimum
};

/// Gap constants of the optimum leader's neighborhood.
///
/// Per boundary k, with couple k = {i, i'} and couple k+1 = {j, j'}, each written
/// best player first:
///   min_gap term         (theta_i - theta_j') (theta_i' - theta_j)
///   comparison_gap term   theta_i (theta_i' - theta_j')
/// The min_gap term is the smallest regret among the two matchings reachable across k.
struct AnalysisConstants
{
    double min_gap = 0.0;
    double comparison_gap = 0.0;
    std::vector<NeighborGap> neighbors;
    /// Sum over neighbors of 8 / gap: GRAB's regret grows like this times log T.
    double grab_log_coefficient = 0.0;
    /// Sum over boundaries of 8 gap(a*[i' <-> j]) / comparison_term^2, the GRAB+ counterpart.
    double grab_plus_log_coefficient = 0.0;

    double grab_bound(std::int64_t horizon) const;
    double grab_plus_bound(std::int64_t horizon) const;
};

/// Throws std::invalid_argument without inter-pair strict order.
AnalysisConstants gap_constants(const Instance& inst);

/// Random instance with inter-pair strict order: 2L uniform rates on shuffled player
/// indices, redrawn on a boundary tie.
Instance random_strict_instance(std::size_t couples, std::mt19937_64& rng);

struct LemmaSuiteConfig
{
    std::size_t max_couples = 4;
    std::size_t instances = 20;
    std::uint64_t seed = 0;
};

struct LemmaSuiteReport
{
    std::size_t instances = 0;
    std::size_t optimum_failures = 0;    ///< exhaustive argmax differs from the optimum matching
    std::size_t uniqueness_failures = 0; ///< optimum leader not unique
    std::size_t unimodality_failures = 0;///< improving swap missing
    std::size_t gap_failures = 0;        ///< min sub-optimal regret differs from the neighborhood minimum
    std::vector<std::string> messages;

    bool passed() const
    {
        return optimum_failures + uniqueness_failures + unimodality_failures + gap_failures == 0;
    }
};

/// Runs every structural check over `instances` random strict-order instances for each
/// L in [2, max_couples].
LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& config);

} // namespace unimatch

#endif // UNIMATCH_ORACLE_HPP
