#ifndef UNIMATCH_MATCHING_HPP
#define UNIMATCH_MATCHING_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace unimatch
{

using Player = int;

/// Unordered couple of players, always stored with lo < hi.
struct Pair
{
    Player lo = 0;
    Player hi = 1;

    bool contains(Player p) const { return lo == p || hi == p; }
    Player other(Player p) const { return p == lo ? hi : lo; }

    friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// Builds the canonical pair {a, b}; throws std::invalid_argument on a == b or a negative index.
Pair make_pair(Player a, Player b);

/// A perfect matching of the players 0..2L-1: L disjoint couples, no order among them.
///
/// Couples are kept sorted, so two matchings over the same couples compare equal
/// regardless of how they were written.
class Matching
{
public:
    Matching() = default;

    /// Validates and canonicalizes. Throws std::invalid_argument when the pairs do
    /// not partition {0, ..., 2L-1}.
    explicit Matching(std::vector<Pair> pairs);

    std::size_t couples() const { return pairs_.size(); }
    std::size_t players() const { return 2 * pairs_.size(); }
    const std::vector<Pair>& pairs() const { return pairs_; }
    bool contains(const Pair& p) const;

    auto begin() const { return pairs_.begin(); }
    auto end() const { return pairs_.end(); }

    friend bool operator==(const Matching&, const Matching&) = default;
    friend auto operator<=>(const Matching&, const Matching&) = default;

private:
    std::vector<Pair> pairs_;
};

/// Matching from raw index pairs; `couples` is the expected L.
Matching make_matching(std::span<const std::pair<Player, Player>> pairs, std::size_t couples);

/// A matching whose couples carry a position. Vertex of the swap graph.
class OrderedMatching
{
public:
    OrderedMatching() = default;
    explicit OrderedMatching(std::vector<Pair> couples);

    std::size_t size() const { return couples_.size(); }
    const Pair& operator[](std::size_t k) const { return couples_[k]; }
    const std::vector<Pair>& couples() const { return couples_; }

    auto begin() const { return couples_.begin(); }
    auto end() const { return couples_.end(); }

    friend bool operator==(const OrderedMatching&, const OrderedMatching&) = default;
    friend auto operator<=>(const OrderedMatching&, const OrderedMatching&) = default;

private:
    std::vector<Pair> couples_;
};

struct OrderedMatchingHash
{
    std::size_t operator()(const OrderedMatching& m) const noexcept;
};

/// Exchange of `e1` (taken from couple k) with `e2` (taken from couple k+1).
struct SwapDescriptor
{
    std::size_t k = 0;
    Player e1 = 0;
    Player e2 = 0;

    friend auto operator<=>(const SwapDescriptor&, const SwapDescriptor&) = default;
};

bool is_valid_swap(const OrderedMatching& m, const SwapDescriptor& d);

/// Couple k becomes {e2, other of k}, couple k+1 becomes {e1, other of k+1}.
/// Throws std::invalid_argument if `d` does not describe a swap of `m`.
OrderedMatching apply_swap(const OrderedMatching& m, const SwapDescriptor& d);

/// Forgets the couple order.
Matching set_of(const OrderedMatching& m);

struct Neighbor
{
    Matching matching;
    SwapDescriptor swap;
};

/// Distinct matchings reachable by one adjacent-couple swap, 2(L-1) of them.
///
/// Of the four raw swaps between couples k and k+1, (lo,lo)/(hi,hi) and
/// (lo,hi)/(hi,lo) collapse to the same matching; the descriptor kept for each
/// is the lexicographically smallest (k, e1, e2). Order: by k, then descriptor.
std::vector<Neighbor> neighborhood_set(const OrderedMatching& m);

/// True iff rho over consecutive couples is non-increasing (equality allowed).
bool satisfies_pi(const OrderedMatching& m, const Eigen::MatrixXd& rho);

/// Players ranked by descending theta, ties broken by lower index.
std::vector<Player> rank_players(const Eigen::VectorXd& theta);

/// True iff every member of an earlier optimal couple strictly beats every member of a later one.
bool inter_pair_strict_order(const Eigen::VectorXd& theta);

/// Couples (best, 2nd), (3rd, 4th), ... of the ranked players, ordered by
/// descending rho (stable). No precondition on theta.
OrderedMatching sorted_pairing(const Eigen::VectorXd& theta);

/// The optimum leader: Set equals the optimum matching and pi holds.
/// Throws std::invalid_argument when inter_pair_strict_order(theta) is false.
OrderedMatching optimum_leader(const Eigen::VectorXd& theta);

std::string to_string(const Pair& p);
std::string to_string(const Matching& m);
std::string to_string(const OrderedMatching& m);

} // namespace unimatch

#endif // UNIMATCH_MATCHING_HPP
