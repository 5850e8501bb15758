#ifndef UNIMATCH_INDICES_HPP
#define UNIMATCH_INDICES_HPP

#include <cstdint>
#include <string_view>

namespace unimatch
{

/// Optimistic index used to score couples.
enum class IndexKind
{
    klucb,      ///< KL-UCB upper bound on the leader-local clock
    simple_ucb, ///< mean + sqrt(2 log t / s) on the global round
};

std::string_view to_string(IndexKind kind);
/// Accepts "klucb" / "kl-ucb" and "simple-ucb"; throws std::invalid_argument otherwise.
IndexKind parse_index_kind(std::string_view name);

/// Bernoulli Kullback-Leibler divergence kl(p, q), with 0 log 0 = 0.
/// Returns +inf when q is 0 or 1 and p != q. Throws std::domain_error outside [0,1].
double kl(double p, double q);

/// max(0, log t + 3 log log t). Throws std::domain_error for t < 1.
double exploration_budget(std::int64_t t);

/// sup{ p in [mean, 1] : pulls * kl(mean, p) <= exploration_budget(clock) }.
///
/// +inf for an unexplored couple (pulls == 0). Solved by bisection down to
/// floating-point resolution, at most 100 halvings; the returned point is
/// always feasible.
double klucb_index(double mean, std::int64_t pulls, std::int64_t clock);

/// mean + sqrt(2 log t / pulls); +inf when pulls == 0.
double simple_ucb(double mean, std::int64_t pulls, std::int64_t t);

/// Dispatches on `kind`; `clock` is whatever the caller decided that index uses.
double optimistic_index(IndexKind kind, double mean, std::int64_t pulls, std::int64_t clock);

} // namespace unimatch

#endif // UNIMATCH_INDICES_HPP
