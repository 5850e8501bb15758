#include "unimatch/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace unimatch
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBisections = 100;

void check_probability(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0))
    {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
}

void check_counts(std::int64_t pulls, std::int64_t clock)
{
    if (pulls < 0)
    {
        throw std::domain_error("pull count must be non-negative");
    }
    if (clock < 1)
    {
        throw std::domain_error("clock must be at least 1");
    }
}

} // namespace

std::string_view to_string(IndexKind kind)
{
    switch (kind)
    {
    case IndexKind::klucb:
        return "klucb";
    case IndexKind::simple_ucb:
        return "simple-ucb";
    }
    return "?";
}

IndexKind parse_index_kind(std::string_view name)
{
    if (name == "klucb" || name == "kl-ucb")
    {
        return IndexKind::klucb;
    }
    if (name == "simple-ucb")
    {
        return IndexKind::simple_ucb;
    }
    throw std::invalid_argument("unknown index kind: " + std::string(name));
}

double kl(double p, double q)
{
    check_probability(p, "p");
    check_probability(q, "q");
    if (p == q)
    {
        return 0.0;
    }
    if (q == 0.0 || q == 1.0)
    {
        return kInf;
    }
    double d = 0.0;
    if (p > 0.0)
    {
        d += p * std::log(p / q);
    }
    if (p < 1.0)
    {
        d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    }
    // Rounding can leave a tiny negative value when p and q are adjacent doubles.
    return d > 0.0 ? d : 0.0;
}

double exploration_budget(std::int64_t t)
{
    if (t < 1)
    {
        throw std::domain_error("exploration budget needs t >= 1");
    }
    if (t < 3)
    {
        return 0.0; // log log t is undefined at 1 and negative at 2
    }
    const double lt = std::log(static_cast<double>(t));
    return std::max(0.0, lt + 3.0 * std::log(lt));
}

double klucb_index(double mean, std::int64_t pulls, std::int64_t clock)
{
    check_probability(mean, "mean");
    check_counts(pulls, clock);
    if (pulls == 0)
    {
        return kInf;
    }
    if (mean == 1.0)
    {
        return 1.0;
    }
    const double budget = exploration_budget(clock);
    if (budget == 0.0)
    {
        return mean;
    }
    const auto s = static_cast<double>(pulls);
    double lo = mean; // feasible
    double hi = 1.0;  // infeasible, kl(mean, 1) = inf
    for (int i = 0; i < kMaxBisections; ++i)
    {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi)
        {
            break;
        }
        if (s * kl(mean, mid) <= budget)
        {
            lo = mid;
        }
        else
        {
            hi = mid;
        }
    }
    return lo;
}

double simple_ucb(double mean, std::int64_t pulls, std::int64_t t)
{
    check_probability(mean, "mean");
    check_counts(pulls, t);
    if (pulls == 0)
    {
        return kInf;
    }
    return mean + std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(pulls));
}

double optimistic_index(IndexKind kind, double mean, std::int64_t pulls, std::int64_t clock)
{
    return kind == IndexKind::klucb ? klucb_index(mean, pulls, clock) : simple_ucb(mean, pulls, clock);
}

} // namespace unimatch
