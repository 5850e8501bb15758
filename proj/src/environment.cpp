#include "unimatch/environment.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace unimatch
{

namespace
{

// Slack for constraints that are met with equality at the reported sweep endpoints
// (e.g. 10 * 0.1 for L = 11).
constexpr double kConstraintSlack = 1e-12;

Instance from_couple_values(const std::vector<double>& per_couple)
{
    Eigen::VectorXd theta(2 * static_cast<Eigen::Index>(per_couple.size()));
    for (std::size_t i = 0; i < per_couple.size(); ++i)
    {
        // Snap values that sit within rounding of the unit interval bounds.
        const double v = std::clamp(per_couple[i], 0.0, 1.0);
        theta[2 * static_cast<Eigen::Index>(i)] = v;
        theta[2 * static_cast<Eigen::Index>(i) + 1] = v;
    }
    return Instance(std::move(theta));
}

} // namespace

Instance::Instance(Eigen::VectorXd theta)
    : theta_(std::move(theta))
{
    if (theta_.size() < 2 || theta_.size() % 2 != 0)
    {
        throw std::invalid_argument("an instance needs an even, positive number of players");
    }
    if ((theta_.array() < 0.0).any() || (theta_.array() > 1.0).any() || !theta_.allFinite())
    {
        throw std::invalid_argument("player success rates must lie in [0, 1]");
    }
    rho_ = theta_ * theta_.transpose();
    optimum_ = set_of(sorted_pairing(theta_));
    optimal_reward_ = expected_reward(optimum_);
}

double Instance::expected_reward(const Matching& m) const
{
    double total = 0.0;
    for (const auto& p : m)
    {
        total += rho(p);
    }
    return total;
}

Instance make_exp1_instance(std::size_t couples, double delta)
{
    const double span = (static_cast<double>(couples) - 1.0) * delta;
    if (couples < 2 || !(span > 0.0) || span > 1.0 + kConstraintSlack)
    {
        throw std::invalid_argument("experiment 1 requires 0 < (L - 1) * delta <= 1");
    }
    std::vector<double> values(couples);
    for (std::size_t i = 1; i <= couples; ++i)
    {
        values[i - 1] = static_cast<double>(couples - i) * delta;
    }
    return from_couple_values(values);
}

Instance make_exp2_instance(std::size_t couples, double mu, double delta, bool relax)
{
    const auto L = static_cast<double>(couples);
    if (couples < 1 || !(delta > 0.0))
    {
        throw std::invalid_argument("experiment 2 requires L >= 1 and delta > 0");
    }
    if (!relax)
    {
        if (mu - (L - 1.0) * delta < -kConstraintSlack || mu + (L + 1.0) * delta > 1.0 + kConstraintSlack)
        {
            throw std::invalid_argument("experiment 2 requires mu - (L - 1) delta >= 0 and mu + (L + 1) delta <= 1");
        }
    }
    else
    {
        const double half_span = 0.5 * (L - 1.0) * delta;
        if (mu - half_span < -kConstraintSlack || mu + half_span > 1.0 + kConstraintSlack)
        {
            throw std::invalid_argument("experiment 2 success rates fall outside [0, 1]");
        }
    }
    std::vector<double> values(couples);
    for (std::size_t i = 1; i <= couples; ++i)
    {
        values[i - 1] = mu + ((L + 1.0) / 2.0 - static_cast<double>(i)) * delta;
    }
    return from_couple_values(values);
}

FeedbackVector sample_feedback(const Instance& inst, const Matching& m, std::mt19937_64& rng)
{
    FeedbackVector out;
    out.reserve(m.couples());
    for (const auto& p : m)
    {
        std::bernoulli_distribution game(inst.rho(p));
        out.push_back({p, game(rng)});
    }
    return out;
}

double pseudo_regret(const Instance& inst, const Matching& m)
{
    return std::max(0.0, inst.optimal_reward() - inst.expected_reward(m));
}

} // namespace unimatch
