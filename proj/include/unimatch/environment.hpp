#ifndef UNIMATCH_ENVIRONMENT_HPP
#define UNIMATCH_ENVIRONMENT_HPP

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "unimatch/matching.hpp"

namespace unimatch
{

/// Rank-1 Bernoulli matching problem: rho(i, j) = theta_i * theta_j.
class Instance
{
public:
    /// Throws std::invalid_argument unless theta has an even, positive size and values in [0, 1].
    explicit Instance(Eigen::VectorXd theta);

    std::size_t couples() const { return static_cast<std::size_t>(theta_.size()) / 2; }
    std::size_t players() const { return static_cast<std::size_t>(theta_.size()); }

    const Eigen::VectorXd& theta() const { return theta_; }
    const Eigen::MatrixXd& rho() const { return rho_; }
    double rho(const Pair& p) const { return rho_(p.lo, p.hi); }

    /// Sum of rho over the couples of `m`.
    double expected_reward(const Matching& m) const;

    /// Best players paired together: the optimum matching for any rank-1 instance.
    const Matching& optimum() const { return optimum_; }
    double optimal_reward() const { return optimal_reward_; }

private:
    Eigen::VectorXd theta_;
    Eigen::MatrixXd rho_;
    Matching optimum_;
    double optimal_reward_ = 0.0;
};

/// Couple i (1-based) gets theta = (L - i) * delta for both players.
/// Requires 0 < (L - 1) * delta <= 1.
Instance make_exp1_instance(std::size_t couples, double delta);

/// Couple i (1-based) gets theta = mu + ((L + 1) / 2 - i) * delta for both players,
/// so mean(theta) = mu and consecutive couples are delta apart.
///
/// Requires mu - (L - 1) delta >= 0 and mu + (L + 1) delta <= 1. With `relax`,
/// only theta in [0, 1] is required.
Instance make_exp2_instance(std::size_t couples, double mu, double delta, bool relax = false);

struct Outcome
{
    Pair pair;
    bool success = false;
};

/// One Bernoulli outcome per played couple, in the matching's couple order.
using FeedbackVector = std::vector<Outcome>;

FeedbackVector sample_feedback(const Instance& inst, const Matching& m, std::mt19937_64& rng);

/// mu* - sum of rho over m, never negative.
double pseudo_regret(const Instance& inst, const Matching& m);

} // namespace unimatch

#endif // UNIMATCH_ENVIRONMENT_HPP
