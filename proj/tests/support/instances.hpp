#pragma once

#include "generators.hpp"
#include "oracles.hpp"

#include <optional>

namespace tpta::testing {

struct Instance {
    PlanningProblem problem;
    Plan plan;
    Rational epsilon;
};

inline Rational random_epsilon(std::mt19937_64& rng)
{
    static const Rational choices[] = {Rational(0), Rational(1, 4), Rational(1, 2)};
    return choices[std::uniform_int_distribution<int>(0, 2)(rng)];
}

/// Goal is a random subset of the final state, so it never causes rejection.
inline Instance random_instance(std::mt19937_64& rng, const GenConfig& cfg = {})
{
    Instance in;
    in.problem = random_problem(rng, cfg);
    in.plan = random_plan(rng, in.problem, cfg);
    in.epsilon = random_epsilon(rng);
    const auto final_state = oracle_validate(in.problem, in.plan, in.epsilon).final_state;
    for (const auto& p : final_state)
        if (coin(rng, 0.6)) in.problem.goal.insert(p);
    return in;
}

/// Instances that the oracle accepts and that have no self overlap.
inline Instance random_valid_instance(std::mt19937_64& rng, const GenConfig& cfg = {})
{
    for (;;) {
        auto in = random_instance(rng, cfg);
        if (!oracle_validate(in.problem, in.plan, in.epsilon).valid) continue;
        if (!no_self_overlap(in.plan)) continue;
        return in;
    }
}

} // namespace tpta::testing
