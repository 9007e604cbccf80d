#pragma once

#include "tpta/rational.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tpta {

using Proposition = std::string;
using PropSet = std::set<Proposition>;

/// Raised when a model refers to something that does not exist (unknown
/// proposition, unknown action name, duplicate identifiers).
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a model is structurally malformed (bad bounds, negative times).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SnapAction {
    PropSet pres;
    PropSet adds;
    PropSet dels;
};

/// `strict` selects `<` over `<=`.
struct DurationBound {
    Rational value;
    bool strict = false;
};

enum class SnapKind { Start, End };

struct DurativeAction {
    std::string name;
    SnapAction start;
    SnapAction end;
    PropSet over_all;
    DurationBound lower;
    DurationBound upper;

    [[nodiscard]] const SnapAction& snap(SnapKind kind) const
    {
        return kind == SnapKind::Start ? start : end;
    }
};

struct PlanningProblem {
    std::vector<Proposition> props;
    std::vector<DurativeAction> actions;
    PropSet init;
    PropSet goal;

    [[nodiscard]] std::optional<std::size_t> find_action(std::string_view name) const;

    /// Checks every invariant of the model; throws ResolutionError or ModelError.
    void check() const;
};

/// One scheduled execution. `action` indexes `PlanningProblem::actions`.
struct PlanStep {
    std::size_t action = 0;
    Rational start;
    Rational duration;

    [[nodiscard]] Rational finish() const { return start + duration; }
};

struct Plan {
    std::vector<PlanStep> steps;
};

/// Step as read from a plan file, before the action name is resolved.
struct NamedPlanStep {
    std::string action;
    Rational start;
    Rational duration;
    std::size_t line = 0;
};

using NamedPlan = std::vector<NamedPlanStep>;

/// Throws ResolutionError naming the first unknown action.
Plan resolve_plan(const PlanningProblem& problem, const NamedPlan& named);

/// A snap action occurrence in the induced parallel plan. Identity is
/// (time, action, kind), so structurally identical snaps of different
/// actions stay distinct.
struct TimedSnap {
    Rational time;
    std::size_t action = 0;
    SnapKind kind = SnapKind::Start;

    friend auto operator<=>(const TimedSnap&, const TimedSnap&) = default;
};

using StateSequence = std::vector<PropSet>;

[[nodiscard]] bool mutex(const SnapAction& a, const SnapAction& b);

[[nodiscard]] bool satisfies_lower(const DurationBound& lower, const Rational& d);
[[nodiscard]] bool satisfies_upper(const DurationBound& upper, const Rational& d);
[[nodiscard]] bool dur_c_sat(const DurativeAction& a, const Rational& d);

/// Sorted by (time, action, kind), duplicate-free.
[[nodiscard]] std::vector<TimedSnap> induced_parallel_plan(const Plan& plan);

/// Happening time points: strictly increasing.
[[nodiscard]] std::vector<Rational> htps(const Plan& plan);

struct Effects {
    PropSet adds;
    PropSet dels;
};

[[nodiscard]] Effects effects_at(const PlanningProblem& problem, const Plan& plan, const Rational& t);

/// Invariants active at `t`: over_all of steps with start < t <= start + duration.
[[nodiscard]] PropSet invs_at(const PlanningProblem& problem, const Plan& plan, const Rational& t);

/// M_0 = I, M_{i+1} = (M_i - Dels(t_i)) u Adds(t_i); computed regardless of validity.
[[nodiscard]] StateSequence state_sequence(const PlanningProblem& problem, const Plan& plan);

[[nodiscard]] bool separation_ok(const PlanningProblem& problem, const Plan& plan, const Rational& epsilon);

[[nodiscard]] bool no_self_overlap(const Plan& plan);

/// Plan-validity conditions, numbered in the order they are checked.
enum class Clause {
    Preconditions = 1,
    UpdateRule = 2,
    Invariants = 3,
    Goal = 4,
    InitialState = 5,
    DurationBounds = 6,
    NonNegativeDuration = 7,
    MutexSeparation = 8,
};

[[nodiscard]] std::string_view clause_name(Clause clause);

struct Diagnostic {
    Clause clause;
    std::optional<Rational> time;     // offending happening time point
    std::optional<std::size_t> step;  // offending plan step
    std::string message;
};

struct Verdict {
    bool valid = true;
    bool no_self_overlap = true;
    /// Sorted by clause, then time; empty iff valid.
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] const Diagnostic* first() const
    {
        return diagnostics.empty() ? nullptr : &diagnostics.front();
    }
    [[nodiscard]] bool cites(Clause clause) const;
};

[[nodiscard]] Verdict validate_plan(const PlanningProblem& problem, const Plan& plan, const Rational& epsilon);

/// Resolves names first; unknown names raise ResolutionError rather than an
/// Invalid verdict.
[[nodiscard]] Verdict validate_plan(const PlanningProblem& problem, const NamedPlan& plan, const Rational& epsilon);

[[nodiscard]] std::string snap_name(const PlanningProblem& problem, std::size_t action, SnapKind kind);

} // namespace tpta
