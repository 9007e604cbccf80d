#include "tpta/planning.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

namespace tpta {

namespace {

bool intersects(const PropSet& a, const PropSet& b)
{
    const PropSet& small = a.size() <= b.size() ? a : b;
    const PropSet& large = a.size() <= b.size() ? b : a;
    return std::any_of(small.begin(), small.end(), [&](const auto& p) { return large.contains(p); });
}

bool one_way_mutex(const SnapAction& a, const SnapAction& b)
{
    return intersects(a.pres, b.adds) || intersects(a.pres, b.dels) || intersects(a.adds, b.dels);
}

void check_subset(const PropSet& set, const std::unordered_set<std::string>& universe, const std::string& where)
{
    for (const auto& p : set)
        if (!universe.contains(p))
            throw ResolutionError(where + " refers to undeclared proposition '" + p + "'");
}

void check_bound(const DurationBound& b, const std::string& where)
{
    if (b.value.sign() < 0) throw ModelError(where + " is negative");
}

} // namespace

std::optional<std::size_t> PlanningProblem::find_action(std::string_view name) const
{
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i].name == name) return i;
    return std::nullopt;
}

void PlanningProblem::check() const
{
    std::unordered_set<std::string> universe;
    for (const auto& p : props) {
        if (p.empty()) throw ModelError("empty proposition identifier");
        if (!universe.insert(p).second) throw ResolutionError("duplicate proposition '" + p + "'");
    }
    std::unordered_set<std::string> names;
    for (const auto& a : actions) {
        if (a.name.empty()) throw ModelError("empty action name");
        if (!names.insert(a.name).second) throw ResolutionError("duplicate action '" + a.name + "'");
        const std::string where = "action '" + a.name + "'";
        check_subset(a.start.pres, universe, where + " start pre");
        check_subset(a.start.adds, universe, where + " start add");
        check_subset(a.start.dels, universe, where + " start del");
        check_subset(a.end.pres, universe, where + " end pre");
        check_subset(a.end.adds, universe, where + " end add");
        check_subset(a.end.dels, universe, where + " end del");
        check_subset(a.over_all, universe, where + " over_all");
        check_bound(a.lower, where + " lower bound");
        check_bound(a.upper, where + " upper bound");
        if (a.upper.value < a.lower.value) throw ModelError(where + ": lower bound exceeds upper bound");
    }
    check_subset(init, universe, "init");
    check_subset(goal, universe, "goal");
}

Plan resolve_plan(const PlanningProblem& problem, const NamedPlan& named)
{
    Plan plan;
    plan.steps.reserve(named.size());
    for (const auto& step : named) {
        auto idx = problem.find_action(step.action);
        if (!idx) {
            std::string msg = "unknown action '" + step.action + "'";
            if (step.line != 0) msg += " on line " + std::to_string(step.line);
            throw ResolutionError(msg);
        }
        plan.steps.push_back(PlanStep{*idx, step.start, step.duration});
    }
    return plan;
}

bool mutex(const SnapAction& a, const SnapAction& b)
{
    return one_way_mutex(a, b) || one_way_mutex(b, a);
}

bool satisfies_lower(const DurationBound& lower, const Rational& d)
{
    return lower.strict ? lower.value < d : lower.value <= d;
}

bool satisfies_upper(const DurationBound& upper, const Rational& d)
{
    return upper.strict ? d < upper.value : d <= upper.value;
}

bool dur_c_sat(const DurativeAction& a, const Rational& d)
{
    return satisfies_lower(a.lower, d) && satisfies_upper(a.upper, d);
}

std::vector<TimedSnap> induced_parallel_plan(const Plan& plan)
{
    std::vector<TimedSnap> out;
    out.reserve(plan.steps.size() * 2);
    for (const auto& s : plan.steps) {
        out.push_back(TimedSnap{s.start, s.action, SnapKind::Start});
        out.push_back(TimedSnap{s.finish(), s.action, SnapKind::End});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Rational> htps(const Plan& plan)
{
    std::vector<Rational> out;
    for (const auto& snap : induced_parallel_plan(plan))
        if (out.empty() || out.back() != snap.time) out.push_back(snap.time);
    return out;
}

Effects effects_at(const PlanningProblem& problem, const Plan& plan, const Rational& t)
{
    Effects eff;
    for (const auto& snap : induced_parallel_plan(plan)) {
        if (snap.time != t) continue;
        const auto& h = problem.actions.at(snap.action).snap(snap.kind);
        eff.adds.insert(h.adds.begin(), h.adds.end());
        eff.dels.insert(h.dels.begin(), h.dels.end());
    }
    return eff;
}

PropSet invs_at(const PlanningProblem& problem, const Plan& plan, const Rational& t)
{
    PropSet out;
    for (const auto& s : plan.steps) {
        if (s.start < t && t <= s.finish()) {
            const auto& inv = problem.actions.at(s.action).over_all;
            out.insert(inv.begin(), inv.end());
        }
    }
    return out;
}

StateSequence state_sequence(const PlanningProblem& problem, const Plan& plan)
{
    StateSequence seq{problem.init};
    for (const auto& t : htps(plan)) {
        const auto eff = effects_at(problem, plan, t);
        PropSet next;
        std::set_difference(seq.back().begin(), seq.back().end(), eff.dels.begin(), eff.dels.end(),
                            std::inserter(next, next.end()));
        next.insert(eff.adds.begin(), eff.adds.end());
        seq.push_back(std::move(next));
    }
    return seq;
}

namespace {

// Calls `on_violation(first, second)` for every unordered pair of distinct
// mutex timed snaps that are too close.
template <class F>
void for_each_separation_violation(const PlanningProblem& problem, const Plan& plan, const Rational& epsilon,
                                   F&& on_violation)
{
    const auto snaps = induced_parallel_plan(plan);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const auto& a = problem.actions.at(snaps[i].action).snap(snaps[i].kind);
        for (std::size_t j = i + 1; j < snaps.size(); ++j) {
            const auto& b = problem.actions.at(snaps[j].action).snap(snaps[j].kind);
            if (!mutex(a, b)) continue;
            const Rational gap = abs(snaps[j].time - snaps[i].time);
            if (gap.sign() <= 0 || gap < epsilon) on_violation(snaps[i], snaps[j]);
        }
    }
}

} // namespace

bool separation_ok(const PlanningProblem& problem, const Plan& plan, const Rational& epsilon)
{
    bool ok = true;
    for_each_separation_violation(problem, plan, epsilon, [&](const TimedSnap&, const TimedSnap&) { ok = false; });
    return ok;
}

bool no_self_overlap(const Plan& plan)
{
    const auto& st = plan.steps;
    for (std::size_t i = 0; i < st.size(); ++i) {
        for (std::size_t j = 0; j < st.size(); ++j) {
            if (i == j || st[i].action != st[j].action) continue;
            if (st[i].start <= st[j].start && st[j].start <= st[i].finish()) return false;
        }
    }
    return true;
}

std::string_view clause_name(Clause clause)
{
    switch (clause) {
    case Clause::Preconditions: return "snap preconditions";
    case Clause::UpdateRule: return "state update";
    case Clause::Invariants: return "active invariants";
    case Clause::Goal: return "goal";
    case Clause::InitialState: return "initial state";
    case Clause::DurationBounds: return "duration bounds";
    case Clause::NonNegativeDuration: return "non-negative duration";
    case Clause::MutexSeparation: return "mutex separation";
    }
    return "unknown";
}

bool Verdict::cites(Clause clause) const
{
    return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const auto& d) { return d.clause == clause; });
}

std::string snap_name(const PlanningProblem& problem, std::size_t action, SnapKind kind)
{
    return problem.actions.at(action).name + (kind == SnapKind::Start ? "[start]" : "[end]");
}

namespace {

std::string join(const PropSet& s)
{
    std::string out;
    for (const auto& p : s) {
        if (!out.empty()) out += ", ";
        out += p;
    }
    return out;
}

PropSet missing(const PropSet& required, const PropSet& state)
{
    PropSet out;
    std::set_difference(required.begin(), required.end(), state.begin(), state.end(),
                        std::inserter(out, out.end()));
    return out;
}

} // namespace

Verdict validate_plan(const PlanningProblem& problem, const Plan& plan, const Rational& epsilon)
{
    Verdict verdict;
    auto report = [&](Clause c, std::optional<Rational> t, std::optional<std::size_t> step, std::string msg) {
        verdict.diagnostics.push_back(Diagnostic{c, std::move(t), step, std::move(msg)});
    };

    const auto points = htps(plan);
    const auto states = state_sequence(problem, plan);
    const auto snaps = induced_parallel_plan(plan);

    if (states.front() != problem.init)
        report(Clause::InitialState, std::nullopt, std::nullopt, "first state differs from the initial state");

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& t = points[i];
        const auto& state = states[i];
        for (const auto& snap : snaps) {
            if (snap.time != t) continue;
            const auto gap = missing(problem.actions[snap.action].snap(snap.kind).pres, state);
            if (!gap.empty())
                report(Clause::Preconditions, t, std::nullopt,
                       snap_name(problem, snap.action, snap.kind) + " requires {" + join(gap) + "}");
        }
        const auto inv_gap = missing(invs_at(problem, plan, t), state);
        if (!inv_gap.empty()) report(Clause::Invariants, t, std::nullopt, "invariants {" + join(inv_gap) + "} violated");
    }

    const auto goal_gap = missing(problem.goal, states.back());
    if (!goal_gap.empty()) report(Clause::Goal, std::nullopt, std::nullopt, "goal {" + join(goal_gap) + "} not reached");

    for (std::size_t k = 0; k < plan.steps.size(); ++k) {
        const auto& s = plan.steps[k];
        const auto& a = problem.actions.at(s.action);
        if (!dur_c_sat(a, s.duration))
            report(Clause::DurationBounds, s.start, k,
                   "duration " + s.duration.str() + " of " + a.name + " outside its bounds");
        if (s.duration.sign() < 0)
            report(Clause::NonNegativeDuration, s.start, k, "negative duration of " + a.name);
    }

    for_each_separation_violation(problem, plan, epsilon, [&](const TimedSnap& x, const TimedSnap& y) {
        report(Clause::MutexSeparation, max(x.time, y.time), std::nullopt,
               snap_name(problem, x.action, x.kind) + " at " + x.time.str() + " and "
                   + snap_name(problem, y.action, y.kind) + " at " + y.time.str()
                   + " are mutex and insufficiently separated");
    });

    std::stable_sort(verdict.diagnostics.begin(), verdict.diagnostics.end(), [](const auto& a, const auto& b) {
        if (a.clause != b.clause) return a.clause < b.clause;
        if (a.time.has_value() != b.time.has_value()) return !a.time.has_value();
        return a.time && *a.time < *b.time;
    });
    verdict.valid = verdict.diagnostics.empty();
    verdict.no_self_overlap = no_self_overlap(plan);
    return verdict;
}

Verdict validate_plan(const PlanningProblem& problem, const NamedPlan& plan, const Rational& epsilon)
{
    return validate_plan(problem, resolve_plan(problem, plan), epsilon);
}

} // namespace tpta
