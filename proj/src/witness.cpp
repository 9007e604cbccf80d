#include "tpta/witness.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tpta::wit {

using enc::Role;

ScheduleAt classify_at(const Plan& plan, const Rational& t)
{
    ScheduleAt out;
    bool hit = false;
    for (const auto& s : plan.steps) {
        const bool starts = s.start == t;
        const bool ends = s.finish() == t;
        hit = hit || starts || ends;
        if (s.duration.is_zero()) {
            if (starts) out.instantaneous.push_back(s.action);
        } else {
            if (ends) out.ending.push_back(s.action);
            if (starts) out.starting.push_back(s.action);
        }
    }
    if (!hit) throw std::invalid_argument(t.str() + " is not a happening time point");
    for (auto* v : {&out.ending, &out.instantaneous, &out.starting}) std::sort(v->begin(), v->end());
    return out;
}

namespace {

bool before(const Rational& a, const Rational& b, Side side) { return side == Side::Before ? a < b : a <= b; }

} // namespace

bool running_at(const Plan& plan, std::size_t action, const Rational& t, Side side)
{
    return std::any_of(plan.steps.begin(), plan.steps.end(), [&](const PlanStep& s) {
        return s.action == action && before(s.start, t, side) && !before(s.finish(), t, side);
    });
}

Rational time_since_at(const Plan& plan, std::size_t action, SnapKind kind, const Rational& t, Side side,
                       const Rational& marker)
{
    std::optional<Rational> last;
    for (const auto& s : plan.steps) {
        if (s.action != action) continue;
        const Rational at = kind == SnapKind::Start ? s.start : s.finish();
        if (before(at, t, side) && (!last || *last < at)) last = at;
    }
    return last ? t - *last : t + marker;
}

Rational d_arb(const Rational& epsilon) { return max(Rational(1), epsilon); }

EncState::EncState(const Plan& p, std::size_t index, const Rational& epsilon)
    : plan(&p), points(htps(p)), i(index), marker(d_arb(epsilon))
{
    if (i >= points.size()) throw std::out_of_range("happening index out of range");
}

namespace {

EncodesCheck fail(std::string why) { return EncodesCheck{std::move(why)}; }

EncodesCheck check_common(const enc::EncodedNetwork& enc, const ta::Configuration& q)
{
    const auto& net = enc.network;
    if (q.locations.size() != net.automata.size() || q.vars.size() != net.vars.size()
        || q.clocks.size() != net.clocks.size())
        return fail("configuration shape does not match the network");
    if (q.locations[enc::EncodedNetwork::main_automaton] != enc::loc::plan_m) return fail("main automaton not in plan_M");
    if (q.vars[enc.vars.ps] != 1) return fail("ps is not 1");
    return {};
}

EncodesCheck check_props(const enc::EncodedNetwork& enc, const PlanningProblem& problem, const PropSet& state,
                         const ta::Configuration& q)
{
    for (const auto& p : problem.props) {
        const std::int64_t want = state.contains(p) ? 1 : 0;
        if (q.vars[enc.vars.vp.at(p)] != want)
            return fail("vp." + p + " is " + std::to_string(q.vars[enc.vars.vp.at(p)]) + ", expected "
                        + std::to_string(want));
    }
    return {};
}

EncodesCheck encodes(const enc::EncodedNetwork& enc, const PlanningProblem& problem, const Plan& plan, std::size_t i,
                     const ta::Configuration& q, Side side)
{
    if (auto c = check_common(enc, q); !c) return c;

    const auto points = htps(plan);
    if (points.empty()) {
        for (std::size_t a = 0; a < problem.actions.size(); ++a) {
            if (q.locations[enc::EncodedNetwork::automaton_of(a)] != enc::loc::inactive)
                return fail(problem.actions[a].name + " is not inactive");
            for (SnapKind k : {SnapKind::Start, SnapKind::End})
                if (q.clocks[enc.clocks.of(a, k)].sign() <= 0)
                    return fail(enc.network.clocks[enc.clocks.of(a, k)] + " is not positive");
        }
        if (auto c = check_props(enc, problem, problem.init, q); !c) return c;
        for (const auto& p : problem.props)
            if (q.vars[enc.vars.lp.at(p)] != 0) return fail("lp." + p + " is not 0");
        if (q.vars[enc.vars.aa] != 0) return fail("aa is not 0");
        return {};
    }

    const EncState st(plan, i, enc.options.epsilon);
    auto running = [&](std::size_t a) { return side == Side::Before ? st.running_before(a) : st.running_after(a); };

    std::int64_t active = 0;
    std::map<Proposition, std::int64_t> locks;
    for (std::size_t a = 0; a < problem.actions.size(); ++a) {
        const bool run = running(a);
        const auto want = run ? enc::loc::running : enc::loc::inactive;
        const auto& name = problem.actions[a].name;
        if (q.locations[enc::EncodedNetwork::automaton_of(a)] != want)
            return fail(name + " should be " + (run ? "running" : "inactive"));
        for (SnapKind k : {SnapKind::Start, SnapKind::End}) {
            const auto expected = side == Side::Before ? st.time_since_before(a, k) : st.time_since_after(a, k);
            const auto clock = enc.clocks.of(a, k);
            if (q.clocks[clock] != expected)
                return fail(enc.network.clocks[clock] + " is " + q.clocks[clock].str() + ", expected " + expected.str());
        }
        if (run) {
            ++active;
            for (const auto& p : problem.actions[a].over_all) ++locks[p];
        }
    }

    const auto states = state_sequence(problem, plan);
    if (auto c = check_props(enc, problem, states.at(side == Side::Before ? i : i + 1), q); !c) return c;
    for (const auto& p : problem.props) {
        const auto want = locks.contains(p) ? locks[p] : 0;
        if (q.vars[enc.vars.lp.at(p)] != want)
            return fail("lp." + p + " is " + std::to_string(q.vars[enc.vars.lp.at(p)]) + ", expected "
                        + std::to_string(want));
    }
    if (q.vars[enc.vars.aa] != active)
        return fail("aa is " + std::to_string(q.vars[enc.vars.aa]) + ", expected " + std::to_string(active));
    return {};
}

} // namespace

EncodesCheck encodes_before(const enc::EncodedNetwork& enc, const PlanningProblem& problem, const Plan& plan,
                            std::size_t i, const ta::Configuration& q)
{
    return encodes(enc, problem, plan, i, q, Side::Before);
}

EncodesCheck encodes_after(const enc::EncodedNetwork& enc, const PlanningProblem& problem, const Plan& plan,
                           std::size_t i, const ta::Configuration& q)
{
    return encodes(enc, problem, plan, i, q, Side::After);
}

std::vector<SegmentEdge> segment_order(const Plan& plan, std::size_t i, SegmentOrder order)
{
    const auto points = htps(plan);
    const auto sched = classify_at(plan, points.at(i));
    std::vector<SegmentEdge> out;
    for (auto a : sched.ending) out.push_back({Role::Ee, a});
    for (auto a : sched.instantaneous) {
        out.push_back({Role::Se, a});
        out.push_back({Role::Ie, a});
        out.push_back({Role::EePrime, a});
    }
    if (order == SegmentOrder::Proof) {
        for (auto a : sched.ending) out.push_back({Role::EePrime, a});
        for (auto a : sched.starting) out.push_back({Role::Se, a});
    } else {
        for (auto a : sched.starting) out.push_back({Role::Se, a});
        for (auto a : sched.ending) out.push_back({Role::EePrime, a});
    }
    for (auto a : sched.starting) out.push_back({Role::SePrime, a});
    return out;
}

std::string step_name(const enc::EncodedNetwork& enc, const ta::InternalStep& step)
{
    const auto& net = enc.network;
    if (step.automaton < net.automata.size() && step.transition < net.automata[step.automaton].transitions.size())
        return net.automata[step.automaton].transitions[step.transition].label;
    return "#" + std::to_string(step.automaton) + "." + std::to_string(step.transition);
}

std::vector<ta::RunStep> build_happening_segment(const enc::EncodedNetwork& enc, const Plan& plan, std::size_t i,
                                                 const ta::Configuration& q_in, SegmentOrder order)
{
    std::vector<ta::RunStep> out;
    ta::Configuration q = q_in;
    const auto t = htps(plan).at(i);
    for (const auto& edge : segment_order(plan, i, order)) {
        const auto label = enc.step(edge.role, edge.action);
        auto next = ta::internal(enc.network, q, label.automaton, label.transition);
        if (!next)
            throw WitnessError("at t=" + t.str() + ", " + step_name(enc, label) + " failed: " + next.error().describe());
        q = next.config();
        out.push_back(ta::RunStep{label, std::move(next).config()});
    }
    return out;
}

ta::Run build_witness(const enc::EncodedNetwork& enc, const PlanningProblem& problem, const Plan& plan,
                      SegmentOrder order)
{
    const auto& eps = enc.options.epsilon;
    const auto verdict = validate_plan(problem, plan, eps);
    if (!verdict.valid) throw WitnessError("plan is not valid: " + verdict.first()->message);
    if (!verdict.no_self_overlap) throw WitnessError("plan has self-overlapping steps");
    for (const auto& s : plan.steps)
        if (s.start.sign() < 0) throw WitnessError("plan step starts before time 0");

    ta::Run run{enc.initial(), {}};
    auto push = [&](const ta::StepLabel& label, const std::string& what) {
        auto next = ta::apply(enc.network, run.last(), label);
        if (!next) throw WitnessError(what + " failed: " + next.error().describe());
        run.steps.push_back(ta::RunStep{label, std::move(next).config()});
    };
    auto require = [](const EncodesCheck& c, const std::string& what) {
        if (!c) throw WitnessError(what + ": " + c.failure);
    };

    push(enc.step(Role::E1M), "e1M");
    const auto marker = d_arb(eps);
    const auto points = htps(plan);
    if (points.empty()) {
        push(ta::DelayStep{marker}, "initial delay");
        require(encodes_after(enc, problem, plan, 0, run.last()), "encodes_after on empty plan");
    } else {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Rational delta = i == 0 ? marker + points[0] : points[i] - points[i - 1];
            push(ta::DelayStep{delta}, "delay to t=" + points[i].str());
            require(encodes_before(enc, problem, plan, i, run.last()), "encodes_before at t=" + points[i].str());
            for (auto& s : build_happening_segment(enc, plan, i, run.last(), order)) run.steps.push_back(std::move(s));
            require(encodes_after(enc, problem, plan, i, run.last()), "encodes_after at t=" + points[i].str());
        }
    }
    push(enc.step(Role::E2M), "e2M");
    return run;
}

std::string timeline(const enc::EncodedNetwork& enc, const ta::Run& run)
{
    const auto marker = d_arb(enc.options.epsilon);
    std::ostringstream os;
    Rational elapsed;
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
        const auto& step = run.steps[k];
        os << k << '\t';
        if (const auto* d = std::get_if<ta::DelayStep>(&step.label)) {
            elapsed += d->delta;
            os << "delay " << d->delta;
        } else {
            os << step_name(enc, std::get<ta::InternalStep>(step.label));
        }
        os << "\tmodel " << elapsed;
        if (elapsed >= marker) os << "\tplan " << (elapsed - marker);
        os << '\n';
    }
    return os.str();
}

} // namespace tpta::wit
