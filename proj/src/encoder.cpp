#include "tpta/encoder.hpp"

namespace tpta::enc {

using ta::BExpr;
using ta::ClockConstraint;
using ta::Expr;
using ta::Rel;
using ta::Update;

std::string_view role_name(Role role)
{
    switch (role) {
    case Role::E1M: return "e1M";
    case Role::E2M: return "e2M";
    case Role::CLoop: return "c";
    case Role::Se: return "se";
    case Role::SePrime: return "se'";
    case Role::Ee: return "ee";
    case Role::EePrime: return "ee'";
    case Role::Ie: return "ie";
    }
    return "?";
}

namespace {

BExpr var_eq(std::size_t var, std::int64_t value)
{
    return BExpr::cmp(Rel::Eq, Expr::var(var), Expr::constant(Rational(value)));
}

Update bump(std::size_t var, std::int64_t by)
{
    auto rhs = Expr::constant(Rational(by < 0 ? -by : by));
    return Update{var, by < 0 ? Expr::var(var) - rhs : Expr::var(var) + rhs};
}

std::string label_of(Role role, const std::string& action)
{
    return std::string(role_name(role)) + "_" + action;
}

} // namespace

std::size_t EncodedNetwork::transition_index(Role role)
{
    switch (role) {
    case Role::E1M: return 0;
    case Role::E2M: return 1;
    case Role::CLoop: return 2;
    case Role::Se: return 0;
    case Role::SePrime: return 1;
    case Role::Ee: return 2;
    case Role::EePrime: return 3;
    case Role::Ie: return 4;
    }
    return 0;
}

ta::InternalStep EncodedNetwork::step(Role role, std::optional<std::size_t> action) const
{
    const bool main = role == Role::E1M || role == Role::E2M || role == Role::CLoop;
    if (main == action.has_value()) throw std::invalid_argument("role/action mismatch for " + std::string(role_name(role)));
    return ta::InternalStep{main ? main_automaton : automaton_of(*action), transition_index(role)};
}

TransitionLabel EncodedNetwork::label(std::size_t automaton, std::size_t transition) const
{
    static constexpr Role main_roles[] = {Role::E1M, Role::E2M, Role::CLoop};
    static constexpr Role action_roles[] = {Role::Se, Role::SePrime, Role::Ee, Role::EePrime, Role::Ie};
    if (automaton == main_automaton) return TransitionLabel{main_roles[transition % 3], std::nullopt};
    return TransitionLabel{action_roles[transition % 5], automaton - 1};
}

bool EncodedNetwork::accepting(const ta::Configuration& q) const
{
    return !q.locations.empty() && q.locations[main_automaton] == loc::goal_m;
}

VarTable encode_vars(const PlanningProblem& problem)
{
    VarTable t;
    std::size_t next = 0;
    for (const auto& p : problem.props) t.vp[p] = next++;
    for (const auto& p : problem.props) t.lp[p] = next++;
    t.aa = next++;
    t.ps = next++;
    return t;
}

ClockTable encode_clocks(const PlanningProblem& problem)
{
    ClockTable t;
    for (std::size_t a = 0; a < problem.actions.size(); ++a) {
        t.start.push_back(2 * a);
        t.end.push_back(2 * a + 1);
    }
    return t;
}

std::vector<ClockConstraint> mutex_guards(const PlanningProblem& problem, const ClockTable& clocks, std::size_t action,
                                          SnapKind kind, const EncodeOptions& options)
{
    std::vector<ClockConstraint> out;
    const auto& h = problem.actions.at(action).snap(kind);
    for (std::size_t b = 0; b < problem.actions.size(); ++b) {
        for (SnapKind k : {SnapKind::Start, SnapKind::End}) {
            if (b == action && (k == kind || options.exclude_all_own_clocks)) continue;
            if (!mutex(h, problem.actions[b].snap(k))) continue;
            const auto clock = clocks.of(b, k);
            out.push_back(ClockConstraint{clock, Rel::Gt, Rational(0)});
            if (options.epsilon.sign() > 0) out.push_back(ClockConstraint{clock, Rel::Ge, options.epsilon});
        }
    }
    return out;
}

std::vector<ClockConstraint> sat_dur_bounds(const ClockTable& clocks, std::size_t action, const DurativeAction& a)
{
    const auto c = clocks.start.at(action);
    return {
        ClockConstraint{c, a.lower.strict ? Rel::Gt : Rel::Ge, a.lower.value},
        ClockConstraint{c, a.upper.strict ? Rel::Lt : Rel::Le, a.upper.value},
    };
}

std::vector<Update> prop_effs(const VarTable& vars, const SnapAction& h)
{
    std::vector<Update> out;
    for (const auto& p : h.dels)
        if (!h.adds.contains(p)) out.push_back(Update{vars.vp.at(p), Expr::constant(Rational(0))});
    for (const auto& p : h.adds) out.push_back(Update{vars.vp.at(p), Expr::constant(Rational(1))});
    return out;
}

BExpr pre_sat(const VarTable& vars, const SnapAction& h)
{
    std::vector<BExpr> parts;
    for (const auto& p : h.pres) parts.push_back(var_eq(vars.vp.at(p), 1));
    return BExpr::conj(std::move(parts));
}

BExpr eff_sat_invs(const VarTable& vars, const SnapAction& h)
{
    std::vector<BExpr> parts;
    for (const auto& p : h.dels)
        if (!h.adds.contains(p)) parts.push_back(var_eq(vars.lp.at(p), 0));
    return BExpr::conj(std::move(parts));
}

ta::Automaton build_main_automaton(const PlanningProblem& problem, const VarTable& vars)
{
    ta::Automaton m;
    m.name = "main";
    m.locations = {"init_M", "plan_M", "goal_M"};
    m.initial = loc::init_m;
    m.urgent = {loc::init_m};

    ta::Transition e1;
    e1.from = loc::init_m;
    e1.to = loc::plan_m;
    e1.label = "e1M";
    e1.updates.push_back(Update{vars.ps, Expr::constant(Rational(1))});
    for (const auto& p : problem.props)
        if (problem.init.contains(p)) e1.updates.push_back(Update{vars.vp.at(p), Expr::constant(Rational(1))});

    ta::Transition e2;
    e2.from = loc::plan_m;
    e2.to = loc::goal_m;
    e2.label = "e2M";
    std::vector<BExpr> goal{var_eq(vars.aa, 0)};
    for (const auto& p : problem.props)
        if (problem.goal.contains(p)) goal.push_back(var_eq(vars.vp.at(p), 1));
    e2.cond = BExpr::conj(std::move(goal));
    e2.updates.push_back(Update{vars.ps, Expr::constant(Rational(2))});

    ta::Transition c;
    c.from = loc::goal_m;
    c.to = loc::goal_m;
    c.label = "c";

    m.transitions = {std::move(e1), std::move(e2), std::move(c)};
    return m;
}

ta::Automaton build_action_automaton(const PlanningProblem& problem, std::size_t action, const VarTable& vars,
                                     const ClockTable& clocks, const EncodeOptions& options)
{
    const auto& a = problem.actions.at(action);
    ta::Automaton out;
    out.name = a.name;
    out.locations = {a.name + ".inactive", a.name + ".starting", a.name + ".running", a.name + ".ending"};
    out.initial = loc::inactive;
    out.urgent = {loc::starting, loc::ending};

    auto with_ps = [&](const BExpr& b) {
        std::vector<BExpr> parts{var_eq(vars.ps, 1)};
        for (auto& c : b.conjuncts()) parts.push_back(std::move(c));
        return BExpr::conj(std::move(parts));
    };
    auto joined = [](std::vector<ClockConstraint> x, const std::vector<ClockConstraint>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    const auto cs = clocks.start.at(action);
    const auto ce = clocks.end.at(action);
    const auto end_guards = mutex_guards(problem, clocks, action, SnapKind::End, options);
    const auto start_guards = mutex_guards(problem, clocks, action, SnapKind::Start, options);
    const auto durs = sat_dur_bounds(clocks, action, a);

    ta::Transition se;
    se.from = loc::inactive;
    se.to = loc::starting;
    se.label = label_of(Role::Se, a.name);
    se.cond = with_ps(BExpr::conj(pre_sat(vars, a.start), eff_sat_invs(vars, a.start)));
    se.guard = start_guards;
    se.updates = prop_effs(vars, a.start);
    se.updates.push_back(bump(vars.aa, +1));
    se.resets = {cs};

    ta::Transition se2;
    se2.from = loc::starting;
    se2.to = loc::running;
    se2.label = label_of(Role::SePrime, a.name);
    std::vector<BExpr> inv;
    for (const auto& p : a.over_all) {
        inv.push_back(var_eq(vars.vp.at(p), 1));
        se2.updates.push_back(bump(vars.lp.at(p), +1));
    }
    se2.cond = with_ps(BExpr::conj(std::move(inv)));

    ta::Transition ee;
    ee.from = loc::running;
    ee.to = loc::ending;
    ee.label = label_of(Role::Ee, a.name);
    ee.cond = with_ps(BExpr::truth());
    ee.guard = joined(options.literal_ee_guard ? start_guards : end_guards, durs);
    for (const auto& p : a.over_all) ee.updates.push_back(bump(vars.lp.at(p), -1));
    ee.resets = {ce};

    ta::Transition ee2;
    ee2.from = loc::ending;
    ee2.to = loc::inactive;
    ee2.label = label_of(Role::EePrime, a.name);
    ee2.cond = with_ps(BExpr::conj(pre_sat(vars, a.end), eff_sat_invs(vars, a.end)));
    ee2.updates = prop_effs(vars, a.end);
    ee2.updates.push_back(bump(vars.aa, -1));

    ta::Transition ie;
    ie.from = loc::starting;
    ie.to = loc::ending;
    ie.label = label_of(Role::Ie, a.name);
    ie.cond = with_ps(BExpr::truth());
    ie.guard = joined(end_guards, durs);
    ie.resets = {ce};

    out.transitions = {std::move(se), std::move(se2), std::move(ee), std::move(ee2), std::move(ie)};
    return out;
}

EncodedNetwork encode(const PlanningProblem& problem, const EncodeOptions& options)
{
    problem.check();
    if (options.epsilon.sign() < 0) throw ModelError("epsilon must be non-negative");

    EncodedNetwork enc;
    enc.options = options;
    enc.vars = encode_vars(problem);
    enc.clocks = encode_clocks(problem);

    const auto n_actions = static_cast<std::int64_t>(problem.actions.size());
    auto& net = enc.network;
    net.vars.resize(2 * problem.props.size() + 2);
    for (const auto& p : problem.props) {
        net.vars[enc.vars.vp.at(p)] = ta::VarDecl{"vp." + p, 0, 1, 0};
        net.vars[enc.vars.lp.at(p)] = ta::VarDecl{"lp." + p, 0, n_actions, 0};
    }
    net.vars[enc.vars.aa] = ta::VarDecl{"aa", 0, n_actions, 0};
    net.vars[enc.vars.ps] = ta::VarDecl{"ps", 0, 2, 0};

    for (const auto& a : problem.actions) {
        net.clocks.push_back("ca." + a.name + ".S");
        net.clocks.push_back("ca." + a.name + ".E");
        enc.action_order.push_back(a.name);
    }

    net.automata.push_back(build_main_automaton(problem, enc.vars));
    for (std::size_t a = 0; a < problem.actions.size(); ++a)
        net.automata.push_back(build_action_automaton(problem, a, enc.vars, enc.clocks, options));

    net.check();
    return enc;
}

} // namespace tpta::enc
