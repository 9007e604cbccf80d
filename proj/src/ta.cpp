#include "tpta/ta.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace tpta::ta {

std::string_view rel_symbol(Rel rel)
{
    switch (rel) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
    }
    return "?";
}

Rel parse_rel(std::string_view text)
{
    if (text == "<") return Rel::Lt;
    if (text == "<=") return Rel::Le;
    if (text == "=" || text == "==") return Rel::Eq;
    if (text == ">=") return Rel::Ge;
    if (text == ">") return Rel::Gt;
    throw std::invalid_argument("unknown relation '" + std::string(text) + "'");
}

bool compare(const Rational& lhs, Rel rel, const Rational& rhs)
{
    switch (rel) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Eq: return lhs == rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Gt: return lhs > rhs;
    }
    return false;
}

std::string_view op_symbol(ArithOp op)
{
    switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    }
    return "?";
}

ArithOp parse_op(std::string_view text)
{
    if (text == "+") return ArithOp::Add;
    if (text == "-") return ArithOp::Sub;
    if (text == "*") return ArithOp::Mul;
    if (text == "/") return ArithOp::Div;
    throw std::invalid_argument("unknown operator '" + std::string(text) + "'");
}

Expr Expr::binary(ArithOp op, Expr lhs, Expr rhs)
{
    return Expr(Bin{op, std::make_shared<const Expr>(std::move(lhs)), std::make_shared<const Expr>(std::move(rhs))});
}

Expr operator+(Expr lhs, Expr rhs) { return Expr::binary(ArithOp::Add, std::move(lhs), std::move(rhs)); }
Expr operator-(Expr lhs, Expr rhs) { return Expr::binary(ArithOp::Sub, std::move(lhs), std::move(rhs)); }

BExpr BExpr::conj(BExpr lhs, BExpr rhs)
{
    return BExpr(And{std::make_shared<const BExpr>(std::move(lhs)), std::make_shared<const BExpr>(std::move(rhs))});
}

BExpr BExpr::conj(std::vector<BExpr> parts)
{
    if (parts.empty()) return truth();
    BExpr acc = std::move(parts.back());
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(std::move(parts[i]), std::move(acc));
    return acc;
}

std::vector<BExpr> BExpr::conjuncts() const
{
    std::vector<BExpr> out;
    std::vector<const BExpr*> stack{this};
    while (!stack.empty()) {
        const BExpr* b = stack.back();
        stack.pop_back();
        if (std::holds_alternative<True>(b->node())) continue;
        if (const auto* a = std::get_if<And>(&b->node())) {
            stack.push_back(a->rhs.get());
            stack.push_back(a->lhs.get());
        } else {
            out.push_back(*b);
        }
    }
    return out;
}

bool Automaton::is_urgent(std::size_t location) const
{
    return std::find(urgent.begin(), urgent.end(), location) != urgent.end();
}

std::optional<std::size_t> Automaton::find_location(std::string_view name) const
{
    for (std::size_t i = 0; i < locations.size(); ++i)
        if (locations[i] == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> Network::find_var(std::string_view name) const
{
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> Network::find_clock(std::string_view name) const
{
    for (std::size_t i = 0; i < clocks.size(); ++i)
        if (clocks[i] == name) return i;
    return std::nullopt;
}

namespace {

void check_expr(const Network& net, const Expr& e, const std::string& where)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Var>) {
                if (n.id >= net.vars.size()) throw NetworkError(where + ": unresolved variable");
            } else if constexpr (std::is_same_v<T, Expr::Bin>) {
                check_expr(net, *n.lhs, where);
                check_expr(net, *n.rhs, where);
            }
        },
        e.node());
}

void check_bexpr(const Network& net, const BExpr& b, const std::string& where)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BExpr::Cmp>) {
                check_expr(net, n.lhs, where);
                check_expr(net, n.rhs, where);
            } else if constexpr (std::is_same_v<T, BExpr::And>) {
                check_bexpr(net, *n.lhs, where);
                check_bexpr(net, *n.rhs, where);
            }
        },
        b.node());
}

} // namespace

void Network::check() const
{
    std::unordered_set<std::string> seen;
    for (const auto& v : vars) {
        if (!seen.insert(v.name).second) throw NetworkError("duplicate variable '" + v.name + "'");
        if (v.lo > v.hi) throw NetworkError("variable '" + v.name + "' has empty domain");
        if (v.init < v.lo || v.init > v.hi) throw NetworkError("variable '" + v.name + "' initial value out of bounds");
    }
    seen.clear();
    for (const auto& c : clocks)
        if (!seen.insert(c).second) throw NetworkError("duplicate clock '" + c + "'");

    for (std::size_t i = 0; i < automata.size(); ++i) {
        const auto& a = automata[i];
        const std::string where = "automaton " + std::to_string(i) + " (" + a.name + ")";
        if (a.initial >= a.locations.size()) throw NetworkError(where + ": initial location out of range");
        for (auto u : a.urgent)
            if (u >= a.locations.size()) throw NetworkError(where + ": urgent location out of range");
        for (std::size_t k = 0; k < a.transitions.size(); ++k) {
            const auto& t = a.transitions[k];
            const std::string tw = where + " transition " + std::to_string(k);
            if (t.from >= a.locations.size() || t.to >= a.locations.size())
                throw NetworkError(tw + ": endpoint out of range");
            check_bexpr(*this, t.cond, tw);
            for (const auto& g : t.guard)
                if (g.clock >= clocks.size()) throw NetworkError(tw + ": unresolved clock in guard");
            std::unordered_set<std::size_t> updated;
            for (const auto& u : t.updates) {
                if (u.var >= vars.size()) throw NetworkError(tw + ": unresolved update target");
                if (!updated.insert(u.var).second)
                    throw NetworkError(tw + ": variable '" + vars[u.var].name + "' updated twice");
                check_expr(*this, u.expr, tw);
            }
            for (auto r : t.resets)
                if (r >= clocks.size()) throw NetworkError(tw + ": unresolved reset clock");
        }
    }
}

Configuration initial_configuration(const Network& net)
{
    Configuration q;
    q.locations.reserve(net.automata.size());
    for (const auto& a : net.automata) q.locations.push_back(a.initial);
    q.vars.reserve(net.vars.size());
    for (const auto& v : net.vars) q.vars.push_back(v.init);
    q.clocks.assign(net.clocks.size(), Rational(0));
    return q;
}

Rational eval(const std::vector<std::int64_t>& vars, const Expr& e)
{
    return std::visit(
        [&](const auto& n) -> Rational {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Var>) {
                if (n.id >= vars.size()) throw EvalError("unbound variable #" + std::to_string(n.id));
                return Rational(vars[n.id]);
            } else if constexpr (std::is_same_v<T, Expr::Const>) {
                return n.value;
            } else {
                const Rational l = eval(vars, *n.lhs);
                const Rational r = eval(vars, *n.rhs);
                switch (n.op) {
                case ArithOp::Add: return l + r;
                case ArithOp::Sub: return l - r;
                case ArithOp::Mul: return l * r;
                case ArithOp::Div:
                    if (r.is_zero()) throw EvalError("division by zero");
                    return l / r;
                }
                throw EvalError("unknown operator");
            }
        },
        e.node());
}

bool bval(const std::vector<std::int64_t>& vars, const BExpr& b)
{
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BExpr::True>) {
                return true;
            } else if constexpr (std::is_same_v<T, BExpr::False>) {
                return false;
            } else if constexpr (std::is_same_v<T, BExpr::Cmp>) {
                return compare(eval(vars, n.lhs), n.rel, eval(vars, n.rhs));
            } else {
                return bval(vars, *n.lhs) && bval(vars, *n.rhs);
            }
        },
        b.node());
}

bool ccval(const std::vector<Rational>& clocks, const std::vector<ClockConstraint>& guard)
{
    for (const auto& g : guard) {
        if (g.clock >= clocks.size()) throw EvalError("unbound clock #" + std::to_string(g.clock));
        if (!compare(clocks[g.clock], g.rel, g.bound)) return false;
    }
    return true;
}

std::string_view step_error_name(StepErrorKind kind)
{
    switch (kind) {
    case StepErrorKind::UrgentLocationBlocksDelay: return "UrgentLocationBlocksDelay";
    case StepErrorKind::NegativeDelay: return "NegativeDelay";
    case StepErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case StepErrorKind::LocationMismatch: return "LocationMismatch";
    case StepErrorKind::ConditionFalse: return "ConditionFalse";
    case StepErrorKind::GuardFalse: return "GuardFalse";
    case StepErrorKind::EvaluationFailed: return "EvaluationFailed";
    case StepErrorKind::NonIntegerUpdate: return "NonIntegerUpdate";
    case StepErrorKind::OutOfBounds: return "OutOfBounds";
    }
    return "Unknown";
}

std::string StepError::describe() const
{
    return std::string(step_error_name(kind)) + " (automaton " + std::to_string(automaton) + "): " + detail;
}

StepResult delay(const Network& net, const Configuration& q, const Rational& delta)
{
    if (delta.sign() < 0) return StepError{StepErrorKind::NegativeDelay, 0, "delay " + delta.str()};
    if (delta.sign() > 0) {
        for (std::size_t i = 0; i < net.automata.size(); ++i) {
            const auto& a = net.automata[i];
            if (a.is_urgent(q.locations.at(i)))
                return StepError{StepErrorKind::UrgentLocationBlocksDelay, i,
                                 "location " + a.locations[q.locations[i]] + " is urgent"};
        }
    }
    Configuration next = q;
    for (auto& c : next.clocks) c += delta;
    return next;
}

namespace {

// The first conjunct of `b` that evaluates to false, rendered for diagnostics.
std::string failing_conjunct(const Network& net, const std::vector<std::int64_t>& vars, const BExpr& b)
{
    for (const auto& c : b.conjuncts()) {
        if (!bval(vars, c)) {
            if (const auto* cmp = std::get_if<BExpr::Cmp>(&c.node())) {
                std::ostringstream os;
                auto render = [&](const Expr& e) {
                    if (const auto* v = std::get_if<Expr::Var>(&e.node())) return net.vars.at(v->id).name;
                    if (const auto* k = std::get_if<Expr::Const>(&e.node())) return k->value.str();
                    return std::string("<expr>");
                };
                os << render(cmp->lhs) << ' ' << rel_symbol(cmp->rel) << ' ' << render(cmp->rhs);
                return os.str();
            }
            return "false";
        }
    }
    return "false";
}

} // namespace

StepResult internal(const Network& net, const Configuration& q, std::size_t automaton, std::size_t transition)
{
    if (automaton >= net.automata.size())
        return StepError{StepErrorKind::IndexOutOfRange, automaton, "no such automaton"};
    const auto& a = net.automata[automaton];
    if (transition >= a.transitions.size())
        return StepError{StepErrorKind::IndexOutOfRange, automaton, "no transition " + std::to_string(transition)};
    const auto& t = a.transitions[transition];
    const std::string name = t.label.empty() ? "#" + std::to_string(transition) : t.label;

    if (q.locations.at(automaton) != t.from)
        return StepError{StepErrorKind::LocationMismatch, automaton,
                         name + " leaves " + a.locations[t.from] + " but automaton is in "
                             + a.locations[q.locations[automaton]]};
    try {
        if (!bval(q.vars, t.cond))
            return StepError{StepErrorKind::ConditionFalse, automaton,
                             name + " condition fails at " + failing_conjunct(net, q.vars, t.cond)};
        for (const auto& g : t.guard) {
            if (!ccval(q.clocks, {g}))
                return StepError{StepErrorKind::GuardFalse, automaton,
                                 name + " guard fails at " + net.clocks[g.clock] + " " + std::string(rel_symbol(g.rel))
                                     + " " + g.bound.str() + " (clock is " + q.clocks[g.clock].str() + ")"};
        }
    } catch (const EvalError& e) {
        return StepError{StepErrorKind::EvaluationFailed, automaton, name + ": " + e.what()};
    }

    Configuration next = q;
    next.locations[automaton] = t.to;
    for (const auto& u : t.updates) {
        Rational value;
        try {
            value = eval(q.vars, u.expr);
        } catch (const EvalError& e) {
            return StepError{StepErrorKind::EvaluationFailed, automaton, name + ": " + e.what()};
        }
        const auto& decl = net.vars.at(u.var);
        if (!value.is_integer())
            return StepError{StepErrorKind::NonIntegerUpdate, automaton,
                             name + " assigns " + value.str() + " to " + decl.name};
        const auto iv = value.to_int64();
        if (iv < decl.lo || iv > decl.hi)
            return StepError{StepErrorKind::OutOfBounds, automaton,
                             name + " assigns " + value.str() + " to " + decl.name + " outside ["
                                 + std::to_string(decl.lo) + ", " + std::to_string(decl.hi) + "]"};
        next.vars[u.var] = iv;
    }
    for (auto r : t.resets) next.clocks.at(r) = Rational(0);
    return next;
}

std::size_t Run::internal_count() const
{
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const RunStep& s) {
        return std::holds_alternative<InternalStep>(s.label);
    }));
}

StepResult apply(const Network& net, const Configuration& q, const StepLabel& label)
{
    if (const auto* d = std::get_if<DelayStep>(&label)) return delay(net, q, d->delta);
    const auto& i = std::get<InternalStep>(label);
    return internal(net, q, i.automaton, i.transition);
}

namespace {

bool well_formed(const Network& net, const Configuration& q)
{
    if (q.locations.size() != net.automata.size() || q.vars.size() != net.vars.size()
        || q.clocks.size() != net.clocks.size())
        return false;
    for (std::size_t i = 0; i < q.locations.size(); ++i)
        if (q.locations[i] >= net.automata[i].locations.size()) return false;
    return std::all_of(q.clocks.begin(), q.clocks.end(), [](const Rational& c) { return c.sign() >= 0; });
}

} // namespace

RunCheck run_check(const Network& net, const Run& run)
{
    if (!well_formed(net, run.initial)) return RunCheck{false, std::nullopt, "initial configuration is malformed"};
    Configuration current = run.initial;
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
        auto next = apply(net, current, run.steps[k].label);
        if (!next) return RunCheck{false, k, "step " + std::to_string(k) + ": " + next.error().describe()};
        if (next.config() != run.steps[k].after)
            return RunCheck{false, k,
                            "step " + std::to_string(k) + ": recorded configuration differs from replay; expected "
                                + describe(net, next.config()) + ", recorded " + describe(net, run.steps[k].after)};
        current = std::move(next).config();
    }
    return RunCheck{};
}

Replay replay_labels(const Network& net, const Configuration& start, const std::vector<StepLabel>& labels)
{
    Run run{start, {}};
    Configuration current = start;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        auto next = apply(net, current, labels[k]);
        if (!next) return Replay{std::nullopt, k, next.error()};
        current = next.config();
        run.steps.push_back(RunStep{labels[k], std::move(next).config()});
    }
    return Replay{std::move(run), std::nullopt, std::nullopt};
}

bool ef_goal(const Run& run, const ConfigPredicate& pred)
{
    if (pred(run.initial)) return true;
    return std::any_of(run.steps.begin(), run.steps.end(), [&](const RunStep& s) { return pred(s.after); });
}

std::string describe(const Network& net, const Configuration& q)
{
    std::ostringstream os;
    os << "L=[";
    for (std::size_t i = 0; i < q.locations.size(); ++i) {
        if (i) os << ", ";
        if (i < net.automata.size() && q.locations[i] < net.automata[i].locations.size())
            os << net.automata[i].locations[q.locations[i]];
        else
            os << '#' << q.locations[i];
    }
    os << "] v={";
    for (std::size_t i = 0; i < q.vars.size(); ++i) {
        if (i) os << ", ";
        os << (i < net.vars.size() ? net.vars[i].name : "#" + std::to_string(i)) << ':' << q.vars[i];
    }
    os << "} c={";
    for (std::size_t i = 0; i < q.clocks.size(); ++i) {
        if (i) os << ", ";
        os << (i < net.clocks.size() ? net.clocks[i] : "#" + std::to_string(i)) << ':' << q.clocks[i];
    }
    os << '}';
    return os.str();
}

} // namespace tpta::ta
