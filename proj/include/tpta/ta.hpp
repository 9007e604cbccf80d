#pragma once

#include "tpta/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tpta::ta {

enum class Rel { Lt, Le, Eq, Ge, Gt };

[[nodiscard]] std::string_view rel_symbol(Rel rel);
/// Accepts "<", "<=", "=", "==", ">=", ">"; throws std::invalid_argument.
[[nodiscard]] Rel parse_rel(std::string_view text);
[[nodiscard]] bool compare(const Rational& lhs, Rel rel, const Rational& rhs);

enum class ArithOp { Add, Sub, Mul, Div };

[[nodiscard]] std::string_view op_symbol(ArithOp op);
[[nodiscard]] ArithOp parse_op(std::string_view text);

/// Arithmetic expression over integer variables (referenced by index).
class Expr {
public:
    struct Var { std::size_t id; };
    struct Const { Rational value; };
    struct Bin {
        ArithOp op;
        std::shared_ptr<const Expr> lhs;
        std::shared_ptr<const Expr> rhs;
    };
    using Node = std::variant<Var, Const, Bin>;

    explicit Expr(Node node) : node_(std::move(node)) {}

    static Expr var(std::size_t id) { return Expr(Var{id}); }
    static Expr constant(Rational value) { return Expr(Const{std::move(value)}); }
    static Expr binary(ArithOp op, Expr lhs, Expr rhs);

    [[nodiscard]] const Node& node() const { return node_; }

private:
    Node node_;
};

Expr operator+(Expr lhs, Expr rhs);
Expr operator-(Expr lhs, Expr rhs);

/// Boolean condition on variables. `True` stands for the empty conjunction.
class BExpr {
public:
    struct True {};
    struct False {};
    struct Cmp {
        Rel rel;
        Expr lhs;
        Expr rhs;
    };
    struct And {
        std::shared_ptr<const BExpr> lhs;
        std::shared_ptr<const BExpr> rhs;
    };
    using Node = std::variant<True, False, Cmp, And>;

    BExpr() : node_(True{}) {}
    explicit BExpr(Node node) : node_(std::move(node)) {}

    static BExpr truth() { return BExpr(True{}); }
    static BExpr falsity() { return BExpr(False{}); }
    static BExpr cmp(Rel rel, Expr lhs, Expr rhs) { return BExpr(Cmp{rel, std::move(lhs), std::move(rhs)}); }
    static BExpr conj(BExpr lhs, BExpr rhs);
    /// Right-nested conjunction; True when `parts` is empty.
    static BExpr conj(std::vector<BExpr> parts);

    [[nodiscard]] const Node& node() const { return node_; }

    /// Flattened list of conjuncts (True literals dropped).
    [[nodiscard]] std::vector<BExpr> conjuncts() const;

private:
    Node node_;
};

struct ClockConstraint {
    std::size_t clock = 0;
    Rel rel = Rel::Ge;
    Rational bound;

    friend bool operator==(const ClockConstraint&, const ClockConstraint&) = default;
};

struct Update {
    std::size_t var = 0;
    Expr expr;
};

struct Transition {
    std::size_t from = 0;
    BExpr cond;
    std::vector<ClockConstraint> guard;
    std::vector<Update> updates;
    std::vector<std::size_t> resets;
    std::size_t to = 0;
    std::string label;
};

struct Automaton {
    std::string name;
    std::vector<std::string> locations;
    std::size_t initial = 0;
    std::vector<std::size_t> urgent;
    std::vector<Transition> transitions;

    [[nodiscard]] bool is_urgent(std::size_t location) const;
    [[nodiscard]] std::optional<std::size_t> find_location(std::string_view name) const;
};

struct VarDecl {
    std::string name;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t init = 0;
};

class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Network {
    std::vector<Automaton> automata;
    std::vector<VarDecl> vars;
    std::vector<std::string> clocks;

    [[nodiscard]] std::optional<std::size_t> find_var(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> find_clock(std::string_view name) const;

    /// Every reference resolves, at most one update per variable per
    /// transition, initial values inside bounds. Throws NetworkError.
    void check() const;
};

struct Configuration {
    std::vector<std::size_t> locations;
    std::vector<std::int64_t> vars;
    std::vector<Rational> clocks;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Initial locations, declared initial values, all clocks at zero.
[[nodiscard]] Configuration initial_configuration(const Network& net);

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `vars` maps variable index to value. Throws EvalError on an unbound
/// variable or division by zero.
[[nodiscard]] Rational eval(const std::vector<std::int64_t>& vars, const Expr& e);
[[nodiscard]] bool bval(const std::vector<std::int64_t>& vars, const BExpr& b);
/// Throws EvalError on an unbound clock.
[[nodiscard]] bool ccval(const std::vector<Rational>& clocks, const std::vector<ClockConstraint>& guard);

enum class StepErrorKind {
    UrgentLocationBlocksDelay,
    NegativeDelay,
    IndexOutOfRange,
    LocationMismatch,
    ConditionFalse,
    GuardFalse,
    EvaluationFailed,
    NonIntegerUpdate,
    OutOfBounds,
};

[[nodiscard]] std::string_view step_error_name(StepErrorKind kind);

struct StepError {
    StepErrorKind kind;
    std::size_t automaton = 0;
    std::string detail;

    [[nodiscard]] std::string describe() const;
};

/// Either the successor configuration or the reason the step is impossible.
class StepResult {
public:
    StepResult(Configuration c) : value_(std::move(c)) {} // NOLINT(google-explicit-constructor)
    StepResult(StepError e) : value_(std::move(e)) {}     // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool ok() const { return std::holds_alternative<Configuration>(value_); }
    explicit operator bool() const { return ok(); }
    [[nodiscard]] const Configuration& config() const& { return std::get<Configuration>(value_); }
    [[nodiscard]] Configuration&& config() && { return std::get<Configuration>(std::move(value_)); }
    [[nodiscard]] const StepError& error() const { return std::get<StepError>(value_); }

private:
    std::variant<Configuration, StepError> value_;
};

/// Time elapse. δ > 0 is blocked when any automaton sits in an urgent
/// location; δ = 0 is always permitted.
[[nodiscard]] StepResult delay(const Network& net, const Configuration& q, const Rational& delta);

/// Takes transition `transition` of automaton `automaton`. Updates are
/// evaluated simultaneously against the pre-state.
[[nodiscard]] StepResult internal(const Network& net, const Configuration& q, std::size_t automaton,
                                  std::size_t transition);

struct DelayStep {
    Rational delta;
    friend bool operator==(const DelayStep&, const DelayStep&) = default;
};

struct InternalStep {
    std::size_t automaton = 0;
    std::size_t transition = 0;
    friend bool operator==(const InternalStep&, const InternalStep&) = default;
};

using StepLabel = std::variant<DelayStep, InternalStep>;

struct RunStep {
    StepLabel label;
    Configuration after;
};

struct Run {
    Configuration initial;
    std::vector<RunStep> steps;

    [[nodiscard]] const Configuration& last() const
    {
        return steps.empty() ? initial : steps.back().after;
    }
    [[nodiscard]] std::size_t internal_count() const;
};

[[nodiscard]] StepResult apply(const Network& net, const Configuration& q, const StepLabel& label);

struct RunCheck {
    bool accepted = true;
    std::optional<std::size_t> failed_step;
    std::string diagnostic;

    explicit operator bool() const { return accepted; }
};

/// Replays every label from `run.initial`; each recorded post-configuration
/// must be reproduced exactly.
[[nodiscard]] RunCheck run_check(const Network& net, const Run& run);

/// Rebuilds the post-configurations of a label sequence; fails on the first
/// impossible step.
struct Replay {
    std::optional<Run> run;
    std::optional<std::size_t> failed_step;
    std::optional<StepError> error;
};
[[nodiscard]] Replay replay_labels(const Network& net, const Configuration& start, const std::vector<StepLabel>& labels);

using ConfigPredicate = std::function<bool(const Configuration&)>;

/// True iff the initial or any post-step configuration satisfies `pred`.
[[nodiscard]] bool ef_goal(const Run& run, const ConfigPredicate& pred);

[[nodiscard]] std::string describe(const Network& net, const Configuration& q);

} // namespace tpta::ta
