#pragma once

#include "tpta/planning.hpp"
#include "tpta/ta.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tpta::enc {

/// Which edge of the encoding a transition plays.
enum class Role { E1M, E2M, CLoop, Se, SePrime, Ee, EePrime, Ie };

[[nodiscard]] std::string_view role_name(Role role);

struct VarTable {
    std::map<Proposition, std::size_t> vp;
    std::map<Proposition, std::size_t> lp;
    std::size_t aa = 0;
    std::size_t ps = 0;
};

/// Clock ids indexed by action position.
struct ClockTable {
    std::vector<std::size_t> start;
    std::vector<std::size_t> end;

    [[nodiscard]] std::size_t of(std::size_t action, SnapKind kind) const
    {
        return kind == SnapKind::Start ? start.at(action) : end.at(action);
    }
};

struct EncodeOptions {
    Rational epsilon;
    /// Use mutex_guards of the start snap on ee, as the text literally reads.
    bool literal_ee_guard = false;
    /// Leave out every clock of the acting action, not just the acting snap's.
    bool exclude_all_own_clocks = false;
};

struct TransitionLabel {
    Role role = Role::E1M;
    std::optional<std::size_t> action;
};

namespace loc {
inline constexpr std::size_t init_m = 0;
inline constexpr std::size_t plan_m = 1;
inline constexpr std::size_t goal_m = 2;
inline constexpr std::size_t inactive = 0;
inline constexpr std::size_t starting = 1;
inline constexpr std::size_t running = 2;
inline constexpr std::size_t ending = 3;
} // namespace loc

struct EncodedNetwork {
    ta::Network network;
    VarTable vars;
    ClockTable clocks;
    std::vector<std::string> action_order;
    EncodeOptions options;

    static constexpr std::size_t main_automaton = 0;

    [[nodiscard]] static std::size_t automaton_of(std::size_t action) { return action + 1; }
    /// Transition index of `role` inside its automaton.
    [[nodiscard]] static std::size_t transition_index(Role role);
    [[nodiscard]] ta::InternalStep step(Role role, std::optional<std::size_t> action = std::nullopt) const;
    [[nodiscard]] TransitionLabel label(std::size_t automaton, std::size_t transition) const;

    [[nodiscard]] ta::Configuration initial() const { return ta::initial_configuration(network); }
    /// L[0] = goal_M.
    [[nodiscard]] bool accepting(const ta::Configuration& q) const;
};

[[nodiscard]] VarTable encode_vars(const PlanningProblem& problem);
[[nodiscard]] ClockTable encode_clocks(const PlanningProblem& problem);

[[nodiscard]] std::vector<ta::ClockConstraint> mutex_guards(const PlanningProblem& problem, const ClockTable& clocks,
                                                            std::size_t action, SnapKind kind,
                                                            const EncodeOptions& options);
[[nodiscard]] std::vector<ta::ClockConstraint> sat_dur_bounds(const ClockTable& clocks, std::size_t action,
                                                              const DurativeAction& a);
[[nodiscard]] std::vector<ta::Update> prop_effs(const VarTable& vars, const SnapAction& h);
[[nodiscard]] ta::BExpr pre_sat(const VarTable& vars, const SnapAction& h);
[[nodiscard]] ta::BExpr eff_sat_invs(const VarTable& vars, const SnapAction& h);

[[nodiscard]] ta::Automaton build_main_automaton(const PlanningProblem& problem, const VarTable& vars);
[[nodiscard]] ta::Automaton build_action_automaton(const PlanningProblem& problem, std::size_t action,
                                                   const VarTable& vars, const ClockTable& clocks,
                                                   const EncodeOptions& options);

/// Checks the problem first; throws ResolutionError or ModelError.
[[nodiscard]] EncodedNetwork encode(const PlanningProblem& problem, const EncodeOptions& options = {});

} // namespace tpta::enc
