#pragma once

#include "tpta/encoder.hpp"
#include "tpta/planning.hpp"
#include "tpta/ta.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace tpta::wit {

/// Raised when a witness cannot be built; carries the failing clause or step.
class WitnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Action indices grouped by what they do at one happening point, each list in
/// declaration order.
struct ScheduleAt {
    std::vector<std::size_t> ending;
    std::vector<std::size_t> instantaneous;
    std::vector<std::size_t> starting;
};

/// Throws std::invalid_argument if `t` is not a happening point of `plan`.
[[nodiscard]] ScheduleAt classify_at(const Plan& plan, const Rational& t);

/// Before compares with `<`, After with `<=`.
enum class Side { Before, After };

[[nodiscard]] bool running_at(const Plan& plan, std::size_t action, const Rational& t, Side side);

/// The marker for a snap that never happened is `t + marker`.
[[nodiscard]] Rational time_since_at(const Plan& plan, std::size_t action, SnapKind kind, const Rational& t, Side side,
                                     const Rational& marker);

/// The positive constant standing for "never executed": max(1, epsilon).
[[nodiscard]] Rational d_arb(const Rational& epsilon);

/// Encoded view of a plan at happening point `i`.
struct EncState {
    const Plan* plan = nullptr;
    std::vector<Rational> points;
    std::size_t i = 0;
    Rational marker;

    EncState(const Plan& p, std::size_t index, const Rational& epsilon);

    [[nodiscard]] const Rational& t() const { return points.at(i); }
    [[nodiscard]] bool running_before(std::size_t a) const { return running_at(*plan, a, t(), Side::Before); }
    [[nodiscard]] bool running_after(std::size_t a) const { return running_at(*plan, a, t(), Side::After); }
    [[nodiscard]] Rational time_since_before(std::size_t a, SnapKind k) const
    {
        return time_since_at(*plan, a, k, t(), Side::Before, marker);
    }
    [[nodiscard]] Rational time_since_after(std::size_t a, SnapKind k) const
    {
        return time_since_at(*plan, a, k, t(), Side::After, marker);
    }
};

/// Empty `failure` means the predicate holds.
struct EncodesCheck {
    std::string failure;
    explicit operator bool() const { return failure.empty(); }
};

[[nodiscard]] EncodesCheck encodes_before(const enc::EncodedNetwork& enc, const PlanningProblem& problem,
                                          const Plan& plan, std::size_t i, const ta::Configuration& q);
[[nodiscard]] EncodesCheck encodes_after(const enc::EncodedNetwork& enc, const PlanningProblem& problem,
                                         const Plan& plan, std::size_t i, const ta::Configuration& q);

/// Proof: ee, instants, ee', se, se'. Figure: ee, instants, se, ee', se'.
enum class SegmentOrder { Proof, Figure };

struct SegmentEdge {
    enc::Role role;
    std::size_t action;
};

/// Edge order at happening point `i`. With Proof: ee of ending actions, then
/// se/ie/ee' of each instantaneous action, ee' of ending actions, se of
/// starting actions, se' of starting actions.
[[nodiscard]] std::vector<SegmentEdge> segment_order(const Plan& plan, std::size_t i,
                                                     SegmentOrder order = SegmentOrder::Proof);

/// Applies segment_order from `q_in`; throws WitnessError on the first failing edge.
[[nodiscard]] std::vector<ta::RunStep> build_happening_segment(const enc::EncodedNetwork& enc, const Plan& plan,
                                                               std::size_t i, const ta::Configuration& q_in,
                                                               SegmentOrder order = SegmentOrder::Proof);

/// Requires a valid plan without self overlap under the encoder's epsilon.
/// encodes_before/after are checked around every segment.
[[nodiscard]] ta::Run build_witness(const enc::EncodedNetwork& enc, const PlanningProblem& problem, const Plan& plan,
                                    SegmentOrder order = SegmentOrder::Proof);

/// One line per step with edge names and plan times.
[[nodiscard]] std::string timeline(const enc::EncodedNetwork& enc, const ta::Run& run);

/// Name such as "se_a" or "e1M" for an internal step.
[[nodiscard]] std::string step_name(const enc::EncodedNetwork& enc, const ta::InternalStep& step);

} // namespace tpta::wit
