#pragma once

#include "tpta/io.hpp"
#include "tpta/planning.hpp"

#include <string>

namespace tpta::testing {

inline std::string fixture_path(const std::string& name) { return std::string(TPTA_FIXTURES) + "/" + name; }

inline PlanningProblem rooms() { return io::parse_problem(io::read_file(fixture_path("rooms.json"))); }

inline Plan fixture_plan(const PlanningProblem& problem, const std::string& name)
{
    return resolve_plan(problem, io::parse_plan(io::read_file(fixture_path(name))));
}

inline std::size_t action_index(const PlanningProblem& problem, std::string_view name)
{
    return problem.find_action(name).value();
}

inline SnapAction snap(PropSet pres, PropSet adds, PropSet dels)
{
    return SnapAction{std::move(pres), std::move(adds), std::move(dels)};
}

inline DurativeAction action(std::string name, SnapAction start, SnapAction end, PropSet over_all, Rational lo,
                             Rational hi, bool lo_strict = false, bool hi_strict = false)
{
    DurativeAction a;
    a.name = std::move(name);
    a.start = std::move(start);
    a.end = std::move(end);
    a.over_all = std::move(over_all);
    a.lower = {std::move(lo), lo_strict};
    a.upper = {std::move(hi), hi_strict};
    return a;
}

} // namespace tpta::testing
