#include "tpta/encoder.hpp"
#include "tpta/explorer.hpp"
#include "tpta/io.hpp"
#include "tpta/witness.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace tpta;

namespace {

// int, str ("3/2", "0.5") or fractions.Fraction
Rational to_rational(const py::handle& x)
{
    return Rational::parse(std::string(py::str(x)));
}

py::object to_fraction(const Rational& r)
{
    static const py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(r.str());
}

struct PyProblem {
    PlanningProblem problem;
};

struct PyPlan {
    std::shared_ptr<const PyProblem> problem;
    Plan plan;
};

struct PyNetwork {
    std::shared_ptr<const PyProblem> problem;
    enc::EncodedNetwork enc;
};

struct PyRun {
    std::shared_ptr<const PyNetwork> network;
    ta::Run run;
};

std::shared_ptr<PyProblem> problem_of(const PlanningProblem& p)
{
    return std::make_shared<PyProblem>(PyProblem{p});
}

py::dict verdict_dict(const Verdict& v)
{
    py::list diags;
    for (const auto& d : v.diagnostics) {
        py::dict x;
        x["clause"] = static_cast<int>(d.clause);
        x["clause_name"] = std::string(clause_name(d.clause));
        x["time"] = d.time ? to_fraction(*d.time) : py::none();
        x["step"] = d.step ? py::cast(*d.step) : py::none();
        x["message"] = d.message;
        diags.append(x);
    }
    py::dict out;
    out["valid"] = v.valid;
    out["no_self_overlap"] = v.no_self_overlap;
    out["diagnostics"] = diags;
    return out;
}

std::vector<std::string> step_names(const enc::EncodedNetwork& e, const ta::Run& run)
{
    std::vector<std::string> out;
    for (const auto& s : run.steps) {
        if (const auto* st = std::get_if<ta::InternalStep>(&s.label))
            out.push_back(wit::step_name(e, *st));
        else
            out.push_back("delay " + std::get<ta::DelayStep>(s.label).delta.str());
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_tpta, m)
{
    m.doc() = "Temporal plan validation, timed automata encoding and witness runs";

    py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_LookupError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<wit::WitnessError>(m, "WitnessError", PyExc_RuntimeError);

    py::class_<PyProblem, std::shared_ptr<PyProblem>>(m, "Problem")
        .def_static("from_json", [](const std::string& text) { return problem_of(io::parse_problem(text)); })
        .def_static("load", [](const std::string& path) { return problem_of(io::parse_problem(io::read_file(path))); })
        .def("to_json", [](const PyProblem& p) { return io::problem_to_json(p.problem).dump(2); })
        .def_property_readonly("props", [](const PyProblem& p) { return p.problem.props; })
        .def_property_readonly("actions",
                               [](const PyProblem& p) {
                                   std::vector<std::string> names;
                                   for (const auto& a : p.problem.actions) names.push_back(a.name);
                                   return names;
                               })
        .def_property_readonly("init", [](const PyProblem& p) { return p.problem.init; })
        .def_property_readonly("goal", [](const PyProblem& p) { return p.problem.goal; });

    py::class_<PyPlan>(m, "Plan")
        .def("__len__", [](const PyPlan& p) { return p.plan.steps.size(); })
        .def("to_text", [](const PyPlan& p) { return io::plan_to_text(p.problem->problem, p.plan); })
        .def_property_readonly("steps", [](const PyPlan& p) {
            py::list out;
            for (const auto& s : p.plan.steps)
                out.append(py::make_tuple(p.problem->problem.actions[s.action].name, to_fraction(s.start),
                                          to_fraction(s.duration)));
            return out;
        });

    m.def(
        "parse_plan",
        [](std::shared_ptr<PyProblem> problem, const std::string& text) {
            auto plan = resolve_plan(problem->problem, io::parse_plan(text));
            return PyPlan{std::move(problem), std::move(plan)};
        },
        py::arg("problem"), py::arg("text"));

    m.def(
        "validate",
        [](const PyPlan& plan, const py::object& epsilon) {
            return verdict_dict(validate_plan(plan.problem->problem, plan.plan, to_rational(epsilon)));
        },
        py::arg("plan"), py::arg("epsilon") = 0);

    py::class_<PyNetwork, std::shared_ptr<PyNetwork>>(m, "Network")
        .def(
            "export", [](const PyNetwork& n, const std::string& format) { return io::export_network(n.enc, io::parse_format(format)); },
            py::arg("format") = "internal")
        .def_property_readonly("sizes", [](const PyNetwork& n) {
            std::size_t locs = 0, trans = 0;
            for (const auto& a : n.enc.network.automata) {
                locs += a.locations.size();
                trans += a.transitions.size();
            }
            py::dict d;
            d["automata"] = n.enc.network.automata.size();
            d["vars"] = n.enc.network.vars.size();
            d["clocks"] = n.enc.network.clocks.size();
            d["locations"] = locs;
            d["transitions"] = trans;
            return d;
        });

    m.def(
        "encode",
        [](std::shared_ptr<PyProblem> problem, const py::object& epsilon, bool literal_ee_guard,
           bool exclude_all_own_clocks) {
            enc::EncodeOptions opts{to_rational(epsilon), literal_ee_guard, exclude_all_own_clocks};
            auto e = enc::encode(problem->problem, opts);
            return std::make_shared<PyNetwork>(PyNetwork{std::move(problem), std::move(e)});
        },
        py::arg("problem"), py::arg("epsilon") = 0, py::arg("literal_ee_guard") = false,
        py::arg("exclude_all_own_clocks") = false);

    py::class_<PyRun>(m, "Run")
        .def("__len__", [](const PyRun& r) { return r.run.steps.size(); })
        .def("to_json", [](const PyRun& r) { return io::run_to_json(r.network->enc.network, r.run); })
        .def("timeline", [](const PyRun& r) { return wit::timeline(r.network->enc, r.run); })
        .def_property_readonly("labels", [](const PyRun& r) { return step_names(r.network->enc, r.run); });

    m.def(
        "load_run",
        [](std::shared_ptr<PyNetwork> network, const std::string& text) {
            auto run = io::run_from_json(network->enc.network, text);
            return PyRun{std::move(network), std::move(run)};
        },
        py::arg("network"), py::arg("text"));

    m.def(
        "build_witness",
        [](std::shared_ptr<PyNetwork> network, const PyPlan& plan, const std::string& order) {
            if (order != "proof" && order != "figure") throw py::value_error("order must be 'proof' or 'figure'");
            auto run = wit::build_witness(network->enc, network->problem->problem, plan.plan,
                                          order == "figure" ? wit::SegmentOrder::Figure : wit::SegmentOrder::Proof);
            return PyRun{std::move(network), std::move(run)};
        },
        py::arg("network"), py::arg("plan"), py::arg("order") = "proof");

    m.def(
        "run_check",
        [](const PyRun& r) {
            const auto c = ta::run_check(r.network->enc.network, r.run);
            py::dict d;
            d["accepted"] = c.accepted;
            d["failed_step"] = c.failed_step ? py::cast(*c.failed_step) : py::none();
            d["diagnostic"] = c.diagnostic;
            return d;
        },
        py::arg("run"));

    m.def(
        "ef_goal",
        [](const PyRun& r) {
            const auto& e = r.network->enc;
            return ta::ef_goal(r.run, [&](const ta::Configuration& q) { return e.accepting(q); });
        },
        py::arg("run"));

    m.def(
        "explore",
        [](std::shared_ptr<PyNetwork> network, std::size_t max_steps, std::size_t max_configs,
           const std::optional<std::vector<py::object>>& grid, std::optional<std::uint64_t> seed) {
            explore::SearchBudget b;
            b.max_internal_steps = max_steps;
            b.max_configs = max_configs;
            if (grid)
                for (const auto& x : *grid) b.delay_grid.push_back(to_rational(x));
            explore::SearchResult r;
            {
                py::gil_scoped_release release;
                r = explore::bounded_reach(network->enc, b, explore::SearchOptions{seed, 1});
            }
            py::dict d;
            d["status"] = std::string(explore::status_name(r.status));
            d["explored"] = r.explored;
            d["depth_limited"] = r.depth_limited;
            d["run"] = r.run ? py::cast(PyRun{network, std::move(*r.run)}) : py::none();
            return d;
        },
        py::arg("network"), py::arg("max_steps") = 32, py::arg("max_configs") = 200000, py::arg("grid") = py::none(),
        py::arg("seed") = py::none());
}
