// tpta: validate temporal plans, encode problems as timed automata networks,
// build and replay witness runs, explore the encoding.

#include "tpta/encoder.hpp"
#include "tpta/explorer.hpp"
#include "tpta/io.hpp"
#include "tpta/planning.hpp"
#include "tpta/witness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace tpta;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_not_found = 2;
constexpr int exit_parse = 64;
constexpr int exit_resolution = 65;
constexpr int exit_no_input = 66;

struct Args {
    std::string problem;
    std::string plan;
    std::string epsilon = "0";
    std::string out;
    std::string format = "internal";
    std::size_t max_steps = explore::SearchBudget{}.max_internal_steps;
    std::size_t max_configs = explore::SearchBudget{}.max_configs;
    std::string grid;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    bool strict_ee = false;
    bool exclude_own = false;
    std::string network;
    std::string run;
    std::string timeline;
    std::string network_out;
    std::string segment_order = "proof";
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tags a ParseError with the file it came from.
class FileParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class F>
auto with_file(const std::string& path, F&& f)
{
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
    try {
        return f(text);
    } catch (const io::ParseError& e) {
        throw FileParseError(path + ":" + (e.line != 0 ? "" : " ") + e.what());
    }
}

Rational parse_rational_flag(const std::string& name, const std::string& text)
{
    try {
        return Rational::parse(text);
    } catch (const std::invalid_argument& e) {
        throw io::ParseError("--" + name + ": " + e.what());
    }
}

Rational epsilon_of(const Args& a)
{
    auto eps = parse_rational_flag("epsilon", a.epsilon);
    if (eps.sign() < 0) throw io::ParseError("--epsilon must be non-negative");
    return eps;
}

PlanningProblem load_problem(const Args& a)
{
    if (a.problem.empty()) throw io::ParseError("--problem is required");
    return with_file(a.problem, [](const std::string& t) { return io::parse_problem(t); });
}

Plan load_plan(const Args& a, const PlanningProblem& problem)
{
    if (a.plan.empty()) throw io::ParseError("--plan is required");
    auto named = with_file(a.plan, [](const std::string& t) { return io::parse_plan(t); });
    return resolve_plan(problem, named);
}

enc::EncodeOptions encode_options(const Args& a)
{
    enc::EncodeOptions o;
    o.epsilon = epsilon_of(a);
    o.literal_ee_guard = a.strict_ee;
    o.exclude_all_own_clocks = a.exclude_own;
    return o;
}

fs::path sibling(const fs::path& p, const std::string& suffix)
{
    auto stem = p.filename().string();
    if (auto dot = stem.rfind('.'); dot != std::string::npos && dot != 0) stem = stem.substr(0, dot);
    return p.parent_path() / (stem + suffix);
}

void emit(const std::string& path, const std::string& contents)
{
    if (path.empty() || path == "-") {
        std::cout << contents;
        return;
    }
    io::write_file(path, contents);
}

int cmd_validate(const Args& a)
{
    const auto problem = load_problem(a);
    const auto plan = load_plan(a, problem);
    const auto verdict = validate_plan(problem, plan, epsilon_of(a));
    std::cout << (verdict.valid ? "Valid" : "Invalid") << '\n';
    for (const auto& d : verdict.diagnostics) {
        std::cout << "  clause " << static_cast<int>(d.clause) << " (" << clause_name(d.clause) << ")";
        if (d.time) std::cout << " at t=" << *d.time;
        if (d.step) std::cout << " step " << *d.step;
        std::cout << ": " << d.message << '\n';
    }
    std::cout << "no self overlap: " << (verdict.no_self_overlap ? "yes" : "no") << '\n';
    return verdict.valid ? exit_ok : exit_invalid;
}

int cmd_encode(const Args& a)
{
    const auto problem = load_problem(a);
    const auto format = io::parse_format(a.format);
    const auto encoded = enc::encode(problem, encode_options(a));
    emit(a.out, io::export_network(encoded, format));
    if (!a.out.empty() && a.out != "-") {
        const auto symbols = sibling(a.out, ".symbols.json");
        io::write_file(symbols, io::symbols_json(encoded).dump(2) + "\n");
        std::cerr << "wrote " << a.out << " and " << symbols.string() << '\n';
    }
    return exit_ok;
}

int replay_artifacts(const std::string& network_path, const std::string& run_path)
{
    const auto loaded = with_file(network_path, [](const std::string& t) { return io::import_network(t); });
    const auto run = with_file(run_path, [&](const std::string& t) { return io::run_from_json(loaded.network, t); });
    const auto check = ta::run_check(loaded.network, run);
    if (!check) {
        std::cout << "rejected: " << check.diagnostic << '\n';
        return exit_invalid;
    }
    const bool goal = ta::ef_goal(run, [](const ta::Configuration& q) { return !q.locations.empty() && q.locations[0] == enc::loc::goal_m; });
    std::cout << "accepted (" << run.steps.size() << " steps, goal " << (goal ? "reached" : "not reached") << ")\n";
    return exit_ok;
}

int cmd_witness(const Args& a)
{
    const auto problem = load_problem(a);
    const auto plan = load_plan(a, problem);
    const auto encoded = enc::encode(problem, encode_options(a));
    wit::SegmentOrder order = wit::SegmentOrder::Proof;
    if (a.segment_order == "figure") order = wit::SegmentOrder::Figure;
    else if (a.segment_order != "proof") throw io::ParseError("--segment-order must be proof or figure");
    ta::Run run;
    try {
        run = wit::build_witness(encoded, problem, plan, order);
    } catch (const wit::WitnessError& e) {
        std::cout << "no witness: " << e.what() << '\n';
        return exit_invalid;
    }
    if (a.out.empty()) throw io::ParseError("--out is required for witness");
    const std::string timeline = a.timeline.empty() ? sibling(a.out, ".timeline.txt").string() : a.timeline;
    const std::string network = a.network_out.empty() ? sibling(a.out, ".network.json").string() : a.network_out;
    io::write_file(a.out, io::run_to_json(encoded.network, run));
    io::write_file(timeline, wit::timeline(encoded, run));
    io::write_file(network, io::export_network(encoded, io::Format::Internal));
    std::cout << "witness: " << run.steps.size() << " steps, " << run.internal_count() << " internal\n";
    std::cout << "wrote " << a.out << ", " << timeline << ", " << network << '\n';
    const int replay = replay_artifacts(network, a.out);
    if (replay != exit_ok) std::cout << "witness artifacts failed to replay\n";
    return replay;
}

int cmd_check_run(const Args& a)
{
    if (a.run.empty()) throw io::ParseError("--run is required");
    if (!a.network.empty()) return replay_artifacts(a.network, a.run);
    const auto problem = load_problem(a);
    const auto encoded = enc::encode(problem, encode_options(a));
    const auto run = with_file(a.run, [&](const std::string& t) { return io::run_from_json(encoded.network, t); });
    const auto check = ta::run_check(encoded.network, run);
    if (!check) {
        std::cout << "rejected: " << check.diagnostic << '\n';
        return exit_invalid;
    }
    std::cout << "accepted (" << run.steps.size() << " steps, goal "
              << (ta::ef_goal(run, [&](const ta::Configuration& q) { return encoded.accepting(q); }) ? "reached"
                                                                                                    : "not reached")
              << ")\n";
    return exit_ok;
}

std::vector<Rational> parse_grid(const std::string& text)
{
    std::vector<Rational> out;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        auto end = text.find(',', begin);
        if (end == std::string::npos) end = text.size();
        auto token = text.substr(begin, end - begin);
        token.erase(0, token.find_first_not_of(' '));
        token.erase(token.find_last_not_of(' ') + 1);
        if (!token.empty()) {
            auto r = parse_rational_flag("grid", token);
            if (r.sign() < 0) throw io::ParseError("--grid values must be non-negative");
            out.push_back(r);
        }
        begin = end + 1;
    }
    return out;
}

int cmd_explore(const Args& a)
{
    const auto problem = load_problem(a);
    const auto encoded = enc::encode(problem, encode_options(a));
    explore::SearchBudget budget;
    budget.max_internal_steps = a.max_steps;
    budget.max_configs = a.max_configs;
    budget.delay_grid = parse_grid(a.grid);
    explore::SearchOptions options;
    options.seed = a.seed;
    options.workers = a.workers;
    const auto result = explore::bounded_reach(encoded, budget, options);
    if (result.status != explore::SearchStatus::Found) {
        std::cout << "not found <= budget (" << explore::status_name(result.status) << ", " << result.explored
                  << " configurations, max-steps " << budget.max_internal_steps << ")\n";
        return exit_not_found;
    }
    std::cout << "found: " << result.run->steps.size() << " steps after " << result.explored << " configurations\n";
    emit(a.out, io::run_to_json(encoded.network, *result.run));
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Temporal plans, timed automata encodings and witness runs"};
    app.require_subcommand(1);
    Args a;

    auto add_problem = [&](CLI::App* c) { c->add_option("--problem", a.problem, "Problem JSON file"); };
    auto add_plan = [&](CLI::App* c) { c->add_option("--plan", a.plan, "Plan text file"); };
    auto add_encoding = [&](CLI::App* c) {
        c->add_option("--epsilon", a.epsilon, "Separation epsilon as p/q")->capture_default_str();
        c->add_flag("--strict-paper-ee-guard,--literal-ee-guard", a.strict_ee, "Guard ee with the start snap's mutex clocks");
        c->add_flag("--exclude-own-clocks", a.exclude_own, "Leave all of an action's own clocks out of its mutex guards");
    };

    auto* validate = app.add_subcommand("validate", "Check a plan against a problem");
    add_problem(validate);
    add_plan(validate);
    validate->add_option("--epsilon", a.epsilon, "Separation epsilon as p/q")->capture_default_str();

    auto* encode = app.add_subcommand("encode", "Write the timed automata network of a problem");
    add_problem(encode);
    add_encoding(encode);
    encode->add_option("--out", a.out, "Network output file (stdout if omitted)");
    encode->add_option("--format", a.format, "internal | checker-compat")->capture_default_str();

    auto* witness = app.add_subcommand("witness", "Build and replay a run for a valid plan");
    add_problem(witness);
    add_plan(witness);
    add_encoding(witness);
    witness->add_option("--out", a.out, "Run trace output file");
    witness->add_option("--timeline", a.timeline, "Timeline log (default <out>.timeline.txt)");
    witness->add_option("--network-out", a.network_out, "Network file (default <out>.network.json)");
    witness->add_option("--segment-order", a.segment_order, "proof | figure")->capture_default_str();

    auto* check = app.add_subcommand("check-run", "Replay a run trace");
    check->add_option("--network", a.network, "Network file in the internal format");
    add_problem(check);
    add_encoding(check);
    check->add_option("--run", a.run, "Run trace file");

    auto* expl = app.add_subcommand("explore", "Bounded search for an accepting run");
    add_problem(expl);
    add_encoding(expl);
    expl->add_option("--out", a.out, "Run trace output file (stdout if omitted)");
    expl->add_option("--max-steps", a.max_steps, "Maximum internal steps")->capture_default_str();
    expl->add_option("--max-configs", a.max_configs, "Maximum stored configurations")->capture_default_str();
    expl->add_option("--grid", a.grid, "Comma-separated delays (default derived from the network)");
    expl->add_option("--seed", a.seed, "Shuffle successors with this seed");
    expl->add_option("--workers", a.workers, "Successor generation threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_parse;
    }

    try {
        if (validate->parsed()) return cmd_validate(a);
        if (encode->parsed()) return cmd_encode(a);
        if (witness->parsed()) return cmd_witness(a);
        if (check->parsed()) return cmd_check_run(a);
        if (expl->parsed()) return cmd_explore(a);
    } catch (const FileParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_parse;
    } catch (const io::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_parse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_parse;
    } catch (const ResolutionError& e) {
        std::cerr << "resolution error: " << e.what() << '\n';
        return exit_resolution;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return exit_resolution;
    } catch (const ta::NetworkError& e) {
        std::cerr << "network error: " << e.what() << '\n';
        return exit_resolution;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_no_input;
    }
    return exit_parse;
}
