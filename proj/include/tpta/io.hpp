#pragma once

#include "tpta/encoder.hpp"
#include "tpta/planning.hpp"
#include "tpta/ta.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tpta::io {

using Json = nlohmann::ordered_json;

/// Syntax or schema error in an input file. `line`/`column` are 1-based and
/// 0 when the error has no textual position (schema errors carry `path`).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line = 0, std::size_t column = 0, std::string path = {});

    std::size_t line = 0;
    std::size_t column = 0;
    std::string path;
    std::string message;
};

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Parses JSON text; syntax errors become ParseError with line/column.
[[nodiscard]] Json parse_json(std::string_view text);

/// Reads a problem and runs PlanningProblem::check.
[[nodiscard]] PlanningProblem parse_problem(std::string_view text);
[[nodiscard]] Json problem_to_json(const PlanningProblem& problem);

/// `<t>: (<name>) [<d>]` per line; blank lines and `#` comments skipped.
[[nodiscard]] NamedPlan parse_plan(std::string_view text);
[[nodiscard]] std::string plan_to_text(const PlanningProblem& problem, const Plan& plan);

enum class Format { Internal, CheckerCompat };

[[nodiscard]] Format parse_format(std::string_view text);

[[nodiscard]] Json network_to_json(const ta::Network& net);
[[nodiscard]] ta::Network network_from_json(const Json& j);

/// Maps encoded ids back to propositions, actions and edge roles.
[[nodiscard]] Json symbols_json(const enc::EncodedNetwork& enc);

/// Internal format with the symbols embedded under "symbols".
[[nodiscard]] std::string export_internal(const ta::Network& net, const Json& symbols);
[[nodiscard]] std::string export_network(const enc::EncodedNetwork& enc, Format format);

struct LoadedNetwork {
    ta::Network network;
    Json symbols;
};

/// Reads the internal format; symbols are optional.
[[nodiscard]] LoadedNetwork import_network(std::string_view text);

[[nodiscard]] Json config_to_json(const ta::Network& net, const ta::Configuration& q);
[[nodiscard]] ta::Configuration config_from_json(const ta::Network& net, const Json& j);

[[nodiscard]] std::string run_to_json(const ta::Network& net, const ta::Run& run);
[[nodiscard]] ta::Run run_from_json(const ta::Network& net, std::string_view text);

} // namespace tpta::io
