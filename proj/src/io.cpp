#include "tpta/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace tpta::io {

namespace {

std::string position_prefix(std::size_t line, std::size_t column, const std::string& path)
{
    if (line != 0) return std::to_string(line) + ":" + std::to_string(column) + ": ";
    if (!path.empty()) return "at " + path + ": ";
    return {};
}

} // namespace

ParseError::ParseError(std::string msg, std::size_t line_, std::size_t column_, std::string path_)
    : std::runtime_error(position_prefix(line_, column_, path_) + msg),
      line(line_),
      column(column_),
      path(std::move(path_)),
      message(std::move(msg))
{
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("error writing " + path.string());
}

Json parse_json(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        // byte is 1-based and points just past the offending character
        const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t k = 0; k < offset; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        if (auto colon = what.rfind(": "); colon != std::string::npos) what = what.substr(colon + 2);
        throw ParseError("malformed JSON: " + what, line, column);
    }
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) { throw ParseError(msg, 0, 0, path); }

const Json& field(const Json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object()) schema(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema(path, std::string("missing field \"") + key + "\"");
    return *it;
}

const Json* optional_field(const Json& obj, const char* key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::string as_string(const Json& j, const std::string& path)
{
    if (!j.is_string()) schema(path, "expected a string");
    return j.get<std::string>();
}

std::int64_t as_int(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) schema(path, "expected an integer");
    return j.get<std::int64_t>();
}

bool as_bool(const Json& j, const std::string& path)
{
    if (!j.is_boolean()) schema(path, "expected a boolean");
    return j.get<bool>();
}

Rational as_rational(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (!j.is_string()) schema(path, "expected a rational such as \"3/2\"");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        schema(path, e.what());
    }
}

const Json& as_array(const Json& j, const std::string& path)
{
    if (!j.is_array()) schema(path, "expected an array");
    return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& path)
{
    std::vector<std::string> out;
    const auto& arr = as_array(j, path);
    for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(as_string(arr[k], path + "/" + std::to_string(k)));
    return out;
}

PropSet prop_set(const Json& j, const std::string& path)
{
    auto list = string_list(j, path);
    return {list.begin(), list.end()};
}

const Json& optional_list(const Json& obj, const char* key)
{
    static const Json empty = Json::array();
    const auto* f = optional_field(obj, key);
    return f ? *f : empty;
}

SnapAction snap_from_json(const Json& j, const std::string& path)
{
    if (!j.is_object()) schema(path, "expected an object");
    return SnapAction{prop_set(optional_list(j, "pre"), path + "/pre"), prop_set(optional_list(j, "add"), path + "/add"),
                      prop_set(optional_list(j, "del"), path + "/del")};
}

DurationBound bound_from_json(const Json& j, const std::string& path)
{
    DurationBound b;
    b.value = as_rational(field(j, "value", path), path + "/value");
    if (const auto* s = optional_field(j, "strict")) b.strict = as_bool(*s, path + "/strict");
    return b;
}

Json snap_to_json(const SnapAction& h)
{
    Json j;
    j["pre"] = Json(std::vector<std::string>(h.pres.begin(), h.pres.end()));
    j["add"] = Json(std::vector<std::string>(h.adds.begin(), h.adds.end()));
    j["del"] = Json(std::vector<std::string>(h.dels.begin(), h.dels.end()));
    return j;
}

Json bound_to_json(const DurationBound& b) { return Json{{"value", b.value.str()}, {"strict", b.strict}}; }

} // namespace

PlanningProblem parse_problem(std::string_view text)
{
    const Json j = parse_json(text);
    if (!j.is_object()) schema("/", "expected an object");
    PlanningProblem p;
    p.props = string_list(field(j, "props", ""), "/props");
    const auto& actions = as_array(field(j, "actions", ""), "/actions");
    for (std::size_t k = 0; k < actions.size(); ++k) {
        const std::string path = "/actions/" + std::to_string(k);
        const auto& a = actions[k];
        DurativeAction act;
        act.name = as_string(field(a, "name", path), path + "/name");
        act.start = snap_from_json(field(a, "start", path), path + "/start");
        act.end = snap_from_json(field(a, "end", path), path + "/end");
        act.over_all = prop_set(optional_list(a, "over_all"), path + "/over_all");
        act.lower = bound_from_json(field(a, "lower", path), path + "/lower");
        act.upper = bound_from_json(field(a, "upper", path), path + "/upper");
        p.actions.push_back(std::move(act));
    }
    p.init = prop_set(field(j, "init", ""), "/init");
    p.goal = prop_set(field(j, "goal", ""), "/goal");
    p.check();
    return p;
}

Json problem_to_json(const PlanningProblem& problem)
{
    Json j;
    j["props"] = Json(problem.props);
    j["actions"] = Json::array();
    for (const auto& a : problem.actions) {
        Json ja;
        ja["name"] = a.name;
        ja["start"] = snap_to_json(a.start);
        ja["over_all"] = Json(std::vector<std::string>(a.over_all.begin(), a.over_all.end()));
        ja["end"] = snap_to_json(a.end);
        ja["lower"] = bound_to_json(a.lower);
        ja["upper"] = bound_to_json(a.upper);
        j["actions"].push_back(std::move(ja));
    }
    j["init"] = Json(std::vector<std::string>(problem.init.begin(), problem.init.end()));
    j["goal"] = Json(std::vector<std::string>(problem.goal.begin(), problem.goal.end()));
    return j;
}

namespace {

std::size_t skip_space(std::string_view s, std::size_t at)
{
    while (at < s.size() && std::isspace(static_cast<unsigned char>(s[at]))) ++at;
    return at;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

NamedPlan parse_plan(std::string_view text)
{
    NamedPlan plan;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const auto end = std::min(text.find('\n', begin), text.size());
        std::string_view line = text.substr(begin, end - begin);
        ++line_no;
        begin = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) {
            if (end == text.size()) break;
            continue;
        }

        auto err = [&](std::size_t col, const std::string& msg) -> ParseError {
            return ParseError(msg, line_no, col + 1);
        };
        auto rational_at = [&](std::size_t from, std::size_t to, const char* what) {
            const auto token = trim(line.substr(from, to - from));
            const auto col = skip_space(line, from);
            if (token.empty()) throw err(col, std::string("missing ") + what);
            try {
                return Rational::parse(token);
            } catch (const std::invalid_argument&) {
                throw err(col, std::string("malformed ") + what + " '" + std::string(token) + "'");
            }
        };

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw err(skip_space(line, 0), "expected '<time>: (<action>) [<duration>]'");
        const Rational start = rational_at(0, colon, "start time");
        if (start.sign() < 0) throw err(skip_space(line, 0), "negative start time");

        const auto open = skip_space(line, colon + 1);
        if (open >= line.size() || line[open] != '(') throw err(open, "expected '(' before the action name");
        const auto close = line.find(')', open);
        if (close == std::string_view::npos) throw err(line.size(), "missing ')'");
        const auto name = trim(line.substr(open + 1, close - open - 1));
        if (name.empty()) throw err(open + 1, "empty action name");

        const auto lb = skip_space(line, close + 1);
        if (lb >= line.size() || line[lb] != '[') throw err(lb, "expected '[' before the duration");
        const auto rb = line.find(']', lb);
        if (rb == std::string_view::npos) throw err(line.size(), "missing ']'");
        const Rational duration = rational_at(lb + 1, rb, "duration");
        const auto tail = skip_space(line, rb + 1);
        if (tail != line.size()) throw err(tail, "unexpected trailing text");

        plan.push_back(NamedPlanStep{std::string(name), start, duration, line_no});
        if (end == text.size()) break;
    }
    return plan;
}

std::string plan_to_text(const PlanningProblem& problem, const Plan& plan)
{
    std::ostringstream os;
    for (const auto& s : plan.steps)
        os << s.start << ": (" << problem.actions.at(s.action).name << ") [" << s.duration << "]\n";
    return os.str();
}

Format parse_format(std::string_view text)
{
    if (text == "internal") return Format::Internal;
    if (text == "checker-compat") return Format::CheckerCompat;
    throw std::invalid_argument("unknown format '" + std::string(text) + "'");
}

namespace {

Json expr_to_json(const ta::Network& net, const ta::Expr& e)
{
    return std::visit(
        [&](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ta::Expr::Var>) {
                return Json{{"var", net.vars.at(n.id).name}};
            } else if constexpr (std::is_same_v<T, ta::Expr::Const>) {
                return Json{{"const", n.value.str()}};
            } else {
                return Json{{"op", std::string(ta::op_symbol(n.op))},
                            {"l", expr_to_json(net, *n.lhs)},
                            {"r", expr_to_json(net, *n.rhs)}};
            }
        },
        e.node());
}

Json bexpr_to_json(const ta::Network& net, const ta::BExpr& b)
{
    return std::visit(
        [&](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ta::BExpr::True>) {
                return "true";
            } else if constexpr (std::is_same_v<T, ta::BExpr::False>) {
                return "false";
            } else if constexpr (std::is_same_v<T, ta::BExpr::Cmp>) {
                return Json{{"cmp", std::string(ta::rel_symbol(n.rel))},
                            {"l", expr_to_json(net, n.lhs)},
                            {"r", expr_to_json(net, n.rhs)}};
            } else {
                return Json{{"and", Json::array({bexpr_to_json(net, *n.lhs), bexpr_to_json(net, *n.rhs)})}};
            }
        },
        b.node());
}

std::size_t resolve(const std::optional<std::size_t>& id, const std::string& kind, const std::string& name)
{
    if (!id) throw ResolutionError("unknown " + kind + " '" + name + "'");
    return *id;
}

ta::Expr expr_from_json(const ta::Network& net, const Json& j, const std::string& path)
{
    if (!j.is_object()) schema(path, "expected an expression object");
    if (const auto* v = optional_field(j, "var")) {
        const auto name = as_string(*v, path + "/var");
        return ta::Expr::var(resolve(net.find_var(name), "variable", name));
    }
    if (const auto* c = optional_field(j, "const")) return ta::Expr::constant(as_rational(*c, path + "/const"));
    if (const auto* op = optional_field(j, "op")) {
        ta::ArithOp o;
        try {
            o = ta::parse_op(as_string(*op, path + "/op"));
        } catch (const std::invalid_argument& e) {
            schema(path + "/op", e.what());
        }
        return ta::Expr::binary(o, expr_from_json(net, field(j, "l", path), path + "/l"),
                                expr_from_json(net, field(j, "r", path), path + "/r"));
    }
    schema(path, "expected one of \"var\", \"const\", \"op\"");
}

ta::Rel rel_from_json(const Json& j, const std::string& path)
{
    try {
        return ta::parse_rel(as_string(j, path));
    } catch (const std::invalid_argument& e) {
        schema(path, e.what());
    }
}

ta::BExpr bexpr_from_json(const ta::Network& net, const Json& j, const std::string& path)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "true") return ta::BExpr::truth();
        if (s == "false") return ta::BExpr::falsity();
        schema(path, "expected \"true\" or \"false\"");
    }
    if (!j.is_object()) schema(path, "expected a condition");
    if (const auto* c = optional_field(j, "cmp"))
        return ta::BExpr::cmp(rel_from_json(*c, path + "/cmp"), expr_from_json(net, field(j, "l", path), path + "/l"),
                              expr_from_json(net, field(j, "r", path), path + "/r"));
    if (const auto* a = optional_field(j, "and")) {
        const auto& arr = as_array(*a, path + "/and");
        if (arr.size() != 2) schema(path + "/and", "expected exactly two operands");
        return ta::BExpr::conj(bexpr_from_json(net, arr[0], path + "/and/0"),
                               bexpr_from_json(net, arr[1], path + "/and/1"));
    }
    schema(path, "expected \"cmp\" or \"and\"");
}

std::size_t location_index(const ta::Automaton& a, const Json& j, const std::string& path)
{
    const auto name = as_string(j, path);
    return resolve(a.find_location(name), "location", name);
}

} // namespace

Json network_to_json(const ta::Network& net)
{
    Json j;
    j["vars"] = Json::array();
    for (const auto& v : net.vars) j["vars"].push_back(Json{{"id", v.name}, {"lo", v.lo}, {"hi", v.hi}, {"init", v.init}});
    j["clocks"] = Json(net.clocks);
    j["automata"] = Json::array();
    for (const auto& a : net.automata) {
        Json ja;
        ja["name"] = a.name;
        ja["locations"] = Json(a.locations);
        ja["initial"] = a.locations.at(a.initial);
        ja["urgent"] = Json::array();
        for (auto u : a.urgent) ja["urgent"].push_back(a.locations.at(u));
        ja["transitions"] = Json::array();
        for (const auto& t : a.transitions) {
            Json jt;
            jt["from"] = a.locations.at(t.from);
            jt["cond"] = bexpr_to_json(net, t.cond);
            jt["guard"] = Json::array();
            for (const auto& g : t.guard)
                jt["guard"].push_back(Json{{"clock", net.clocks.at(g.clock)},
                                           {"rel", std::string(ta::rel_symbol(g.rel))},
                                           {"bound", g.bound.str()}});
            jt["updates"] = Json::array();
            for (const auto& u : t.updates)
                jt["updates"].push_back(Json{{"var", net.vars.at(u.var).name}, {"expr", expr_to_json(net, u.expr)}});
            jt["resets"] = Json::array();
            for (auto r : t.resets) jt["resets"].push_back(net.clocks.at(r));
            jt["to"] = a.locations.at(t.to);
            jt["label"] = t.label;
            ja["transitions"].push_back(std::move(jt));
        }
        j["automata"].push_back(std::move(ja));
    }
    return j;
}

ta::Network network_from_json(const Json& j)
{
    if (!j.is_object()) schema("/", "expected an object");
    ta::Network net;
    const auto& vars = as_array(field(j, "vars", ""), "/vars");
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const std::string path = "/vars/" + std::to_string(k);
        net.vars.push_back(ta::VarDecl{as_string(field(vars[k], "id", path), path + "/id"),
                                       as_int(field(vars[k], "lo", path), path + "/lo"),
                                       as_int(field(vars[k], "hi", path), path + "/hi"),
                                       as_int(field(vars[k], "init", path), path + "/init")});
    }
    net.clocks = string_list(field(j, "clocks", ""), "/clocks");
    const auto& automata = as_array(field(j, "automata", ""), "/automata");
    for (std::size_t k = 0; k < automata.size(); ++k) {
        const std::string path = "/automata/" + std::to_string(k);
        const auto& ja = automata[k];
        ta::Automaton a;
        a.name = as_string(field(ja, "name", path), path + "/name");
        a.locations = string_list(field(ja, "locations", path), path + "/locations");
        a.initial = location_index(a, field(ja, "initial", path), path + "/initial");
        const auto urgent = string_list(optional_list(ja, "urgent"), path + "/urgent");
        for (const auto& u : urgent) a.urgent.push_back(resolve(a.find_location(u), "location", u));
        const auto& ts = as_array(field(ja, "transitions", path), path + "/transitions");
        for (std::size_t m = 0; m < ts.size(); ++m) {
            const std::string tp = path + "/transitions/" + std::to_string(m);
            const auto& jt = ts[m];
            ta::Transition t;
            t.from = location_index(a, field(jt, "from", tp), tp + "/from");
            t.to = location_index(a, field(jt, "to", tp), tp + "/to");
            if (const auto* c = optional_field(jt, "cond")) t.cond = bexpr_from_json(net, *c, tp + "/cond");
            const auto& guard = optional_list(jt, "guard");
            for (std::size_t g = 0; g < guard.size(); ++g) {
                const std::string gp = tp + "/guard/" + std::to_string(g);
                const auto clock = as_string(field(guard[g], "clock", gp), gp + "/clock");
                t.guard.push_back(ta::ClockConstraint{resolve(net.find_clock(clock), "clock", clock),
                                                      rel_from_json(field(guard[g], "rel", gp), gp + "/rel"),
                                                      as_rational(field(guard[g], "bound", gp), gp + "/bound")});
            }
            const auto& updates = optional_list(jt, "updates");
            for (std::size_t u = 0; u < updates.size(); ++u) {
                const std::string up = tp + "/updates/" + std::to_string(u);
                const auto var = as_string(field(updates[u], "var", up), up + "/var");
                t.updates.push_back(ta::Update{resolve(net.find_var(var), "variable", var),
                                               expr_from_json(net, field(updates[u], "expr", up), up + "/expr")});
            }
            for (const auto& r : string_list(optional_list(jt, "resets"), tp + "/resets"))
                t.resets.push_back(resolve(net.find_clock(r), "clock", r));
            if (const auto* l = optional_field(jt, "label")) t.label = as_string(*l, tp + "/label");
            a.transitions.push_back(std::move(t));
        }
        net.automata.push_back(std::move(a));
    }
    try {
        net.check();
    } catch (const ta::NetworkError& e) {
        throw ResolutionError(e.what());
    }
    return net;
}

Json symbols_json(const enc::EncodedNetwork& enc)
{
    const auto& net = enc.network;
    Json j;
    Json vars = Json::object();
    for (const auto& [p, id] : enc.vars.vp) vars[net.vars.at(id).name] = Json{{"kind", "vp"}, {"prop", p}};
    for (const auto& [p, id] : enc.vars.lp) vars[net.vars.at(id).name] = Json{{"kind", "lp"}, {"prop", p}};
    vars[net.vars.at(enc.vars.aa).name] = Json{{"kind", "aa"}};
    vars[net.vars.at(enc.vars.ps).name] = Json{{"kind", "ps"}};
    j["vars"] = std::move(vars);
    Json clocks = Json::object();
    for (std::size_t a = 0; a < enc.action_order.size(); ++a) {
        clocks[net.clocks.at(enc.clocks.start[a])] = Json{{"action", enc.action_order[a]}, {"snap", "start"}};
        clocks[net.clocks.at(enc.clocks.end[a])] = Json{{"action", enc.action_order[a]}, {"snap", "end"}};
    }
    j["clocks"] = std::move(clocks);
    j["automata"] = Json::array();
    for (std::size_t i = 0; i < net.automata.size(); ++i) {
        Json ja;
        ja["name"] = net.automata[i].name;
        if (i == enc::EncodedNetwork::main_automaton) ja["action"] = nullptr;
        else ja["action"] = enc.action_order.at(i - 1);
        ja["transitions"] = Json::array();
        for (std::size_t k = 0; k < net.automata[i].transitions.size(); ++k)
            ja["transitions"].push_back(std::string(enc::role_name(enc.label(i, k).role)));
        j["automata"].push_back(std::move(ja));
    }
    j["epsilon"] = enc.options.epsilon.str();
    j["literal_ee_guard"] = enc.options.literal_ee_guard;
    j["exclude_all_own_clocks"] = enc.options.exclude_all_own_clocks;
    j["accept"] = "L[0] == goal_M";
    return j;
}

std::string export_internal(const ta::Network& net, const Json& symbols)
{
    Json j = network_to_json(net);
    if (!symbols.is_null()) j["symbols"] = symbols;
    return j.dump(2) + "\n";
}

namespace {

std::string sanitize(std::string_view s)
{
    std::string out;
    for (char ch : s) out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
    return out;
}

std::string compat_rel(ta::Rel r) { return r == ta::Rel::Eq ? "==" : std::string(ta::rel_symbol(r)); }

std::string compat_expr(const std::vector<std::string>& names, const ta::Expr& e)
{
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ta::Expr::Var>) {
                return names.at(n.id);
            } else if constexpr (std::is_same_v<T, ta::Expr::Const>) {
                return n.value.str();
            } else {
                return "(" + compat_expr(names, *n.lhs) + " " + std::string(ta::op_symbol(n.op)) + " "
                    + compat_expr(names, *n.rhs) + ")";
            }
        },
        e.node());
}

std::string compat_bexpr(const std::vector<std::string>& names, const ta::BExpr& b)
{
    std::vector<std::string> parts;
    for (const auto& c : b.conjuncts()) {
        if (std::holds_alternative<ta::BExpr::False>(c.node())) {
            parts.push_back("false");
            continue;
        }
        const auto& cmp = std::get<ta::BExpr::Cmp>(c.node());
        parts.push_back(compat_expr(names, cmp.lhs) + " " + compat_rel(cmp.rel) + " " + compat_expr(names, cmp.rhs));
    }
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : " && ") + p;
    return out;
}

std::string export_compat(const enc::EncodedNetwork& enc)
{
    const auto& net = enc.network;
    std::vector<std::string> vnames;
    std::vector<std::string> cnames;
    for (std::size_t k = 0; k < net.vars.size(); ++k) vnames.push_back("v" + std::to_string(k) + "_" + sanitize(net.vars[k].name));
    for (std::size_t k = 0; k < net.clocks.size(); ++k) cnames.push_back("c" + std::to_string(k) + "_" + sanitize(net.clocks[k]));

    Json j;
    std::string clocks;
    for (const auto& c : cnames) clocks += (clocks.empty() ? "" : ", ") + c;
    j["clocks"] = clocks;
    std::string vars;
    Json bounds = Json::array();
    for (std::size_t k = 0; k < net.vars.size(); ++k) {
        const auto& v = net.vars[k];
        vars += (vars.empty() ? "" : ", ") + vnames[k] + "[" + std::to_string(v.lo) + ":" + std::to_string(v.hi) + "]";
        bounds.push_back(Json{{"id", vnames[k]}, {"lo", v.lo}, {"hi", v.hi}, {"init", v.init}});
    }
    j["vars"] = vars;
    j["var_bounds"] = std::move(bounds);
    j["automata"] = Json::array();
    for (const auto& a : net.automata) {
        Json ja;
        ja["name"] = sanitize(a.name);
        ja["initial"] = a.initial;
        ja["nodes"] = Json::array();
        for (std::size_t l = 0; l < a.locations.size(); ++l)
            ja["nodes"].push_back(Json{{"id", l}, {"name", sanitize(a.locations[l])}, {"invariant", ""}});
        ja["urgent"] = Json(a.urgent);
        ja["committed"] = Json::array();
        ja["edges"] = Json::array();
        for (const auto& t : a.transitions) {
            std::string guard = compat_bexpr(vnames, t.cond);
            for (const auto& g : t.guard)
                guard += (guard.empty() ? "" : " && ") + cnames.at(g.clock) + " " + compat_rel(g.rel) + " " + g.bound.str();
            std::string update;
            for (const auto& u : t.updates)
                update += (update.empty() ? "" : ", ") + vnames.at(u.var) + " = " + compat_expr(vnames, u.expr);
            for (auto r : t.resets) update += (update.empty() ? "" : ", ") + cnames.at(r) + " = 0";
            ja["edges"].push_back(Json{{"source", t.from},
                                       {"target", t.to},
                                       {"guard", guard},
                                       {"update", update},
                                       {"label", sanitize(t.label)}});
        }
        j["automata"].push_back(std::move(ja));
    }
    j["formula"] = "E<> L[0] == goal_M";
    return j.dump(2) + "\n";
}

} // namespace

std::string export_network(const enc::EncodedNetwork& enc, Format format)
{
    if (format == Format::CheckerCompat) return export_compat(enc);
    return export_internal(enc.network, symbols_json(enc));
}

LoadedNetwork import_network(std::string_view text)
{
    const Json j = parse_json(text);
    LoadedNetwork out{network_from_json(j), Json()};
    if (const auto* s = j.is_object() ? optional_field(j, "symbols") : nullptr) out.symbols = *s;
    return out;
}

Json config_to_json(const ta::Network& net, const ta::Configuration& q)
{
    Json j;
    j["L"] = Json::array();
    for (std::size_t i = 0; i < q.locations.size(); ++i) j["L"].push_back(net.automata.at(i).locations.at(q.locations[i]));
    std::map<std::string, std::int64_t> v;
    for (std::size_t k = 0; k < q.vars.size(); ++k) v[net.vars.at(k).name] = q.vars[k];
    std::map<std::string, std::string> c;
    for (std::size_t k = 0; k < q.clocks.size(); ++k) c[net.clocks.at(k)] = q.clocks[k].str();
    j["v"] = Json::object();
    for (const auto& [name, value] : v) j["v"][name] = value;
    j["c"] = Json::object();
    for (const auto& [name, value] : c) j["c"][name] = value;
    return j;
}

ta::Configuration config_from_json(const ta::Network& net, const Json& j)
{
    ta::Configuration q;
    const auto& locs = as_array(field(j, "L", "config"), "config/L");
    if (locs.size() != net.automata.size()) schema("config/L", "expected one location per automaton");
    for (std::size_t i = 0; i < locs.size(); ++i)
        q.locations.push_back(location_index(net.automata[i], locs[i], "config/L/" + std::to_string(i)));
    const auto& v = field(j, "v", "config");
    for (const auto& decl : net.vars) q.vars.push_back(as_int(field(v, decl.name.c_str(), "config/v"), "config/v/" + decl.name));
    if (v.size() != net.vars.size()) schema("config/v", "unexpected variable entries");
    const auto& c = field(j, "c", "config");
    for (const auto& clock : net.clocks)
        q.clocks.push_back(as_rational(field(c, clock.c_str(), "config/c"), "config/c/" + clock));
    if (c.size() != net.clocks.size()) schema("config/c", "unexpected clock entries");
    return q;
}

std::string run_to_json(const ta::Network& net, const ta::Run& run)
{
    Json j;
    j["initial"] = config_to_json(net, run.initial);
    j["steps"] = Json::array();
    for (const auto& s : run.steps) {
        Json js;
        if (const auto* d = std::get_if<ta::DelayStep>(&s.label)) {
            js["type"] = "delay";
            js["delta"] = d->delta.str();
        } else {
            const auto& i = std::get<ta::InternalStep>(s.label);
            js["type"] = "internal";
            js["automaton"] = i.automaton;
            js["transition"] = i.transition;
        }
        js["after"] = config_to_json(net, s.after);
        j["steps"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

ta::Run run_from_json(const ta::Network& net, std::string_view text)
{
    const Json j = parse_json(text);
    ta::Run run;
    run.initial = config_from_json(net, field(j, "initial", ""));
    const auto& steps = as_array(field(j, "steps", ""), "/steps");
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::string path = "/steps/" + std::to_string(k);
        const auto& js = steps[k];
        const auto type = as_string(field(js, "type", path), path + "/type");
        ta::StepLabel label;
        if (type == "delay") {
            label = ta::DelayStep{as_rational(field(js, "delta", path), path + "/delta")};
        } else if (type == "internal") {
            const auto a = as_int(field(js, "automaton", path), path + "/automaton");
            const auto t = as_int(field(js, "transition", path), path + "/transition");
            if (a < 0 || t < 0) schema(path, "negative index");
            label = ta::InternalStep{static_cast<std::size_t>(a), static_cast<std::size_t>(t)};
        } else {
            schema(path + "/type", "expected \"delay\" or \"internal\"");
        }
        run.steps.push_back(ta::RunStep{label, config_from_json(net, field(js, "after", path))});
    }
    return run;
}

} // namespace tpta::io
