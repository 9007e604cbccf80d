#include "fixtures.hpp"
#include "instances.hpp"

#include "tpta/encoder.hpp"
#include "tpta/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace tpta;
using namespace tpta::enc;
using namespace tpta::testing;

namespace {

// (var, value) pair when `b` is exactly var = const.
std::optional<std::pair<std::size_t, Rational>> as_eq(const ta::BExpr& b)
{
    const auto* c = std::get_if<ta::BExpr::Cmp>(&b.node());
    if (!c || c->rel != ta::Rel::Eq) return std::nullopt;
    const auto* v = std::get_if<ta::Expr::Var>(&c->lhs.node());
    const auto* k = std::get_if<ta::Expr::Const>(&c->rhs.node());
    if (!v || !k) return std::nullopt;
    return std::make_pair(v->id, k->value);
}

std::set<std::pair<std::size_t, Rational>> eqs(const ta::BExpr& b)
{
    std::set<std::pair<std::size_t, Rational>> out;
    for (const auto& c : b.conjuncts()) {
        const auto e = as_eq(c);
        REQUIRE(e.has_value());
        out.insert(*e);
    }
    return out;
}

// Constant assigned by an update of the form var := const.
std::map<std::size_t, Rational> const_updates(const std::vector<ta::Update>& us)
{
    std::map<std::size_t, Rational> out;
    for (const auto& u : us) {
        const auto* k = std::get_if<ta::Expr::Const>(&u.expr.node());
        REQUIRE(k);
        out[u.var] = k->value;
    }
    return out;
}

bool has_guard(const std::vector<ta::ClockConstraint>& g, std::size_t clock, ta::Rel rel, const Rational& bound)
{
    return std::find(g.begin(), g.end(), ta::ClockConstraint{clock, rel, bound}) != g.end();
}

std::set<std::size_t> guarded_clocks(const std::vector<ta::ClockConstraint>& g)
{
    std::set<std::size_t> out;
    for (const auto& c : g) out.insert(c.clock);
    return out;
}

PlanningProblem single(SnapAction start, SnapAction end, PropSet over_all, Rational lo, Rational hi)
{
    PlanningProblem p;
    p.props = {"p", "q"};
    p.actions.push_back(action("a", std::move(start), std::move(end), std::move(over_all), std::move(lo), std::move(hi)));
    return p;
}

const ta::Transition& tr(const EncodedNetwork& e, std::size_t action, Role role)
{
    return e.network.automata[EncodedNetwork::automaton_of(action)].transitions[EncodedNetwork::transition_index(role)];
}

} // namespace

TEST_CASE("size formulas on random problems")
{
    std::mt19937_64 rng(31);
    for (int k = 0; k < 300; ++k) {
        const auto p = random_problem(rng);
        const auto e = encode(p, EncodeOptions{random_epsilon(rng)});
        std::size_t locs = 0, trans = 0;
        for (const auto& a : e.network.automata) {
            locs += a.locations.size();
            trans += a.transitions.size();
        }
        REQUIRE(e.network.vars.size() == 2 * p.props.size() + 2);
        REQUIRE(e.network.clocks.size() == 2 * p.actions.size());
        REQUIRE(e.network.automata.size() == p.actions.size() + 1);
        REQUIRE(locs == 3 + 4 * p.actions.size());
        REQUIRE(trans == 3 + 5 * p.actions.size());
    }
}

TEST_CASE("variable table layout and bounds")
{
    const auto pr = rooms();
    const auto e = encode(pr);
    CHECK(e.network.vars.size() == 2 * 16 + 2);
    CHECK(e.network.vars[e.vars.vp.at("open(d)")].name == "vp.open(d)");
    CHECK(e.network.vars[e.vars.lp.at("open(d)")].hi == 24);
    CHECK(e.network.vars[e.vars.aa].name == "aa");
    CHECK(e.network.vars[e.vars.ps].hi == 2);
    for (const auto& v : e.network.vars) CHECK(v.init == 0);
    CHECK(e.network.clocks[e.clocks.of(2, SnapKind::End)] == "ca." + pr.actions[2].name + ".E");

    const auto empty = encode_vars(PlanningProblem{});
    CHECK(empty.vp.empty());
    CHECK(empty.lp.empty());
    CHECK(empty.aa != empty.ps);
    const auto again = encode_vars(pr);
    CHECK(again.vp == e.vars.vp);
    CHECK(again.lp == e.vars.lp);
}

TEST_CASE("mutex guards")
{
    const auto solo = single(snap({"p"}, {}, {}), snap({}, {"q"}, {}), {}, 1, 2);
    const auto ct = encode_clocks(solo);
    CHECK(mutex_guards(solo, ct, 0, SnapKind::Start, {}).empty());
    CHECK(mutex_guards(solo, ct, 0, SnapKind::End, {}).empty());

    const auto pr = rooms();
    const auto od = action_index(pr, "open_door_rb2_d_rm1");
    const auto mv2 = action_index(pr, "move_rb2_d_rm1_rm2");
    const auto clocks = encode_clocks(pr);
    const auto z = mutex_guards(pr, clocks, od, SnapKind::End, EncodeOptions{0});
    CHECK(has_guard(z, clocks.of(mv2, SnapKind::Start), ta::Rel::Gt, 0));
    for (const auto& g : z) CHECK(g.rel == ta::Rel::Gt);
    const auto half = mutex_guards(pr, clocks, od, SnapKind::End, EncodeOptions{Rational(1, 2)});
    CHECK(has_guard(half, clocks.of(mv2, SnapKind::Start), ta::Rel::Gt, 0));
    CHECK(has_guard(half, clocks.of(mv2, SnapKind::Start), ta::Rel::Ge, Rational(1, 2)));
    CHECK(half.size() == 2 * z.size());

    // own other snap is guarded when mutex with the acting snap
    const auto self = single(snap({"p"}, {}, {}), snap({}, {}, {"p"}), {}, 1, 2);
    const auto sc = encode_clocks(self);
    const auto g = mutex_guards(self, sc, 0, SnapKind::End, {});
    CHECK(guarded_clocks(g) == std::set<std::size_t>{sc.of(0, SnapKind::Start)});
    CHECK(mutex_guards(self, sc, 0, SnapKind::End, EncodeOptions{0, false, true}).empty());
}

TEST_CASE("mutex guards are symmetric across snaps")
{
    std::mt19937_64 rng(12);
    for (int k = 0; k < 200; ++k) {
        const auto p = random_problem(rng);
        const auto ct = encode_clocks(p);
        for (std::size_t a = 0; a < p.actions.size(); ++a)
            for (auto ka : {SnapKind::Start, SnapKind::End})
                for (std::size_t b = 0; b < p.actions.size(); ++b)
                    for (auto kb : {SnapKind::Start, SnapKind::End}) {
                        if (a == b && ka == kb) continue;
                        const bool ab = guarded_clocks(mutex_guards(p, ct, a, ka, {})).count(ct.of(b, kb));
                        const bool ba = guarded_clocks(mutex_guards(p, ct, b, kb, {})).count(ct.of(a, ka));
                        REQUIRE(ab == ba);
                        REQUIRE(ab == mutex(p.actions[a].snap(ka), p.actions[b].snap(kb)));
                    }
    }
}

TEST_CASE("duration bound guards")
{
    const auto mv = action("mv", {}, {}, {}, 2, 5);
    const ClockTable ct{{0}, {1}};
    const auto g = sat_dur_bounds(ct, 0, mv);
    CHECK(g == std::vector<ta::ClockConstraint>{{0, ta::Rel::Ge, 2}, {0, ta::Rel::Le, 5}});
    CHECK(sat_dur_bounds(ct, 0, action("od", {}, {}, {}, 3, 3))
          == std::vector<ta::ClockConstraint>{{0, ta::Rel::Ge, 3}, {0, ta::Rel::Le, 3}});
    CHECK(sat_dur_bounds(ct, 0, action("z", {}, {}, {}, 0, 1))[0] == ta::ClockConstraint{0, ta::Rel::Ge, 0});
    CHECK(sat_dur_bounds(ct, 0, action("s", {}, {}, {}, 1, 2, true, true))
          == std::vector<ta::ClockConstraint>{{0, ta::Rel::Gt, 1}, {0, ta::Rel::Lt, 2}});
}

TEST_CASE("effects, preconditions and invariant protection")
{
    const auto pr = rooms();
    const auto vars = encode_vars(pr);
    const auto both = prop_effs(vars, snap({}, {"open(d)"}, {"open(d)"}));
    CHECK(const_updates(both) == std::map<std::size_t, Rational>{{vars.vp.at("open(d)"), 1}});
    CHECK(prop_effs(vars, SnapAction{}).empty());
    const auto& od = pr.actions[action_index(pr, "open_door_rb2_d_rm1")];
    CHECK(const_updates(prop_effs(vars, od.end))
          == std::map<std::size_t, Rational>{{vars.vp.at("idle(rb2)"), 1}, {vars.vp.at("open(d)"), 1}});
    CHECK(const_updates(prop_effs(vars, od.start))
          == std::map<std::size_t, Rational>{{vars.vp.at("idle(rb2)"), 0}, {vars.vp.at("closed(d)"), 0}});

    CHECK(eqs(pre_sat(vars, od.start))
          == std::set<std::pair<std::size_t, Rational>>{{vars.vp.at("idle(rb2)"), 1}, {vars.vp.at("closed(d)"), 1}});
    CHECK(std::holds_alternative<ta::BExpr::True>(pre_sat(vars, SnapAction{}).node()));
    CHECK(std::holds_alternative<ta::BExpr::True>(eff_sat_invs(vars, snap({}, {"open(d)"}, {"open(d)"})).node()));
    const auto& cd = pr.actions[action_index(pr, "close_door_rb2_d_rm2")];
    CHECK(eqs(eff_sat_invs(vars, cd.start))
          == std::set<std::pair<std::size_t, Rational>>{{vars.lp.at("idle(rb2)"), 0}, {vars.lp.at("open(d)"), 0}});
}

TEST_CASE("main automaton")
{
    PlanningProblem p;
    p.props = {"p", "q"};
    p.init = {"p", "q"};
    const auto vars = encode_vars(p);
    const auto m = build_main_automaton(p, vars);
    CHECK(m.locations == std::vector<std::string>{"init_M", "plan_M", "goal_M"});
    CHECK(m.urgent == std::vector<std::size_t>{loc::init_m});
    REQUIRE(m.transitions.size() == 3);
    const auto& e1 = m.transitions[0];
    CHECK(std::holds_alternative<ta::BExpr::True>(e1.cond.node()));
    CHECK(const_updates(e1.updates)
          == std::map<std::size_t, Rational>{{vars.ps, 1}, {vars.vp.at("p"), 1}, {vars.vp.at("q"), 1}});
    const auto& e2 = m.transitions[1];
    CHECK(eqs(e2.cond) == std::set<std::pair<std::size_t, Rational>>{{vars.aa, 0}});
    CHECK(const_updates(e2.updates) == std::map<std::size_t, Rational>{{vars.ps, 2}});
    CHECK(e2.from == loc::plan_m);
    CHECK(e2.to == loc::goal_m);
    const auto& c = m.transitions[2];
    CHECK(c.from == loc::goal_m);
    CHECK(c.to == loc::goal_m);
    CHECK(c.updates.empty());
    CHECK(c.guard.empty());

    p.goal = {"q"};
    CHECK(eqs(build_main_automaton(p, vars).transitions[1].cond)
          == std::set<std::pair<std::size_t, Rational>>{{vars.aa, 0}, {vars.vp.at("q"), 1}});
}

TEST_CASE("action automata on the worked example")
{
    const auto pr = rooms();
    const auto e = encode(pr, EncodeOptions{Rational(1, 2)});
    const auto mv1 = action_index(pr, "move_rb1_d_rm1_rm2");
    const auto cd = action_index(pr, "close_door_rb2_d_rm2");
    for (std::size_t a = 0; a < pr.actions.size(); ++a) {
        const auto& au = e.network.automata[EncodedNetwork::automaton_of(a)];
        REQUIRE(au.locations.size() == 4);
        REQUIRE(au.transitions.size() == 5);
        CHECK(au.urgent == std::vector<std::size_t>{loc::starting, loc::ending});
        CHECK(au.locations[loc::running] == pr.actions[a].name + ".running");
        const auto sc = e.clocks.of(a, SnapKind::Start), ec = e.clocks.of(a, SnapKind::End);
        CHECK(tr(e, a, Role::Se).resets == std::vector<std::size_t>{sc});
        CHECK(tr(e, a, Role::Ee).resets == std::vector<std::size_t>{ec});
        CHECK(tr(e, a, Role::Ie).resets == std::vector<std::size_t>{ec});
        CHECK(tr(e, a, Role::SePrime).resets.empty());
        CHECK(tr(e, a, Role::EePrime).resets.empty());
        for (const auto& t : au.transitions) {
            const auto first = t.cond.conjuncts();
            REQUIRE_FALSE(first.empty());
            CHECK(as_eq(first[0]) == std::make_optional(std::make_pair(e.vars.ps, Rational(1))));
        }
        CHECK(tr(e, a, Role::Se).from == loc::inactive);
        CHECK(tr(e, a, Role::Se).to == loc::starting);
        CHECK(tr(e, a, Role::SePrime).to == loc::running);
        CHECK(tr(e, a, Role::Ee).to == loc::ending);
        CHECK(tr(e, a, Role::EePrime).to == loc::inactive);
        CHECK(tr(e, a, Role::Ie).from == loc::starting);
        CHECK(tr(e, a, Role::Ie).to == loc::ending);
        // guard of ee: mutex guards of the end snap, then duration bounds
        auto want = mutex_guards(pr, e.clocks, a, SnapKind::End, e.options);
        const auto dur = sat_dur_bounds(e.clocks, a, pr.actions[a]);
        want.insert(want.end(), dur.begin(), dur.end());
        CHECK(tr(e, a, Role::Ee).guard == want);
        CHECK(tr(e, a, Role::Ie).guard == want);
        CHECK(tr(e, a, Role::Se).guard == mutex_guards(pr, e.clocks, a, SnapKind::Start, e.options));
    }
    // se' of the move increments lp_open(d)
    const auto& sp = tr(e, mv1, Role::SePrime);
    REQUIRE(sp.updates.size() == 1);
    CHECK(sp.updates[0].var == e.vars.lp.at("open(d)"));
    std::vector<std::int64_t> v(e.network.vars.size(), 0);
    CHECK(ta::eval(v, sp.updates[0].expr) == Rational(1));
    const auto& ee = tr(e, mv1, Role::Ee);
    REQUIRE(ee.updates.size() == 1);
    v[e.vars.lp.at("open(d)")] = 1;
    CHECK(ta::eval(v, ee.updates[0].expr) == Rational(0));
    // se of the close requires lp_open(d) = 0
    CHECK(eqs(tr(e, cd, Role::Se).cond).count({e.vars.lp.at("open(d)"), 0}));
}

TEST_CASE("instantaneous edge with zero lower bound is satisfiable at zero")
{
    const auto p = single(snap({}, {"p"}, {}), snap({}, {"q"}, {}), {}, 0, 1);
    const auto e = encode(p);
    const auto& ie = tr(e, 0, Role::Ie);
    const std::vector<Rational> clocks = {0, 5};
    CHECK(ta::ccval(clocks, ie.guard));
}

TEST_CASE("literal ee guard uses the start snap")
{
    const auto pr = rooms();
    const auto od = action_index(pr, "open_door_rb2_d_rm1");
    const EncodeOptions opt{0, true, false};
    const auto e = encode(pr, opt);
    auto want = mutex_guards(pr, e.clocks, od, SnapKind::Start, opt);
    const auto dur = sat_dur_bounds(e.clocks, od, pr.actions[od]);
    want.insert(want.end(), dur.begin(), dur.end());
    CHECK(tr(e, od, Role::Ee).guard == want);
}

TEST_CASE("encode checks the problem and epsilon")
{
    auto p = single({}, {}, {}, 1, 2);
    CHECK_THROWS_AS((void)encode(p, EncodeOptions{-1}), ModelError);
    p.goal = {"zzz"};
    CHECK_THROWS_AS((void)encode(p), ResolutionError);
}

TEST_CASE("encoded networks are well formed and deterministic")
{
    std::mt19937_64 rng(77);
    for (int k = 0; k < 100; ++k) {
        const auto p = random_problem(rng);
        const auto opt = EncodeOptions{random_epsilon(rng)};
        const auto a = encode(p, opt);
        const auto b = encode(p, opt);
        CHECK_NOTHROW(a.network.check());
        REQUIRE(io::export_network(a, io::Format::Internal) == io::export_network(b, io::Format::Internal));
        REQUIRE(io::export_network(a, io::Format::CheckerCompat) == io::export_network(b, io::Format::CheckerCompat));
        const auto q = a.initial();
        REQUIRE(std::all_of(q.vars.begin(), q.vars.end(), [](auto v) { return v == 0; }));
        REQUIRE(std::all_of(q.locations.begin(), q.locations.end(), [](auto l) { return l == 0; }));
        REQUIRE_FALSE(a.accepting(q));
        for (std::size_t au = 0; au < a.network.automata.size(); ++au)
            for (std::size_t t = 0; t < a.network.automata[au].transitions.size(); ++t) {
                const auto l = a.label(au, t);
                REQUIRE(a.step(l.role, l.action) == ta::InternalStep{au, t});
            }
    }
}

TEST_CASE("step rejects role and action mismatches")
{
    const auto e = encode(single({}, {}, {}, 1, 2));
    CHECK_THROWS((void)e.step(Role::Se));
    CHECK_THROWS((void)e.step(Role::E1M, 0));
    CHECK(e.step(Role::E1M) == ta::InternalStep{0, 0});
    CHECK(e.step(Role::EePrime, 0) == ta::InternalStep{1, EncodedNetwork::transition_index(Role::EePrime)});
}
