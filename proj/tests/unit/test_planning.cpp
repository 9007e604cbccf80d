#include "fixtures.hpp"
#include "instances.hpp"

#include "tpta/planning.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace tpta;
using namespace tpta::testing;

namespace {

PlanningProblem two_prop_problem()
{
    PlanningProblem p;
    p.props = {"p", "q"};
    p.actions.push_back(action("a", snap({}, {}, {"p"}), snap({}, {"q"}, {}), {}, 0, 10));
    p.actions.push_back(action("b", snap({}, {}, {}), snap({}, {}, {}), {}, 0, 0));
    p.init = {"p"};
    return p;
}

PropSet room_init()
{
    return {"idle(rb1)", "idle(rb2)", "closed(d)", "in(rb1,rm1)", "in(rb2,rm1)", "in(b,rm1)",
            "connects(d,rm1,rm2)", "connects(d,rm2,rm1)"};
}

} // namespace

TEST_CASE("mutex on the worked example and the empty snap")
{
    const auto pr = rooms();
    const auto& od = pr.actions[action_index(pr, "open_door_rb2_d_rm1")];
    const auto& mv2 = pr.actions[action_index(pr, "move_rb2_d_rm1_rm2")];
    CHECK(mutex(od.end, mv2.start));
    CHECK(mutex(mv2.start, od.end));
    CHECK_FALSE(mutex(SnapAction{}, SnapAction{}));
}

TEST_CASE("mutex agrees with the 9-pair enumeration and is symmetric")
{
    std::mt19937_64 rng(11);
    const std::vector<Proposition> props = {"x", "y", "z"};
    for (int k = 0; k < 2000; ++k) {
        const SnapAction a{random_subset(rng, props, 0.3), random_subset(rng, props, 0.3),
                           random_subset(rng, props, 0.3)};
        const SnapAction b{random_subset(rng, props, 0.3), random_subset(rng, props, 0.3),
                           random_subset(rng, props, 0.3)};
        REQUIRE(mutex(a, b) == oracle_mutex(a, b));
        REQUIRE(mutex(a, b) == mutex(b, a));
    }
}

TEST_CASE("dur_c_sat is the conjunction of both bounds")
{
    const auto mv = action("mv", {}, {}, {}, 2, 5);
    CHECK(dur_c_sat(mv, 3));
    CHECK(dur_c_sat(mv, 2));
    CHECK(dur_c_sat(mv, 5));
    CHECK_FALSE(dur_c_sat(mv, 1));
    CHECK_FALSE(dur_c_sat(mv, 6));
    const auto od = action("od", {}, {}, {}, 3, 3);
    CHECK(dur_c_sat(od, 3));
    CHECK(dur_c_sat(action("z", {}, {}, {}, 0, 0), 0));
    const auto open = action("o", {}, {}, {}, 1, 2, true, true);
    CHECK_FALSE(dur_c_sat(open, 1));
    CHECK_FALSE(dur_c_sat(open, 2));
    CHECK(dur_c_sat(open, Rational(3, 2)));
}

TEST_CASE("induced parallel plan and happening points")
{
    CHECK(induced_parallel_plan(Plan{}).empty());
    CHECK(htps(Plan{}).empty());

    const Plan one{{PlanStep{0, 2, 3}}};
    const auto snaps = induced_parallel_plan(one);
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0] == TimedSnap{2, 0, SnapKind::Start});
    CHECK(snaps[1] == TimedSnap{5, 0, SnapKind::End});
    CHECK(htps(one) == std::vector<Rational>{2, 5});

    const Plan two{{PlanStep{0, 2, 3}, PlanStep{1, 2, 0}}};
    CHECK(htps(two) == std::vector<Rational>{2, 5});
    CHECK(induced_parallel_plan(two).size() == 4);

    const auto pr = rooms();
    const auto fig = fixture_plan(pr, "rooms_valid.plan");
    CHECK(induced_parallel_plan(fig).size() == 8);
    CHECK(htps(fig) == std::vector<Rational>{0, 3, 4, 6, 7, 10});
}

TEST_CASE("structurally identical actions give distinct timed snaps")
{
    PlanningProblem p;
    p.props = {"p"};
    p.actions.push_back(action("a", snap({}, {"p"}, {}), snap({}, {}, {}), {}, 0, 5));
    p.actions.push_back(action("b", snap({}, {"p"}, {}), snap({}, {}, {}), {}, 0, 5));
    const Plan plan{{PlanStep{0, 1, 1}, PlanStep{1, 1, 1}}};
    CHECK(induced_parallel_plan(plan).size() == 4);
}

TEST_CASE("effects and invariants at a point")
{
    const auto pr = rooms();
    const auto fig = fixture_plan(pr, "rooms_valid.plan");
    const auto none = effects_at(pr, fig, Rational(1, 2));
    CHECK(none.adds.empty());
    CHECK(none.dels.empty());
    const auto at3 = effects_at(pr, fig, 3);
    CHECK(at3.adds.count("idle(rb2)"));
    CHECK(at3.adds.count("open(d)"));
    CHECK(at3.dels == PropSet{"idle(rb1)", "in(rb1,rm1)"});

    CHECK(invs_at(pr, fig, -1).empty());
    CHECK(invs_at(pr, fig, 5).count("open(d)"));
    // the move of rb1 starts at 3: its over_all is excluded at its own start
    CHECK(invs_at(pr, fig, 3) == PropSet{"in(rb2,rm1)"});
    CHECK(invs_at(pr, fig, 7).count("open(d)"));
}

TEST_CASE("effects_at equals a fold over the timed snaps")
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        const auto in = random_instance(rng);
        for (const auto& t : htps(in.plan)) {
            PropSet adds, dels;
            for (const auto& s : in.plan.steps)
                for (auto kind : {SnapKind::Start, SnapKind::End}) {
                    const Rational at = kind == SnapKind::Start ? s.start : s.finish();
                    if (at != t) continue;
                    const auto& h = in.problem.actions[s.action].snap(kind);
                    adds.insert(h.adds.begin(), h.adds.end());
                    dels.insert(h.dels.begin(), h.dels.end());
                }
            const auto e = effects_at(in.problem, in.plan, t);
            REQUIRE(e.adds == adds);
            REQUIRE(e.dels == dels);
        }
    }
}

TEST_CASE("state sequence of the worked example matches a hand simulation")
{
    const auto pr = rooms();
    const auto states = state_sequence(pr, fixture_plan(pr, "rooms_valid.plan"));
    REQUIRE(states.size() == 7);
    const PropSet conn = {"connects(d,rm1,rm2)", "connects(d,rm2,rm1)"};
    auto with = [&](PropSet s) {
        s.insert(conn.begin(), conn.end());
        return s;
    };
    CHECK(states[0] == room_init());
    CHECK(states[1] == with({"idle(rb1)", "in(rb1,rm1)", "in(rb2,rm1)", "in(b,rm1)"}));
    CHECK(states[2] == with({"idle(rb2)", "open(d)", "in(rb2,rm1)", "in(b,rm1)"}));
    CHECK(states[3] == with({"open(d)", "in(b,rm1)"}));
    CHECK(states[4] == with({"open(d)", "in(b,rm1)", "idle(rb2)", "in(rb2,rm2)"}));
    CHECK(states[5] == with({"in(b,rm1)", "in(rb2,rm2)", "idle(rb1)", "in(rb1,rm2)"}));
    CHECK(states[6] == with({"in(b,rm1)", "in(rb2,rm2)", "idle(rb1)", "in(rb1,rm2)", "idle(rb2)", "closed(d)"}));
}

TEST_CASE("state sequence basics")
{
    const auto p = two_prop_problem();
    CHECK(state_sequence(p, Plan{}) == StateSequence{p.init});
    const auto s = state_sequence(p, Plan{{PlanStep{0, 1, 2}}});
    REQUIRE(s.size() == 3);
    CHECK(s[1] == PropSet{});
    CHECK(s[2] == PropSet{"q"});
}

TEST_CASE("separation on the worked example")
{
    const auto pr = rooms();
    CHECK(separation_ok(pr, fixture_plan(pr, "rooms_valid.plan"), 1));
    CHECK_FALSE(separation_ok(pr, fixture_plan(pr, "rooms_a3_at_t3.plan"), 0));
    CHECK(separation_ok(two_prop_problem(), Plan{{PlanStep{1, 0, 0}, PlanStep{1, 0, 0}}}, 100));
}

TEST_CASE("no self overlap uses closed intervals")
{
    CHECK_FALSE(no_self_overlap(Plan{{PlanStep{0, 0, 2}, PlanStep{0, 2, 2}}}));
    CHECK(no_self_overlap(Plan{{PlanStep{0, 0, 2}, PlanStep{0, 3, 1}}}));
    CHECK(no_self_overlap(Plan{{PlanStep{0, 0, 2}, PlanStep{1, 1, 2}}}));
    CHECK_FALSE(no_self_overlap(Plan{{PlanStep{1, 3, 0}, PlanStep{1, 3, 0}}}));
}

TEST_CASE("validate the worked example")
{
    const auto pr = rooms();
    const auto ok = validate_plan(pr, fixture_plan(pr, "rooms_valid.plan"), 0);
    CHECK(ok.valid);
    CHECK(ok.no_self_overlap);
    const auto bad = validate_plan(pr, fixture_plan(pr, "rooms_a3_at_t3.plan"), 0);
    CHECK_FALSE(bad.valid);
    CHECK(bad.cites(Clause::MutexSeparation));
    bool at3 = false;
    for (const auto& d : bad.diagnostics)
        if (d.clause == Clause::MutexSeparation && d.time == Rational(3)) at3 = true;
    CHECK(at3);
}

TEST_CASE("empty plan is valid iff goal is in the initial state")
{
    auto p = two_prop_problem();
    p.goal = {"p"};
    CHECK(validate_plan(p, Plan{}, 0).valid);
    p.goal = {"q"};
    const auto v = validate_plan(p, Plan{}, 0);
    CHECK_FALSE(v.valid);
    REQUIRE(v.first());
    CHECK(v.first()->clause == Clause::Goal);
}

TEST_CASE("unknown action names are a resolution error")
{
    const auto p = two_prop_problem();
    const NamedPlan named = {NamedPlanStep{"nope", 0, 1, 1}};
    CHECK_THROWS_AS((void)validate_plan(p, named, 0), ResolutionError);
}

TEST_CASE("problem check rejects malformed models")
{
    auto p = two_prop_problem();
    p.init.insert("ghost");
    CHECK_THROWS_AS(p.check(), ResolutionError);
    p = two_prop_problem();
    p.actions[0].lower.value = 20;
    CHECK_THROWS_AS(p.check(), ModelError);
    p = two_prop_problem();
    p.actions.push_back(p.actions[0]);
    CHECK_THROWS_AS(p.check(), ResolutionError);
    p = two_prop_problem();
    p.props.push_back("p");
    CHECK_THROWS_AS(p.check(), ResolutionError);
}

TEST_CASE("diagnostics are sorted by clause then time")
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 300; ++k) {
        const auto in = random_instance(rng);
        const auto v = validate_plan(in.problem, in.plan, in.epsilon);
        REQUIRE(v.valid == v.diagnostics.empty());
        for (std::size_t j = 1; j < v.diagnostics.size(); ++j)
            REQUIRE(v.diagnostics[j - 1].clause <= v.diagnostics[j].clause);
    }
}

TEST_CASE("validator agrees with the clause-by-clause oracle")
{
    std::mt19937_64 rng(2024);
    int invalid = 0;
    for (int k = 0; k < 300; ++k) {
        const auto in = random_instance(rng);
        const auto got = validate_plan(in.problem, in.plan, in.epsilon);
        const auto want = oracle_validate(in.problem, in.plan, in.epsilon);
        REQUIRE(got.valid == want.valid);
        REQUIRE(findings_of(got) == want.findings);
        REQUIRE(got.no_self_overlap == no_self_overlap(in.plan));
        invalid += !got.valid;
    }
    CHECK(invalid > 30);
}

TEST_CASE("planning invariants on random plans")
{
    std::mt19937_64 rng(99);
    for (int k = 0; k < 300; ++k) {
        const auto in = random_instance(rng);
        const auto snaps = induced_parallel_plan(in.plan);
        const auto points = htps(in.plan);
        std::set<std::tuple<Rational, std::size_t, int>> keys;
        for (const auto& s : in.plan.steps) {
            keys.insert({s.start, s.action, 0});
            keys.insert({s.finish(), s.action, 1});
        }
        REQUIRE(snaps.size() == keys.size());
        REQUIRE(std::is_sorted(snaps.begin(), snaps.end()));
        std::set<Rational> times;
        for (const auto& s : snaps) times.insert(s.time);
        REQUIRE(std::vector<Rational>(times.begin(), times.end()) == points);
        for (std::size_t j = 1; j < points.size(); ++j) REQUIRE(points[j - 1] < points[j]);
        const auto states = state_sequence(in.problem, in.plan);
        REQUIRE(states.front() == in.problem.init);
        REQUIRE(states.size() == points.size() + 1);
        // separation is monotone in epsilon
        for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 4), Rational(0)}) {
            if (separation_ok(in.problem, in.plan, eps))
                for (const Rational smaller : {Rational(0), eps / 2}) REQUIRE(separation_ok(in.problem, in.plan, smaller));
        }
    }
}

TEST_CASE("every step counts twice with distinct actions")
{
    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
        const auto pr = random_problem(rng);
        Plan plan;
        for (std::size_t a = 0; a < pr.actions.size(); ++a)
            plan.steps.push_back(PlanStep{a, random_rational(rng, 4), 1 + random_rational(rng, 2)});
        REQUIRE(induced_parallel_plan(plan).size() == 2 * plan.steps.size());
    }
}

TEST_CASE("non-mutex snaps at one point commute")
{
    std::mt19937_64 rng(8);
    const std::vector<Proposition> props = {"x", "y", "z", "w"};
    int checked = 0;
    for (int k = 0; k < 3000; ++k) {
        const SnapAction a{random_subset(rng, props, 0.3), random_subset(rng, props, 0.3),
                           random_subset(rng, props, 0.3)};
        const SnapAction b{random_subset(rng, props, 0.3), random_subset(rng, props, 0.3),
                           random_subset(rng, props, 0.3)};
        if (mutex(a, b)) continue;
        const auto s = random_subset(rng, props, 0.5);
        auto apply = [](PropSet m, const SnapAction& h) {
            for (const auto& p : h.dels) m.erase(p);
            m.insert(h.adds.begin(), h.adds.end());
            return m;
        };
        PlanningProblem pr;
        pr.props = props;
        pr.actions.push_back(action("a", a, {}, {}, 1, 1));
        pr.actions.push_back(action("b", b, {}, {}, 1, 1));
        pr.init = s;
        const auto joint = state_sequence(pr, Plan{{PlanStep{0, 0, 1}, PlanStep{1, 0, 1}}})[1];
        REQUIRE(apply(apply(s, a), b) == apply(apply(s, b), a));
        REQUIRE(joint == apply(apply(s, a), b));
        ++checked;
    }
    CHECK(checked > 100);
}
