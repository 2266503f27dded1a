#include <chrono>

#include "doctest.h"
#include "fixtures.hpp"
#include "invariants.hpp"
#include "lecdc/coordinator.hpp"
#include "lecdc/solvers.hpp"
#include "oracle.hpp"

using namespace lecdc;
using milp::LinExpr;
using milp::Sense;

TEST_CASE("reference simplex on known LPs") {
    SUBCASE("two-variable production") {
        milp::Model m;
        auto x = m.continuous("x");
        auto y = m.continuous("y");
        m.add_constraint("a", LinExpr(x) + y, Sense::le, 4.0);
        m.add_constraint("b", LinExpr(x) + 3.0 * LinExpr(y), Sense::le, 6.0);
        m.set_objective(-3.0 * LinExpr(x) - 2.0 * LinExpr(y));
        auto r = oracle::solve_lp(m);
        REQUIRE(r.status == oracle::LpStatus::optimal);
        CHECK(r.objective == doctest::Approx(-12.0));
    }
    SUBCASE("equality, free and negative bounds") {
        milp::Model m;
        auto x = m.continuous("x", -milp::kInf, milp::kInf);
        auto y = m.continuous("y", -5.0, -1.0);
        m.add_constraint("e", LinExpr(x) - y, Sense::eq, 2.0);
        m.set_objective(LinExpr(x));
        auto r = oracle::solve_lp(m);
        REQUIRE(r.status == oracle::LpStatus::optimal);
        CHECK(r.objective == doctest::Approx(-3.0));
        CHECK(r.x[1] == doctest::Approx(-5.0));
    }
    SUBCASE("infeasible and unbounded") {
        milp::Model m;
        auto x = m.continuous("x");
        m.add_constraint("c", LinExpr(x), Sense::le, -1.0);
        m.set_objective(LinExpr(x));
        CHECK(oracle::solve_lp(m).status == oracle::LpStatus::infeasible);
        milp::Model u;
        auto v = u.continuous("v");
        u.set_objective(-LinExpr(v));
        CHECK(oracle::solve_lp(u).status == oracle::LpStatus::unbounded);
    }
    SUBCASE("ge row with negative rhs") {
        milp::Model m;
        auto x = m.continuous("x", -milp::kInf, 10.0);
        m.add_constraint("c", LinExpr(x), Sense::ge, -4.0);
        m.set_objective(LinExpr(x));
        auto r = oracle::solve_lp(m);
        REQUIRE(r.status == oracle::LpStatus::optimal);
        CHECK(r.objective == doctest::Approx(-4.0));
    }
}

TEST_CASE("reference simplex agrees with the embedded solver on random LPs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    milp::HighsAdapter highs;
    int compared = 0;
    for (int k = 0; k < 40; ++k) {
        milp::Model m;
        std::vector<milp::Var> v;
        for (int j = 0; j < 6; ++j) v.push_back(m.continuous("x" + std::to_string(j), -2.0, 3.0));
        for (int i = 0; i < 5; ++i) {
            LinExpr e;
            for (auto x : v) e.add(x, u(rng));
            m.add_constraint("r" + std::to_string(i), e, i % 3 == 0 ? Sense::ge : Sense::le, u(rng));
        }
        LinExpr obj;
        for (auto x : v) obj.add(x, u(rng));
        m.set_objective(obj);
        auto a = oracle::solve_lp(m);
        auto b = milp::solve(m, highs);
        CHECK((a.status == oracle::LpStatus::optimal) == b.optimal());
        if (a.status == oracle::LpStatus::optimal && b.optimal()) {
            CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-7));
            ++compared;
        }
    }
    CHECK(compared > 20);
}

TEST_CASE("MILP optimum matches enumeration on tiny instances") {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    std::mt19937_64 rng(20240601);
    milp::HighsAdapter highs;
    int feasible = 0, infeasible = 0, attempts = 0, with_delta = 0;
    double worst_rel = 0.0, worst_balance = 0.0, worst_qos = 0.0;
    while (feasible < 60 && attempts < 400) {
        ++attempts;
        auto inst = fixtures::tiny_instance(rng);
        auto a = assemble(inst.bundle, inst.scenario);
        const int free = oracle::free_binaries(a.model);
        REQUIRE(free <= 9);
        auto e = oracle::enumerate(a.model, 9);
        WindowOptions direct;
        direct.relax_exclusivity = false;
        auto r = solve_window(inst.bundle, inst.scenario, highs, direct);
        auto q = solve_window(inst.bundle, inst.scenario, highs);
        CHECK(e.feasible == r.optimal());
        CHECK(e.feasible == q.optimal());
        if (!e.feasible || !r.optimal() || !q.optimal()) {
            ++infeasible;
            continue;
        }
        ++feasible;
        if (!a.dc.delay_flags.empty()) ++with_delta;
        const double scale = std::max(1.0, std::abs(e.objective));
        worst_rel = std::max({worst_rel, std::abs(r.objective_cost - e.objective) / scale,
                              std::abs(q.objective_cost - e.objective) / scale});
        for (const auto* rec : {&r, &q}) {
            auto res = invariants::residuals(*rec, inst.bundle, inst.scenario);
            worst_balance = std::max(worst_balance, invariants::worst_balance(res));
            worst_qos = std::max(worst_qos, invariants::worst_qos(res));
        }
    }
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();
    MESSAGE(feasible << " feasible and " << infeasible << " infeasible instances, " << with_delta
                     << " with delay indicators, worst relative gap " << worst_rel << ", " << seconds << " s");
    CHECK(feasible >= 50);
    CHECK(with_delta >= 10);
    CHECK(worst_rel <= 1e-6);
    CHECK(worst_balance <= 1e-6);
    CHECK(worst_qos <= 1e-6);
    CHECK(seconds < 120.0);
}
