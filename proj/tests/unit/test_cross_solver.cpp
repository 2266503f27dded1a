#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "lecdc/coordinator.hpp"
#include "lecdc/solvers.hpp"

using namespace lecdc;

TEST_CASE("external engine agrees on the emitted day model") {
    const char* path = std::getenv("LECDC_CBC_PATH");
    if (!path) {
        MESSAGE("LECDC_CBC_PATH not set; skipped");
        return;
    }
    milp::CbcFileAdapter cbc(path);
    REQUIRE(cbc.available());
    milp::HighsAdapter highs;
    auto b = load_case(fixtures::desk10_day());
    for (auto s : {ScenarioConfig::nc(), ScenarioConfig::tc_jp_afrr()}) {
        auto a = assemble(b, s);
        auto h = milp::solve(a.model, highs);
        auto c = milp::solve(a.model, cbc);
        REQUIRE(h.optimal());
        REQUIRE(c.optimal());
        CHECK(std::abs(c.objective - h.objective) <= 1e-6 * std::max(1.0, std::abs(h.objective)));
    }
}
