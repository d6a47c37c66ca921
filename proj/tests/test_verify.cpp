#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taox/verify.hpp"

TEST_CASE("verification suite passes end to end") {
    auto results = taox::run_verification(200);
    CHECK(results.size() == 8);
    for (const auto& r : results) {
        CAPTURE(r.name);
        CAPTURE(r.detail);
        CHECK(r.passed);
    }
}
