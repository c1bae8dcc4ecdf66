#include "sweep.hpp"

#include <doctest.h>

#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

using taskchain::cli::SweepSpec;

TEST_SUITE("sweep")
{
    TEST_CASE("sweep settings validation")
    {
        SweepSpec spec;
        spec.s_values = {10};
        CHECK_NOTHROW(spec.check());

        auto bad = spec;
        bad.model = "ising";
        CHECK_THROWS_AS(bad.check(), std::invalid_argument);
        bad = spec;
        bad.s_values.clear();
        CHECK_THROWS_AS(bad.check(), std::invalid_argument);
        bad = spec;
        bad.n_values = {1, 0};
        CHECK_THROWS_AS(bad.check(), std::invalid_argument);
        bad = spec;
        bad.seeds = 0;
        CHECK_THROWS_AS(bad.check(), std::invalid_argument);
        bad = spec;
        bad.cycle_cap = 0;
        CHECK_THROWS_AS(bad.check(), std::invalid_argument);
        bad = spec;
        bad.model = "sir";
        bad.s_values = {30};
        CHECK_THROWS_WITH_AS(bad.check(), doctest::Contains("does not divide"), std::invalid_argument);
    }

    TEST_CASE("digest formatting")
    {
        CHECK(taskchain::cli::format_digest(0) == "0000000000000000");
        CHECK(taskchain::cli::format_digest(0xdeadbeefULL) == "00000000deadbeef");
    }

    TEST_CASE("a small cultural sweep writes one row per cell")
    {
        SweepSpec spec;
        spec.model = "cultural";
        spec.cultural.agents = 100;
        spec.cultural.steps = 2000;
        spec.s_values = {50, 200};
        spec.validate = true;
        std::ostringstream csv, log;
        const auto outcome = taskchain::cli::run_sweep(spec, csv, log);

        CHECK(outcome.rows.size() == 50);
        CHECK(outcome.aborted == 0);
        CHECK(outcome.validation_failures == 0);
        CHECK(outcome.digest_mismatches == 0);
        CHECK(outcome.inconsistent_digests == 0);

        std::istringstream lines(csv.str());
        std::string line;
        std::getline(lines, line);
        CHECK(line == "model,s,n,seed,steps,wall_ms,digest");
        std::set<std::tuple<std::uint64_t, std::uint32_t, std::uint64_t>> cells;
        int count = 0;
        for (const auto &r : outcome.rows)
        {
            cells.emplace(r.s, r.n, r.seed);
            CHECK(r.model == "cultural");
            CHECK(r.steps == 2000);
            CHECK(r.wall_ms > 0.0);
        }
        while (std::getline(lines, line))
            ++count;
        CHECK(count == 50);
        CHECK(cells.size() == 50);
    }

    TEST_CASE("a small sir sweep is consistent across worker counts")
    {
        SweepSpec spec;
        spec.model = "sir";
        spec.sir.steps = 20;
        spec.s_values = {10, 100};
        spec.n_values = {3, 1};
        spec.seeds = 2;
        spec.validate = true;
        std::ostringstream csv, log;
        const auto outcome = taskchain::cli::run_sweep(spec, csv, log);
        REQUIRE(outcome.rows.size() == 8);
        CHECK(outcome.rows[0].n == 1); // n = 1 runs first to set the watchdog budget
        CHECK(outcome.rows[1].n == 3);
        CHECK(outcome.rows[0].digest == outcome.rows[1].digest);
        CHECK(outcome.validation_failures == 0);
        CHECK(outcome.digest_mismatches == 0);
    }
}
