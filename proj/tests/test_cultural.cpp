#include "taskchain/cultural.hpp"
#include "taskchain/rng.hpp"
#include "taskchain/verify.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace taskchain;

namespace
{
    CulturalParams small(std::uint32_t n, std::uint32_t f, std::uint32_t q, std::uint64_t steps = 100)
    {
        CulturalParams p;
        p.agents = n;
        p.features = f;
        p.traits = q;
        p.steps = steps;
        return p;
    }

    // Straightforward restatement of one interaction, used as the reference.
    void reference_interaction(std::vector<std::uint8_t> &traits, std::uint32_t nf, double gate,
                               const CulturalRecipe &r)
    {
        std::vector<std::uint32_t> differing;
        for (std::uint32_t f = 0; f < nf; ++f)
            if (traits[r.source * nf + f] != traits[r.target * nf + f])
                differing.push_back(f);
        const double o = 1.0 - static_cast<double>(differing.size()) / nf;
        if (differing.empty() || o < gate)
            return;
        SplitMix64 rng(r.child_seed);
        const double u = static_cast<double>(rng() >> 11) / 9007199254740992.0;
        if (!(u < o))
            return;
        std::uniform_int_distribution<std::size_t> pick(0, differing.size() - 1);
        const auto f = differing[pick(rng)];
        traits[r.target * nf + f] = traits[r.source * nf + f];
    }
}

TEST_SUITE("cultural")
{
    TEST_CASE("parameter validation")
    {
        CHECK_THROWS_AS(CulturalModel(small(1, 3, 2)), std::invalid_argument);
        CHECK_THROWS_AS(CulturalModel(small(5, 0, 2)), std::invalid_argument);
        CHECK_THROWS_AS(CulturalModel(small(5, 3, 0)), std::invalid_argument);
        CHECK_THROWS_AS(CulturalModel(small(5, 3, 257)), std::invalid_argument);
        auto p = small(5, 3, 2);
        p.omega_gate = 1.5;
        CHECK_THROWS_AS(CulturalModel{p}, std::invalid_argument);
        CHECK_THROWS_AS(CulturalModel(small(2, 2, 2), {0, 1, 1}), std::invalid_argument);
        CHECK_THROWS_AS(CulturalModel(small(2, 2, 2), {0, 1, 1, 2}), std::invalid_argument);
    }

    TEST_CASE("overlap examples")
    {
        // agent 0: 0 1 2 0, agent 1: 0 1 0 1, agent 2: 2 2 2 2
        CulturalModel m(small(3, 4, 3), {0, 1, 2, 0, 0, 1, 0, 1, 2, 2, 2, 2});
        CHECK(m.overlap(0, 1) == doctest::Approx(0.5));
        CHECK(m.overlap(0, 0) == doctest::Approx(1.0));
        CHECK(m.overlap(0, 2) == doctest::Approx(0.25));
        CHECK(m.overlap(1, 2) == doctest::Approx(0.0));
        CHECK(m.overlap(2, 1) == m.overlap(1, 2));
        CHECK_THROWS_AS(m.overlap(0, 3), std::out_of_range);
    }

    TEST_CASE("initial traits lie in [0, q) and use every value")
    {
        CulturalModel m(small(500, 10, 7));
        std::vector<int> seen(7, 0);
        for (auto t : m.traits())
        {
            REQUIRE(t < 7);
            ++seen[t];
        }
        for (int c : seen)
            CHECK(c > 0);
    }

    TEST_CASE("creation replays the master stream")
    {
        auto p = small(50, 5, 3, 1000);
        p.seed = 77;
        CulturalModel m(p);
        std::mt19937_64 master(derive_seed(77, kMasterStreamTag));
        std::uniform_int_distribution<std::uint32_t> src(0, 49), oth(0, 48);
        for (std::uint64_t i = 0; i < 1000; ++i)
        {
            const auto r = m.create();
            REQUIRE(r);
            const auto s = src(master);
            auto t = oth(master);
            if (t >= s)
                ++t;
            CHECK(r->source == s);
            CHECK(r->target == t);
            CHECK(r->source != r->target);
            CHECK(r->child_seed == derive_seed(77, i));
        }
        CHECK_FALSE(m.create());
        CHECK(m.created() == 1000);
    }

    TEST_CASE("pairs cover all ordered pairs roughly uniformly")
    {
        CulturalModel m(small(4, 2, 2, 120'000));
        std::vector<int> counts(16, 0);
        while (auto r = m.create())
            ++counts[r->source * 4 + r->target];
        for (std::uint32_t a = 0; a < 4; ++a)
            for (std::uint32_t b = 0; b < 4; ++b)
            {
                if (a == b)
                    CHECK(counts[a * 4 + b] == 0);
                else
                    CHECK(counts[a * 4 + b] == doctest::Approx(10'000).epsilon(0.05));
            }
    }

    TEST_CASE("identical agents do not interact")
    {
        CulturalModel m(small(2, 3, 2), {1, 0, 1, 1, 0, 1});
        const auto before = std::vector<std::uint8_t>(m.traits().begin(), m.traits().end());
        for (std::uint64_t s = 0; s < 50; ++s)
            m.execute({0, 1, s});
        CHECK(std::vector<std::uint8_t>(m.traits().begin(), m.traits().end()) == before);
    }

    TEST_CASE("agents with zero overlap never interact")
    {
        CulturalModel m(small(2, 3, 2), {0, 0, 0, 1, 1, 1});
        for (std::uint64_t s = 0; s < 200; ++s)
            m.execute({0, 1, s});
        CHECK(m.overlap(0, 1) == 0.0);
    }

    TEST_CASE("the overlap gate blocks interactions below it")
    {
        auto p = small(2, 4, 2);
        p.omega_gate = 0.6;
        CulturalModel m(p, {0, 0, 0, 0, 0, 0, 1, 1}); // overlap 0.5
        for (std::uint64_t s = 0; s < 200; ++s)
            m.execute({0, 1, s});
        CHECK(m.overlap(0, 1) == 0.5);
    }

    TEST_CASE("a successful interaction copies exactly one differing feature from source to target")
    {
        int copied = 0;
        for (std::uint64_t s = 0; s < 400; ++s)
        {
            CulturalModel m(small(2, 4, 3), {0, 1, 2, 0, 0, 2, 1, 1});
            m.execute({0, 1, s});
            const auto src = m.row(0);
            const auto tgt = m.row(1);
            CHECK(std::vector<std::uint8_t>(src.begin(), src.end()) == std::vector<std::uint8_t>{0, 1, 2, 0});
            const double o = m.overlap(0, 1);
            CHECK((o == 0.25 || o == 0.5));
            CHECK(tgt[0] == 0);
            if (o == 0.5)
                ++copied;
        }
        // Interaction probability equals the initial overlap of 0.25.
        CHECK(copied == doctest::Approx(100).epsilon(0.3));
    }

    TEST_CASE("interaction matches the reference rule")
    {
        for (std::uint64_t seed : {1u, 2u, 3u, 4u})
            for (double gate : {0.0, 0.3})
            {
                auto p = small(30, 8, 3, 5000);
                p.seed = seed;
                p.omega_gate = gate;
                CulturalModel m(p);
                std::vector<std::uint8_t> ref(m.traits().begin(), m.traits().end());
                CulturalModel driver(p);
                while (auto r = driver.create())
                {
                    m.execute(*r);
                    reference_interaction(ref, 8, gate, *r);
                }
                CHECK(std::vector<std::uint8_t>(m.traits().begin(), m.traits().end()) == ref);
            }
    }

    TEST_CASE("digest changes with any trait")
    {
        CulturalModel a(small(2, 2, 3), {0, 1, 2, 0});
        CulturalModel b(small(2, 2, 3), {0, 1, 2, 1});
        CulturalModel c(small(2, 2, 3), {0, 1, 2, 0});
        CHECK(a.digest() != b.digest());
        CHECK(a.digest() == c.digest());
    }

    TEST_CASE("dependence examples")
    {
        CulturalModel m(small(10, 2, 2));
        auto rec = m.make_record();
        CHECK_FALSE(m.depends(rec, {1, 2, 0}));
        m.absorb(rec, {1, 2, 0}); // reads 1 and 2, writes 2

        CHECK(m.depends(rec, {2, 5, 0}));       // reads the written agent
        CHECK(m.depends(rec, {5, 2, 0}));       // writes the written agent
        CHECK(m.depends(rec, {5, 1, 0}));       // writes an agent read earlier
        CHECK_FALSE(m.depends(rec, {1, 5, 0})); // both only read agent 1
        CHECK_FALSE(m.depends(rec, {3, 4, 0}));

        m.reset(rec);
        CHECK(rec == m.make_record());
        CHECK_FALSE(m.depends(rec, {2, 5, 0}));
    }

    TEST_CASE("absorb keeps each agent once")
    {
        CulturalModel m(small(10, 2, 2));
        auto rec = m.make_record();
        m.absorb(rec, {1, 2, 0});
        m.absorb(rec, {1, 2, 0});
        m.absorb(rec, {3, 2, 0});
        CHECK(rec.targets_seen == std::vector<std::uint32_t>{2});
        CHECK(rec.sources_seen == std::vector<std::uint32_t>{1, 3});
    }

    TEST_CASE("sequential runs are reproducible and seed dependent")
    {
        auto p = small(100, 10, 3, 20'000);
        CulturalModel a(p), b(p);
        p.seed = 2;
        CulturalModel c(p);
        const auto da = run_sequential(a).digest;
        CHECK(da == run_sequential(b).digest);
        CHECK(da != run_sequential(c).digest);
    }
}
