#include <gtest/gtest.h>

#include "bclab/config.hpp"

using namespace bclab;

TEST(Config, DefaultsRoundTripByteIdentical)
{
    const RunConfig a;
    const std::string text = canonical(to_json(a));
    const RunConfig b = config_from_json(json::parse(text));
    EXPECT_EQ(canonical(to_json(b)), text);
    EXPECT_EQ(params_digest(a), params_digest(b));
    EXPECT_EQ(b.nu[2], (cplx{0.0, 0.309}));
    EXPECT_EQ(b.spin0[1], cplx{1.0});
}

TEST(Config, ShippedDefaultFileMatchesBuiltIn)
{
    EXPECT_EQ(read_file(BCLAB_DEFAULT_CONFIG), canonical(to_json(RunConfig{})));
    EXPECT_EQ(params_digest(load_config(BCLAB_DEFAULT_CONFIG)), params_digest(RunConfig{}));
}

TEST(Config, OverridesAndComplexForms)
{
    const json j = json::parse(R"({
        "tau": [0.2, 0.9],
        "seed": 7,
        "model": {"c": 2, "eta": [0.1, 0.05], "nu": [[1, 0], 2, [0, 3], [4, 4]]},
        "gyrostat": {"lambda": [[0.1, 0], [0.2, 0], [0.3, 0]]},
        "simulate": {"dt": 0.01, "steps": 5},
        "tolerances": {"lax": 1e-6, "all": 0.5}
    })");
    const RunConfig c = config_from_json(j);
    EXPECT_EQ(c.tau, (cplx{0.2, 0.9}));
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.c, cplx{2.0});
    EXPECT_EQ(c.nu[1], cplx{2.0});
    EXPECT_EQ(c.nu[3], (cplx{4.0, 4.0}));
    EXPECT_EQ(c.lambda[0], cplx{});
    EXPECT_EQ(c.lambda[3], cplx{0.3});
    EXPECT_EQ(c.steps, 5);
    EXPECT_EQ(c.tol("lax", 1.0), 0.5);
    RunConfig d = c;
    d.tolerance_all.reset();
    EXPECT_EQ(d.tol("lax", 1.0), 1e-6);
    EXPECT_EQ(d.tol("other", 1.0), 1.0);
    // unchanged keys keep their defaults
    EXPECT_EQ(c.p0, cplx{-0.072});
}

TEST(Config, RejectsBadInput)
{
    EXPECT_THROW(config_from_json(json::parse(R"({"bogus": 1})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"tau": [0, 0.01]})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"model": {"nu": [1, 2, 3]}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"model": {"c": [1, 2, 3]}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"seed": "x"})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"simulate": {"dt": 0}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"samples": {"lax": 0}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse(R"({"tolerances": {"lax": -1}})")), ConfigError);
    EXPECT_THROW(config_from_json(json::parse("[1]")), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(Records, JsonRoundTripWithInfiniteResidual)
{
    VerificationRecord r;
    r.suite = "potential_v";
    r.theorem = "duality";
    r.samples = 3;
    r.attempted = 4;
    r.accepted = 3;
    r.max_residual = INFINITY;
    r.tolerance = 1e-12;
    r.seed = 42;
    r.params_digest = "0123456789abcdef";
    r.note = "x";
    r.finish();
    EXPECT_FALSE(r.pass);
    const json j = to_json(r);
    EXPECT_TRUE(j["max_residual"].is_null());
    const VerificationRecord b = record_from_json(j);
    EXPECT_TRUE(std::isinf(b.max_residual));
    EXPECT_EQ(canonical(to_json(b)), canonical(j));
    EXPECT_THROW(record_from_json(json::parse(R"({"suite": "a"})")), ConfigError);
}

TEST(Records, SampleLoopRedrawsAndFails)
{
    int calls = 0;
    const VerificationRecord r = run_samples("s", "t", 5, 1, 1e-3, [&](Rng&) -> std::optional<double> {
        ++calls;
        if (calls % 2)
            return {};
        return 1e-4;
    });
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.accepted, 5);
    EXPECT_EQ(r.attempted, 10);
    const VerificationRecord never = run_samples("s", "t", 2, 1, 1.0, [](Rng&) -> std::optional<double> {
        throw NearPole("always");
    });
    EXPECT_FALSE(never.pass);
    EXPECT_EQ(never.attempted, 2 * max_redraws);
}

TEST(Csv, Rfc4180Quoting)
{
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(csv_row({"x", "y,z", ""}), "x,\"y,z\",\r\n");
    EXPECT_EQ(std::stod(csv_number(0.1)), 0.1);
    EXPECT_EQ(csv_number(-2.0), "-2");
}

TEST(Rng, DeterministicAndUniform)
{
    Rng a(42), b(42), c(43);
    for (int k = 0; k < 100; ++k) {
        const std::uint64_t x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, c.next());
    }
    Rng r(5);
    double sum = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 10000, 0.5, 0.02);
    EXPECT_NE(Rng(1, 0).next(), Rng(1, 1).next());
}

TEST(Digest, Fnv1aReferenceValues)
{
    EXPECT_EQ(digest(""), "cbf29ce484222325");
    EXPECT_EQ(digest("a"), "af63dc4c8601ec8c");
    RunConfig c;
    const std::string d = params_digest(c);
    c.seed = 43;
    EXPECT_NE(params_digest(c), d);
}
