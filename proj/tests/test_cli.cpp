#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <sys/wait.h>

#include "bclab/config.hpp"
#include "bclab/suites.hpp"

using namespace bclab;
namespace fs = std::filesystem;

namespace {

struct Cli : ::testing::Test {
    fs::path dir;

    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("bclab_cli_") + info->name() + "_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    // exit status of `bclab args`, output discarded
    int run(const std::string& args) const
    {
        const std::string cmd = std::string("\"") + BCLAB_CLI + "\" " + args + " >\"" + path("stdout.txt") + "\" 2>\""
            + path("stderr.txt") + "\"";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    json read_json(const std::string& name) const { return json::parse(read_file(path(name))); }
};

// checks the subset of JSON Schema the report schema uses
void check_against(const json& schema, const json& root, const json& v, const std::string& where)
{
    const json& s = schema.contains("$ref") ? root["$defs"][schema["$ref"].get<std::string>().substr(8)] : schema;
    if (s.contains("type")) {
        auto is = [&](const std::string& t) {
            return (t == "array" && v.is_array()) || (t == "object" && v.is_object()) || (t == "string" && v.is_string())
                || (t == "number" && v.is_number()) || (t == "integer" && v.is_number_integer())
                || (t == "boolean" && v.is_boolean()) || (t == "null" && v.is_null());
        };
        bool ok = false;
        if (s["type"].is_array()) {
            for (const auto& t : s["type"])
                ok = ok || is(t.get<std::string>());
        } else {
            ok = is(s["type"].get<std::string>());
        }
        ASSERT_TRUE(ok) << where << ": wrong type";
    }
    if (s.contains("enum")) {
        EXPECT_NE(std::find(s["enum"].begin(), s["enum"].end(), v), s["enum"].end()) << where;
    }
    if (s.contains("minimum") && v.is_number()) {
        EXPECT_GE(v.get<double>(), s["minimum"].get<double>()) << where;
    }
    if (s.contains("pattern") && v.is_string()) {
        EXPECT_TRUE(std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>()))) << where;
    }
    if (v.is_array()) {
        if (s.contains("minItems")) {
            EXPECT_GE(v.size(), s["minItems"].get<std::size_t>()) << where;
        }
        if (s.contains("maxItems")) {
            EXPECT_LE(v.size(), s["maxItems"].get<std::size_t>()) << where;
        }
        if (s.contains("items"))
            for (std::size_t k = 0; k < v.size(); ++k)
                check_against(s["items"], root, v[k], where + "[" + std::to_string(k) + "]");
    }
    if (v.is_object()) {
        if (s.contains("required")) {
            for (const auto& k : s["required"])
                EXPECT_TRUE(v.contains(k.get<std::string>())) << where << " lacks " << k;
        }
        for (const auto& [k, x] : v.items()) {
            if (s.contains("properties") && s["properties"].contains(k)) {
                check_against(s["properties"][k], root, x, where + "." + k);
            } else if (s.contains("additionalProperties") && s["additionalProperties"].is_boolean()) {
                EXPECT_TRUE(s["additionalProperties"].get<bool>()) << where << " has extra key " << k;
            } else if (s.contains("additionalProperties")) {
                check_against(s["additionalProperties"], root, x, where + "." + k);
            }
        }
    }
}

void validate(const json& v, const std::string& def = {})
{
    const json schema = json::parse(read_file(BCLAB_SCHEMA));
    check_against(def.empty() ? schema : schema["$defs"][def], schema, v, "$");
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::size_t a = 0;
    for (std::size_t b; (b = text.find("\r\n", a)) != std::string::npos; a = b + 2)
        out.push_back(text.substr(a, b - a));
    EXPECT_EQ(a, text.size()) << "rows must end in CRLF";
    return out;
}

} // namespace

TEST_F(Cli, VerifyPassesDeterministicAndMatchesSchema)
{
    ASSERT_EQ(run("verify --out " + path("a.json")), 0) << read_file(path("stderr.txt"));
    ASSERT_EQ(run("verify --seed 42 --out " + path("b.json")), 0);
    const json a = read_json("a.json"), b = read_json("b.json");
    EXPECT_EQ(without_timing(a), without_timing(b));
    EXPECT_GT(a.size(), 50u);
    validate(a);
    for (const auto& r : a)
        EXPECT_TRUE(r["pass"].get<bool>()) << r["suite"] << " " << r["theorem"];

    ASSERT_EQ(run("verify --seed 7 --out " + path("c.json")), 0);
    EXPECT_NE(without_timing(read_json("c.json")), without_timing(a));
}

TEST_F(Cli, VerifyZeroToleranceFailsEveryRecord)
{
    EXPECT_EQ(run("verify --tolerance 0 --out " + path("z.json")), 1);
    int failed = 0;
    // only records whose residual is exactly zero can survive a zero tolerance
    for (const auto& r : read_json("z.json")) {
        if (r["pass"].get<bool>()) {
            EXPECT_EQ(r["max_residual"].get<double>(), 0.0) << r["theorem"];
        } else {
            ++failed;
        }
    }
    EXPECT_GT(failed, 50);
}

TEST_F(Cli, ConfigErrorsExitTwo)
{
    write_file(path("bad.json"), R"({"tau": [0, 0.01]})");
    EXPECT_EQ(run("verify --config " + path("bad.json") + " --out " + path("x.json")), 2);
    write_file(path("junk.json"), "{not json");
    EXPECT_EQ(run("simulate --flow vd8 --config " + path("junk.json")), 2);
    EXPECT_NE(run("simulate --flow nope"), 0);
    EXPECT_NE(run("frobnicate"), 0);
}

TEST_F(Cli, SimulateWritesCsvAndSummary)
{
    const std::string io = " --out " + path("t.csv") + " --summary " + path("s.json");
    ASSERT_EQ(run("simulate --flow vd4-1 --dt 0.001 --steps 1000" + io), 0);
    const auto rows = lines(read_file(path("t.csv")));
    ASSERT_EQ(rows.size(), 1002u);
    EXPECT_EQ(rows[0], "t,re_p,im_p,re_q,im_q,re_H,im_H,re_det_L,im_det_L");
    const json s = read_json("s.json");
    validate(s, "simulate_summary");
    EXPECT_EQ(s["steps_completed"], 1000);
    EXPECT_LE(s["max_relative_drift"]["H"].get<double>(), 1e-8);

    ASSERT_EQ(run("simulate --flow vd8 --steps 0" + io), 0);
    EXPECT_EQ(lines(read_file(path("t.csv"))).size(), 2u);
    const std::string zero = read_file(path("t.csv"));
    EXPECT_EQ(zero.substr(zero.find("\r\n") + 2, 2), "0,");

    ASSERT_EQ(run("simulate --flow gyrostat --dt 0.001 --steps 1000" + io), 0);
    const auto g = lines(read_file(path("t.csv")));
    EXPECT_EQ(g[0], "t,re_S0,im_S0,re_S1,im_S1,re_S2,im_S2,re_S3,im_S3,re_C1,im_C1,re_C2,im_C2,re_H,im_H");
    const json gs = read_json("s.json");
    EXPECT_LE(gs["max_relative_drift"]["C1"].get<double>(), 1e-8);
    EXPECT_LE(gs["max_relative_drift"]["C2"].get<double>(), 1e-8);

    // same inputs, same bytes
    const std::string first = read_file(path("t.csv"));
    ASSERT_EQ(run("simulate --flow gyrostat --dt 0.001 --steps 1000" + io), 0);
    EXPECT_EQ(read_file(path("t.csv")), first);
}

TEST_F(Cli, SimulateStopsAtPole)
{
    write_file(path("pole.json"), R"({"state": {"p": 0, "q": 1e-9}})");
    EXPECT_EQ(run("simulate --flow vd4-1 --config " + path("pole.json") + " --out " + path("t.csv") + " --summary "
                  + path("s.json")),
        3);
    const json s = read_json("s.json");
    EXPECT_TRUE(s["aborted"].get<bool>());
    EXPECT_TRUE(s.contains("message"));
}

TEST_F(Cli, PoissonTablesAndMerge)
{
    ASSERT_EQ(run("poisson --out " + path("p.json")), 0) << read_file(path("stderr.txt"));
    const json p = read_json("p.json");
    validate(p, "poisson");
    EXPECT_EQ(p["mixed_brackets"]["numeric"].size(), 4u);
    bool canonical_pq = false;
    for (const auto& r : p["records"])
        if (r["theorem"] == "canonical/p_q")
            canonical_pq = r["pass"].get<bool>();
    EXPECT_TRUE(canonical_pq);

    ASSERT_EQ(run("verify --out " + path("v.json")), 0);
    ASSERT_EQ(run("report --merge " + path("v.json") + " " + path("p.json") + " --out " + path("m.json")), 0);
    const json m = read_json("m.json");
    validate(m);
    EXPECT_EQ(m.size(), read_json("v.json").size() + p["records"].size());
    EXPECT_NE(run("report " + path("v.json")), 0);
}
