#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bclab/config.hpp"
#include "bclab/suites.hpp"

using namespace bclab;

namespace {

// exit codes: 0 ok, 1 a record failed, 2 bad config or I/O, 3 trajectory cut at a pole
constexpr int exit_fail = 1;
constexpr int exit_config = 2;
constexpr int exit_pole = 3;

RunConfig config_at(const std::string& path)
{
    return path.empty() ? RunConfig{} : load_config(path);
}

void print_summary(const RecordList& rs)
{
    int failed = 0;
    for (const auto& r : rs)
        if (!r.pass) {
            ++failed;
            std::fprintf(stderr, "FAIL %s %s residual %.3e tolerance %.1e\n", r.suite.c_str(), r.theorem.c_str(),
                r.max_residual, r.tolerance);
        }
    std::printf("%zu records, %d failed\n", rs.size(), failed);
}

int cmd_verify(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out,
    std::optional<double> tolerance)
{
    RunConfig cfg = config_at(config);
    if (seed)
        cfg.seed = *seed;
    if (tolerance)
        cfg.tolerance_all = *tolerance;
    const RecordList rs = SuiteRunner(cfg).verify_all();
    write_file(out.empty() ? cfg.report_path : out, canonical(to_json(rs)));
    print_summary(rs);
    return all_pass(rs) ? 0 : exit_fail;
}

int cmd_simulate(const std::string& config, const std::string& flow, std::optional<double> dt,
    std::optional<long> steps, const std::string& out, const std::string& summary)
{
    RunConfig cfg = config_at(config);
    if (dt)
        cfg.dt = *dt;
    if (steps)
        cfg.steps = *steps;
    if (cfg.dt <= 0 || cfg.steps < 0)
        throw ConfigError("simulate needs dt > 0 and steps >= 0");
    const SuiteRunner run(cfg);
    SuiteRunner::FlowSummary s;
    std::string csv;
    if (flow == "gyrostat") {
        GyroTrajectory tr;
        s = run.simulate_gyrostat(cfg.dt, cfg.steps, &tr);
        csv = trajectory_csv(tr);
    } else {
        FlowId f = FlowId::VD8;
        for (FlowId g : {FlowId::VD8, FlowId::VD4_1, FlowId::VD4_2, FlowId::INOZ})
            if (flow == flow_name(g))
                f = g;
        Trajectory tr;
        s = run.simulate_flow(f, cfg.dt, cfg.steps, &tr);
        csv = trajectory_csv(tr);
    }
    write_file(out.empty() ? cfg.csv_path : out, csv);
    json j = to_json(s);
    j["dt"] = cfg.dt;
    j["steps"] = cfg.steps;
    j["seed"] = cfg.seed;
    j["params_digest"] = params_digest(cfg);
    write_file(summary.empty() ? cfg.summary_path : summary, canonical(j));
    for (const auto& [k, v] : s.drift)
        std::printf("%s drift %.3e\n", k.c_str(), v);
    if (s.aborted) {
        std::fprintf(stderr, "stopped after %ld steps: %s\n", s.completed, s.message.c_str());
        return exit_pole;
    }
    return 0;
}

int cmd_poisson(const std::string& config, const std::string& out)
{
    const RunConfig cfg = config_at(config);
    const json j = SuiteRunner(cfg).poisson();
    const std::string text = canonical(j);
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    RecordList rs;
    for (const auto& r : j.at("records"))
        rs.push_back(record_from_json(r));
    if (!out.empty())
        print_summary(rs);
    return all_pass(rs) ? 0 : exit_fail;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out)
{
    RecordList rs;
    for (const auto& path : inputs) {
        json j;
        try {
            j = json::parse(read_file(path));
        } catch (const json::parse_error& e) {
            throw ConfigError(path + ": " + e.what());
        }
        // accept verify reports (arrays) and poisson reports (objects holding records)
        const json& arr = j.is_object() && j.contains("records") ? j["records"] : j;
        if (!arr.is_array())
            throw ConfigError(path + ": not a report");
        for (const auto& r : arr)
            rs.push_back(record_from_json(r));
    }
    const std::string text = canonical(to_json(rs));
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    if (!out.empty())
        print_summary(rs);
    return all_pass(rs) ? 0 : exit_fail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"elliptic boundary integrable systems: verification and simulation"};
    app.require_subcommand(1);

    std::string config, out, summary, flow;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance, dt;
    std::optional<long> steps;
    bool merge = false;
    std::vector<std::string> inputs;

    auto* verify = app.add_subcommand("verify", "run every verification suite and write a JSON report");
    verify->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    verify->add_option("--seed", seed, "override the config seed");
    verify->add_option("--out", out, "report path (default from config)");
    verify->add_option("--tolerance", tolerance, "override every tolerance")->check(CLI::NonNegativeNumber);

    auto* simulate = app.add_subcommand("simulate", "integrate a flow and write a trajectory CSV");
    simulate->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    simulate->add_option("--flow", flow, "flow to integrate")
        ->required()
        ->check(CLI::IsMember({"vd8", "vd4-1", "vd4-2", "inoz", "gyrostat"}));
    simulate->add_option("--dt", dt, "time step");
    simulate->add_option("--steps", steps, "number of RK4 steps");
    simulate->add_option("--out", out, "CSV path (default from config)");
    simulate->add_option("--summary", summary, "drift summary path (default from config)");

    auto* poisson = app.add_subcommand("poisson", "bracket tables at the configured state");
    poisson->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    poisson->add_option("--out", out, "output path (stdout when omitted)");

    auto* report = app.add_subcommand("report", "combine reports");
    report->add_flag("--merge", merge, "concatenate the records of several reports")->required();
    report->add_option("inputs", inputs, "report files")->required()->check(CLI::ExistingFile);
    report->add_option("--out", out, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed())
            return cmd_verify(config, seed, out, tolerance);
        if (simulate->parsed())
            return cmd_simulate(config, flow, dt, steps, out, summary);
        if (poisson->parsed())
            return cmd_poisson(config, out);
        return cmd_report(inputs, out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    }
    return exit_config;
}
