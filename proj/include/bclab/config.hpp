#ifndef BCLAB_CONFIG_HPP
#define BCLAB_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gyrostat.hpp"
#include "record.hpp"
#include "vandiejen.hpp"
#include "xyz.hpp"

namespace bclab {

using json = nlohmann::json;

// complex numbers travel as [re, im]
inline json to_json_c(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx from_json_c(const json& j, const std::string& what)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(what + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <std::size_t N>
json to_json_c(const std::array<cplx, N>& a, std::size_t from = 0)
{
    json j = json::array();
    for (std::size_t k = from; k < N; ++k)
        j.push_back(to_json_c(a[k]));
    return j;
}

template <std::size_t N>
void from_json_c(const json& j, std::array<cplx, N>& a, std::size_t from, const std::string& what)
{
    if (!j.is_array() || j.size() != N - from)
        throw ConfigError(what + ": expected " + std::to_string(N - from) + " complex entries");
    for (std::size_t k = from; k < N; ++k)
        a[k] = from_json_c(j[k - from], what);
}

struct SampleCounts {
    int identity = 100;
    int lax = 50;
    int theorem1 = 100;
    int theorem2 = 5;
    int theorem3 = 50;
    int reflection = 50;
    int xyz = 50;
    int states = 10;
};

struct RunConfig {
    cplx tau{0.0, 1.0};
    std::uint64_t seed = 42;

    // simulation model; verification suites draw their own random parameters
    cplx c{1.23, 0.0};
    cplx eta{0.0, 0.343}, eta_bar{0.0, 0.343};
    std::array<cplx, 4> nu{cplx{0, 0.115}, cplx{0, 0.143}, cplx{0, 0.309}, cplx{0, 0.228}};
    std::array<cplx, 4> nu_bar{cplx{0, 0.105}, cplx{0, 0.106}, cplx{0, 0.131}, cplx{0, 0.144}};
    cplx p0{-0.072, 0.0}, q0{0.193, 0.0};

    std::array<cplx, 4> spin0{cplx{0.0}, cplx{1.0}, cplx{0.5}, cplx{0.25}};
    std::array<cplx, 4> lambda{}; // index 0 unused
    cplx gyro_c{1.0, 0.0};

    std::array<cplx, 4> rho_plus{}, rho_minus{}; // tilde form, index 0 unused

    cplx z_probe{0.17, 0.23};
    double dt = 1e-3;
    long steps = 1000;

    SampleCounts samples;
    std::map<std::string, double> tolerances; // per-suite overrides of the built-in tolerances
    std::optional<double> tolerance_all;      // overrides everything when set

    std::string report_path = "report.json";
    std::string csv_path = "trajectory.csv";
    std::string summary_path = "summary.json";

    Torus torus() const { return Torus(tau); }

    ModelParams model() const
    {
        ModelParams m;
        m.c = c;
        m.eta = eta;
        m.eta_bar = eta_bar;
        m.nu.nu = nu;
        m.nu_bar.nu = nu_bar;
        m.torus = torus();
        m.validate();
        return m;
    }

    GyrostatParams gyrostat() const
    {
        if (gyro_c == cplx{})
            throw ConfigError("gyrostat c must be nonzero");
        return {lambda, gyro_c, torus()};
    }

    // tolerance for a suite, honouring overrides
    double tol(const std::string& suite, double fallback) const
    {
        if (tolerance_all)
            return *tolerance_all;
        auto it = tolerances.find(suite);
        return it == tolerances.end() ? fallback : it->second;
    }
};

inline json to_json(const RunConfig& c)
{
    json j;
    j["tau"] = to_json_c(c.tau);
    j["seed"] = c.seed;
    j["model"] = {{"c", to_json_c(c.c)}, {"eta", to_json_c(c.eta)}, {"eta_bar", to_json_c(c.eta_bar)},
        {"nu", to_json_c(c.nu)}, {"nu_bar", to_json_c(c.nu_bar)}};
    j["state"] = {{"p", to_json_c(c.p0)}, {"q", to_json_c(c.q0)}};
    j["gyrostat"] = {{"spin", to_json_c(c.spin0)}, {"lambda", to_json_c(c.lambda, 1)}, {"c", to_json_c(c.gyro_c)}};
    j["boundary"] = {{"rho_plus", to_json_c(c.rho_plus, 1)}, {"rho_minus", to_json_c(c.rho_minus, 1)}};
    j["z_probe"] = to_json_c(c.z_probe);
    j["simulate"] = {{"dt", c.dt}, {"steps", c.steps}};
    const auto& s = c.samples;
    j["samples"] = {{"identity", s.identity}, {"lax", s.lax}, {"theorem1", s.theorem1}, {"theorem2", s.theorem2},
        {"theorem3", s.theorem3}, {"reflection", s.reflection}, {"xyz", s.xyz}, {"states", s.states}};
    j["tolerances"] = json::object();
    for (const auto& [k, v] : c.tolerances)
        j["tolerances"][k] = v;
    if (c.tolerance_all)
        j["tolerances"]["all"] = *c.tolerance_all;
    j["output"] = {{"report", c.report_path}, {"csv", c.csv_path}, {"summary", c.summary_path}};
    return j;
}

namespace detail {
    template <class T>
    void take(const json& j, const char* key, T& out)
    {
        if (!j.contains(key))
            return;
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string(key) + ": " + e.what());
        }
    }

    inline void take_c(const json& j, const char* key, cplx& out)
    {
        if (j.contains(key))
            out = from_json_c(j.at(key), key);
    }

    inline void require_object(const json& j, const char* what)
    {
        if (!j.is_object())
            throw ConfigError(std::string(what) + ": expected an object");
    }
}

// Missing keys keep their defaults; unknown keys are rejected.
inline RunConfig config_from_json(const json& j)
{
    static const std::set<std::string> known = {"tau", "seed", "model", "state", "gyrostat", "boundary", "z_probe",
        "simulate", "samples", "tolerances", "output"};
    detail::require_object(j, "config");
    for (const auto& [k, v] : j.items())
        if (!known.count(k))
            throw ConfigError("unknown config key: " + k);
    RunConfig c;
    detail::take_c(j, "tau", c.tau);
    detail::take(j, "seed", c.seed);
    if (j.contains("model")) {
        const json& m = j["model"];
        detail::require_object(m, "model");
        detail::take_c(m, "c", c.c);
        detail::take_c(m, "eta", c.eta);
        detail::take_c(m, "eta_bar", c.eta_bar);
        if (m.contains("nu"))
            from_json_c(m["nu"], c.nu, 0, "nu");
        if (m.contains("nu_bar"))
            from_json_c(m["nu_bar"], c.nu_bar, 0, "nu_bar");
    }
    if (j.contains("state")) {
        detail::require_object(j["state"], "state");
        detail::take_c(j["state"], "p", c.p0);
        detail::take_c(j["state"], "q", c.q0);
    }
    if (j.contains("gyrostat")) {
        const json& g = j["gyrostat"];
        detail::require_object(g, "gyrostat");
        if (g.contains("spin"))
            from_json_c(g["spin"], c.spin0, 0, "spin");
        if (g.contains("lambda"))
            from_json_c(g["lambda"], c.lambda, 1, "lambda");
        detail::take_c(g, "c", c.gyro_c);
    }
    if (j.contains("boundary")) {
        const json& b = j["boundary"];
        detail::require_object(b, "boundary");
        if (b.contains("rho_plus"))
            from_json_c(b["rho_plus"], c.rho_plus, 1, "rho_plus");
        if (b.contains("rho_minus"))
            from_json_c(b["rho_minus"], c.rho_minus, 1, "rho_minus");
    }
    detail::take_c(j, "z_probe", c.z_probe);
    if (j.contains("simulate")) {
        detail::require_object(j["simulate"], "simulate");
        detail::take(j["simulate"], "dt", c.dt);
        detail::take(j["simulate"], "steps", c.steps);
    }
    if (j.contains("samples")) {
        const json& s = j["samples"];
        detail::require_object(s, "samples");
        detail::take(s, "identity", c.samples.identity);
        detail::take(s, "lax", c.samples.lax);
        detail::take(s, "theorem1", c.samples.theorem1);
        detail::take(s, "theorem2", c.samples.theorem2);
        detail::take(s, "theorem3", c.samples.theorem3);
        detail::take(s, "reflection", c.samples.reflection);
        detail::take(s, "xyz", c.samples.xyz);
        detail::take(s, "states", c.samples.states);
    }
    if (j.contains("tolerances")) {
        detail::require_object(j["tolerances"], "tolerances");
        for (const auto& [k, v] : j["tolerances"].items()) {
            if (!v.is_number() || v.get<double>() < 0)
                throw ConfigError("tolerance " + k + " must be a nonnegative number");
            if (k == "all")
                c.tolerance_all = v.get<double>();
            else
                c.tolerances[k] = v.get<double>();
        }
    }
    if (j.contains("output")) {
        detail::require_object(j["output"], "output");
        detail::take(j["output"], "report", c.report_path);
        detail::take(j["output"], "csv", c.csv_path);
        detail::take(j["output"], "summary", c.summary_path);
    }

    if (c.tau.imag() < 0.05)
        throw ConfigError("Im tau must be at least 0.05");
    if (c.c == cplx{})
        throw ConfigError("c must be nonzero");
    if (c.dt <= 0 || c.steps < 0)
        throw ConfigError("simulate needs dt > 0 and steps >= 0");
    for (int n : {c.samples.identity, c.samples.lax, c.samples.theorem1, c.samples.theorem2, c.samples.theorem3,
             c.samples.reflection, c.samples.xyz, c.samples.states})
        if (n < 1)
            throw ConfigError("sample counts must be positive");
    return c;
}

// canonical text: sorted keys, two-space indent, shortest round-trip doubles
inline std::string canonical(const json& j) { return j.dump(2) + "\n"; }

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << text;
    if (!out)
        throw IoError("write failed: " + path);
}

inline RunConfig load_config(const std::string& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_json(j);
}

inline std::string params_digest(const RunConfig& c) { return digest(to_json(c).dump()); }

inline json to_json(const VerificationRecord& r)
{
    json j;
    j["suite"] = r.suite;
    j["theorem"] = r.theorem;
    j["samples"] = r.samples;
    j["attempted"] = r.attempted;
    j["accepted"] = r.accepted;
    if (std::isfinite(r.max_residual))
        j["max_residual"] = r.max_residual;
    else
        j["max_residual"] = nullptr;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    j["params_digest"] = r.params_digest;
    j["wall_time"] = r.wall_time;
    if (!r.note.empty())
        j["note"] = r.note;
    return j;
}

inline VerificationRecord record_from_json(const json& j)
{
    VerificationRecord r;
    try {
        r.suite = j.at("suite").get<std::string>();
        r.theorem = j.at("theorem").get<std::string>();
        r.samples = j.at("samples").get<int>();
        r.attempted = j.at("attempted").get<int>();
        r.accepted = j.at("accepted").get<int>();
        r.max_residual = j.at("max_residual").is_null() ? INFINITY : j.at("max_residual").get<double>();
        r.tolerance = j.at("tolerance").get<double>();
        r.pass = j.at("pass").get<bool>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.params_digest = j.at("params_digest").get<std::string>();
        r.wall_time = j.at("wall_time").get<double>();
        if (j.contains("note"))
            r.note = j.at("note").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed record: ") + e.what());
    }
    return r;
}

inline json to_json(const std::vector<VerificationRecord>& rs)
{
    json j = json::array();
    for (const auto& r : rs)
        j.push_back(to_json(r));
    return j;
}

// RFC 4180: quote fields holding a comma, quote or line break
inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string csv_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_row(const std::vector<std::string>& fields)
{
    std::string line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k)
            line += ',';
        line += csv_field(fields[k]);
    }
    return line + "\r\n";
}

} // namespace bclab

#endif
