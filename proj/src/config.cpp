#include "zigzag/config.hpp"

#include "zigzag/magnetic.hpp"
#include "zigzag/report_io.hpp"
#include "zigzag/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace zigzag {

using nlohmann::json;

std::vector<double> FieldSweep::grid() const
{
    if (steps == 1)
        return {min};
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        g[static_cast<std::size_t>(i)] = min + (max - min) * i / (steps - 1);
    return g;
}

double RunConfig::flux() const
{
    return a ? *a : flux_from_field(N, B.value_or(0.0));
}

double RunConfig::field() const
{
    if (B)
        return *B;
    return a ? *a / flux_from_field(N, 1.0) : 0.0;
}

Window RunConfig::window() const
{
    const auto w = spectral_window(potential, lambda_max);
    return {lambda_min.value_or(w.lo), w.hi};
}

std::vector<int> RunConfig::channel_list() const
{
    if (!channels.empty())
        return channels;
    std::vector<int> all(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k)
        all[static_cast<std::size_t>(k)] = k;
    return all;
}

namespace {

std::string line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return fmt::format("line {}, column {}", line, col);
}

double number(const json& j, const std::string& path)
{
    if (!j.is_number())
        throw ConfigError(fmt::format("{}: expected a number", path));
    return j.get<double>();
}

long long integer(const json& j, const std::string& path)
{
    if (!j.is_number_integer())
        throw ConfigError(fmt::format("{}: expected an integer", path));
    return j.get<long long>();
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys)
{
    if (!j.is_object())
        throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "/" : path));
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k))
            throw ConfigError(fmt::format("{}/{}: unknown field", path, k));
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open {}", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: JSON syntax error at {}: {}", source, line_col(text, e.byte > 0 ? e.byte - 1 : 0),
                                      e.what()));
    }
}

} // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir)
{
    const json j = parse_json(text, "config");
    only_keys(j, "", {"potential", "potential_file", "N", "B", "a", "lambda_max", "lambda_min", "channels",
                      "b_sweep", "out", "tolerances", "seed", "lambda_points", "eigenfunction"});
    RunConfig c;
    try {
        if (j.contains("potential") && j.contains("potential_file"))
            throw ConfigError("/potential_file: give either potential or potential_file, not both");
        if (j.contains("potential"))
            c.potential = potential_from_json(j["potential"], "/potential");
        if (j.contains("potential_file")) {
            if (!j["potential_file"].is_string())
                throw ConfigError("/potential_file: expected a path string");
            std::string p = j["potential_file"].get<std::string>();
            if (!p.empty() && p[0] != '/')
                p = base_dir + "/" + p;
            c.potential = potential_from_json(parse_json(read_file(p), p), "/potential_file");
        }
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    if (j.contains("N"))
        c.N = static_cast<int>(integer(j["N"], "/N"));
    if (j.contains("B"))
        c.B = number(j["B"], "/B");
    if (j.contains("a"))
        c.a = number(j["a"], "/a");
    if (j.contains("lambda_max"))
        c.lambda_max = number(j["lambda_max"], "/lambda_max");
    if (j.contains("lambda_min"))
        c.lambda_min = number(j["lambda_min"], "/lambda_min");
    if (j.contains("channels")) {
        if (!j["channels"].is_array())
            throw ConfigError("/channels: expected an array of integers");
        for (std::size_t i = 0; i < j["channels"].size(); ++i)
            c.channels.push_back(static_cast<int>(integer(j["channels"][i], fmt::format("/channels/{}", i))));
    }
    if (j.contains("b_sweep")) {
        const auto& s = j["b_sweep"];
        only_keys(s, "/b_sweep", {"min", "max", "steps"});
        for (const char* k : {"min", "max", "steps"})
            if (!s.contains(k))
                throw ConfigError(fmt::format("/b_sweep/{}: missing", k));
        c.b_sweep = FieldSweep{number(s["min"], "/b_sweep/min"), number(s["max"], "/b_sweep/max"),
                               static_cast<int>(integer(s["steps"], "/b_sweep/steps"))};
    }
    if (j.contains("out")) {
        if (!j["out"].is_string())
            throw ConfigError("/out: expected a directory path");
        c.out = j["out"].get<std::string>();
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        only_keys(t, "/tolerances", {"tol_F", "rel_tol", "u_step"});
        if (t.contains("tol_F"))
            c.scan.tol_F = number(t["tol_F"], "/tolerances/tol_F");
        if (t.contains("rel_tol"))
            c.scan.rel_tol = number(t["rel_tol"], "/tolerances/rel_tol");
        if (t.contains("u_step"))
            c.scan.u_step = number(t["u_step"], "/tolerances/u_step");
    }
    if (j.contains("seed")) {
        const long long s = integer(j["seed"], "/seed");
        if (s < 0)
            throw ConfigError("/seed: must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (j.contains("lambda_points"))
        c.lambda_points = static_cast<int>(integer(j["lambda_points"], "/lambda_points"));
    if (j.contains("eigenfunction")) {
        const auto& e = j["eigenfunction"];
        only_keys(e, "/eigenfunction", {"kind", "k", "index", "translate"});
        if (e.contains("kind")) {
            if (!e["kind"].is_string())
                throw ConfigError("/eigenfunction/kind: expected \"dirichlet\" or \"antiperiodic\"");
            c.eigenfunction.kind = e["kind"].get<std::string>();
        }
        if (e.contains("k"))
            c.eigenfunction.k = static_cast<int>(integer(e["k"], "/eigenfunction/k"));
        if (e.contains("index"))
            c.eigenfunction.index = static_cast<int>(integer(e["index"], "/eigenfunction/index"));
        if (e.contains("translate"))
            c.eigenfunction.translate = static_cast<int>(integer(e["translate"], "/eigenfunction/translate"));
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path)
{
    const auto slash = path.find_last_of('/');
    const std::string dir = slash == std::string::npos ? "." : path.substr(0, slash);
    try {
        return parse_config(read_file(path), dir);
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
}

void validate(const RunConfig& c)
{
    if (c.N < 1)
        throw ConfigError("/N: must be >= 1");
    if (c.B && c.a)
        throw ConfigError("/a: give exactly one of B and a");
    if (!(c.lambda_max > 0.0) || !std::isfinite(c.lambda_max))
        throw ConfigError("/lambda_max: must be a positive number");
    if (c.lambda_min && !(*c.lambda_min < c.lambda_max))
        throw ConfigError("/lambda_min: must be below lambda_max");
    for (std::size_t i = 0; i < c.channels.size(); ++i)
        if (c.channels[i] < 0 || c.channels[i] >= c.N)
            throw ConfigError(fmt::format("/channels/{}: channel {} outside 0..{}", i, c.channels[i], c.N - 1));
    if (c.b_sweep) {
        if (c.b_sweep->steps < 1)
            throw ConfigError("/b_sweep/steps: must be >= 1");
        if (c.b_sweep->max < c.b_sweep->min)
            throw ConfigError("/b_sweep/max: must be >= min");
    }
    if (!(c.scan.tol_F > 0.0))
        throw ConfigError("/tolerances/tol_F: must be positive");
    if (!(c.scan.rel_tol > 0.0) || c.scan.rel_tol > 1e-3)
        throw ConfigError("/tolerances/rel_tol: must be in (0, 1e-3]");
    if (!(c.scan.u_step > 0.0) || c.scan.u_step > 1.0)
        throw ConfigError("/tolerances/u_step: must be in (0, 1]");
    if (c.lambda_points < 2)
        throw ConfigError("/lambda_points: must be >= 2");
    const auto& e = c.eigenfunction;
    if (e.kind != "dirichlet" && e.kind != "antiperiodic")
        throw ConfigError(fmt::format("/eigenfunction/kind: unknown kind \"{}\"", e.kind));
    if (e.k < 0 || e.k >= c.N)
        throw ConfigError("/eigenfunction/k: channel outside 0..N-1");
    if (e.index < 1)
        throw ConfigError("/eigenfunction/index: must be >= 1");
}

FieldSweep parse_field_spec(const std::string& spec)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    auto num = [&](const std::string& p) {
        try {
            std::size_t used = 0;
            const double v = std::stod(p, &used);
            if (used != p.size())
                throw std::invalid_argument(p);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("--b: cannot read \"{}\" as a number", p));
        }
    };
    if (parts.size() == 1)
        return {num(parts[0]), num(parts[0]), 1};
    if (parts.size() != 3)
        throw ConfigError(fmt::format("--b: expected X or MIN:MAX:STEPS, got \"{}\"", spec));
    const double steps = num(parts[2]);
    if (steps < 1 || steps != std::floor(steps))
        throw ConfigError("--b: STEPS must be a positive integer");
    FieldSweep f{num(parts[0]), num(parts[1]), static_cast<int>(steps)};
    if (f.max < f.min)
        throw ConfigError("--b: MAX must be >= MIN");
    return f;
}

std::vector<int> parse_channel_list(const std::string& spec)
{
    std::vector<int> out;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) {
        try {
            std::size_t used = 0;
            const int k = std::stoi(p, &used);
            if (used != p.size())
                throw std::invalid_argument(p);
            out.push_back(k);
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("--channels: cannot read \"{}\" as a channel index", p));
        }
    }
    if (out.empty())
        throw ConfigError("--channels: empty list");
    return out;
}

} // namespace zigzag
