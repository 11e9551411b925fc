// zigzag: command-line front end.
//
//   zigzag <discriminant|spectrum|sweep|eigenfunction|verify> [--config PATH] [--out DIR]
//          [--lambda-max X] [--b X | --b MIN:MAX:STEPS] [--channels LIST] [--seed INT]
//
// Exit codes: 0 success, 1 verification failure, 2 configuration or input error.
#include "zigzag/config.hpp"
#include "zigzag/eigenfunctions.hpp"
#include "zigzag/report_io.hpp"
#include "zigzag/spectra.hpp"
#include "zigzag/verify.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace zigzag;

namespace {

struct Flags {
    std::string config, out, b, channels;
    std::optional<double> lambda_max;
    std::optional<std::uint64_t> seed;
};

RunConfig resolve(const Flags& f)
{
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (!f.out.empty())
        c.out = f.out;
    if (f.lambda_max)
        c.lambda_max = *f.lambda_max;
    if (!f.b.empty()) {
        const auto s = parse_field_spec(f.b);
        c.a.reset();
        c.B = s.min;
        if (s.steps > 1)
            c.b_sweep = s;
    }
    if (!f.channels.empty())
        c.channels = parse_channel_list(f.channels);
    if (f.seed)
        c.seed = *f.seed;
    validate(c);
    return c;
}

std::ofstream open_out(const RunConfig& c, const std::string& name)
{
    fs::create_directories(c.out);
    const auto path = fs::path(c.out) / name;
    std::ofstream os(path);
    if (!os)
        throw ConfigError(fmt::format("cannot write {}", path.string()));
    return os;
}

int cmd_discriminant(const RunConfig& c)
{
    const Window w = c.window();
    std::vector<double> grid(static_cast<std::size_t>(c.lambda_points));
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = w.lo + (w.hi - w.lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    std::vector<ChannelParams> chs;
    for (int k : c.channel_list())
        chs.push_back(ChannelParams::make(c.N, k, c.flux()));
    auto os = open_out(c, "discriminant.csv");
    write_discriminant_csv(os, tabulate_discriminant(c.potential, grid, chs), chs);
    std::cout << fmt::format("wrote {} rows to {}\n", grid.size(), (fs::path(c.out) / "discriminant.csv").string());
    return 0;
}

void write_spectrum_files(const RunConfig& c, const std::vector<SpectrumReport>& reps)
{
    auto b = open_out(c, "bands.csv");
    write_bands_csv(b, reps);
    auto g = open_out(c, "gaps.csv");
    write_gaps_csv(g, reps);
    auto f = open_out(c, "flat_points.csv");
    write_flat_points_csv(f, reps);
}

int cmd_spectrum(const RunConfig& c)
{
    const auto rep = full_spectrum_at_flux(c.potential, c.N, c.flux(), c.window(), c.scan, c.field());
    write_spectrum_files(c, {rep});
    auto js = open_out(c, "spectrum.json");
    js << to_json(rep).dump(2) << "\n";
    std::cout << fmt::format("N = {}, B = {}, a = {}: {} union bands, {} gaps in [{}, {}]\n", c.N, fmt17(c.field()),
                             fmt17(c.flux()), rep.union_bands.size(), rep.gaps.size(), rep.window.lo, rep.window.hi);
    return 0;
}

int cmd_sweep(const RunConfig& c)
{
    if (!c.b_sweep)
        throw ConfigError("sweep: needs b_sweep in the config or --b MIN:MAX:STEPS");
    const auto sw = sweep_field(c.potential, c.N, c.b_sweep->grid(), c.window(), c.scan);
    write_spectrum_files(c, sw.reports);
    auto tr = open_out(c, "band_traces.dat");
    write_band_traces(tr, sw);
    std::cout << fmt::format("swept {} field values into {}\n", sw.B.size(), c.out);
    return 0;
}

int cmd_eigenfunction(const RunConfig& c)
{
    const auto& e = c.eigenfunction;
    const auto ch = ChannelParams::make(c.N, e.k, c.flux());
    const Window w = c.window();
    CompactEigenfunction psi;
    if (e.kind == "dirichlet") {
        const auto mu = dirichlet_spectrum(c.potential, w, c.scan);
        if (static_cast<int>(mu.size()) < e.index)
            throw ConfigError(fmt::format("/eigenfunction/index: only {} Dirichlet points below lambda_max", mu.size()));
        psi = dirichlet_eigenfunction(c.potential, mu[static_cast<std::size_t>(e.index - 1)], ch);
    } else {
        const auto fb = flat_band_spectrum(c.potential, ch, w, c.scan);
        if (static_cast<int>(fb.antiperiodic.size()) < e.index)
            throw ConfigError(
                fmt::format("/eigenfunction/index: only {} flat-band points below lambda_max", fb.antiperiodic.size()));
        psi = antiperiodic_flatband_eigenfunction(c.potential, fb.antiperiodic[static_cast<std::size_t>(e.index - 1)], ch);
    }
    psi = translate(psi, e.translate);
    const double res = kirchhoff_residual(c.potential, psi);
    auto csv = open_out(c, "eigenfunction.csv");
    write_eigenfunction_csv(csv, sample_eigenfunction(c.potential, psi));
    auto js = open_out(c, "eigenfunction.json");
    js << to_json(psi, res).dump(2) << "\n";
    std::cout << fmt::format("{} eigenfunction at lambda = {}, channel {}, residual {:.3g}\n", to_string(psi.kind),
                             fmt17(psi.lambda), ch.k, res);
    return 0;
}

int cmd_verify(const RunConfig& c)
{
    VerifyOptions opt;
    opt.seed = c.seed;
    opt.scan = c.scan;
    std::vector<CheckResult> results;
    for (const auto& chk : acceptance_checks()) {
        results.push_back(chk.run(opt));
        std::cout << format_check_line(results.back()) << std::endl;
    }
    const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    auto js = open_out(c, "verify.json");
    js << to_json(results, opt).dump(2) << "\n";
    auto txt = open_out(c, "verify.txt");
    for (const auto& r : results)
        txt << format_check_line(r) << "\n";
    std::cout << (ok ? "all checks passed\n" : "verification FAILED\n");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectra of zigzag nanotubes in a magnetic field"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", f.out, "output directory (overrides config)");
    app.add_option("--lambda-max", f.lambda_max, "top of the spectral window");
    app.add_option("--b", f.b, "field value X, or sweep MIN:MAX:STEPS");
    app.add_option("--channels", f.channels, "comma-separated channel list, e.g. 0,2");
    app.add_option("--seed", f.seed, "seed for randomized checks");

    std::function<int(const RunConfig&)> run;
    auto sub = [&](const char* name, const char* help, int (*fn)(const RunConfig&)) {
        app.add_subcommand(name, help)->fallthrough()->callback([&run, fn] { run = fn; });
    };
    sub("discriminant", "tabulate F and the channel Lyapunov functions over lambda", cmd_discriminant);
    sub("spectrum", "bands, gaps and flat bands at one field value", cmd_spectrum);
    sub("sweep", "spectrum over a field grid", cmd_sweep);
    sub("eigenfunction", "compactly supported eigenfunction on a flat band", cmd_eigenfunction);
    sub("verify", "run the acceptance checks", cmd_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return run(resolve(f));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
