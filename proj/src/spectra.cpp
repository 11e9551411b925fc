#include "zigzag/spectra.hpp"

#include "zigzag/errors.hpp"
#include "zigzag/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <map>

namespace zigzag {

namespace {

void require_regular(const ChannelParams& ch, const char* what)
{
    if (ch.singular)
        throw ChannelSingularError(fmt::format("{}: channel k={} is singular (c_k = {:.3g})", what, ch.k, ch.c));
}

// The four constants all lie in [-5/4, 1]; clamp away rounding at the ends.
double clamp_c(double c)
{
    return std::clamp(c, -1.25, 1.0);
}

bool in_band(double F, const ChannelParams& ch)
{
    const double x = F + ch.s * ch.s;
    return x * x <= ch.c * ch.c;
}

} // namespace

double even_constant(const ChannelParams& ch) { return clamp_c(std::abs(ch.c) - ch.s * ch.s); }
double odd_constant(const ChannelParams& ch) { return clamp_c(-std::abs(ch.c) - ch.s * ch.s); }
double periodic_constant(const ChannelParams& ch) { return clamp_c(ch.c0 * ch.c - ch.s * ch.s); }
double antiperiodic_constant(const ChannelParams& ch) { return clamp_c(-ch.c0 * ch.c - ch.s * ch.s); }

const char* to_string(EndpointKind k)
{
    switch (k) {
    case EndpointKind::resonance: return "resonance";
    case EndpointKind::periodic: return "periodic";
    case EndpointKind::antiperiodic: return "antiperiodic";
    case EndpointKind::flat: return "flat";
    case EndpointKind::window: return "window";
    }
    return "?";
}

LyapunovValue lyapunov_from_F(double lambda, double F, const ChannelParams& ch)
{
    require_regular(ch, "lyapunov");
    LyapunovValue v;
    v.lambda = lambda;
    const double x = F + ch.s * ch.s;
    v.T = ch.c0 / ch.c * x;
    // R vanishes identically when s0 = 0 (k = 0); keep it an exact zero
    v.R = ch.k == 0 ? 0.0 : ch.s0 * ch.s0 / (ch.c * ch.c) * (ch.c * ch.c - x * x);
    const cplx root = v.R >= 0.0 ? cplx(std::sqrt(v.R), 0.0) : cplx(0.0, std::sqrt(-v.R));
    v.F_plus = v.T + root;
    v.F_minus = v.T - root;
    return v;
}

LyapunovValue lyapunov(const Potential& q, double lambda, const ChannelParams& ch)
{
    require_regular(ch, "lyapunov");
    return lyapunov_from_F(lambda, hill_F(q, lambda), ch);
}

ResonanceFamilies resonances(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt)
{
    require_regular(ch, "resonances");
    validate_window(w);
    ResonanceFamilies r;
    r.even.c = even_constant(ch);
    r.odd.c = odd_constant(ch);
    if (ch.k == 0)
        return r; // s0 = 0: F_k is single valued, no branch points
    r.even = solve_F_equals(q, r.even.c, w, opt);
    r.odd = solve_F_equals(q, r.odd.c, w, opt);
    return r;
}

RootList periodic_eigenvalues(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt)
{
    require_regular(ch, "periodic_eigenvalues");
    return solve_F_equals(q, periodic_constant(ch), w, opt);
}

RootList antiperiodic_eigenvalues(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt)
{
    require_regular(ch, "antiperiodic_eigenvalues");
    return solve_F_equals(q, antiperiodic_constant(ch), w, opt);
}

namespace {

std::vector<Band> bands_from_roots(const Potential& q, const ChannelParams& ch, Window w, const RootList& upper,
                                   const RootList& lower, EndpointKind upper_kind, EndpointKind lower_kind,
                                   const ScanOptions& opt)
{
    struct Point {
        double x;
        EndpointKind kind;
    };
    std::vector<Point> pts{{w.lo, EndpointKind::window}};
    for (const auto& r : upper.roots)
        pts.push_back({r.lambda, upper_kind});
    for (const auto& r : lower.roots)
        pts.push_back({r.lambda, lower_kind});
    pts.push_back({w.hi, EndpointKind::window});
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });

    std::vector<Band> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = std::max(pts[i].x, w.lo), hi = std::min(pts[i + 1].x, w.hi);
        if (!(hi > lo))
            continue;
        const double mid = 0.5 * (lo + hi);
        if (!in_band(propagate(q, mid, opt.propagate).F, ch))
            continue;
        Band b;
        b.k = ch.k;
        b.n = static_cast<int>(out.size()) + 1;
        b.lo = lo;
        b.hi = hi;
        b.lo_kind = pts[i].kind;
        b.hi_kind = pts[i + 1].kind;
        out.push_back(b);
    }
    return out;
}

} // namespace

std::vector<Band> channel_bands(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt)
{
    require_regular(ch, "channel_bands");
    validate_window(w);
    const RootList upper = solve_F_equals(q, even_constant(ch), w, opt);
    const RootList lower = solve_F_equals(q, odd_constant(ch), w, opt);
    EndpointKind uk = EndpointKind::resonance, lk = EndpointKind::resonance;
    if (ch.k == 0) {
        // F_0 = (F + s^2) / c: the upper constant is F_0 = +1 when c > 0
        uk = ch.c > 0 ? EndpointKind::periodic : EndpointKind::antiperiodic;
        lk = ch.c > 0 ? EndpointKind::antiperiodic : EndpointKind::periodic;
    }
    return bands_from_roots(q, ch, w, upper, lower, uk, lk, opt);
}

FlatBandSpectrum flat_band_spectrum(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt)
{
    if (!ch.singular)
        throw MisuseError(fmt::format("flat_band_spectrum: channel k={} is not singular (c_k = {:.3g})", ch.k, ch.c));
    FlatBandSpectrum f;
    f.dirichlet = dirichlet_spectrum(q, w, opt);
    f.antiperiodic = solve_F_equals(q, -1.0, w, opt).values();
    return f;
}

Window spectral_window(const Potential& q, double lambda_max)
{
    const double lo = q.min_value() - 1.0;
    if (!(lambda_max > lo))
        throw ValidationError(fmt::format("lambda_max = {} lies below the spectrum (min q = {})", lambda_max,
                                          q.min_value()));
    return {lo, lambda_max};
}

namespace {

ChannelReport channel_report(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt)
{
    ChannelReport r;
    r.ch = ch;
    if (ch.singular) {
        r.flat_points = solve_F_equals(q, -1.0, w, opt).values();
        return r;
    }
    r.bands = channel_bands(q, ch, w, opt);
    r.resonances = resonances(q, ch, w, opt);
    r.periodic = periodic_eigenvalues(q, ch, w, opt);
    r.antiperiodic = antiperiodic_eigenvalues(q, ch, w, opt);
    if (ch.near_flat) {
        for (double lt : solve_F_equals(q, -1.0, w, opt).values())
            r.near_flat.push_back({lt, std::abs(ch.c) / hill_F_prime(q, lt)});
    }
    return r;
}

void assemble_union(SpectrumReport& rep)
{
    std::map<int, std::vector<Interval>> by_index;
    for (const auto& ch : rep.channels)
        for (const auto& b : ch.bands)
            by_index[b.n].push_back({b.lo, b.hi});

    std::vector<UnionBand> pieces;
    for (auto& [n, ivs] : by_index) {
        std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        Interval cur = ivs.front();
        for (std::size_t i = 1; i < ivs.size(); ++i) {
            if (ivs[i].lo <= cur.hi) {
                cur.hi = std::max(cur.hi, ivs[i].hi);
            } else {
                pieces.push_back({n, cur.lo, cur.hi});
                cur = ivs[i];
            }
        }
        pieces.push_back({n, cur.lo, cur.hi});
    }
    std::sort(pieces.begin(), pieces.end(), [](const UnionBand& a, const UnionBand& b) { return a.lo < b.lo; });

    // pieces of different index can only touch (at a critical point of F); a
    // genuine overlap would mean misaligned indices, so fold it in
    std::vector<UnionBand> merged;
    for (const auto& p : pieces) {
        if (!merged.empty() && p.lo < merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, p.hi);
            continue;
        }
        merged.push_back(p);
    }
    rep.union_bands = merged;
    rep.gaps.clear();
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        Gap g;
        g.n = merged[i].n;
        g.lo = merged[i].hi;
        g.hi = merged[i + 1].lo;
        g.closed = g.hi - g.lo < 1e-8 * std::max(1.0, std::abs(g.lo));
        rep.gaps.push_back(g);
    }
}

SpectrumReport full_spectrum_impl(const Potential& q, int N, double a, double B, Window w, const ScanOptions& opt,
                                  bool parallel)
{
    validate_window(w);
    SpectrumReport rep;
    rep.N = N;
    rep.B = B;
    rep.a = a;
    rep.q_digest = q.digest();
    rep.window = w;
    rep.channels.resize(static_cast<std::size_t>(N));
    for_each_index(static_cast<std::size_t>(N), parallel, [&](std::size_t k) {
        rep.channels[k] = channel_report(q, ChannelParams::make(N, static_cast<int>(k), a), w, opt);
    });
    rep.dirichlet_points = dirichlet_spectrum(q, w, opt);
    assemble_union(rep);
    return rep;
}

} // namespace

SpectrumReport full_spectrum_at_flux(const Potential& q, int N, double a, Window w, const ScanOptions& opt,
                                     double B_label)
{
    return full_spectrum_impl(q, N, a, B_label, w, opt, true);
}

SpectrumReport full_spectrum(const Potential& q, int N, double B, Window w, const ScanOptions& opt)
{
    return full_spectrum_impl(q, N, flux_from_field(N, B), B, w, opt, true);
}

SpectrumReport full_spectrum_serial(const Potential& q, int N, double B, Window w, const ScanOptions& opt)
{
    return full_spectrum_impl(q, N, flux_from_field(N, B), B, w, opt, false);
}

namespace {

std::vector<BandTrack> build_tracks(const std::vector<SpectrumReport>& reps)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::map<std::pair<int, int>, BandTrack> tracks;
    auto slot = [&](int k, int n) -> BandTrack& {
        auto& t = tracks[{k, n}];
        if (t.lo.empty()) {
            t.k = k;
            t.n = n;
            t.lo.assign(reps.size(), nan);
            t.hi.assign(reps.size(), nan);
        }
        return t;
    };
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (const auto& ch : reps[i].channels)
            for (const auto& b : ch.bands) {
                auto& t = slot(b.k, b.n);
                t.lo[i] = b.lo;
                t.hi[i] = b.hi;
            }
        for (const auto& u : reps[i].union_bands) {
            auto& t = slot(-1, u.n);
            t.lo[i] = u.lo;
            t.hi[i] = u.hi;
        }
    }
    std::vector<BandTrack> out;
    for (auto& [key, t] : tracks)
        out.push_back(std::move(t));
    return out;
}

SweepResult sweep_impl(const Potential& q, int N, const std::vector<double>& B_grid, Window w, const ScanOptions& opt,
                       bool parallel)
{
    SweepResult res;
    res.B = B_grid;
    res.reports.resize(B_grid.size());
    for_each_index(B_grid.size(), parallel, [&](std::size_t i) {
        res.reports[i] = full_spectrum_impl(q, N, flux_from_field(N, B_grid[i]), B_grid[i], w, opt, false);
    });
    res.tracks = build_tracks(res.reports);
    return res;
}

} // namespace

SweepResult sweep_field(const Potential& q, int N, const std::vector<double>& B_grid, Window w, const ScanOptions& opt)
{
    return sweep_impl(q, N, B_grid, w, opt, true);
}

SweepResult sweep_field_serial(const Potential& q, int N, const std::vector<double>& B_grid, Window w,
                               const ScanOptions& opt)
{
    return sweep_impl(q, N, B_grid, w, opt, false);
}

AsymptoticBracket asymptotic_bracket(AsymptoticKind kind, const ChannelParams& ch, int n, double q0)
{
    if (n < 1)
        throw ValidationError("asymptotic_bracket: n must be >= 1");
    auto half_acos = [](double c) { return 0.5 * std::acos(std::clamp((1.0 + 8.0 * c) / 9.0, -1.0, 1.0)); };
    double centre = 0.0, phi = 0.0;
    switch (kind) {
    case AsymptoticKind::periodic:
        centre = kPi * n;
        phi = half_acos(periodic_constant(ch));
        break;
    case AsymptoticKind::antiperiodic:
        centre = kPi * n;
        phi = half_acos(antiperiodic_constant(ch));
        break;
    case AsymptoticKind::resonance_even:
        if (n % 2 != 0)
            throw ValidationError("asymptotic_bracket: even resonance family needs even n");
        centre = kPi * n / 2.0;
        phi = half_acos(even_constant(ch));
        break;
    case AsymptoticKind::resonance_odd:
        if (n % 2 == 0)
            throw ValidationError("asymptotic_bracket: odd resonance family needs odd n");
        centre = kPi * n / 2.0;
        phi = kPi / 2.0 - half_acos(odd_constant(ch));
        break;
    }
    AsymptoticBracket b;
    b.center_minus = (centre - phi) * (centre - phi) + q0;
    b.center_plus = (centre + phi) * (centre + phi) + q0;
    b.half_width = std::max(5.0, 10.0 * std::abs(q0));
    return b;
}

std::vector<CollapseSample> collapse_rate(const Potential& q, int N, int k, int m, int n,
                                          const std::vector<double>& c0_values, const ScanOptions& opt)
{
    if (n < 1)
        throw ValidationError("collapse_rate: n must be >= 1");
    const double top = q.max_value() + std::pow(kPi * (n + 1), 2);
    const auto tilde = solve_F_equals(q, -1.0, {q.min_value() - 1.0, top}, opt).values();
    if (tilde.size() < static_cast<std::size_t>(n))
        throw DegenerateError("collapse_rate: fewer flat-band points than requested");
    const double lt = tilde[static_cast<std::size_t>(n - 1)];
    const double fp = hill_F_prime(q, lt);
    if (std::abs(fp) < 1e-8)
        throw DegenerateError(fmt::format("collapse_rate: F'({}) = {:.3g} is degenerate", lt, fp));

    const double next = static_cast<std::size_t>(n) < tilde.size() ? tilde[static_cast<std::size_t>(n)] : top;
    const Window w{q.min_value() - 1.0, 0.5 * (lt + next)};
    const double a_sing = singular_flux(N, k, m);
    std::vector<CollapseSample> out;
    for (double c0 : c0_values) {
        // cos(a_sing + d + pi k / N) = -(-1)^m sin d, solved for c_k = c0
        const double sgn = (m % 2 == 0) ? -1.0 : 1.0;
        const double a = a_sing + std::asin(sgn * c0);
        const auto ch = ChannelParams::make(N, k, a);
        const auto bands = channel_bands(q, ch, w, opt);
        const Band* hit = nullptr;
        for (const auto& b : bands)
            if (b.lo <= lt && lt <= b.hi)
                hit = &b;
        if (!hit)
            throw DegenerateError(fmt::format("collapse_rate: no band contains lambda~ = {} at c0 = {}", lt, c0));
        CollapseSample s;
        s.c0 = c0;
        s.a = a;
        s.lambda_tilde = lt;
        s.F_prime = fp;
        s.lo = hit->lo;
        s.hi = hit->hi;
        s.lo_offset = hit->lo - lt;
        s.hi_offset = hit->hi - lt;
        s.predicted = c0 / fp;
        // F + 1 = c^2 +- |c| at the two ends and lambda~ sits inside the band,
        // so the leading offsets are -|c0/F'| and +|c0/F'|
        const double mag = std::abs(c0 / fp);
        s.predicted_lo = -mag;
        s.predicted_hi = mag;
        out.push_back(s);
    }
    return out;
}

namespace {

std::vector<DiscriminantRow> tabulate_impl(const Potential& q, const std::vector<double>& lambdas,
                                           const std::vector<ChannelParams>& channels, bool parallel)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<DiscriminantRow> rows(lambdas.size());
    for_each_index(lambdas.size(), parallel, [&](std::size_t i) {
        auto& row = rows[i];
        row.lambda = lambdas[i];
        row.F = hill_F(q, lambdas[i]);
        for (const auto& ch : channels) {
            if (ch.singular)
                row.channels.push_back({lambdas[i], nan, nan, {nan, nan}, {nan, nan}});
            else
                row.channels.push_back(lyapunov_from_F(lambdas[i], row.F, ch));
        }
    });
    return rows;
}

} // namespace

std::vector<DiscriminantRow> tabulate_discriminant(const Potential& q, const std::vector<double>& lambdas,
                                                   const std::vector<ChannelParams>& channels)
{
    return tabulate_impl(q, lambdas, channels, true);
}

std::vector<DiscriminantRow> tabulate_discriminant_serial(const Potential& q, const std::vector<double>& lambdas,
                                                          const std::vector<ChannelParams>& channels)
{
    return tabulate_impl(q, lambdas, channels, false);
}

} // namespace zigzag
