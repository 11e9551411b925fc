#include "zigzag/verify.hpp"

#include "zigzag/eigenfunctions.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/floquet.hpp"
#include "zigzag/magnetic.hpp"
#include "zigzag/report_io.hpp"
#include "zigzag/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>

namespace zigzag {

namespace {

Potential cos_sampled(double amp, std::size_t n = 1025)
{
    return Potential::sampled([amp](double t) { return amp * std::cos(2.0 * kPi * t); }, n);
}

// Staircase of amp cos(2 pi t) at segment midpoints. Transfer matrices are
// exact, which keeps large-lambda roots free of integration error.
Potential cos_staircase(double amp, int segments = 1024)
{
    std::vector<Segment> s;
    const double w = 1.0 / segments;
    for (int i = 0; i < segments; ++i)
        s.push_back({w, amp * std::cos(2.0 * kPi * (i + 0.5) * w)});
    // widths must sum to one to 1e-12; fold the rounding into the last one
    double sum = 0.0;
    for (int i = 0; i + 1 < segments; ++i)
        sum += s[static_cast<std::size_t>(i)].width;
    s.back().width = 1.0 - sum;
    return Potential::piecewise(std::move(s));
}

CheckResult make(std::string id, std::string title, double measured, double threshold, bool pass,
                 std::string detail = {})
{
    return {std::move(id), std::move(title), pass, measured, threshold, std::move(detail)};
}

CheckResult free_oracle(const VerifyOptions&)
{
    const auto q = Potential::zero();
    std::vector<double> grid(4000);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = -10.0 + 410.0 * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    const auto rows = tabulate_discriminant(q, grid, {});
    double worst = 0.0, at = 0.0;
    for (const auto& r : rows) {
        const double e = std::abs(r.F - free_F(r.lambda));
        if (e > worst) {
            worst = e;
            at = r.lambda;
        }
    }
    return make("1", "free discriminant oracle", worst, 1e-9, worst <= 1e-9,
                fmt::format("4000 points in [-10, 400], worst at lambda = {:.6g}", at));
}

CheckResult monodromy_identities(const VerifyOptions& opt)
{
    const auto q = cos_sampled(2.0);
    const int N = 5;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ul(-5.0, 200.0), ua(0.0, 2.0 * kPi);
    std::uniform_int_distribution<int> uk(0, N - 1);
    double det_err = 0.0, tr_err = 0.0;
    int done = 0, skipped = 0;
    while (done < 50) {
        const double lam = ul(rng), a = ua(rng);
        const int k = uk(rng);
        const auto ch = ChannelParams::make(N, k, a);
        const auto d = propagate(q, lam, {1024, false});
        if (std::abs(ch.c) < 0.05 || std::abs(d.phi1) < 1e-3) {
            ++skipped;
            continue;
        }
        const auto m = monodromy(d, ch);
        const cplx want_det = std::polar(1.0, -2.0 * kPi * k / N);
        det_err = std::max(det_err, std::abs(m.det() - want_det));
        const cplx want_tr = 2.0 * std::conj(ch.s_half()) * (d.F + ch.s * ch.s) / ch.c;
        tr_err = std::max(tr_err, std::abs(m.trace() - want_tr) / std::max(1.0, std::abs(want_tr)));
        ++done;
    }
    const bool pass = det_err <= 1e-9 && tr_err <= 1e-8;
    return make("2", "monodromy det and trace identities", std::max(det_err / 1e-9, tr_err / 1e-8), 1.0, pass,
                fmt::format("max |det - s^-k| = {:.3g} (<= 1e-9), max trace rel err = {:.3g} (<= 1e-8), "
                            "{} resampled near c_k = 0 or sigma_D",
                            det_err, tr_err, skipped));
}

CheckResult resonance_degeneracy(const VerifyOptions& opt)
{
    const auto q = Potential::zero();
    const auto ch = ChannelParams::make(3, 1, 0.0);
    const auto res = resonances(q, ch, {-1.0, 1000.0}, opt.scan);
    const auto& roots = res.odd.roots;
    bool all_double = !roots.empty();
    double worst = 0.0; // relative to max(1, lambda)
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].kind != RootKind::double_tangent)
            all_double = false;
        const double want = std::pow(kPi * (static_cast<double>(i) + 0.5), 2);
        worst = std::max(worst, std::abs(roots[i].lambda - want) / std::max(1.0, want));
    }
    const double first = roots.empty() ? std::nan("") : std::abs(roots[0].lambda - kPi * kPi / 4.0);
    const bool pass = all_double && first <= 1e-6 && worst <= 1e-6;
    return make("3", "odd resonances double-tangent at |c_k| = 1/2", first, 1e-6, pass,
                fmt::format("{} odd roots, all double: {}, max relative offset from (pi(n-1/2))^2 = {:.3g}", roots.size(),
                            all_double ? "yes" : "no", worst));
}

CheckResult fiber_equivalence(const VerifyOptions& opt)
{
    const auto q = cos_sampled(1.0);
    const auto ch = ChannelParams::make(3, 1, 0.3);
    const Window w{q.min_value() - 1.0, 150.0};
    const auto bands = channel_bands(q, ch, w, opt.scan);
    std::vector<Interval> direct;
    for (const auto& b : bands)
        direct.push_back({b.lo, b.hi});
    const auto fibers = spectrum_via_fibers(q, ch, uniform_p_grid(256), w, opt.scan);
    const double d = symmetric_difference(direct, fibers);
    return make("4", "fiber union matches channel bands", d, 1e-3, d <= 1e-3,
                fmt::format("{} bands vs {} fiber intervals", bands.size(), fibers.size()));
}

CheckResult fiber_determinant(const VerifyOptions& opt)
{
    const auto q = cos_sampled(2.0);
    const int N = 5;
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> ul(-5.0, 200.0), ua(0.0, 2.0 * kPi), up(0.0, 2.0 * kPi);
    std::uniform_int_distribution<int> uk(0, N - 1);
    double worst = 0.0, ident = 0.0;
    int done = 0;
    while (done < 100) {
        const double lam = ul(rng), a = ua(rng), p = up(rng);
        const auto ch = ChannelParams::make(N, uk(rng), a);
        const auto d = propagate(q, lam, {1024, false});
        if (std::abs(d.phi1) < 1e-3)
            continue;
        const double closed = fiber_Q_closed(d.F, p, ch);
        const cplx direct = fiber_Q_direct(d, p, ch);
        worst = std::max(worst, std::abs(direct - closed) / (1.0 + std::abs(closed)));
        ident = std::max(ident, std::abs(fiber_product_identity_defect(d)) / (1.0 + 8.0 * d.delta * d.delta));
        ++done;
    }
    return make("5", "direct fiber determinant matches closed form", worst, 1e-8, worst <= 1e-8 && ident <= 1e-10,
                fmt::format("100 points, product identity defect {:.3g}", ident));
}

CheckResult collapse(const VerifyOptions& opt)
{
    const auto q = Potential::zero();
    const double c0 = 1e-3;
    const auto s = collapse_rate(q, 3, 1, 0, 1, {c0, c0 / 2.0}, opt.scan);
    auto errs = [](const CollapseSample& x) {
        return std::pair{std::abs(x.lo_offset - x.predicted_lo), std::abs(x.hi_offset - x.predicted_hi)};
    };
    const auto [e_lo, e_hi] = errs(s[0]);
    const auto [h_lo, h_hi] = errs(s[1]);
    const double scale = std::abs(s[0].predicted);
    const double rel = std::max(e_lo, e_hi) / scale;
    // first-order prediction with O(c0^2) error: halving c0 divides the error by about four
    const double r_lo = e_lo / h_lo, r_hi = e_hi / h_hi;
    const bool second = r_lo > 3.0 && r_lo < 5.0 && r_hi > 3.0 && r_hi < 5.0;
    const double lit = std::max(std::abs(s[0].lo_offset - s[0].predicted), std::abs(s[0].hi_offset - s[0].predicted));
    return make("6", "flat-band collapse rate", rel, 0.2, rel <= 0.2 && second,
                fmt::format("lambda~ = {:.12g}, F' = {:.6g}; offsets ({:.6g}, {:.6g}) vs (-|c0/F'|, +|c0/F'|) = "
                            "(+-{:.6g}); error ratio at c0/2: lo {:.3f}, hi {:.3f}; same-sign reading c0/F' "
                            "would give rel err {:.3g}",
                            s[0].lambda_tilde, s[0].F_prime, s[0].lo_offset, s[0].hi_offset, scale, r_lo, r_hi,
                            lit / scale));
}

CheckResult eigen_residuals(const VerifyOptions& opt)
{
    double worst = 0.0, weakest_corrupt = 1e300;
    int built = 0;
    auto corrupt_min = [&](const Potential& q, const CompactEigenfunction& psi) {
        for (const auto& [e, co] : psi.support) {
            auto bad = psi;
            if (psi.kind == EigenKind::antiperiodic_flat) {
                if (co.alpha == cplx{})
                    continue;
                bad.support[e].alpha *= 1.01;
            } else {
                if (co.beta == cplx{})
                    continue;
                bad.support[e].beta *= 1.01;
            }
            weakest_corrupt = std::min(weakest_corrupt, kirchhoff_residual(q, bad));
        }
    };
    auto check = [&](const Potential& q, const CompactEigenfunction& psi) {
        worst = std::max(worst, kirchhoff_residual(q, psi));
        corrupt_min(q, psi);
        ++built;
    };

    const auto zero = Potential::zero();
    const auto mathieu = cos_sampled(2.0);
    // eta != 0 and eta = 0 branches
    check(zero, dirichlet_eigenfunction(zero, kPi * kPi, ChannelParams::make(3, 1, 0.0)));
    check(zero, dirichlet_eigenfunction(zero, 4 * kPi * kPi, ChannelParams::make(1, 0, 0.0)));
    for (double mu : dirichlet_spectrum(mathieu, {mathieu.min_value() - 1.0, 120.0}, opt.scan))
        check(mathieu, dirichlet_eigenfunction(mathieu, mu, ChannelParams::make(3, 1, 0.3)));
    // flat bands of singular channels
    for (const auto& [N, k, m] : {std::tuple{3, 1, 0}, std::tuple{2, 1, 0}, std::tuple{4, 3, 1}}) {
        const auto ch = ChannelParams::make(N, k, singular_flux(N, k, m));
        for (const auto* q : {&zero, &mathieu}) {
            const auto fb = flat_band_spectrum(*q, ch, {q->min_value() - 1.0, 120.0}, opt.scan);
            for (double lt : fb.antiperiodic)
                check(*q, antiperiodic_flatband_eigenfunction(*q, lt, ch));
        }
    }
    const bool pass = worst <= 1e-10 && weakest_corrupt > 1e-4;
    return make("7", "compact eigenfunction Kirchhoff residuals", worst, 1e-10, pass,
                fmt::format("{} eigenfunctions, smallest residual after a 1% coefficient corruption = {:.3g} "
                            "(> 1e-4)",
                            built, weakest_corrupt));
}

double hausdorff(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty())
        return a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    auto one_way = [](const std::vector<double>& x, const std::vector<double>& y) {
        double h = 0.0;
        for (double v : x) {
            auto it = std::lower_bound(y.begin(), y.end(), v);
            double d = std::numeric_limits<double>::infinity();
            if (it != y.end())
                d = *it - v;
            if (it != y.begin())
                d = std::min(d, v - *std::prev(it));
            h = std::max(h, d);
        }
        return h;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

std::vector<double> band_endpoints(const SpectrumReport& r)
{
    std::vector<double> e;
    for (const auto& c : r.channels)
        for (const auto& b : c.bands) {
            if (b.lo_kind != EndpointKind::window)
                e.push_back(b.lo);
            if (b.hi_kind != EndpointKind::window)
                e.push_back(b.hi);
        }
    return e;
}

CheckResult flux_periodicity(const VerifyOptions& opt)
{
    const auto q = cos_sampled(1.0);
    const int N = 3;
    const Window w{q.min_value() - 1.0, 150.0};
    double worst = 0.0;
    std::size_t count = 0;
    for (double a : {0.1, 0.3}) {
        const auto e0 = band_endpoints(full_spectrum_at_flux(q, N, a, w, opt.scan));
        const auto e1 = band_endpoints(full_spectrum_at_flux(q, N, a + kPi / N, w, opt.scan));
        worst = std::max(worst, hausdorff(e0, e1));
        count += e0.size();
    }
    return make("8", "flux periodicity a -> a + pi/N", worst, 1e-6, worst <= 1e-6,
                fmt::format("{} endpoints compared over a in {{0.1, 0.3}}", count));
}

CheckResult asymptotics(const VerifyOptions& opt)
{
    const auto q = cos_staircase(2.0);
    const auto ch = ChannelParams::make(3, 1, 0.0);
    const Window w{q.min_value() - 1.0, std::pow(21.0 * kPi + 2.0, 2)};
    const double q0 = q.q0();

    // expanded roots: L[0] is the lone root below pi, then L[2n-1], L[2n] pair around (pi n)^2
    auto errors = [&](const std::vector<double>& L, AsymptoticKind kind, int scale) {
        std::vector<double> e;
        for (int n = 5; n <= 20; ++n) {
            const auto br = asymptotic_bracket(kind, ch, scale * n, q0);
            const std::size_t im = static_cast<std::size_t>(2 * n - 1), ip = im + 1;
            if (ip >= L.size())
                return std::vector<double>{};
            e.push_back(std::max(std::abs(L[im] - br.center_minus), std::abs(L[ip] - br.center_plus)));
        }
        return e;
    };
    const auto per = errors(periodic_eigenvalues(q, ch, w, opt.scan).expanded(), AsymptoticKind::periodic, 1);
    const auto res = errors(resonances(q, ch, w, opt.scan).even.expanded(), AsymptoticKind::resonance_even, 2);

    auto worst_jump = [](const std::vector<double>& e) {
        double j = 0.0;
        for (std::size_t i = 0; i + 1 < e.size(); ++i)
            j = std::max(j, e[i + 1] / e[i]);
        return j;
    };
    const bool complete = per.size() == 16 && res.size() == 16;
    const double jump = complete ? std::max(worst_jump(per), worst_jump(res)) : std::nan("");
    const bool pass = complete && jump <= 1.1 && per.back() < per.front() && res.back() < res.front();
    return make("9", "asymptotic centres approached monotonically", jump, 1.1, pass,
                complete ? fmt::format("periodic err n=5: {:.3g} -> n=20: {:.3g}; even resonance err {:.3g} -> "
                                       "{:.3g}; max e(n+1)/e(n) = {:.4f}",
                                       per.front(), per.back(), res.front(), res.back(), jump)
                         : std::string("missing roots in window"));
}

CheckResult gap_monotonicity(const VerifyOptions& opt)
{
    const auto q = cos_sampled(2.0);
    const Window w{q.min_value() - 1.0, 400.0};
    const auto mu = dirichlet_spectrum(q, w, opt.scan);
    const auto nu = neumann_spectrum(q, w, opt.scan);
    std::vector<std::vector<Band>> bands;
    for (double a : {0.2, 0.6})
        bands.push_back(channel_bands(q, ChannelParams::make(3, 0, a), w, opt.scan));

    bool pass = true;
    std::string detail;
    auto gap = [&](int which, int n) {
        const auto& b = bands[static_cast<std::size_t>(which)];
        const std::size_t i = static_cast<std::size_t>(2 * n); // band 2n+1, 0-based
        return Interval{b[i - 1].hi, b[i].lo};
    };
    double margin = 1e300;
    for (int n = 1; n <= 4; ++n) {
        if (bands[0].size() <= static_cast<std::size_t>(2 * n) || bands[1].size() <= static_cast<std::size_t>(2 * n) ||
            mu.size() < static_cast<std::size_t>(n) || nu.size() <= static_cast<std::size_t>(n)) {
            return make("10", "even gaps grow with flux", std::nan(""), 0.0, false, "window too short");
        }
        const auto g0 = gap(0, n), g1 = gap(1, n);
        const double tol = 1e-9 * std::max(1.0, g1.hi);
        const bool nested = g1.lo <= g0.lo + tol && g0.hi <= g1.hi + tol;
        margin = std::min({margin, g0.lo - g1.lo, g1.hi - g0.hi});
        bool contained = true;
        for (const auto& g : {g0, g1})
            for (double x : {mu[static_cast<std::size_t>(n - 1)], nu[static_cast<std::size_t>(n)]})
                contained = contained && x >= g.lo - tol && x <= g.hi + tol;
        pass = pass && nested && contained && g0.lo < g0.hi;
        detail += fmt::format("{}gamma_{{0,{}}}: [{:.9g}, {:.9g}] in [{:.9g}, {:.9g}] {}{}", n > 1 ? "; " : "",
                              2 * n, g0.lo, g0.hi, g1.lo, g1.hi, nested ? "ok" : "NOT NESTED",
                              contained ? "" : " (mu/nu outside)");
    }
    return make("10", "even gaps grow with flux", margin, 0.0, pass, detail);
}

CheckResult tangency_classification(const VerifyOptions& opt)
{
    // F = 0.995 for q = 0 has 20 transversal roots below (10 pi)^2 and no tangency
    const auto r = solve_F_equals(Potential::zero(), 0.995, {0.0, std::pow(10.0 * kPi, 2)}, opt.scan);
    std::size_t simple = 0, tangent = 0;
    for (const auto& x : r.roots)
        (x.kind == RootKind::simple ? simple : tangent)++;
    const bool pass = simple == 20 && tangent == 0;
    return make("T", "tangency classification near a band top", static_cast<double>(tangent), 0.0, pass,
                fmt::format("q = 0, F = 0.995: {} simple, {} double-tangent (expected 20, 0) at tol_F = {:.3g}",
                            simple, tangent, opt.scan.tol_F));
}

template <class Fn>
Check guarded(std::string id, std::string title, Fn fn)
{
    return {id, [id, title, fn](const VerifyOptions& o) {
                try {
                    return fn(o);
                } catch (const std::exception& e) {
                    return make(id, title, std::nan(""), 0.0, false, std::string("error: ") + e.what());
                }
            }};
}

} // namespace

const std::vector<Check>& acceptance_checks()
{
    static const std::vector<Check> checks = {
        guarded("1", "free discriminant oracle", free_oracle),
        guarded("2", "monodromy det and trace identities", monodromy_identities),
        guarded("3", "odd resonances double-tangent at |c_k| = 1/2", resonance_degeneracy),
        guarded("4", "fiber union matches channel bands", fiber_equivalence),
        guarded("5", "direct fiber determinant matches closed form", fiber_determinant),
        guarded("6", "flat-band collapse rate", collapse),
        guarded("7", "compact eigenfunction Kirchhoff residuals", eigen_residuals),
        guarded("8", "flux periodicity a -> a + pi/N", flux_periodicity),
        guarded("9", "asymptotic centres approached monotonically", asymptotics),
        guarded("10", "even gaps grow with flux", gap_monotonicity),
        guarded("T", "tangency classification near a band top", tangency_classification),
    };
    return checks;
}

std::vector<CheckResult> run_checks(const VerifyOptions& opt, const std::vector<std::string>& only)
{
    std::vector<CheckResult> out;
    for (const auto& c : acceptance_checks())
        if (only.empty() || std::find(only.begin(), only.end(), c.id) != only.end())
            out.push_back(c.run(opt));
    return out;
}

std::string format_check_line(const CheckResult& r)
{
    return fmt::format("[{}] {:>2} {} : measured {} (threshold {}) | {}", r.pass ? "PASS" : "FAIL", r.id, r.title,
                       fmt::format("{:.6g}", r.measured), fmt::format("{:.6g}", r.threshold), r.detail);
}

nlohmann::json to_json(const std::vector<CheckResult>& results, const VerifyOptions& opt)
{
    nlohmann::json j;
    j["seed"] = opt.seed;
    j["tolerances"] = {{"tol_F", opt.scan.tol_F}, {"rel_tol", opt.scan.rel_tol}, {"u_step", opt.scan.u_step}};
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        j["checks"].push_back({{"id", r.id},
                               {"title", r.title},
                               {"pass", r.pass},
                               {"measured", std::isfinite(r.measured) ? nlohmann::json(r.measured) : nlohmann::json()},
                               {"threshold", r.threshold},
                               {"detail", r.detail}});
    }
    j["pass"] = all;
    return j;
}

} // namespace zigzag
