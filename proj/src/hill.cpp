#include "zigzag/hill.hpp"

#include "zigzag/errors.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace zigzag {

namespace {

using Mat2 = std::array<double, 4>; // row-major [a b; c d]

Mat2 mul(const Mat2& x, const Mat2& y)
{
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

// Transfer matrix of -y'' + v y = lambda y over a segment of width w.
// For small |(lambda - v) w^2| the power series of cos and sin(k w)/k is used,
// which also covers lambda == v without a separate linear branch.
Mat2 segment_matrix(double lambda, double v, double w)
{
    const double k2 = lambda - v;
    const double z = k2 * w * w;
    double C, S; // cos(k w), sin(k w) / (k w)
    if (std::abs(z) < 1e-2) {
        C = 0.0;
        S = 0.0;
        double tc = 1.0, ts = 1.0;
        for (int n = 0; n < 12; ++n) {
            C += tc;
            S += ts;
            tc *= -z / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
            ts *= -z / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        }
    } else if (z > 0) {
        const double kw = std::sqrt(z);
        C = std::cos(kw);
        S = std::sin(kw) / kw;
    } else {
        const double kw = std::sqrt(-z);
        C = std::cosh(kw);
        S = std::sinh(kw) / kw;
    }
    return {C, w * S, -k2 * w * S, C};
}

Mat2 piecewise_monodromy(const Potential& q, double lambda, double x_end)
{
    Mat2 m{1, 0, 0, 1};
    double x = 0.0;
    for (const auto& s : q.segments()) {
        const double w = std::min(s.width, x_end - x);
        if (w <= 0.0)
            break;
        m = mul(segment_matrix(lambda, s.value, w), m);
        x += s.width;
    }
    return m;
}

struct Rk4Grid {
    std::size_t intervals; // M - 1 sample intervals
    std::size_t substeps;  // steps per interval
    double h;
};

Rk4Grid rk4_grid(const Potential& q, int min_steps, int refine)
{
    const std::size_t intervals = q.values().size() - 1;
    const std::size_t base = std::max<std::size_t>(1, (static_cast<std::size_t>(min_steps) + intervals - 1) / intervals);
    const std::size_t sub = base * static_cast<std::size_t>(refine);
    return {intervals, sub, 1.0 / static_cast<double>(intervals * sub)};
}

// Integrates Y' = [[0,1],[q-lambda,0]] Y with Y(0) = I up to x_end, steps aligned
// with the sample intervals so q is linear inside every step.
Mat2 rk4_monodromy(const Potential& q, double lambda, const Rk4Grid& g, double x_end)
{
    const auto& v = q.values();
    double y[4] = {1, 0, 0, 1}; // theta, phi, theta', phi'
    auto rhs = [lambda](double qt, const double* s, double* d) {
        d[0] = s[2];
        d[1] = s[3];
        d[2] = (qt - lambda) * s[0];
        d[3] = (qt - lambda) * s[1];
    };
    auto step = [&](double q0, double qm, double q1, double h) {
        double k1[4], k2[4], k3[4], k4[4], t[4];
        rhs(q0, y, k1);
        for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k1[i];
        rhs(qm, t, k2);
        for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k2[i];
        rhs(qm, t, k3);
        for (int i = 0; i < 4; ++i) t[i] = y[i] + h * k3[i];
        rhs(q1, t, k4);
        for (int i = 0; i < 4; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    };

    const double total_steps = x_end / g.h;
    const auto full = static_cast<std::size_t>(std::floor(total_steps + 1e-9));
    const double ds = 1.0 / static_cast<double>(g.substeps);
    std::size_t done = 0;
    for (std::size_t j = 0; j < g.intervals && done < full; ++j) {
        const double a = v[j], b = v[j + 1] - v[j];
        for (std::size_t i = 0; i < g.substeps && done < full; ++i, ++done) {
            const double t0 = static_cast<double>(i) * ds;
            step(a + b * t0, a + b * (t0 + 0.5 * ds), a + b * (t0 + ds), g.h);
        }
    }
    const double rest = x_end - static_cast<double>(done) * g.h;
    if (rest > 1e-15 && done < g.intervals * g.substeps) {
        const std::size_t j = done / g.substeps;
        const double t0 = static_cast<double>(done % g.substeps) * ds;
        const double f = rest / g.h * ds;
        const double a = v[j], b = v[j + 1] - v[j];
        step(a + b * t0, a + b * (t0 + 0.5 * f), a + b * (t0 + f), rest);
    }
    return {y[0], y[1], y[2], y[3]};
}

Mat2 monodromy_to(const Potential& q, double lambda, double x, const PropagateOptions& opt)
{
    if (q.is_piecewise())
        return piecewise_monodromy(q, lambda, x);
    return rk4_monodromy(q, lambda, rk4_grid(q, opt.min_steps, 2 * opt.refine), x);
}

} // namespace

double F_from(double theta1, double theta1p, double phi1, double phi1p)
{
    const double delta = 0.5 * (phi1p + theta1);
    return 2.0 * delta * delta + phi1 * theta1p / 4.0 - 1.0;
}

FundamentalData propagate(const Potential& q, double lambda, const PropagateOptions& opt)
{
    if (!std::isfinite(lambda))
        throw DomainError("propagate: lambda must be finite");
    if (opt.min_steps < 1 || opt.refine < 1)
        throw ValidationError("propagate: min_steps and refine must be positive");

    const Mat2 m = monodromy_to(q, lambda, 1.0, opt);
    FundamentalData d;
    d.lambda = lambda;
    d.theta1 = m[0];
    d.phi1 = m[1];
    d.theta1p = m[2];
    d.phi1p = m[3];
    d.delta = 0.5 * (d.phi1p + d.theta1);
    d.delta_minus = 0.5 * (d.phi1p - d.theta1);
    d.F = 2.0 * d.delta * d.delta + d.phi1 * d.theta1p / 4.0 - 1.0;

    if (!q.is_piecewise() && opt.estimate_error) {
        const Mat2 coarse = rk4_monodromy(q, lambda, rk4_grid(q, opt.min_steps, opt.refine), 1.0);
        double e = 0.0;
        for (int i = 0; i < 4; ++i)
            e = std::max(e, std::abs(m[i] - coarse[i]));
        d.error_estimate = e / 15.0;
    }
    return d;
}

double free_F(double lambda)
{
    const double c = lambda >= 0.0 ? std::cos(2.0 * std::sqrt(lambda)) : std::cosh(2.0 * std::sqrt(-lambda));
    return (9.0 * c - 1.0) / 8.0;
}

double hill_F(const Potential& q, double lambda)
{
    return propagate(q, lambda, {1024, false}).F;
}

double hill_F_prime(const Potential& q, double lambda)
{
    const double h = 1e-6 * std::max(1.0, std::abs(lambda));
    return (hill_F(q, lambda + h) - hill_F(q, lambda - h)) / (2.0 * h);
}

std::pair<double, double> eval_solution(const Potential& q, double lambda, double y0, double y0p, double x,
                                        const PropagateOptions& opt)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError(fmt::format("eval_solution: x = {} outside [0,1]", x));
    if (!std::isfinite(lambda))
        throw DomainError("eval_solution: lambda must be finite");
    if (x == 0.0)
        return {y0, y0p};
    const Mat2 m = monodromy_to(q, lambda, x, opt);
    return {m[0] * y0 + m[1] * y0p, m[2] * y0 + m[3] * y0p};
}

std::vector<double> RootList::values() const
{
    std::vector<double> v;
    v.reserve(roots.size());
    for (const auto& r : roots)
        v.push_back(r.lambda);
    return v;
}

std::vector<double> RootList::expanded() const
{
    std::vector<double> v;
    for (const auto& r : roots) {
        v.push_back(r.lambda);
        if (r.kind == RootKind::double_tangent)
            v.push_back(r.lambda);
    }
    return v;
}

std::size_t RootList::count_with_multiplicity() const
{
    return expanded().size();
}

void validate_window(Window w)
{
    if (!std::isfinite(w.lo) || !std::isfinite(w.hi))
        throw ValidationError("lambda window must be finite");
    if (w.lo > w.hi)
        throw ValidationError(fmt::format("lambda window inverted: [{}, {}]", w.lo, w.hi));
}

RootList scan_roots(const std::function<double(double)>& g, double lambda_floor, Window w,
                    const ScanOptions& opt, bool detect_tangency)
{
    validate_window(w);
    RootList out;
    if (w.hi < lambda_floor)
        return out;

    // Below the floor (min q) none of the scanned functions vanish; one point
    // there is enough to bracket a root sitting exactly on the floor.
    std::vector<double> xs;
    if (w.lo < lambda_floor)
        xs.push_back(std::max(w.lo, lambda_floor - 0.25));
    const double du = opt.u_step;
    const double u_lo = std::max(0.0, std::sqrt(std::max(0.0, w.lo - lambda_floor)) - 2.0 * du);
    const double u_hi = std::sqrt(w.hi - lambda_floor) + 2.0 * du;
    const auto n = static_cast<std::size_t>(std::ceil((u_hi - u_lo) / du));
    for (std::size_t i = 0; i <= n; ++i) {
        const double u = u_lo + (u_hi - u_lo) * static_cast<double>(i) / static_cast<double>(n);
        xs.push_back(lambda_floor + u * u);
    }
    std::vector<double> gs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        gs[i] = g(xs[i]);

    auto tol = [&opt](double a, double b) {
        return std::abs(b - a) <= opt.rel_tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };

    std::vector<Root> simple;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (gs[i] == 0.0) {
            simple.push_back({xs[i], RootKind::simple});
            continue;
        }
        if (i + 1 < xs.size() && gs[i + 1] != 0.0 && (gs[i] < 0) != (gs[i + 1] < 0)) {
            std::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(g, xs[i], xs[i + 1], gs[i], gs[i + 1], tol, iters);
            simple.push_back({0.5 * (r.first + r.second), RootKind::simple});
        }
    }

    struct Tangency {
        double at, lo, hi;
    };
    std::vector<Tangency> tangencies;
    if (detect_tangency) {
        const int bits = std::numeric_limits<double>::digits / 2;
        for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
            const double d1 = gs[i] - gs[i - 1], d2 = gs[i + 1] - gs[i];
            if (d1 * d2 > 0.0 || (d1 == 0.0 && d2 == 0.0))
                continue;
            const double sign = (d1 > 0.0 || d2 < 0.0) ? -1.0 : 1.0; // maximum -> minimise -g
            auto m = boost::math::tools::brent_find_minima([&](double x) { return sign * g(x); }, xs[i - 1],
                                                           xs[i + 1], bits);
            const double gmin = sign * m.second;
            // A close root pair hidden between samples: the extremum crosses zero
            // although the three samples around it share a sign.
            if (std::abs(gmin) >= opt.tol_F && (gmin < 0) != (gs[i] < 0) && (gs[i - 1] < 0) == (gs[i] < 0) &&
                (gs[i + 1] < 0) == (gs[i] < 0) && gs[i - 1] != 0.0 && gs[i] != 0.0 && gs[i + 1] != 0.0) {
                for (auto [a, b, ga] : {std::tuple{xs[i - 1], m.first, gs[i - 1]}, std::tuple{m.first, xs[i + 1], gmin}}) {
                    const double gb = (b == m.first) ? gmin : gs[i + 1];
                    std::uintmax_t iters = 200;
                    auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
                    simple.push_back({0.5 * (r.first + r.second), RootKind::simple});
                }
                continue;
            }
            if (std::abs(gmin) < opt.tol_F) {
                if (!tangencies.empty() && std::abs(tangencies.back().at - m.first) <
                                               1e-7 * std::max(1.0, std::abs(m.first)))
                    continue;
                tangencies.push_back({m.first, xs[i - 1], xs[i + 1]});
            }
        }
    }

    for (const auto& r : simple) {
        bool absorbed = false;
        for (const auto& t : tangencies)
            if (r.lambda >= t.lo && r.lambda <= t.hi)
                absorbed = true;
        if (!absorbed)
            out.roots.push_back(r);
    }
    for (const auto& t : tangencies)
        out.roots.push_back({t.at, RootKind::double_tangent});

    std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) { return a.lambda < b.lambda; });
    std::vector<Root> kept;
    for (const auto& r : out.roots) {
        const double slack = 1e-9 * std::max(1.0, std::abs(r.lambda));
        if (r.lambda < w.lo - slack || r.lambda > w.hi + slack)
            continue;
        if (!kept.empty() && std::abs(kept.back().lambda - r.lambda) <= slack) {
            if (r.kind == RootKind::double_tangent)
                kept.back() = r;
            continue;
        }
        kept.push_back(r);
    }
    out.roots = std::move(kept);
    return out;
}

RootList solve_F_equals(const Potential& q, double c, Window w, const ScanOptions& opt)
{
    if (!(c >= -1.25 - 1e-12 && c <= 1.0 + 1e-12))
        throw DomainError(fmt::format("solve_F_equals: c = {} outside [-5/4, 1]", c));
    auto g = [&q, c, &opt](double lambda) { return propagate(q, lambda, opt.propagate).F - c; };
    RootList r = scan_roots(g, q.min_value(), w, opt, true);
    r.c = c;
    return r;
}

std::vector<double> dirichlet_spectrum(const Potential& q, Window w, const ScanOptions& opt)
{
    auto g = [&q, &opt](double lambda) { return propagate(q, lambda, opt.propagate).phi1; };
    return scan_roots(g, q.min_value(), w, opt, false).values();
}

std::vector<double> neumann_spectrum(const Potential& q, Window w, const ScanOptions& opt)
{
    auto g = [&q, &opt](double lambda) { return propagate(q, lambda, opt.propagate).theta1p; };
    return scan_roots(g, q.min_value(), w, opt, false).values();
}

} // namespace zigzag
