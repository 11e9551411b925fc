#include "zigzag/floquet.hpp"

#include "zigzag/errors.hpp"
#include "zigzag/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>

namespace zigzag {

double fiber_Q_closed(double F, double p, const ChannelParams& ch)
{
    return F + ch.s * ch.s - ch.c * std::cos(p + kPi * ch.k / ch.N);
}

double fiber_Q_closed(const Potential& q, double lambda, double p, const ChannelParams& ch)
{
    return fiber_Q_closed(hill_F(q, lambda), p, ch);
}

double fiber_product_identity_defect(const FundamentalData& d)
{
    const double D = d.delta;
    return (2 * D + d.theta1) * (2 * D + d.phi1p) - (8 * D * D + d.theta1p * d.phi1 + 1.0);
}

namespace {

// An edge function as a linear form in the unknowns (x, y): f = A theta + B phi
// with A = A[0] x + A[1] y and likewise for B.
struct EdgeForm {
    std::array<cplx, 2> A{}, B{};
};

// Linear form of f'(0) and f'(1).
std::array<cplx, 2> deriv0(const EdgeForm& e) { return e.B; }
std::array<cplx, 2> deriv1(const EdgeForm& e, const FundamentalData& d)
{
    return {e.A[0] * d.theta1p + e.B[0] * d.phi1p, e.A[1] * d.theta1p + e.B[1] * d.phi1p};
}

// Solution with prescribed end values u0 = f(0), u1 = f(1), each a linear form:
// f = u0 theta + (u1 - theta1 u0) / phi1 phi
EdgeForm through(std::array<cplx, 2> u0, std::array<cplx, 2> u1, const FundamentalData& d)
{
    EdgeForm e;
    for (int i = 0; i < 2; ++i) {
        e.A[i] = u0[i];
        e.B[i] = (u1[i] - d.theta1 * u0[i]) / d.phi1;
    }
    return e;
}

} // namespace

cplx fiber_Q_direct(const FundamentalData& d, double p, const ChannelParams& ch)
{
    if (!(std::abs(d.phi1) > 1e-12))
        throw PoleError(fmt::format("fiber_Q_direct: lambda = {} is too close to a Dirichlet point", d.lambda));

    const cplx eip = std::polar(1.0, p), ea = std::polar(1.0, ch.a), sk = ch.s_k();
    // continuity at the two vertices of the fundamental cell, quasi-periodic in p:
    //   f0(1) = f1(0) = e^{ia} s^k f2(1),   e^{ip} f0(0) = e^{ia} f1(1) = f2(0)
    const std::array<cplx, 2> X{1.0, 0.0}, Y{0.0, 1.0};
    const EdgeForm f0 = through(X, Y, d);
    const EdgeForm f1 = through(Y, {eip / ea, 0.0}, d);
    const EdgeForm f2 = through({eip, 0.0}, {0.0, 1.0 / (ea * sk)}, d);

    // flux conditions
    //   -f0'(1) + f1'(0) - e^{ia} s^k f2'(1) = 0
    //   e^{ip} f0'(0) - e^{ia} f1'(1) + f2'(0) = 0
    std::array<std::array<cplx, 2>, 2> M;
    const auto f0d1 = deriv1(f0, d), f1d0 = deriv0(f1), f2d1 = deriv1(f2, d);
    const auto f0d0 = deriv0(f0), f1d1 = deriv1(f1, d), f2d0 = deriv0(f2);
    for (int i = 0; i < 2; ++i) {
        M[0][i] = -f0d1[i] + f1d0[i] - ea * sk * f2d1[i];
        M[1][i] = eip * f0d0[i] - ea * f1d1[i] + f2d0[i];
    }
    const cplx det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    return -std::conj(eip) * d.phi1 * d.phi1 * det / 4.0;
}

cplx fiber_Q_direct(const Potential& q, double lambda, double p, const ChannelParams& ch)
{
    return fiber_Q_direct(propagate(q, lambda), p, ch);
}

std::vector<double> uniform_p_grid(int n)
{
    if (n < 1)
        throw ValidationError("p grid needs at least one point");
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        p[static_cast<std::size_t>(i)] = 2.0 * kPi * i / n;
    return p;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v, double rel_gap)
{
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + rel_gap * std::max(1.0, std::abs(out.back().hi))) {
            out.back().hi = std::max(out.back().hi, iv.hi);
            continue;
        }
        out.push_back(iv);
    }
    return out;
}

double symmetric_difference(const std::vector<Interval>& a, const std::vector<Interval>& b)
{
    // |A| + |B| - 2 |A n B| with both sides merged first
    const auto A = merge_intervals(a), B = merge_intervals(b);
    auto measure = [](const std::vector<Interval>& v) {
        double m = 0.0;
        for (const auto& iv : v)
            m += iv.hi - iv.lo;
        return m;
    };
    double inter = 0.0;
    std::size_t i = 0, j = 0;
    while (i < A.size() && j < B.size()) {
        const double lo = std::max(A[i].lo, B[j].lo), hi = std::min(A[i].hi, B[j].hi);
        if (hi > lo)
            inter += hi - lo;
        if (A[i].hi < B[j].hi)
            ++i;
        else
            ++j;
    }
    return measure(A) + measure(B) - 2.0 * inter;
}

namespace {

bool periodic_grid(const std::vector<double>& p)
{
    const double h = 2.0 * kPi / static_cast<double>(p.size());
    for (std::size_t j = 0; j < p.size(); ++j)
        if (std::abs(p[j] - p.front() - h * static_cast<double>(j)) > 1e-12)
            return false;
    return true;
}

// A grid extreme of root_i(p) misses the true extreme by O(h^2). Replace it by
// the vertex of the parabola through the extreme sample and its neighbours when
// the three samples are consistent with a smooth extremum (they are not at a
// tangency, where root_i(p) has a kink).
double vertex_refine(const std::vector<std::vector<double>>& roots, std::size_t i, std::size_t j, double dir)
{
    const std::size_t n = roots.size();
    const double y0 = roots[j][i], ym = roots[(j + n - 1) % n][i], yp = roots[(j + 1) % n][i];
    const double curv = dir * (yp - 2.0 * y0 + ym);
    if (!(curv < 0.0))
        return y0;
    const double shift = (yp - ym) * (yp - ym) / (8.0 * -curv);
    if (shift > std::max(std::abs(y0 - ym), std::abs(y0 - yp)))
        return y0;
    return y0 + dir * shift;
}

std::vector<Interval> fibers_impl(const Potential& q, const ChannelParams& ch, const std::vector<double>& p_grid,
                                  Window w, const ScanOptions& opt, double merge_gap, bool parallel)
{
    if (ch.singular)
        throw ChannelSingularError(fmt::format("spectrum_via_fibers: channel k={} is singular", ch.k));
    if (p_grid.size() < 64)
        throw ValidationError("spectrum_via_fibers: p grid needs at least 64 points");
    validate_window(w);

    // roots of F = c_k cos(p + pi k/N) - s_k^2, counted with multiplicity
    std::vector<std::vector<double>> roots(p_grid.size());
    for_each_index(p_grid.size(), parallel, [&](std::size_t i) {
        const double c = std::clamp(ch.c * std::cos(p_grid[i] + kPi * ch.k / ch.N) - ch.s * ch.s, -1.25, 1.0);
        roots[i] = solve_F_equals(q, c, w, opt).expanded();
    });

    // the i-th root sweeps the i-th band as p varies
    std::size_t count = 0;
    for (const auto& r : roots)
        count = std::max(count, r.size());
    std::vector<Interval> bands;
    for (std::size_t i = 0; i < count; ++i) {
        Interval iv{w.hi, w.lo};
        std::size_t jlo = 0, jhi = 0;
        bool complete = true;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (i >= roots[j].size()) {
                complete = false;
                continue;
            }
            if (roots[j][i] < iv.lo) {
                iv.lo = roots[j][i];
                jlo = j;
            }
            if (roots[j][i] > iv.hi) {
                iv.hi = roots[j][i];
                jhi = j;
            }
        }
        if (complete && periodic_grid(p_grid)) {
            iv.lo = vertex_refine(roots, i, jlo, -1.0);
            iv.hi = vertex_refine(roots, i, jhi, +1.0);
        } else if (!complete) {
            // some fibers put their i-th root above the window: the band runs past w.hi.
            // Assumes w.lo sits in a gap, otherwise the root indexing shifts with p.
            iv.hi = w.hi;
        }
        bands.push_back(iv);
    }
    return merge_intervals(std::move(bands), merge_gap);
}

} // namespace

std::vector<Interval> spectrum_via_fibers(const Potential& q, const ChannelParams& ch,
                                          const std::vector<double>& p_grid, Window w, const ScanOptions& opt,
                                          double merge_gap)
{
    return fibers_impl(q, ch, p_grid, w, opt, merge_gap, true);
}

std::vector<Interval> spectrum_via_fibers_serial(const Potential& q, const ChannelParams& ch,
                                                 const std::vector<double>& p_grid, Window w,
                                                 const ScanOptions& opt, double merge_gap)
{
    return fibers_impl(q, ch, p_grid, w, opt, merge_gap, false);
}

} // namespace zigzag
