#include "zigzag/eigenfunctions.hpp"

#include "zigzag/errors.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <fmt/format.h>

namespace zigzag {

namespace {

// Narrow a bracket around lambda0 on which g changes sign and solve to full
// precision. Returns lambda0 unchanged when g(lambda0) is already zero or no
// sign change is found nearby.
template <class G>
double polish(G g, double lambda0)
{
    const double g0 = g(lambda0);
    if (g0 == 0.0)
        return lambda0;
    double d = 1e-9 * std::max(1.0, std::abs(lambda0));
    for (int it = 0; it < 12; ++it, d *= 4.0) {
        const double a = lambda0 - d, b = lambda0 + d;
        const double ga = g(a), gb = g(b);
        const bool left = (ga < 0) != (g0 < 0), right = (gb < 0) != (g0 < 0);
        if (!left && !right)
            continue;
        const double lo = left ? a : lambda0, hi = left ? lambda0 : b;
        const double glo = left ? ga : g0, ghi = left ? g0 : gb;
        std::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
        const double x = std::abs(g(r.first)) <= std::abs(g(r.second)) ? r.first : r.second;
        return x;
    }
    return lambda0;
}

const PropagateOptions kEdgeOpt{1024, false};

} // namespace

const char* to_string(EigenKind k)
{
    switch (k) {
    case EigenKind::dirichlet_eta_nonzero: return "dirichlet-eta-nonzero";
    case EigenKind::dirichlet_eta_zero: return "dirichlet-eta-zero";
    case EigenKind::antiperiodic_flat: return "antiperiodic-flat";
    }
    return "?";
}

CompactEigenfunction dirichlet_eigenfunction(const Potential& q, double lambda, const ChannelParams& ch)
{
    const double phi1 = propagate(q, lambda, kEdgeOpt).phi1;
    if (!(std::abs(phi1) <= 1e-9))
        throw MisuseError(fmt::format("dirichlet_eigenfunction: lambda = {} is not a Dirichlet point (phi1 = {:.3g})",
                                      lambda, phi1));
    lambda = polish([&q](double x) { return propagate(q, x, kEdgeOpt).phi1; }, lambda);
    const FundamentalData d = propagate(q, lambda, kEdgeOpt);

    CompactEigenfunction psi;
    psi.lambda = lambda;
    psi.ch = ch;
    const cplx ea = std::polar(1.0, ch.a);
    const cplx sk = ch.s_k();
    const double p = d.phi1p;
    psi.eta = 1.0 - ea * ea * sk * p * p;
    if (std::abs(psi.eta) < 1e-9) {
        psi.kind = EigenKind::dirichlet_eta_zero;
        psi.support[{0, 1}] = {0.0, 1.0};
        psi.support[{0, 2}] = {0.0, ea * p};
    } else {
        psi.kind = EigenKind::dirichlet_eta_nonzero;
        psi.support[{0, 0}] = {0.0, psi.eta};
        psi.support[{0, 1}] = {0.0, p};
        psi.support[{0, 2}] = {0.0, ea * p * p};
        psi.support[{-1, 1}] = {0.0, -ea * sk * p};
        psi.support[{-1, 2}] = {0.0, -1.0};
    }
    return psi;
}

CompactEigenfunction antiperiodic_flatband_eigenfunction(const Potential& q, double lambda, const ChannelParams& ch)
{
    if (!ch.singular)
        throw MisuseError(fmt::format("antiperiodic_flatband_eigenfunction: channel k={} has c_k = {:.3g} != 0",
                                      ch.k, ch.c));
    const double F = hill_F(q, lambda);
    if (!(std::abs(F + 1.0) <= 1e-8))
        throw MisuseError(fmt::format("antiperiodic_flatband_eigenfunction: F({}) = {:.17g}, expected -1", lambda, F));
    lambda = polish([&q](double x) { return propagate(q, x, kEdgeOpt).F + 1.0; }, lambda);
    const FundamentalData d = propagate(q, lambda, kEdgeOpt);
    if (!(std::abs(d.phi1) > 1e-9))
        throw MisuseError("antiperiodic_flatband_eigenfunction: phi1 vanishes at lambda");

    CompactEigenfunction psi;
    psi.lambda = lambda;
    psi.ch = ch;
    psi.kind = EigenKind::antiperiodic_flat;
    const cplx ea = std::polar(1.0, ch.a);
    const double C1 = d.phi1p + 2.0 * d.delta;
    const double C2 = -d.theta1p - 2.0 * d.theta1 * d.delta / d.phi1;
    const double r = d.theta1 / d.phi1;
    // theta_t C1 + phi_t C2 on (0,0): value C1 at t = 0 and 1 at t = 1
    psi.support[{0, 0}] = {C1, C2};
    psi.support[{0, 1}] = {1.0, -r};
    psi.support[{0, 2}] = {0.0, -ea / d.phi1};
    psi.support[{-1, 1}] = {0.0, std::conj(ea) * C1 / d.phi1};
    psi.support[{-1, 2}] = {C1, -C1 * r};
    return psi;
}

CompactEigenfunction translate(const CompactEigenfunction& psi, int n0)
{
    CompactEigenfunction out = psi;
    out.support.clear();
    for (const auto& [e, c] : psi.support)
        out.support[{e.n + n0, e.j}] = c;
    return out;
}

EdgeValue edge_value(const Potential& q, const CompactEigenfunction& psi, EdgeIndex e, double t)
{
    auto it = psi.support.find(e);
    if (it == psi.support.end())
        return {0.0, 0.0};
    const auto [th, thp] = eval_solution(q, psi.lambda, 1.0, 0.0, t, kEdgeOpt);
    const auto [ph, php] = eval_solution(q, psi.lambda, 0.0, 1.0, t, kEdgeOpt);
    const auto& c = it->second;
    return {c.alpha * th + c.beta * ph, c.alpha * thp + c.beta * php};
}

double kirchhoff_residual(const Potential& q, const CompactEigenfunction& psi)
{
    if (psi.support.empty())
        return 0.0;
    int nmin = psi.support.begin()->first.n, nmax = nmin;
    for (const auto& [e, c] : psi.support) {
        nmin = std::min(nmin, e.n);
        nmax = std::max(nmax, e.n);
    }
    const cplx ea = std::polar(1.0, psi.ch.a);
    const cplx eas = ea * psi.ch.s_k();
    auto v = [&](int n, int j, double t) { return edge_value(q, psi, {n, j}, t); };

    double res = 0.0;
    for (int n = nmin - 1; n <= nmax + 1; ++n) {
        // vertex joining (n,0) at t=1, (n,1) at t=0 and (n,2) at t=1
        const auto a0 = v(n, 0, 1.0), a1 = v(n, 1, 0.0), a2 = v(n, 2, 1.0);
        res = std::max(res, std::abs(a0.f - a1.f));
        res = std::max(res, std::abs(a1.f - eas * a2.f));
        res = std::max(res, std::abs(-a0.fp + a1.fp - eas * a2.fp));
        // vertex joining (n+1,0) at t=0, (n,1) at t=1 and (n,2) at t=0
        const auto b0 = v(n + 1, 0, 0.0), b1 = v(n, 1, 1.0), b2 = v(n, 2, 0.0);
        res = std::max(res, std::abs(b0.f - ea * b1.f));
        res = std::max(res, std::abs(ea * b1.f - b2.f));
        res = std::max(res, std::abs(b0.fp - ea * b1.fp + b2.fp));
    }
    return res;
}

std::vector<EigenSample> sample_eigenfunction(const Potential& q, const CompactEigenfunction& psi, int points_per_edge)
{
    if (points_per_edge < 2)
        throw ValidationError("sample_eigenfunction: need at least 2 points per edge");
    std::vector<EigenSample> out;
    for (const auto& [e, c] : psi.support) {
        for (int i = 0; i < points_per_edge; ++i) {
            const double t = static_cast<double>(i) / (points_per_edge - 1);
            out.push_back({e.n, e.j, t, edge_value(q, psi, e, t).f});
        }
    }
    return out;
}

std::map<EdgeIndex, EdgeCoeffs> combine(const CompactEigenfunction& base, const std::map<int, cplx>& coefficients)
{
    std::map<EdgeIndex, EdgeCoeffs> out;
    for (const auto& [n, cn] : coefficients)
        for (const auto& [e, c] : base.support) {
            auto& slot = out[{e.n + n, e.j}];
            slot.alpha += cn * c.alpha;
            slot.beta += cn * c.beta;
        }
    return out;
}

cplx trace_coefficient(const Potential& q, const CompactEigenfunction& base,
                       const std::map<EdgeIndex, EdgeCoeffs>& combination, int n)
{
    auto get = [&](int j) {
        auto it = combination.find({n, j});
        return it == combination.end() ? EdgeCoeffs{} : it->second;
    };
    switch (base.kind) {
    case EigenKind::dirichlet_eta_nonzero:
        return get(0).beta / base.eta; // f'_{n,0}(0) / eta
    case EigenKind::dirichlet_eta_zero:
        return get(1).beta; // f'_{n,1}(0)
    case EigenKind::antiperiodic_flat: {
        const auto d = propagate(q, base.lambda, kEdgeOpt);
        const auto c = get(0);
        return c.alpha * d.theta1 + c.beta * d.phi1; // f_{n,0}(1)
    }
    }
    return 0.0;
}

} // namespace zigzag
