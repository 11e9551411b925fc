#include "zigzag/magnetic.hpp"

#include "zigzag/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace zigzag {

namespace {

void require_N(int N)
{
    if (N < 1)
        throw ValidationError(fmt::format("tube size N must be >= 1, got {}", N));
}

} // namespace

double flux_from_field(int N, double B)
{
    require_N(N);
    return B * std::sqrt(3.0) / 4.0 * std::cos(kPi / (2.0 * N));
}

double tube_radius(int N)
{
    require_N(N);
    return std::sqrt(3.0) / (4.0 * std::sin(kPi / (2.0 * N)));
}

double singular_flux(int N, int k, int m)
{
    require_N(N);
    return kPi / 2.0 - kPi * k / N + kPi * m;
}

std::vector<double> singular_fields(int N, int k, int m_lo, int m_hi)
{
    require_N(N);
    if (k < 1 || k > N)
        throw ValidationError(fmt::format("singular_fields: k = {} outside 1..{}", k, N));
    std::vector<double> out;
    const double scale = std::sqrt(3.0) * std::cos(kPi / (2.0 * N));
    for (int m = m_lo; m <= m_hi; ++m)
        out.push_back(4.0 * singular_flux(N, k, m) / scale);
    return out;
}

TubeConfig TubeConfig::from_field(int N, double B)
{
    return {N, B, flux_from_field(N, B), tube_radius(N)};
}

ChannelParams ChannelParams::make(int N, int k, double a)
{
    require_N(N);
    if (!std::isfinite(a))
        throw ValidationError("flux a must be finite");
    ChannelParams ch;
    ch.N = N;
    ch.k = ((k % N) + N) % N;
    ch.a = a;
    const double phase = kPi * ch.k / N;
    ch.c = std::cos(a + phase);
    ch.s = std::sin(a + phase);
    ch.c0 = std::cos(phase);
    ch.s0 = std::sin(phase);
    ch.singular = std::abs(ch.c) < kSingularThreshold;
    ch.near_flat = !ch.singular && std::abs(ch.c) < kNearFlatThreshold;
    return ch;
}

cplx ChannelParams::s_half() const
{
    return std::polar(1.0, kPi * k / N);
}

cplx ChannelParams::s_k() const
{
    return std::polar(1.0, 2.0 * kPi * k / N);
}

std::pair<cplx, cplx> Monodromy2x2::eigenvalues() const
{
    const cplx tr = trace();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det());
    // pick the larger-modulus root first and get the other from the product
    const cplx r1 = std::abs(tr + disc) >= std::abs(tr - disc) ? 0.5 * (tr + disc) : 0.5 * (tr - disc);
    const cplx r2 = r1 == cplx(0.0) ? cplx(0.0) : det() / r1;
    return {r1, r2};
}

Monodromy2x2 monodromy(const FundamentalData& d, const ChannelParams& ch)
{
    if (ch.singular)
        throw ChannelSingularError(fmt::format("monodromy: channel k={} is singular (c_k = {:.3g})", ch.k, ch.c));
    if (std::abs(d.phi1) <= 1e-12)
        throw PoleError(fmt::format("monodromy: lambda = {} is too close to a Dirichlet point", d.lambda));

    // M_k = R^{-1} T_k R M,  R = diag(1, phi1),  M = [[theta1, phi1], [theta1', phi1']]
    const cplx pref = std::conj(ch.s_half()) / (2.0 * ch.c);
    const double D = d.delta;
    const cplx t00 = pref * (2.0 * D), t01 = pref, t10 = pref * (4.0 * D * D - 4.0 * ch.c * ch.c), t11 = pref * (2.0 * D);
    // RM = [[theta1, phi1], [phi1 theta1', phi1 phi1']]
    const double r00 = d.theta1, r01 = d.phi1, r10 = d.phi1 * d.theta1p, r11 = d.phi1 * d.phi1p;
    const cplx p00 = t00 * r00 + t01 * r10, p01 = t00 * r01 + t01 * r11;
    const cplx p10 = t10 * r00 + t11 * r10, p11 = t10 * r01 + t11 * r11;
    return {p00, p01, p10 / d.phi1, p11 / d.phi1};
}

Monodromy2x2 monodromy(const Potential& q, double lambda, const ChannelParams& ch)
{
    if (ch.singular)
        throw ChannelSingularError(fmt::format("monodromy: channel k={} is singular", ch.k));
    return monodromy(propagate(q, lambda), ch);
}

cplx characteristic_det(double F, const ChannelParams& ch, cplx tau)
{
    if (ch.singular)
        throw ChannelSingularError(fmt::format("characteristic_det: channel k={} is singular", ch.k));
    const cplx tr = 2.0 * std::conj(ch.s_half()) * (F + ch.s * ch.s) / ch.c;
    return tau * tau - tr * tau + std::conj(ch.s_k());
}

cplx characteristic_det(const Potential& q, double lambda, const ChannelParams& ch, cplx tau)
{
    return characteristic_det(hill_F(q, lambda), ch, tau);
}

} // namespace zigzag
