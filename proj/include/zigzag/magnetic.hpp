#pragma once

#include "zigzag/hill.hpp"

#include <complex>
#include <vector>

namespace zigzag {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSingularThreshold = 1e-9;
inline constexpr double kNearFlatThreshold = 1e-4;

double flux_from_field(int N, double B);
double tube_radius(int N);
// B_{k,m} for m in [m_lo, m_hi]; empty when m_lo > m_hi.
std::vector<double> singular_fields(int N, int k, int m_lo, int m_hi);
// Singular flux pi/2 - pi k/N + pi m.
double singular_flux(int N, int k, int m);

struct TubeConfig {
    int N = 1;
    double B = 0.0;
    double a = 0.0;
    double R = 0.0;

    static TubeConfig from_field(int N, double B);
};

// Channel k is stored reduced mod N, so k = N is the same channel as k = 0.
struct ChannelParams {
    int N = 1;
    int k = 0;
    double a = 0.0;
    double c = 1.0, s = 0.0;   // cos, sin of a + pi k / N
    double c0 = 1.0, s0 = 0.0; // cos, sin of pi k / N
    bool singular = false;     // |c| < 1e-9
    bool near_flat = false;    // 1e-9 <= |c| < 1e-4

    static ChannelParams make(int N, int k, double a);

    // s^{k/2} = exp(i pi k / N) and s^k = exp(2 pi i k / N)
    cplx s_half() const;
    cplx s_k() const;
};

struct Monodromy2x2 {
    cplx m00, m01, m10, m11;

    cplx det() const { return m00 * m11 - m01 * m10; }
    cplx trace() const { return m00 + m11; }
    std::pair<cplx, cplx> eigenvalues() const;
};

Monodromy2x2 monodromy(const Potential& q, double lambda, const ChannelParams& ch);
Monodromy2x2 monodromy(const FundamentalData& d, const ChannelParams& ch);

// tau^2 - Tr(M_k) tau + s^{-k}, with the trace taken from F so the value stays
// finite across Dirichlet points.
cplx characteristic_det(const Potential& q, double lambda, const ChannelParams& ch, cplx tau);
cplx characteristic_det(double F, const ChannelParams& ch, cplx tau);

} // namespace zigzag
