#pragma once

#include "zigzag/magnetic.hpp"

#include <compare>
#include <map>
#include <vector>

namespace zigzag {

// Edge (n, j) of the reduced graph: j = 0 vertical, 1 up-slant, 2 down-slant.
struct EdgeIndex {
    int n = 0;
    int j = 0;
    auto operator<=>(const EdgeIndex&) const = default;
};

// f_{n,j}(t) = alpha theta(t) + beta phi(t)
struct EdgeCoeffs {
    cplx alpha, beta;
};

enum class EigenKind { dirichlet_eta_nonzero, dirichlet_eta_zero, antiperiodic_flat };
const char* to_string(EigenKind k);

struct CompactEigenfunction {
    double lambda = 0.0;
    ChannelParams ch;
    EigenKind kind = EigenKind::dirichlet_eta_nonzero;
    cplx eta;
    std::map<EdgeIndex, EdgeCoeffs> support;
};

// Both constructors first polish lambda to full precision on the defining
// equation (phi1 = 0, resp. F = -1); the polished value is stored in the result.
CompactEigenfunction dirichlet_eigenfunction(const Potential& q, double lambda, const ChannelParams& ch);
CompactEigenfunction antiperiodic_flatband_eigenfunction(const Potential& q, double lambda, const ChannelParams& ch);

CompactEigenfunction translate(const CompactEigenfunction& psi, int n0);

struct EdgeValue {
    cplx f, fp;
};

EdgeValue edge_value(const Potential& q, const CompactEigenfunction& psi, EdgeIndex e, double t);

// Max modulus of the continuity and flux-balance defects over every vertex
// touched by the support, plus one cell of margin.
double kirchhoff_residual(const Potential& q, const CompactEigenfunction& psi);

struct EigenSample {
    int n, j;
    double t;
    cplx f;
};

std::vector<EigenSample> sample_eigenfunction(const Potential& q, const CompactEigenfunction& psi,
                                              int points_per_edge = 64);

// Recover the coefficient of the n-th translate from a finite combination
// sum_n c_n psi^(n), using the edge-trace read-out of each construction.
cplx trace_coefficient(const Potential& q, const CompactEigenfunction& base,
                       const std::map<EdgeIndex, EdgeCoeffs>& combination, int n);

// Sum of c_n * translate(base, n) as a support map.
std::map<EdgeIndex, EdgeCoeffs> combine(const CompactEigenfunction& base, const std::map<int, cplx>& coefficients);

} // namespace zigzag
