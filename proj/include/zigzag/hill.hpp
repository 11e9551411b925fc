#pragma once

#include "zigzag/potential.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace zigzag {

// theta, phi solve -y'' + q y = lambda y on [0,1] with
// theta(0) = phi'(0) = 1, theta'(0) = phi(0) = 0. Values here are at x = 1.
struct FundamentalData {
    double lambda = 0.0;
    double theta1 = 1.0, theta1p = 0.0, phi1 = 0.0, phi1p = 1.0;
    double delta = 1.0;       // (phi1' + theta1) / 2
    double delta_minus = 0.0; // (phi1' - theta1) / 2
    double F = 1.0;           // 2 delta^2 + phi1 theta1' / 4 - 1
    double error_estimate = 0.0; // step-halving estimate, sampled potentials only

    double wronskian() const { return theta1 * phi1p - theta1p * phi1; }
};

struct PropagateOptions {
    int min_steps = 1024;       // RK4 steps per unit length is at least this (sampled q)
    bool estimate_error = true; // run the half-resolution pass for error_estimate
    int refine = 1;             // extra step multiplier, for step-halving comparisons
};

FundamentalData propagate(const Potential& q, double lambda, const PropagateOptions& opt = {});

double free_F(double lambda);
double hill_F(const Potential& q, double lambda);
double F_from(double theta1, double theta1p, double phi1, double phi1p);

struct Window {
    double lo;
    double hi;
};

enum class RootKind { simple, double_tangent };

struct Root {
    double lambda;
    RootKind kind;
};

struct RootList {
    double c = 0.0;
    std::vector<Root> roots;

    std::vector<double> values() const;
    // Roots repeated by multiplicity: a tangency counts twice.
    std::vector<double> expanded() const;
    std::size_t count_with_multiplicity() const;
};

struct ScanOptions {
    double u_step = 0.19634954084936207; // pi/16 in u = sqrt(lambda - min q)
    double tol_F = 1e-8;                 // tangency threshold on |F - c| at an extremum
    double rel_tol = 1e-12;              // bracket width / max(1, |lambda|) at termination
    PropagateOptions propagate{1024, false};
};

RootList solve_F_equals(const Potential& q, double c, Window w, const ScanOptions& opt = {});
std::vector<double> dirichlet_spectrum(const Potential& q, Window w, const ScanOptions& opt = {});
std::vector<double> neumann_spectrum(const Potential& q, Window w, const ScanOptions& opt = {});

// (y(x), y'(x)) for the solution with y(0) = y0, y'(0) = y0p.
std::pair<double, double> eval_solution(const Potential& q, double lambda, double y0, double y0p, double x,
                                        const PropagateOptions& opt = {1024, false});

// Generic sign-change scan used by the spectral routines. g is evaluated on the
// u-grid; tangencies are looked for only when detect_tangency is set.
RootList scan_roots(const std::function<double(double)>& g, double lambda_floor, Window w,
                    const ScanOptions& opt, bool detect_tangency);

// Central difference dF/dlambda with step 1e-6 * max(1, |lambda|).
double hill_F_prime(const Potential& q, double lambda);

void validate_window(Window w);

} // namespace zigzag
