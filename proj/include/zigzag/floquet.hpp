#pragma once

#include "zigzag/spectra.hpp"

#include <vector>

namespace zigzag {

// Q := F + s_k^2 - c_k cos(p + pi k / N); fiber eigenvalues are its zeros in lambda.
double fiber_Q_closed(const Potential& q, double lambda, double p, const ChannelParams& ch);
double fiber_Q_closed(double F, double p, const ChannelParams& ch);

// Same quantity from the 2x2 system in (x, y) = (f_0(0), f_0(1)) obtained by
// writing the three edge functions through their end values and imposing the
// two flux conditions. The raw determinant is rescaled by -e^{-ip} phi1^2 / 4 so
// that it equals fiber_Q_closed.
cplx fiber_Q_direct(const Potential& q, double lambda, double p, const ChannelParams& ch);
cplx fiber_Q_direct(const FundamentalData& d, double p, const ChannelParams& ch);

// (2 Delta + theta1)(2 Delta + phi1') - (8 Delta^2 + theta1' phi1 + 1)
double fiber_product_identity_defect(const FundamentalData& d);

std::vector<double> uniform_p_grid(int n = 256);

// Union over p of the lambda roots of Q(., p), assembled into closed intervals.
// Intervals closer than merge_gap * max(1, |lambda|) are joined.
std::vector<Interval> spectrum_via_fibers(const Potential& q, const ChannelParams& ch, const std::vector<double>& p_grid,
                                          Window w, const ScanOptions& opt = {}, double merge_gap = 1e-8);
std::vector<Interval> spectrum_via_fibers_serial(const Potential& q, const ChannelParams& ch,
                                                 const std::vector<double>& p_grid, Window w,
                                                 const ScanOptions& opt = {}, double merge_gap = 1e-8);

// Lebesgue measure of the symmetric difference of two finite unions of intervals.
double symmetric_difference(const std::vector<Interval>& a, const std::vector<Interval>& b);
std::vector<Interval> merge_intervals(std::vector<Interval> v, double rel_gap = 0.0);

} // namespace zigzag
