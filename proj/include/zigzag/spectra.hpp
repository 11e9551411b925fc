#pragma once

#include "zigzag/hill.hpp"
#include "zigzag/magnetic.hpp"

#include <string>
#include <vector>

namespace zigzag {

struct LyapunovValue {
    double lambda = 0.0;
    double T = 0.0;
    double R = 0.0;
    cplx F_plus, F_minus; // T +- sqrt(R); complex conjugate pair when R < 0
};

LyapunovValue lyapunov(const Potential& q, double lambda, const ChannelParams& ch);
LyapunovValue lyapunov_from_F(double lambda, double F, const ChannelParams& ch);

struct ResonanceFamilies {
    RootList even; // F = |c_k| - s_k^2
    RootList odd;  // F = -|c_k| - s_k^2
};

double even_constant(const ChannelParams& ch);
double odd_constant(const ChannelParams& ch);
double periodic_constant(const ChannelParams& ch);
double antiperiodic_constant(const ChannelParams& ch);

ResonanceFamilies resonances(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt = {});
RootList periodic_eigenvalues(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt = {});
RootList antiperiodic_eigenvalues(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt = {});

enum class EndpointKind { resonance, periodic, antiperiodic, flat, window };
const char* to_string(EndpointKind k);

struct Band {
    int k = 0;
    int n = 0; // 1-based, lowest band in the window is 1
    double lo = 0.0, hi = 0.0;
    EndpointKind lo_kind = EndpointKind::resonance;
    EndpointKind hi_kind = EndpointKind::resonance;
};

std::vector<Band> channel_bands(const Potential& q, const ChannelParams& ch, Window w, const ScanOptions& opt = {});

struct FlatBandSpectrum {
    std::vector<double> dirichlet;    // sigma_D
    std::vector<double> antiperiodic; // sigma_AP = {F = -1}
};

FlatBandSpectrum flat_band_spectrum(const Potential& q, const ChannelParams& ch, Window w,
                                    const ScanOptions& opt = {});

struct Interval {
    double lo = 0.0, hi = 0.0;
};

struct UnionBand {
    int n = 0;
    double lo = 0.0, hi = 0.0;
};

struct Gap {
    int n = 0; // G_n lies between S_n and S_{n+1}
    double lo = 0.0, hi = 0.0;
    bool closed = false;
    double length() const { return hi - lo; }
};

struct CollapsePrediction {
    double lambda_tilde;
    double offset; // |c_k| / F'(lambda_tilde)
};

struct ChannelReport {
    ChannelParams ch;
    std::vector<Band> bands;
    ResonanceFamilies resonances;
    RootList periodic, antiperiodic;
    std::vector<double> flat_points;              // sigma_AP, singular channels only
    std::vector<CollapsePrediction> near_flat;    // filled when ch.near_flat
};

struct SpectrumReport {
    int N = 1;
    double B = 0.0;
    double a = 0.0;
    std::string q_digest;
    Window window{0.0, 0.0};
    std::vector<ChannelReport> channels;
    std::vector<double> dirichlet_points;
    std::vector<UnionBand> union_bands;
    std::vector<Gap> gaps;
};

// Default window for a potential: from below min q up to lambda_max.
Window spectral_window(const Potential& q, double lambda_max);

SpectrumReport full_spectrum(const Potential& q, int N, double B, Window w, const ScanOptions& opt = {});
SpectrumReport full_spectrum_at_flux(const Potential& q, int N, double a, Window w, const ScanOptions& opt = {},
                                     double B_label = 0.0);
SpectrumReport full_spectrum_serial(const Potential& q, int N, double B, Window w, const ScanOptions& opt = {});

// Track of one band (k, n) across a field sweep; k = -1 marks the union bands S_n.
// NaN where the band is absent at that field value.
struct BandTrack {
    int k = 0;
    int n = 0;
    std::vector<double> lo, hi;
};

struct SweepResult {
    std::vector<double> B;
    std::vector<SpectrumReport> reports;
    std::vector<BandTrack> tracks;
};

SweepResult sweep_field(const Potential& q, int N, const std::vector<double>& B_grid, Window w,
                        const ScanOptions& opt = {});
SweepResult sweep_field_serial(const Potential& q, int N, const std::vector<double>& B_grid, Window w,
                               const ScanOptions& opt = {});

enum class AsymptoticKind { periodic, antiperiodic, resonance_even, resonance_odd };

struct AsymptoticBracket {
    double center_minus = 0.0, center_plus = 0.0;
    double half_width = 0.0;
};

// Centres (pi n +- phi)^2 + q0 for periodic / antiperiodic roots and
// (pi n / 2 +- phi_n)^2 + q0 for resonances (n even: even family, n odd: odd family).
AsymptoticBracket asymptotic_bracket(AsymptoticKind kind, const ChannelParams& ch, int n, double q0);

struct CollapseSample {
    double c0 = 0.0;
    double a = 0.0;
    double lambda_tilde = 0.0;
    double F_prime = 0.0;
    double lo = 0.0, hi = 0.0; // collapsing band
    double lo_offset = 0.0, hi_offset = 0.0;
    double predicted = 0.0;                       // c0 / F'(lambda_tilde)
    double predicted_lo = 0.0, predicted_hi = 0.0; // +-|c0| / F' with the sign of each endpoint branch
};

std::vector<CollapseSample> collapse_rate(const Potential& q, int N, int k, int m, int n,
                                          const std::vector<double>& c0_values, const ScanOptions& opt = {});

struct DiscriminantRow {
    double lambda = 0.0;
    double F = 0.0;
    std::vector<LyapunovValue> channels; // NaN entries for singular channels
};

// F and the Lyapunov data of each channel on a lambda grid.
std::vector<DiscriminantRow> tabulate_discriminant(const Potential& q, const std::vector<double>& lambdas,
                                                   const std::vector<ChannelParams>& channels);
std::vector<DiscriminantRow> tabulate_discriminant_serial(const Potential& q, const std::vector<double>& lambdas,
                                                          const std::vector<ChannelParams>& channels);

} // namespace zigzag
