#pragma once

#include "zigzag/eigenfunctions.hpp"
#include "zigzag/spectra.hpp"

#include <json.hpp>
#include <ostream>
#include <string>

namespace zigzag {

// 17 significant digits: every double survives a write/read round trip.
std::string fmt17(double x);

Potential potential_from_json(const nlohmann::json& j, const std::string& where = "potential");
nlohmann::json to_json(const Potential& q);
nlohmann::json to_json(const RootList& r);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const CompactEigenfunction& psi, double residual);

// CSV writers. Bands: B,a,k,n,lo,hi,kind where kind is "<lo kind>:<hi kind>" for a
// channel band, "flat" for a singular channel point and "union" (k = all) for S_n.
void write_bands_csv(std::ostream& os, const std::vector<SpectrumReport>& reports);
void write_gaps_csv(std::ostream& os, const std::vector<SpectrumReport>& reports);
void write_flat_points_csv(std::ostream& os, const std::vector<SpectrumReport>& reports);
void write_discriminant_csv(std::ostream& os, const std::vector<DiscriminantRow>& rows,
                            const std::vector<ChannelParams>& channels);
void write_eigenfunction_csv(std::ostream& os, const std::vector<EigenSample>& samples);
// One line per (B, band track) edge: B, k, n, lo, hi. Blank line between tracks (gnuplot index blocks).
void write_band_traces(std::ostream& os, const SweepResult& sweep);

} // namespace zigzag
