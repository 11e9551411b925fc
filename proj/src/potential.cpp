#include "zigzag/potential.hpp"

#include "zigzag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fmt/format.h>

namespace zigzag {

Potential Potential::piecewise(std::vector<Segment> segments)
{
    if (segments.empty())
        throw ValidationError("piecewise potential needs at least one segment");
    double total = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!std::isfinite(s.width) || !std::isfinite(s.value))
            throw ValidationError(fmt::format("segment {}: non-finite width or value", i));
        if (s.width <= 0.0)
            throw ValidationError(fmt::format("segment {}: width must be positive, got {}", i, s.width));
        total += s.width;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError(fmt::format("segment widths sum to {:.17g}, expected 1", total));

    Potential q;
    q.piecewise_ = true;
    q.segments_ = std::move(segments);
    q.finish();
    return q;
}

Potential Potential::samples(std::vector<double> values)
{
    if (values.size() < 2)
        throw ValidationError("sampled potential needs at least 2 points");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw ValidationError(fmt::format("sample {}: non-finite value", i));

    Potential q;
    q.piecewise_ = false;
    q.values_ = std::move(values);
    q.finish();
    return q;
}

Potential Potential::sampled(const std::function<double(double)>& f, std::size_t n)
{
    if (n < 2)
        throw ValidationError("sampled potential needs at least 2 points");
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = f(static_cast<double>(j) / static_cast<double>(n - 1));
    return samples(std::move(v));
}

void Potential::finish()
{
    double integral = 0.0;
    if (piecewise_) {
        min_ = max_ = segments_.front().value;
        for (const auto& s : segments_) {
            integral += s.width * s.value;
            min_ = std::min(min_, s.value);
            max_ = std::max(max_, s.value);
        }
    } else {
        // exact integral of the linear interpolant
        const double h = 1.0 / static_cast<double>(values_.size() - 1);
        for (std::size_t j = 0; j + 1 < values_.size(); ++j)
            integral += 0.5 * h * (values_[j] + values_[j + 1]);
        auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
        min_ = *lo;
        max_ = *hi;
    }
    q0_ = 0.5 * integral;
}

double Potential::operator()(double t) const
{
    t = std::clamp(t, 0.0, 1.0);
    if (piecewise_) {
        double x = 0.0;
        for (const auto& s : segments_) {
            x += s.width;
            if (t < x)
                return s.value;
        }
        return segments_.back().value;
    }
    const double pos = t * static_cast<double>(values_.size() - 1);
    const auto j = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
    const double w = pos - static_cast<double>(j);
    return values_[j] + w * (values_[j + 1] - values_[j]);
}

std::string Potential::digest() const
{
    // FNV-1a over the raw doubles
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double d) {
        unsigned char b[sizeof d];
        std::memcpy(b, &d, sizeof d);
        for (unsigned char c : b) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    if (piecewise_) {
        for (const auto& s : segments_) {
            mix(s.width);
            mix(s.value);
        }
    } else {
        mix(-1.0);
        for (double v : values_)
            mix(v);
    }
    return fmt::format("{}:{:016x}", piecewise_ ? "piecewise" : "samples", h);
}

} // namespace zigzag
