#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace zigzag {

struct Segment {
    double width;
    double value;
};

// One period of the edge potential q on [0,1].
//
// Two representations: piecewise-constant segments (exact transfer matrices) or
// uniform samples t_j = j/(M-1), linearly interpolated in between.
class Potential {
public:
    static Potential piecewise(std::vector<Segment> segments);
    static Potential samples(std::vector<double> values);
    static Potential zero() { return constant(0.0); }
    static Potential constant(double v) { return piecewise({{1.0, v}}); }
    // Samples f at n uniform points of [0,1].
    static Potential sampled(const std::function<double(double)>& f, std::size_t n);

    bool is_piecewise() const { return piecewise_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<double>& values() const { return values_; }

    // q0 = (1/2) * integral of q over [0,1]. Note the factor 1/2.
    double q0() const { return q0_; }
    double min_value() const { return min_; }
    double max_value() const { return max_; }

    double operator()(double t) const;

    // Short stable fingerprint of the representation, used in reports.
    std::string digest() const;

private:
    Potential() = default;
    void finish();

    bool piecewise_ = true;
    std::vector<Segment> segments_;
    std::vector<double> values_;
    double q0_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
};

} // namespace zigzag
