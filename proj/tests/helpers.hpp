#pragma once

#include "zigzag/magnetic.hpp"
#include "zigzag/potential.hpp"

#include <cmath>

namespace testing {

inline zigzag::Potential mathieu(double amp = 2.0, std::size_t n = 1025)
{
    return zigzag::Potential::sampled([amp](double t) { return amp * std::cos(2.0 * zigzag::kPi * t); }, n);
}

// lambda with free_F(lambda) = c on the first rising branch of cos 2 sqrt(lambda)
inline double free_root(double c)
{
    const double u = 0.5 * std::acos((1.0 + 8.0 * c) / 9.0);
    return u * u;
}

} // namespace testing
