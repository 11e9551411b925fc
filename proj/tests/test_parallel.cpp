// The OpenMP kernels must reproduce their serial references bit for bit.
#include "helpers.hpp"
#include "zigzag/floquet.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/spectra.hpp"

#include <doctest.h>
#include <stdexcept>

using namespace zigzag;

TEST_CASE("discriminant table: parallel equals serial")
{
    const auto q = testing::mathieu();
    std::vector<double> grid;
    for (int i = 0; i < 400; ++i)
        grid.push_back(-3.0 + 0.5 * i);
    const std::vector<ChannelParams> chs{ChannelParams::make(3, 0, 0.2), ChannelParams::make(3, 1, 0.2),
                                         ChannelParams::make(3, 1, kPi / 6)};
    const auto a = tabulate_discriminant(q, grid, chs), b = tabulate_discriminant_serial(q, grid, chs);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].F == b[i].F);
        for (std::size_t k = 0; k < chs.size(); ++k) {
            const auto& x = a[i].channels[k];
            const auto& y = b[i].channels[k];
            if (chs[k].singular) {
                CHECK(std::isnan(x.T));
                continue;
            }
            CHECK(x.T == y.T);
            CHECK(x.R == y.R);
            CHECK(x.F_plus == y.F_plus);
        }
    }
}

TEST_CASE("full spectrum and sweep: parallel equals serial")
{
    const auto q = testing::mathieu(1.0);
    const Window w{-2.0, 120.0};
    const auto a = full_spectrum(q, 4, 0.9, w), b = full_spectrum_serial(q, 4, 0.9, w);
    REQUIRE(a.union_bands.size() == b.union_bands.size());
    for (std::size_t i = 0; i < a.union_bands.size(); ++i) {
        CHECK(a.union_bands[i].lo == b.union_bands[i].lo);
        CHECK(a.union_bands[i].hi == b.union_bands[i].hi);
    }
    const std::vector<double> Bs{0.0, 0.5, 1.0, 1.5, 2.0};
    const auto s1 = sweep_field(q, 3, Bs, w), s2 = sweep_field_serial(q, 3, Bs, w);
    REQUIRE(s1.tracks.size() == s2.tracks.size());
    for (std::size_t t = 0; t < s1.tracks.size(); ++t)
        for (std::size_t i = 0; i < Bs.size(); ++i) {
            const double x = s1.tracks[t].lo[i], y = s2.tracks[t].lo[i];
            CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
        }
}

TEST_CASE("fiber union: parallel equals serial")
{
    const auto q = testing::mathieu(1.0);
    const auto ch = ChannelParams::make(3, 2, 0.1);
    const auto a = spectrum_via_fibers(q, ch, uniform_p_grid(128), {-2.0, 100.0});
    const auto b = spectrum_via_fibers_serial(q, ch, uniform_p_grid(128), {-2.0, 100.0});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].lo == b[i].lo);
        CHECK(a[i].hi == b[i].hi);
    }
}

TEST_CASE("exceptions inside the parallel loop reach the caller")
{
    CHECK_THROWS_AS(for_each_index(100, true,
                                   [](std::size_t i) {
                                       if (i == 37)
                                           throw std::runtime_error("boom");
                                   }),
                    std::runtime_error);
    std::vector<int> hit(50, 0);
    for_each_index(hit.size(), true, [&](std::size_t i) { hit[i] = 1; });
    CHECK(std::count(hit.begin(), hit.end(), 1) == 50);
}
