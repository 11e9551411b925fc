#include "helpers.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/floquet.hpp"

#include <doctest.h>
#include <random>

using namespace zigzag;
using doctest::Approx;

TEST_CASE("fiber determinant at the bottom of the free spectrum")
{
    const auto z = Potential::zero();
    const auto ch = ChannelParams::make(3, 0, 0.0);
    CHECK(std::abs(fiber_Q_closed(z, 0.0, 0.0, ch)) < 1e-14);
    CHECK(std::abs(fiber_Q_direct(z, 0.0, 0.0, ch)) < 1e-13);
}

TEST_CASE("cosine symmetry of the fiber determinant")
{
    const auto q = testing::mathieu();
    const auto ch = ChannelParams::make(5, 2, 0.4);
    for (double p : {0.1, 1.0, 2.5, 4.0})
        for (double lam : {0.5, 12.0, 80.0}) {
            const double p2 = -p - 2 * kPi * ch.k / ch.N;
            CHECK(fiber_Q_closed(q, lam, p, ch) == Approx(fiber_Q_closed(q, lam, p2, ch)).epsilon(1e-13));
        }
}

TEST_CASE("extreme fibers give the resonance constants")
{
    const auto ch = ChannelParams::make(3, 1, 0.3);
    const double p_top = -kPi * ch.k / ch.N, p_bot = kPi - kPi * ch.k / ch.N;
    // Q = F + s^2 - c cos(.) vanishes at F = +-c - s^2
    CHECK(std::abs(fiber_Q_closed(ch.c - ch.s * ch.s, p_top, ch)) < 1e-15);
    CHECK(std::abs(fiber_Q_closed(-ch.c - ch.s * ch.s, p_bot, ch)) < 1e-15);
    double hi = -1e9, lo = 1e9;
    for (double p : uniform_p_grid(256)) {
        const double v = ch.c * std::cos(p + kPi * ch.k / ch.N);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    CHECK(hi == Approx(std::abs(ch.c)).epsilon(1e-3));
    CHECK(lo == Approx(-std::abs(ch.c)).epsilon(1e-3));
}

TEST_CASE("direct and closed fiber determinants agree")
{
    const auto q = testing::mathieu();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ul(-3.0, 250.0), ua(0.0, 2 * kPi), up(0.0, 2 * kPi);
    int n = 0;
    while (n < 100) {
        const auto ch = ChannelParams::make(1 + n % 6, n % 5, ua(rng));
        const auto d = propagate(q, ul(rng), {1024, false});
        if (std::abs(d.phi1) < 1e-3)
            continue;
        const double p = up(rng);
        const double closed = fiber_Q_closed(d.F, p, ch);
        CHECK(std::abs(fiber_Q_direct(d, p, ch) - closed) <= 1e-8 * (1 + std::abs(closed)));
        CHECK(std::abs(fiber_product_identity_defect(d)) <= 1e-10 * (1 + 8 * d.delta * d.delta));
        ++n;
    }
}

TEST_CASE("direct determinant has poles on sigma_D")
{
    CHECK_THROWS_AS(fiber_Q_direct(Potential::zero(), kPi * kPi, 0.3, ChannelParams::make(3, 1, 0.2)), PoleError);
}

TEST_CASE("singular channel fibers reduce to F = -1")
{
    const auto ch = ChannelParams::make(3, 1, kPi / 6);
    for (double p : {0.0, 1.0, 3.0})
        CHECK(std::abs(fiber_Q_closed(-1.0, p, ch)) < 1e-15);
    CHECK_THROWS_AS(spectrum_via_fibers(Potential::zero(), ch, uniform_p_grid(), {0.0, 10.0}), ChannelSingularError);
}

TEST_CASE("free k = 0 fiber union")
{
    const auto z = Potential::zero();
    const Window w{-1.0, 150.0};
    const auto iv = spectrum_via_fibers(z, ChannelParams::make(3, 0, 0.0), uniform_p_grid(256), w);
    // {cos 2 sqrt(lambda) in [-7/9, 1]}: 2 sqrt(lambda) within A of a multiple of 2 pi
    const double A = std::acos(-7.0 / 9);
    std::vector<Interval> exact{{0.0, std::pow(A / 2, 2)}};
    for (int n = 1; std::pow((2 * kPi * n - A) / 2, 2) < w.hi; ++n)
        exact.push_back({std::pow((2 * kPi * n - A) / 2, 2), std::min(w.hi, std::pow((2 * kPi * n + A) / 2, 2))});
    CHECK(iv.size() == exact.size());
    CHECK(symmetric_difference(iv, exact) <= 1e-4);
}

TEST_CASE("fiber union matches channel bands")
{
    const auto q = testing::mathieu(1.0);
    const auto ch = ChannelParams::make(3, 1, 0.3);
    const Window w{-2.0, 150.0};
    std::vector<Interval> bands;
    for (const auto& b : channel_bands(q, ch, w))
        bands.push_back({b.lo, b.hi});
    CHECK(symmetric_difference(bands, spectrum_via_fibers(q, ch, uniform_p_grid(256), w)) <= 1e-4);
    CHECK_THROWS_AS(spectrum_via_fibers(q, ch, uniform_p_grid(32), w), ValidationError);
}

TEST_CASE("fibers at p and -p - 2 pi k / N coincide")
{
    const auto q = testing::mathieu();
    const auto ch = ChannelParams::make(4, 1, 0.5);
    for (double p : {0.3, 1.7, 5.0}) {
        const double c1 = ch.c * std::cos(p + kPi * ch.k / ch.N) - ch.s * ch.s;
        const double p2 = 2 * kPi - p - 2 * kPi * ch.k / ch.N;
        const double c2 = ch.c * std::cos(p2 + kPi * ch.k / ch.N) - ch.s * ch.s;
        const auto r1 = solve_F_equals(q, c1, {-3.0, 200.0}).expanded();
        const auto r2 = solve_F_equals(q, c2, {-3.0, 200.0}).expanded();
        REQUIRE(r1.size() == r2.size());
        for (std::size_t i = 0; i < r1.size(); ++i)
            CHECK(r1[i] == Approx(r2[i]).epsilon(1e-10));
    }
}

TEST_CASE("interval algebra")
{
    const auto m = merge_intervals({{3, 4}, {0, 1}, {0.5, 2}, {4 + 1e-12, 5}}, 1e-9);
    REQUIRE(m.size() == 2);
    CHECK(m[0].lo == 0);
    CHECK(m[0].hi == 2);
    CHECK(m[1].hi == 5);
    CHECK(symmetric_difference({{0, 2}}, {{1, 3}}) == Approx(2.0));
    CHECK(symmetric_difference({{0, 1}, {2, 3}}, {{0, 1}, {2, 3}}) == 0.0);
    CHECK(symmetric_difference({}, {{0, 0.5}}) == Approx(0.5));
}
