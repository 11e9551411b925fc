#include "helpers.hpp"
#include "zigzag/errors.hpp"
#include "zigzag/magnetic.hpp"
#include "zigzag/spectra.hpp"

#include <doctest.h>
#include <random>

using namespace zigzag;
using doctest::Approx;

TEST_CASE("flux from field")
{
    CHECK(flux_from_field(3, 4 * kPi / 9) == Approx(kPi / 6).epsilon(1e-15));
    CHECK(flux_from_field(3, 0.0) == 0.0);
    CHECK(std::abs(flux_from_field(1, 1.0)) < 1e-16);
    CHECK_THROWS_AS(flux_from_field(0, 1.0), ValidationError);
    const auto t = TubeConfig::from_field(3, 4 * kPi / 9);
    CHECK(t.a == Approx(kPi / 6).epsilon(1e-15));
    CHECK(t.R == Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
}

TEST_CASE("tube radius")
{
    CHECK(tube_radius(1) == Approx(std::sqrt(3.0) / 4).epsilon(1e-15));
    CHECK(tube_radius(3) == Approx(0.86603).epsilon(1e-5));
    CHECK(tube_radius(100) == Approx(std::sqrt(3.0) * 100 / (2 * kPi)).epsilon(0.01));
    CHECK_THROWS_AS(tube_radius(0), ValidationError);
}

TEST_CASE("singular fields")
{
    const auto b = singular_fields(3, 1, 0, 0);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == Approx(4 * kPi / 9).epsilon(1e-15));
    CHECK(singular_fields(3, 1, 0, 1).size() == 2);
    CHECK(singular_fields(3, 1, 1, 0).empty());
    CHECK(std::abs(singular_fields(2, 1, 0, 0)[0]) < 1e-15);
    CHECK_THROWS_AS(singular_fields(3, 0, 0, 0), ValidationError);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const int N = std::uniform_int_distribution<int>(1, 12)(rng);
        const int k = std::uniform_int_distribution<int>(1, N)(rng);
        const int m = std::uniform_int_distribution<int>(-3, 3)(rng);
        const double B = singular_fields(N, k, m, m)[0];
        const double a = flux_from_field(N, B);
        CHECK(std::abs(a - singular_flux(N, k, m)) <= 1e-14 * std::max(1.0, std::abs(a)));
        CHECK(std::abs(std::cos(a + kPi * k / N)) < 1e-13);
        CHECK(ChannelParams::make(N, k, a).singular);
    }
}

TEST_CASE("channel parameters")
{
    const auto c = ChannelParams::make(3, 3, 0.4);
    CHECK(c.k == 0);
    CHECK(ChannelParams::make(3, -1, 0.4).k == 2);
    const auto d = ChannelParams::make(5, 2, 0.7);
    CHECK(std::abs(d.c * d.c + d.s * d.s - 1.0) <= 1e-14);
    CHECK(d.c0 == Approx(std::cos(2 * kPi / 5)).epsilon(1e-15));
    CHECK(!d.singular);
    const auto near = ChannelParams::make(3, 1, kPi / 6 + 1e-6);
    CHECK(!near.singular);
    CHECK(near.near_flat);
}

TEST_CASE("monodromy at lambda = 0 for q = 0")
{
    const auto m = monodromy(Potential::zero(), 0.0, ChannelParams::make(3, 0, 0.0));
    CHECK(std::abs(m.trace() - 2.0) < 1e-14);
    CHECK(std::abs(m.det() - 1.0) < 1e-14);
}

TEST_CASE("monodromy determinant, trace and eigenvalue product")
{
    const auto q = testing::mathieu();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ul(-3.0, 300.0), ua(-2.0, 2.0);
    int tested = 0;
    while (tested < 60) {
        const int k = 1 + tested % 4;
        const auto ch = ChannelParams::make(5, k, ua(rng));
        const auto d = propagate(q, ul(rng), {1024, false});
        if (std::abs(d.phi1) < 1e-3 || std::abs(ch.c) < 1e-2)
            continue;
        const auto m = monodromy(d, ch);
        const cplx sk_inv = std::conj(ch.s_k());
        CHECK(std::abs(m.det() - sk_inv) <= 1e-9);
        const cplx tr = 2.0 * std::conj(ch.s_half()) * (d.F + ch.s * ch.s) / ch.c;
        CHECK(std::abs(m.trace() - tr) <= 1e-8 * (1.0 + std::abs(m.trace())));
        const auto [t1, t2] = m.eigenvalues();
        CHECK(std::abs(t1 * t2 - sk_inv) <= 1e-8 * (1.0 + std::abs(t1 * t2)));
        ++tested;
    }
}

TEST_CASE("monodromy errors")
{
    const auto z = Potential::zero();
    CHECK_THROWS_AS(monodromy(z, 3.0, ChannelParams::make(3, 1, kPi / 6)), ChannelSingularError);
    CHECK_THROWS_AS(monodromy(z, kPi * kPi, ChannelParams::make(3, 1, 0.0)), PoleError);
    CHECK_THROWS_AS(characteristic_det(z, 3.0, ChannelParams::make(3, 1, kPi / 6), 1.0), ChannelSingularError);
}

TEST_CASE("characteristic determinant at tau = +-1")
{
    const auto z = Potential::zero();
    CHECK(std::abs(characteristic_det(z, 0.0, ChannelParams::make(3, 0, 0.0), 1.0)) < 1e-14);

    const auto q = testing::mathieu();
    const auto ch = ChannelParams::make(4, 1, 0.35);
    const auto per = periodic_eigenvalues(q, ch, {-3.0, 200.0});
    const auto anti = antiperiodic_eigenvalues(q, ch, {-3.0, 200.0});
    REQUIRE(!per.roots.empty());
    REQUIRE(!anti.roots.empty());
    for (const auto& r : per.roots)
        CHECK(std::abs(characteristic_det(q, r.lambda, ch, 1.0)) <= 1e-7);
    for (const auto& r : anti.roots)
        CHECK(std::abs(characteristic_det(q, r.lambda, ch, -1.0)) <= 1e-7);
    // away from those roots the determinant does not vanish, also across a Dirichlet point
    const double mu1 = dirichlet_spectrum(q, {-3.0, 30.0})[0];
    CHECK(std::abs(characteristic_det(q, mu1, ch, 1.0)) > 1e-3);
}
