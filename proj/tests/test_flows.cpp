#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stirlab/flows.hpp"

using namespace stirlab;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
}  // namespace

TEST_CASE("cellular2d evaluation") {
    auto u = cellular2d(1.0);
    auto v = u.at(0.25, 0.0);
    CHECK(v[0] == doctest::Approx(-two_pi).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(0.0));
    auto c = u.at(0.25, 0.25);  // cell center stagnation
    CHECK(std::abs(c[0]) < 1e-14);
    CHECK(std::abs(c[1]) < 1e-14);
    CHECK(u.sup_norm() == doctest::Approx(two_pi));
}

TEST_CASE("cellular2d divergence certificate") {
    for (double A : {1.0, 10.0}) {
        auto u = cellular2d(A);
        auto cert = check_divergence_free(u, Grid::make(2, 32));
        CHECK(cert.ok);
        CHECK(cert.defect <= 1e-8 * two_pi * A);
    }
}

TEST_CASE("cellular3d evaluation and divergence") {
    auto u = cellular3d(1.0);
    auto v = u.at(0.0, 0.0, 0.25);
    CHECK(v[0] == doctest::Approx(0.0));
    CHECK(v[1] == doctest::Approx(0.0));
    CHECK(v[2] == doctest::Approx(8.0 * pi * pi).epsilon(1e-13));

    // Phi vanishes at x = 1/4, so the vertical component vanishes there
    for (double z : {0.1, 0.3, 0.7}) {
        auto w = u.at(0.25, 0.0, z);
        CHECK(std::abs(w[2]) < 1e-12);
    }

    auto cert = check_divergence_free(u, Grid::make(3, 16));
    CHECK(cert.ok);
}

TEST_CASE("shear2d evaluation, divergence and asymmetry") {
    auto u = shear2d(4.0);
    for (double x : {0.0, 0.3, 0.9}) {
        auto v = u.at(x, 0.25);
        CHECK(v[0] == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(v[1] == 0.0);
    }
    Grid g = Grid::make(2, 32);
    CHECK(check_divergence_free(u, g).ok);
    // u1(R1 x) = u1(x) != -u1(x): the reflection identity fails in x1
    auto sym1 = check_symmetry(u, g, 0);
    CHECK_FALSE(sym1.ok);
    CHECK(sym1.defect == doctest::Approx(2.0 * 4.0).epsilon(1e-12));
}

TEST_CASE("cellular flows satisfy the reflection symmetry") {
    Grid g2 = Grid::make(2, 32);
    auto u2 = cellular2d(3.0);
    for (int j = 0; j < 2; ++j) {
        auto cert = check_symmetry(u2, g2, j);
        CHECK(cert.ok);
        CHECK(cert.defect <= 1e-10 * u2.sup_norm());
    }
    Grid g3 = Grid::make(3, 16);
    auto u3 = cellular3d(2.0);
    for (int j = 0; j < 3; ++j) CHECK(check_symmetry(u3, g3, j).ok);
}

TEST_CASE("rescale basics") {
    auto u = cellular2d(1.0);
    auto same = rescale(u, 1, 1);
    auto a = u.at(0.13, 0.41);
    auto b = same.at(0.13, 0.41);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);

    auto v = rescale(u, 2, 1);
    CHECK(v.sup_norm() == doctest::Approx(2.0 * u.sup_norm()));
    CHECK(v.cells() == 2);
    // period 1/2
    auto p1 = v.at(0.1, 0.2);
    auto p2 = v.at(0.6, 0.2);
    CHECK(p1[0] == doctest::Approx(p2[0]).epsilon(1e-12));
    CHECK(p1[1] == doctest::Approx(p2[1]).epsilon(1e-12));
    // amplitude doubles pointwise: v(x) = 2 u(2x)
    auto w = u.at(0.2, 0.4);
    CHECK(p1[0] == doctest::Approx(2.0 * w[0]).epsilon(1e-12));

    // symmetry certified after rescale
    Grid g = Grid::make(2, 32);
    auto vr = rescale(cellular2d(1.0), 2, -1);
    for (int j = 0; j < 2; ++j) CHECK(check_symmetry(vr, g, j).ok);
    CHECK(check_divergence_free(vr, g).ok);

    CHECK_THROWS_AS(rescale(u, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(rescale(u, 2, 3), std::invalid_argument);
}

TEST_CASE("choose_nu selection rule") {
    auto c = choose_nu(1.0, two_pi, 2);
    CHECK(c.mu == 1);
    CHECK(c.nu == 7);

    auto c2 = choose_nu(std::pow(2.0, 32), 1.0, 2);
    CHECK(c2.mu == 2);
    CHECK(c2.nu % c2.mu == 0);

    CHECK_THROWS_AS(choose_nu(0.5, 1.0, 2), std::invalid_argument);
}

TEST_SUITE("properties") {
    TEST_CASE("library flows have grid-mean zero per component") {
        Grid g = Grid::make(2, 32);
        for (const auto& u : {cellular2d(2.0), shear2d(3.0), rescale(cellular2d(1.0), 4, -1)}) {
            auto fields = u.sample_spectral(g);
            for (const auto& comp : fields.comp) CHECK(std::abs(comp.mean()) < 1e-12);
        }
        auto u3 = cellular3d(1.5);
        auto f3 = u3.sample_spectral(Grid::make(3, 16));
        for (const auto& comp : f3.comp) CHECK(std::abs(comp.mean()) < 1e-12);
    }

    TEST_CASE("rescale composes multiplicatively") {
        auto u = cellular2d(1.0);
        auto ab = rescale(rescale(u, 2, -1), 3, -1);
        auto direct = rescale(u, 6, 1);
        for (double x : {0.0, 0.17, 0.53}) {
            for (double y : {0.05, 0.71}) {
                auto a = ab.at(x, y);
                auto b = direct.at(x, y);
                CHECK(std::abs(a[0] - b[0]) < 1e-12 * direct.sup_norm());
                CHECK(std::abs(a[1] - b[1]) < 1e-12 * direct.sup_norm());
            }
        }
        CHECK(ab.cells() == 6);
        CHECK(ab.sign() == 1);
    }

    TEST_CASE("divergence defect stays below 1e-8 of the sup norm at n >= 8 nu") {
        for (int nu : {1, 2, 4}) {
            auto v = rescale(cellular2d(static_cast<double>(nu)), nu, -1);
            Grid g = Grid::make(2, std::max(32, 8 * nu));
            auto cert = check_divergence_free(v, g);
            CHECK(cert.ok);
        }
    }

    TEST_CASE("choose_nu always returns a multiple of mu exceeding the threshold") {
        for (double D : {1.0, 7.3, 1e4, 1e8}) {
            for (double usup : {0.0, 1.0, 400.0}) {
                for (int d : {2, 3}) {
                    auto c = choose_nu(D, usup, d);
                    CHECK(c.nu % c.mu == 0);
                    CHECK(c.nu > usup * std::pow(D, (1.0 - 8.0 * d) / (32.0 * d)));
                    CHECK(c.mu >= 1);
                }
            }
        }
    }
}
