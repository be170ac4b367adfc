#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "stirlab/advection_diffusion.hpp"
#include "stirlab/fft.hpp"

using namespace stirlab;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
constexpr double four_pi_sq = 4.0 * pi * pi;

// dense matrix of S_t by evolving every physical unit vector
Eigen::MatrixXd dense_propagator(const VelocityField& u, Grid g, double t,
                                 const SolverConfig& cfg) {
    const auto np = static_cast<Eigen::Index>(g.points());
    Eigen::MatrixXd M(np, np);
    Integrator integ(g, u, cfg);
    std::vector<double> phys(g.points());
    std::vector<cplx> spec(g.spectral_size());
    for (Eigen::Index j = 0; j < np; ++j) {
        std::fill(phys.begin(), phys.end(), 0.0);
        phys[j] = 1.0;
        fft::forward(g, phys.data(), spec.data());
        integ.project_band(spec);
        integ.advance(spec, t);
        fft::backward(g, spec.data(), phys.data());
        for (Eigen::Index i = 0; i < np; ++i) M(i, j) = phys[i];
    }
    return M;
}

double dense_mean_zero_norm(const Eigen::MatrixXd& M) {
    const auto np = M.rows();
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(np, np) -
                        Eigen::MatrixXd::Constant(np, np, 1.0 / static_cast<double>(np));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M * P);
    return svd.singularValues()(0);
}
}  // namespace

TEST_CASE("heat eigenfunction decay is exact") {
    Grid g = Grid::make(2, 64);
    auto phi0 = SpectralField::from_function(
        g, [](double x, double, double) { return std::sin(two_pi * x); });
    const double t = 0.05;
    auto phi = evolve(phi0, zero_flow(2), t);
    const double expected = std::exp(-four_pi_sq * t) / std::sqrt(2.0);
    CHECK(l2_norm(phi) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(l2_norm(phi - std::exp(-four_pi_sq * t) * phi0) < 1e-6 * expected);
}

TEST_CASE("evolve rejects a forced CFL violation") {
    Grid g = Grid::make(2, 32);
    auto phi0 = SpectralField::random_bandlimited(g, 1, 8);
    SolverConfig cfg;
    cfg.dt = 1.0;  // far above cfl*h/||u||
    CHECK_THROWS_AS(evolve(phi0, cellular2d(5.0), 0.1, cfg), std::invalid_argument);
}

TEST_CASE("propagator norm for the bare heat semigroup") {
    Grid g = Grid::make(2, 32);
    for (double t : {0.01, 0.02}) {
        auto est = propagator_norm_L2(zero_flow(2), g, t, 1e-9);
        CHECK(est.converged);
        CHECK(est.value == doctest::Approx(std::exp(-four_pi_sq * t)).epsilon(1e-6));
    }
}

TEST_CASE("power iteration matches the dense-matrix singular value") {
    Grid g = Grid::make(2, 16);
    auto u = cellular2d(5.0);
    const double t = 0.02;
    SolverConfig cfg;
    auto est = propagator_norm_L2(u, g, t, 1e-10, cfg);
    CHECK(est.converged);
    auto M = dense_propagator(u, g, t, cfg);
    const double oracle = dense_mean_zero_norm(M);
    CHECK(est.value == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("heat-only dissipation time") {
    Grid g = Grid::make(2, 32);
    auto est = dissipation_time(zero_flow(2), g, 1e-3);
    REQUIRE(est.ok);
    CHECK(std::abs(est.tau_star - heat_dissipation_time()) < 1e-4);
    CHECK(est.norm_at_tau <= 0.5);
}

TEST_CASE("l1->linf estimate against the truncated heat-kernel series") {
    Grid g = Grid::make(2, 16);
    const double t = 0.05;
    auto est = l1_to_linf_norm(zero_flow(2), g, t);
    CHECK(est.delta_resolved);

    // independent route: evaluate the truncated kernel series on the grid
    const int kc = g.dealias_cutoff();
    auto K = [&](double dx, double dy) {
        double sum = 0.0;
        for (int k1 = -kc; k1 <= kc; ++k1)
            for (int k2 = -kc; k2 <= kc; ++k2)
                sum += std::exp(-four_pi_sq * (k1 * k1 + k2 * k2) * t) *
                       std::cos(two_pi * (k1 * dx + k2 * dy));
        return sum;
    };
    double lo = 1e30, hi = -1e30;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            double v = K(i * g.spacing(), j * g.spacing());
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double oracle = 0.5 * (hi - lo);
    CHECK(est.value == doctest::Approx(oracle).epsilon(1e-6));

    // large-t asymptotics: 2 d e^{-4 pi^2 t}
    const double t2 = 0.3;
    auto est2 = l1_to_linf_norm(zero_flow(2), g, t2);
    CHECK(est2.value == doctest::Approx(4.0 * std::exp(-four_pi_sq * t2)).epsilon(1e-3));
}

TEST_CASE("under-resolved delta is flagged") {
    Grid g = Grid::make(2, 16);
    auto est = l1_to_linf_norm(zero_flow(2), g, 1e-5);
    CHECK_FALSE(est.delta_resolved);
}

TEST_CASE("bound_6_3 arithmetic") {
    CHECK(bound_6_3(1.0, 1.0, 2, 10.0) == doctest::Approx(10.0));
    const double e = std::exp(1.0);
    CHECK(bound_6_3(1.0 / e, 1.0 / e, 2, 10.0) == doctest::Approx(14.0 / e).epsilon(1e-14));
    // increasing as eps decreases
    double prev = bound_6_3(0.1, 1.0, 2, 10.0);
    for (double eps : {0.5, 0.1, 0.01}) {
        double v = bound_6_3(0.1, eps, 2, 10.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_SUITE("properties") {
    TEST_CASE("constants are invariant and the mean is conserved") {
        Grid g = Grid::make(2, 32);
        auto one = SpectralField::from_function(g, [](double, double, double) { return 1.0; });
        auto evolved = evolve(one, cellular2d(3.0), 0.05);
        CHECK(std::abs(evolved.mean() - 1.0) < 1e-14);
        CHECK(l2_norm(project_mean_zero(evolved)) < 1e-13);

        auto f = SpectralField::random_bandlimited(g, 5, 8);
        f.coeffs()[0] = 0.7;
        auto ev = evolve(f, cellular2d(3.0), 0.05);
        CHECK(std::abs(ev.mean() - 0.7) < 1e-13);
    }

    TEST_CASE("L2 norm decreases and the energy identity holds to scheme order") {
        Grid g = Grid::make(2, 64);
        auto u = cellular2d(50.0);
        auto phi0 = SpectralField::random_bandlimited(g, 9, g.dealias_cutoff());

        auto defect = [&](double cfl) {
            SolverConfig cfg;
            cfg.cfl = cfl;
            Integrator integ(g, u, cfg);
            auto phi = phi0;
            integ.project_band(phi.raw());
            integ.set_dt(cfg.cfl * g.spacing() / u.sup_norm());
            double worst = 0.0;
            double prev_l2sq = l2_norm(phi) * l2_norm(phi);
            double prev_h1 = h1_seminorm(phi);
            for (int s = 0; s < 20; ++s) {
                integ.step(phi.raw());
                const double l2sq = l2_norm(phi) * l2_norm(phi);
                const double h1 = h1_seminorm(phi);
                CHECK(l2sq < prev_l2sq);  // strictly decreasing samples
                // trapezoidal energy balance over the step
                const double drop = prev_l2sq - l2sq;
                const double dissip = integ.dt() * (prev_h1 * prev_h1 + h1 * h1);
                worst = std::max(worst, std::abs(drop - dissip) / std::max(drop, 1e-300));
                prev_l2sq = l2sq;
                prev_h1 = h1;
            }
            return worst;
        };

        const double coarse = defect(0.4);
        const double fine = defect(0.2);
        CHECK(coarse < 0.05);
        CHECK(fine < coarse);  // halved dt shrinks the balance defect
    }

    TEST_CASE("adjointness: <S f, g> = <f, S' g> with the reversed flow") {
        Grid g = Grid::make(2, 32);
        auto u = cellular2d(4.0);
        auto f = SpectralField::random_bandlimited(g, 21, g.dealias_cutoff());
        auto h = SpectralField::random_bandlimited(g, 22, g.dealias_cutoff());
        const double t = 0.03;
        auto Sf = evolve(f, u, t);
        auto Sh = evolve(h, rescale(u, 1, -1), t);
        CHECK(inner_product(Sf, h) == doctest::Approx(inner_product(f, Sh)).epsilon(1e-6));
    }

    TEST_CASE("propagator norm is non-increasing in t") {
        Grid g = Grid::make(2, 32);
        auto u = cellular2d(3.0);
        const double t = 0.008;
        double prev = 1.0;
        for (int m = 1; m <= 3; ++m) {
            auto est = propagator_norm_L2(u, g, m * t, 1e-7);
            CHECK(est.value <= prev + 1e-6);
            prev = est.value;
        }
    }

    TEST_CASE("dissipation estimate brackets the 1/2 crossing") {
        Grid g = Grid::make(2, 32);
        auto u = cellular2d(2.0);
        auto est = dissipation_time(u, g, 1e-3);
        REQUIRE(est.ok);
        CHECK(est.t_lo < est.t_hi);
        CHECK(est.t_hi - est.t_lo <= 1e-3 * est.t_hi);
        CHECK(propagator_norm_L2(u, g, est.t_lo, 1e-7).value > 0.5);
        CHECK(propagator_norm_L2(u, g, est.t_hi, 1e-7).value <= 0.5);
        CHECK(est.norm_at_tau <= 0.5);
    }

    TEST_CASE("kernel transpose identity under flow reversal") {
        Grid g = Grid::make(2, 16);
        auto u = cellular2d(3.0);
        const double t = 0.04;
        auto K = assemble_kernel(u, g, t);
        auto Kadj = assemble_kernel(rescale(u, 1, -1), g, t);
        const std::size_t np = g.points();
        double err = 0.0, scale = 0.0;
        for (std::size_t x = 0; x < np; ++x)
            for (std::size_t y = 0; y < np; ++y) {
                err = std::max(err, std::abs(K[x * np + y] - Kadj[y * np + x]));
                scale = std::max(scale, std::abs(K[x * np + y]));
            }
        CHECK(err < 1e-8 * scale);

        auto n1 = l1_to_linf_norm(u, g, t);
        auto n2 = l1_to_linf_norm(rescale(u, 1, -1), g, t);
        CHECK(n1.value == doctest::Approx(n2.value).epsilon(1e-8));
    }

    TEST_CASE("l1->linf estimate decreases toward zero in t") {
        Grid g = Grid::make(2, 16);
        auto u = cellular2d(2.0);
        double prev = 1e300;
        for (double t : {0.05, 0.1, 0.2}) {
            auto est = l1_to_linf_norm(u, g, t);
            CHECK(est.value < prev);
            prev = est.value;
        }
    }
}
