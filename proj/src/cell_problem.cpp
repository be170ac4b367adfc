#include "stirlab/cell_problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stirlab/fft.hpp"

namespace stirlab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

class CorrectorSolver {
public:
    CorrectorSolver(const VelocityField& u, Grid g) : g_(g), u_phys_(u.sample_physical(g)) {
        const std::size_t ns = g.spectral_size();
        mask_.resize(ns);
        inv_k2_.resize(ns);
        inv_k2_[0] = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            mask_[s] = g.in_dealias_band(s) ? 1.0 : 0.0;
            if (s > 0) inv_k2_[s] = -1.0 / (four_pi_sq * g.k_squared(s));
        }
        const int nyq = g.n / 2;
        for (int j = 0; j < g.dim; ++j) {
            kfac_[j].resize(ns);
            for (std::size_t s = 0; s < ns; ++s) {
                auto k = g.wavevector(s);
                kfac_[j][s] = (std::abs(k[j]) == nyq) ? 0.0 : two_pi * k[j];
            }
        }
        spec_.resize(ns);
        acc_.resize(g.points());
        phys_.resize(g.points());
    }

    // out = Lap^{-1} dealias(u . grad in)
    void K(const std::vector<cplx>& in, std::vector<cplx>& out) {
        const std::size_t ns = spec_.size(), np = acc_.size();
        std::fill(acc_.begin(), acc_.end(), 0.0);
        for (int j = 0; j < g_.dim; ++j) {
            const auto& kf = kfac_[j];
            for (std::size_t s = 0; s < ns; ++s)
                spec_[s] = cplx(-kf[s] * in[s].imag(), kf[s] * in[s].real());
            fft::backward(g_, spec_.data(), phys_.data());
            const auto& uj = u_phys_[j];
            for (std::size_t p = 0; p < np; ++p) acc_[p] += uj[p] * phys_[p];
        }
        fft::forward(g_, acc_.data(), out.data());
        for (std::size_t s = 0; s < ns; ++s) out[s] *= mask_[s] * inv_k2_[s];
        out[0] = 0.0;
    }

    std::vector<cplx> forcing_coeffs(const std::array<double, 3>& e) const {
        std::vector<double> f(acc_.size(), 0.0);
        for (int j = 0; j < g_.dim; ++j)
            for (std::size_t p = 0; p < f.size(); ++p) f[p] += e[j] * u_phys_[j][p];
        std::vector<cplx> spec(spec_.size());
        fft::forward(g_, f.data(), spec.data());
        for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= mask_[s];
        spec[0] = 0.0;
        return spec;
    }

    double h1_dot(const std::vector<cplx>& a, const std::vector<cplx>& b) const {
        double sum = 0.0;
        for (std::size_t s = 1; s < a.size(); ++s)
            sum += g_.parseval_weight(s) * four_pi_sq * g_.k_squared(s) *
                   (a[s].real() * b[s].real() + a[s].imag() * b[s].imag());
        return sum;
    }

    const Grid& grid() const { return g_; }

private:
    Grid g_;
    std::vector<std::vector<double>> u_phys_;
    std::vector<double> mask_;
    std::vector<double> inv_k2_;
    std::vector<double> kfac_[3];
    std::vector<cplx> spec_;
    std::vector<double> acc_, phys_;
};

double l2_of(const Grid& g, const std::vector<cplx>& a) {
    double sum = 0.0;
    for (std::size_t s = 1; s < a.size(); ++s)
        sum += g.parseval_weight(s) * std::norm(a[s]);
    return std::sqrt(sum);
}

}  // namespace

CellProblemResult cell_problem_D_e(const VelocityField& u, std::array<double, 3> e, Grid g,
                                   double tol, int max_iter) {
    double elen = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (!(elen > 0)) throw std::invalid_argument("cell_problem_D_e: zero direction");
    for (auto& c : e) c /= elen;

    CellProblemResult res;
    res.corrector = SpectralField(g, "corrector");
    if (u.is_zero()) {
        res.converged = true;
        return res;
    }
    if (g.n < 8 * u.cells())
        throw std::invalid_argument("cell_problem_D_e: grid must satisfy n >= 8*cells");

    CorrectorSolver solver(u, g);
    const std::size_t ns = g.spectral_size();

    std::vector<cplx> ue = solver.forcing_coeffs(e);  // u.e, band-limited
    const double force_norm = l2_of(g, ue);
    if (force_norm == 0.0) {
        res.converged = true;  // trivial corrector, D_e = 1
        return res;
    }

    // b = Lap^{-1}(u.e);  rhs = (I + K) b
    std::vector<cplx> b(ns);
    for (std::size_t s = 1; s < ns; ++s)
        b[s] = ue[s] / cplx(-four_pi_sq * g.k_squared(s), 0.0);
    std::vector<cplx> rhs(ns), t1(ns), t2(ns);
    solver.K(b, rhs);
    for (std::size_t s = 0; s < ns; ++s) rhs[s] += b[s];

    auto apply_M = [&](const std::vector<cplx>& x, std::vector<cplx>& out) {
        solver.K(x, t1);
        solver.K(t1, t2);
        for (std::size_t s = 0; s < ns; ++s) out[s] = x[s] - t2[s];
    };

    // residual of the original corrector equation, relative to ||u.e||
    auto true_residual = [&](const std::vector<cplx>& x) {
        solver.K(x, t1);
        for (std::size_t s = 0; s < ns; ++s) t1[s] = x[s] - t1[s] - b[s];
        for (std::size_t s = 0; s < ns; ++s) t1[s] *= -four_pi_sq * g.k_squared(s);
        return l2_of(g, t1) / force_norm;
    };

    std::vector<cplx> x(ns, cplx(0)), r(ns), p(ns), q(ns);
    apply_M(x, r);
    for (std::size_t s = 0; s < ns; ++s) r[s] = rhs[s] - r[s];
    p = r;
    double rr = solver.h1_dot(r, r);

    const int check_every = 20;
    for (int it = 1; it <= max_iter; ++it) {
        apply_M(p, q);
        const double pq = solver.h1_dot(p, q);
        if (!(pq > 0)) break;  // numerically singular direction
        const double alpha = rr / pq;
        for (std::size_t s = 0; s < ns; ++s) {
            x[s] += alpha * p[s];
            r[s] -= alpha * q[s];
        }
        const double rr_new = solver.h1_dot(r, r);
        res.iterations = it;
        if (it % check_every == 0 || rr_new <= 1e-28 * rr) {
            res.residual = true_residual(x);
            if (res.residual <= tol) {
                res.converged = true;
                break;
            }
        }
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t s = 0; s < ns; ++s) p[s] = r[s] + beta * p[s];
    }
    if (!res.converged) res.residual = true_residual(x);
    if (res.residual <= tol) res.converged = true;

    res.corrector.raw() = x;
    res.D_e = 1.0 + solver.h1_dot(x, x);
    return res;
}

}  // namespace stirlab
