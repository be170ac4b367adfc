#include "stirlab/flows.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stirlab {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
}  // namespace

std::vector<std::vector<double>> VelocityField::sample_physical(const Grid& g) const {
    if (g.dim != dim_) throw std::invalid_argument("VelocityField: grid dimension mismatch");
    std::vector<std::vector<double>> out(dim_, std::vector<double>(g.points()));
    const double h = g.spacing();
    const int n = g.n;
    const int n3 = dim_ == 3 ? n : 1;
    double x[3] = {0, 0, 0};
    double u[3] = {0, 0, 0};
    std::size_t p = 0;
    for (int i3 = 0; i3 < n3; ++i3) {
        x[2] = i3 * h;
        for (int i2 = 0; i2 < n; ++i2) {
            x[1] = i2 * h;
            for (int i1 = 0; i1 < n; ++i1, ++p) {
                x[0] = i1 * h;
                evaluate(x, u);
                for (int j = 0; j < dim_; ++j) out[j][p] = u[j];
            }
        }
    }
    return out;
}

VectorFieldOnGrid VelocityField::sample_spectral(const Grid& g) const {
    auto phys = sample_physical(g);
    VectorFieldOnGrid v;
    v.comp.reserve(dim_);
    for (int j = 0; j < dim_; ++j)
        v.comp.push_back(SpectralField::from_physical(g, phys[j], family_ + "_u" + std::to_string(j + 1)));
    return v;
}

VelocityField cellular2d(double A) {
    if (A <= 0) throw std::invalid_argument("cellular2d: amplitude must be positive");
    auto eval = [A](const double* x, double* u) {
        const double s1 = std::sin(two_pi * x[0]), c1 = std::cos(two_pi * x[0]);
        const double s2 = std::sin(two_pi * x[1]), c2 = std::cos(two_pi * x[1]);
        u[0] = -two_pi * A * s1 * c2;
        u[1] = two_pi * A * c1 * s2;
    };
    return VelocityField(2, "cellular2d", A, 1, 1, two_pi * A, eval);
}

VelocityField cellular3d(double A) {
    if (A <= 0) throw std::invalid_argument("cellular3d: amplitude must be positive");
    auto eval = [A](const double* x, double* u) {
        const double cx = std::cos(two_pi * x[0]), sx = std::sin(two_pi * x[0]);
        const double cy = std::cos(two_pi * x[1]), sy = std::sin(two_pi * x[1]);
        const double w = std::sin(two_pi * x[2]), wp = two_pi * std::cos(two_pi * x[2]);
        const double phi = cx * cy;
        const double phi_x = -two_pi * sx * cy;
        const double phi_y = -two_pi * cx * sy;
        u[0] = A * phi_x * wp;
        u[1] = A * phi_y * wp;
        u[2] = A * 8.0 * pi * pi * phi * w;
    };
    return VelocityField(3, "cellular3d", A, 1, 1, 8.0 * pi * pi * A, eval);
}

VelocityField shear2d(double A) {
    if (A <= 0) throw std::invalid_argument("shear2d: amplitude must be positive");
    auto eval = [A](const double* x, double* u) {
        u[0] = A * std::sin(two_pi * x[1]);
        u[1] = 0.0;
    };
    return VelocityField(2, "shear2d", A, 1, 1, A, eval);
}

VelocityField zero_flow(int dim) {
    return VelocityField(dim, "zero", 0.0, 1, 1, 0.0, {});
}

VelocityField rescale(const VelocityField& u, int nu, int sign) {
    if (nu < 1) throw std::invalid_argument("rescale: nu must be a positive integer");
    if (sign != 1 && sign != -1) throw std::invalid_argument("rescale: sign must be +-1");
    if (nu == 1 && sign == 1) return u;
    const int d = u.dim();
    auto inner = u;  // copy keeps the evaluator alive in the closure
    const double fnu = nu, fsign = sign;
    auto eval = [inner, fnu, fsign, d](const double* x, double* out) {
        double xs[3] = {0, 0, 0};
        for (int j = 0; j < d; ++j) xs[j] = fnu * x[j];
        inner.evaluate(xs, out);
        for (int j = 0; j < d; ++j) out[j] *= fsign * fnu;
    };
    return VelocityField(d, u.family(), u.amplitude() * nu, u.cells() * nu,
                         u.sign() * sign, u.sup_norm() * nu, eval);
}

Certificate check_divergence_free(const VelocityField& u, const Grid& g, double tol) {
    auto v = u.sample_spectral(g);
    double defect = divergence_linf(v);
    double scale = u.sup_norm() > 0 ? u.sup_norm() : 1.0;
    return Certificate{defect <= tol * scale, defect, tol};
}

Certificate check_symmetry(const VelocityField& u, const Grid& g, int coordinate, double tol) {
    if (coordinate < 0 || coordinate >= u.dim())
        throw std::invalid_argument("check_symmetry: bad coordinate");
    const double h = g.spacing();
    const int n = g.n;
    const int n3 = u.dim() == 3 ? n : 1;
    double defect = 0.0;
    double x[3], rx[3], ua[3] = {0, 0, 0}, ub[3] = {0, 0, 0};
    for (int i3 = 0; i3 < n3; ++i3)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i1 = 0; i1 < n; ++i1) {
                x[0] = i1 * h; x[1] = i2 * h; x[2] = i3 * h;
                for (int j = 0; j < 3; ++j) rx[j] = x[j];
                rx[coordinate] = -x[coordinate];
                u.evaluate(rx, ua);  // u(R_n x)
                u.evaluate(x, ub);   // R_n u(x)
                ub[coordinate] = -ub[coordinate];
                for (int j = 0; j < u.dim(); ++j)
                    defect = std::max(defect, std::abs(ua[j] - ub[j]));
            }
    double scale = u.sup_norm() > 0 ? u.sup_norm() : 1.0;
    return Certificate{defect <= tol * scale, defect, tol};
}

NuChoice choose_nu(double D, double u_sup, int dim) {
    if (D < 1.0) throw std::invalid_argument("choose_nu: requires D >= 1");
    NuChoice c;
    c.mu = std::max(1, static_cast<int>(std::floor(std::pow(D, 1.0 / (16.0 * dim)))));
    const double threshold = u_sup * std::pow(D, (1.0 - 8.0 * dim) / (32.0 * dim));
    // smallest multiple of mu strictly greater than the threshold
    long long m = static_cast<long long>(std::floor(threshold / c.mu)) + 1;
    if (m < 1) m = 1;
    c.nu = static_cast<int>(m * c.mu);
    return c;
}

}  // namespace stirlab
