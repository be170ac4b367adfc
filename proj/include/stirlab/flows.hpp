#pragma once

#include <array>
#include <functional>
#include <string>

#include "stirlab/spectral_field.hpp"

namespace stirlab {

/// Divergence-free velocity field with an analytic evaluator (valid on all
/// of R^d through periodicity) plus grid sampling. The analytic form is
/// authoritative; the SDE module evaluates it off-grid.
class VelocityField {
public:
    using Eval = std::function<void(const double* x, double* u)>;

    VelocityField() = default;
    VelocityField(int dim, std::string family, double amplitude, int cells, int sign,
                  double sup_norm, Eval eval)
        : dim_(dim), family_(std::move(family)), amplitude_(amplitude), cells_(cells),
          sign_(sign), sup_norm_(sup_norm), eval_(std::move(eval)) {}

    int dim() const { return dim_; }
    const std::string& family() const { return family_; }
    double amplitude() const { return amplitude_; }
    /// Cells per side; the flow has period 1/cells in every coordinate.
    int cells() const { return cells_; }
    int sign() const { return sign_; }
    double sup_norm() const { return sup_norm_; }
    bool is_zero() const { return family_ == "zero"; }

    void evaluate(const double* x, double* u) const {
        if (eval_) eval_(x, u);
        else for (int j = 0; j < dim_; ++j) u[j] = 0.0;
    }

    std::array<double, 3> at(double x1, double x2, double x3 = 0.0) const {
        double x[3] = {x1, x2, x3};
        std::array<double, 3> u{0.0, 0.0, 0.0};
        evaluate(x, u.data());
        return u;
    }

    /// Per-component physical samples, x1 fastest (d arrays of size n^d).
    std::vector<std::vector<double>> sample_physical(const Grid& g) const;
    VectorFieldOnGrid sample_spectral(const Grid& g) const;

private:
    int dim_ = 2;
    std::string family_ = "zero";
    double amplitude_ = 0.0;
    int cells_ = 1;
    int sign_ = 1;
    double sup_norm_ = 0.0;
    Eval eval_;
};

/// u = A grad^perp sin(2 pi x1) sin(2 pi x2); sup-norm 2 pi A.
VelocityField cellular2d(double A);
/// u = A (Phi_x W', Phi_y W', 8 pi^2 Phi W) with Phi = cos(2 pi x)cos(2 pi y),
/// W = sin(2 pi z); sup-norm 8 pi^2 A.
VelocityField cellular3d(double A);
/// u = (A sin(2 pi x2), 0); divergence-free but not coordinate-symmetric.
VelocityField shear2d(double A);
VelocityField zero_flow(int dim);
/// v(x) = sign * nu * u(nu x); period 1/nu of the original cell size.
VelocityField rescale(const VelocityField& u, int nu, int sign = 1);

struct Certificate {
    bool ok = false;
    double defect = 0.0;  // max over the grid of the violated identity
    double tol = 0.0;
};

/// Spectral divergence max-norm <= tol * sup-norm certifies incompressibility.
Certificate check_divergence_free(const VelocityField& u, const Grid& g, double tol = 1e-8);
/// Checks u(R_n x) = R_n u(x) on grid points, R_n negating coordinate n (0-based).
Certificate check_symmetry(const VelocityField& u, const Grid& g, int coordinate,
                           double tol = 1e-8);

/// Cell-count selection from the effective diffusivity:
/// mu = max(1, floor(D^{1/(16 d)})), nu = smallest multiple of mu strictly
/// greater than ||u||_inf * D^{(1-8d)/(32 d)}.
struct NuChoice {
    int mu = 1;
    int nu = 1;
};
NuChoice choose_nu(double D, double u_sup, int dim);

}  // namespace stirlab
