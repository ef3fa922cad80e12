#pragma once

#include "vvlab/problem.hpp"
#include "vvlab/spectral.hpp"

namespace vvlab {

// ---------------------------------------------------------------------------
// Leading-order nonlinear layer in stream coordinates: 2 U_x = (U^2)_psi,psi
// with U(x,0) = alpha + delta f(x), U -> A as psi -> -inf, periodic in x.

struct VonMisesParams {
    int n_psi = 2000;              // cells on [psi_min, 0]
    double psi_min_factor = 40.0;  // psi_min = -factor * A
    int n_x_march = 4096;          // implicit-Euler steps per period (multiple of 256)
    double tol = 1e-10;            // period-map sup defect
    int max_periods = 50;
    double delta_max = 0.2;
};

struct VonMisesSolution {
    ProblemSpec spec;
    double A = 0.0;
    GridPtr psi_grid;  // ascending psi_min..0, wall node last
    int nx = 0;        // stored x columns (uniform restriction of the march)
    std::vector<double> U;  // U[i*n_psi_nodes + k], x-major
    std::vector<double> defect_history;
    double march_residual = 0.0;  // centered-in-x PDE residual at march resolution
    bool converged = false;

    double at(int i, int k) const { return U[static_cast<size_t>(i) * psi_grid->size() + k]; }
    /// max over psi of |d/dpsi int U^2 dx| (Batchelor-Wood invariant).
    double batchelor_wood_defect() const;
    /// sup defect of the period map at convergence.
    double periodicity_defect() const;
};

VonMisesSolution solve_von_mises(const ProblemSpec& spec, double A, const VonMisesParams& p = {});

/// Invert the stream-coordinate map onto a physical layer grid:
/// zeta(x,psi) = int_0^psi dpsi'/U, u(x,zeta) = U - A. Returns the layer
/// u-profile (far field 0) with wall trace alpha + delta f - A.
LayerField invert_von_mises(const VonMisesSolution& vm, GridPtr zeta_grid, int nx);

// ---------------------------------------------------------------------------
// Boundary lift bump: kappa in C^3 with kappa(0)=1, zero integral, support of
// width 1 next to the wall; used to homogenize layer wall data.

struct Homogenizer {
    // polynomial (z+1)^4 (6z+1) on [-1,0], mirrored for the lower layer
    static double kappa(double z);
    static double dkappa(double z);
    static double d2kappa(double z);
    static double kappa_antideriv(double z);  // int_0^z kappa

    static double kappa_lower(double e) { return kappa(-e); }
    static double dkappa_lower(double e) { return -dkappa(-e); }
    static double d2kappa_lower(double e) { return d2kappa(-e); }
    static double kappa_lower_antideriv(double e) { return -kappa_antideriv(-e); }  // int_0^eta kappa_lower
};

// ---------------------------------------------------------------------------
// Layer utilities

/// Continuity partner with far field pinned to zero:
/// upper: v(x,zeta) = -int_{zeta_min}^zeta du/dx; lower: v = +int_eta^max du/dx.
LayerField v_from_continuity(const LayerField& u_layer);

/// Far-field plateau of the u-component (mode 0 over the far 10% of the
/// grid); throws if there is no plateau. Shifts the constant off and
/// returns it.
double extract_far_constant(LayerField& u_layer, double plateau_tol = 1e-7);

/// Pressure layer from dp/dcoord = g with far field pinned to 0.
LayerField upper_pressure(const LayerField& g_layer);

/// max over the grid of coord^2 |f| (decay bookkeeping).
double weighted_tail(const LayerField& f);

// ---------------------------------------------------------------------------
// Linearized upper-layer solve around the leading layer:
//   (A+u0) dx u + u dx u0 + vbar dzeta u + v[u] dzeta u0 - dzeta^2 u = f,
// v[u] = -int_0^zeta dx u, zero wall data, dzeta u -> 0 at zeta_min.
// Per-mode (A dx - dzeta^2) solves with the O(delta) coefficients lagged.

struct UpperLinearBackground {
    double A = 0.0;
    const LayerField* u0 = nullptr;    // leading layer u_p^(0), far field 0
    const LayerField* vbar = nullptr;  // v_e(x,1) trace (broadcast) + v_p^(1)(x,zeta)
};

struct UpperLinearResult {
    LayerField u;  // homogenized solution (zero wall data)
    int iterations = 0;
    bool converged = false;
    std::vector<double> defect_history;
};

UpperLinearResult solve_upper_linear_bl(const UpperLinearBackground& bg, const LayerField& rhs, double tol = 1e-11,
                                        int max_iter = 200);

/// Apply the linearized operator (same discretization as the solver); used
/// to manufacture forcings in tests.
LayerField apply_upper_linear_operator(const UpperLinearBackground& bg, const LayerField& u);

}  // namespace vvlab
