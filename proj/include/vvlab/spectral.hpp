#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vvlab {

using cplx = std::complex<double>;
inline constexpr double two_pi = 6.283185307179586476925286766559;

enum class GridKind { PeriodicX, IntervalY, HalfLineUpperZeta, HalfLineLowerEta };

/// One-dimensional grid. Periodic-x grids are uniform on [0,2pi); interval
/// grids cover [0,1] with both endpoints; half-line grids are truncated at
/// zeta_min < 0 (upper, wall node zeta=0 last) or eta_max > 0 (lower, wall
/// node eta=0 first). All grids used here are uniform.
struct Grid1D {
    GridKind kind;
    std::vector<double> nodes;
    double spacing = 0.0;

    static Grid1D periodic_x(int nx);
    static Grid1D interval_y(int ny_cells);
    static Grid1D half_line_upper(double zeta_min, int n_cells);
    static Grid1D half_line_lower(double eta_max, int n_cells);

    int size() const { return static_cast<int>(nodes.size()); }
    double h() const { return spacing; }
    double left() const { return nodes.front(); }
    double right() const { return nodes.back(); }
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Complex profile of a single Fourier mode in x on a Grid1D.
struct ModeProfile {
    int mode = 0;  // wavenumber n, |n| <= nx/2
    std::vector<cplx> values;
};

// ---------------------------------------------------------------------------
// Discrete Fourier transform in x (coefficients c_n = (1/N) sum s_i e^{-inx_i};
// c_0 is the x-mean).

std::vector<cplx> dft_forward(const std::vector<double>& samples);
std::vector<double> dft_inverse(const std::vector<cplx>& coeffs);
std::vector<cplx> dft_forward_c(const std::vector<cplx>& samples);
std::vector<cplx> dft_inverse_c(const std::vector<cplx>& coeffs);

/// Wavenumber of FFT bin b for transform size n (b <= n/2 ? b : b-n).
inline int wavenumber(int bin, int n) { return bin <= n / 2 ? bin : bin - n; }

// ---------------------------------------------------------------------------
// Fields: map from mode bin to complex profile on a shared grid. StripField
// lives on the interval-y grid, LayerField on a stretched half-line grid and
// carries its recorded far-field constant.

class ModeField {
  public:
    ModeField() = default;
    ModeField(GridPtr g, int nx, std::string name = "", int eps3 = 0);

    int nx() const { return nx_; }
    int nn() const { return nn_; }
    const Grid1D& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }

    std::span<cplx> mode(int bin) { return {data_.data() + static_cast<size_t>(bin) * nn_, static_cast<size_t>(nn_)}; }
    std::span<const cplx> mode(int bin) const {
        return {data_.data() + static_cast<size_t>(bin) * nn_, static_cast<size_t>(nn_)};
    }
    cplx& at(int bin, int j) { return data_[static_cast<size_t>(bin) * nn_ + j]; }
    const cplx& at(int bin, int j) const { return data_[static_cast<size_t>(bin) * nn_ + j]; }

    /// Real samples over x at grid node j.
    std::vector<double> physical_row(int j) const;
    void set_physical_row(int j, const std::vector<double>& row);

    /// Profile of mode bin evaluated as ModeProfile (wavenumber attached).
    ModeProfile profile(int bin) const;

    double max_abs() const;
    bool empty() const { return data_.empty(); }

    std::string name;
    int eps3 = 0;  // epsilon exponent in thirds

  private:
    GridPtr grid_;
    int nx_ = 0, nn_ = 0;
    std::vector<cplx> data_;
};

struct StripField : ModeField {
    using ModeField::ModeField;
};

struct LayerField : ModeField {
    using ModeField::ModeField;
    double far_field = 0.0;
};

// ---------------------------------------------------------------------------
// Calculus on fields and profiles.

/// d/dx: per-mode multiplication by i n (Nyquist bin zeroed to preserve
/// reality of derivatives of real fields).
void ddx_inplace(ModeField& f);
template <class F> F ddx(const F& f) { F g = f; ddx_inplace(g); return g; }

/// First/second derivative matrices in the grid coordinate. Interior rows
/// are centered 2nd order; boundary rows one-sided (3rd order for D1, 2nd
/// for D2) so wall traces don't degrade interior accuracy.
std::vector<cplx> apply_d1(const Grid1D& g, std::span<const cplx> v);
std::vector<cplx> apply_d2(const Grid1D& g, std::span<const cplx> v);
std::vector<double> apply_d1(const Grid1D& g, std::span<const double> v);
std::vector<double> apply_d2(const Grid1D& g, std::span<const double> v);

/// 4th-order variants (5-point interior stencils) used where layer profiles
/// feed residual evaluation.
std::vector<cplx> apply_d1_o4(const Grid1D& g, std::span<const cplx> v);
std::vector<cplx> apply_d2_o4(const Grid1D& g, std::span<const cplx> v);

void ddy_inplace(ModeField& f);
template <class F> F ddy(const F& f) { F g = f; ddy_inplace(g); return g; }

/// Trapezoid quadrature of periodic samples over [0,2pi] (exact for
/// band-limited integrands).
double quad_x(const std::vector<double>& samples);

/// Trapezoid quadrature of f(y) * y^w over the grid. Negative weight
/// exponents (w > -1) integrate the first cell analytically against the
/// frozen nodal value to keep the singular endpoint finite.
double quad_y(const Grid1D& g, std::span<const double> f, double weight_exponent = 0.0);
double trapz(const Grid1D& g, std::span<const double> f);
cplx trapz(const Grid1D& g, std::span<const cplx> f);

/// Cumulative trapezoid integrals, pinned at the first/last node.
std::vector<cplx> cumtrapz_from_left(const Grid1D& g, std::span<const cplx> f);
std::vector<cplx> cumtrapz_from_right(const Grid1D& g, std::span<const cplx> f);

/// Periodic antiderivative in x with value 0 at x=0: P[g](x) = int_0^x g.
/// Requires zero x-mean of g per mode-0 (enforced to tolerance by callers).
void periodic_antiderivative_inplace(ModeField& f);

// ---------------------------------------------------------------------------
// Per-mode Helmholtz solve on the interval-y grid:
//   w'' - n^2 w = rhs,  w(0)=bc_bottom, w(1)=bc_top  (2nd-order centered FD).
ModeProfile solve_mode_helmholtz(int n, const Grid1D& gy, std::span<const cplx> rhs, cplx bc_bottom, cplx bc_top);

/// Tridiagonal Thomas solve (complex); diagonally dominant systems only.
std::vector<cplx> solve_tridiag(std::vector<cplx> lower, std::vector<cplx> diag, std::vector<cplx> upper,
                                std::vector<cplx> rhs);

// ---------------------------------------------------------------------------
// Hardy inequality checks (diagnostic; caller asserts lhs <= rhs).

enum class HardyVariant { Hardy1, Hardy2Lower, Hardy2Upper };

struct HardySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// hardy1: int y^k f^2 <= 4/(k+1)^2 int y^{k+2} f_y^2 for f(1)=0.
/// hardy2: int f^2/y^2 (or /(1-y)^2) <= 4 int f_y^2 for f(0)=f(1)=0.
HardySides hardy_check(const Grid1D& gy, std::span<const double> f, double kappa, HardyVariant variant);

/// Finite-difference weights for d^m/dx^m at x0 from arbitrary nodes
/// (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

/// One-sided trace of d^j f/dy^j at the first or last grid node, 4th-order.
cplx boundary_derivative(const Grid1D& g, std::span<const cplx> f, int j, bool at_right);

}  // namespace vvlab
