#include "vvlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vvlab {

// ---------------------------------------------------------------------------
// Grids

Grid1D Grid1D::periodic_x(int nx) {
    if (nx < 4 || nx % 2 != 0) throw std::invalid_argument("periodic_x: nx must be even and >= 4");
    Grid1D g;
    g.kind = GridKind::PeriodicX;
    g.spacing = two_pi / nx;
    g.nodes.resize(nx);
    for (int i = 0; i < nx; ++i) g.nodes[i] = g.spacing * i;
    return g;
}

Grid1D Grid1D::interval_y(int ny_cells) {
    if (ny_cells < 4) throw std::invalid_argument("interval_y: need at least 4 cells");
    Grid1D g;
    g.kind = GridKind::IntervalY;
    g.spacing = 1.0 / ny_cells;
    g.nodes.resize(ny_cells + 1);
    for (int j = 0; j <= ny_cells; ++j) g.nodes[j] = g.spacing * j;
    g.nodes.back() = 1.0;
    return g;
}

Grid1D Grid1D::half_line_upper(double zeta_min, int n_cells) {
    if (!(zeta_min < 0.0) || n_cells < 4) throw std::invalid_argument("half_line_upper: bad bounds");
    Grid1D g;
    g.kind = GridKind::HalfLineUpperZeta;
    g.spacing = -zeta_min / n_cells;
    g.nodes.resize(n_cells + 1);
    for (int j = 0; j <= n_cells; ++j) g.nodes[j] = zeta_min + g.spacing * j;
    g.nodes.back() = 0.0;
    return g;
}

Grid1D Grid1D::half_line_lower(double eta_max, int n_cells) {
    if (!(eta_max > 0.0) || n_cells < 4) throw std::invalid_argument("half_line_lower: bad bounds");
    Grid1D g;
    g.kind = GridKind::HalfLineLowerEta;
    g.spacing = eta_max / n_cells;
    g.nodes.resize(n_cells + 1);
    for (int j = 0; j <= n_cells; ++j) g.nodes[j] = g.spacing * j;
    g.nodes.back() = eta_max;
    return g;
}

// ---------------------------------------------------------------------------
// DFT via FFTW (cached plans, ESTIMATE|UNALIGNED so any buffer works)

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<int, fftw_plan> fwd, bwd;

    fftw_plan get(int n, bool forward) {
        std::scoped_lock lk(mu);
        auto& m = forward ? fwd : bwd;
        auto it = m.find(n);
        if (it != m.end()) return it->second;
        std::vector<cplx> a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()),
                                       forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        m[n] = p;
        return p;
    }
};

PlanCache& plans() {
    static PlanCache c;
    return c;
}

void check_n(size_t n) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("dft: sample count must be even and >= 4");
}

}  // namespace

std::vector<cplx> dft_forward_c(const std::vector<cplx>& samples) {
    check_n(samples.size());
    int n = static_cast<int>(samples.size());
    std::vector<cplx> in = samples, out(n);
    fftw_execute_dft(plans().get(n, true), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    for (auto& c : out) c /= static_cast<double>(n);
    return out;
}

std::vector<cplx> dft_forward(const std::vector<double>& samples) {
    std::vector<cplx> s(samples.begin(), samples.end());
    return dft_forward_c(s);
}

std::vector<cplx> dft_inverse_c(const std::vector<cplx>& coeffs) {
    check_n(coeffs.size());
    int n = static_cast<int>(coeffs.size());
    std::vector<cplx> in = coeffs, out(n);
    fftw_execute_dft(plans().get(n, false), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> dft_inverse(const std::vector<cplx>& coeffs) {
    auto out = dft_inverse_c(coeffs);
    std::vector<double> r(out.size());
    for (size_t i = 0; i < out.size(); ++i) r[i] = out[i].real();
    return r;
}

// ---------------------------------------------------------------------------
// ModeField

ModeField::ModeField(GridPtr g, int nx, std::string nm, int e3)
    : name(std::move(nm)), eps3(e3), grid_(std::move(g)), nx_(nx), nn_(grid_->size()) {
    data_.assign(static_cast<size_t>(nx_) * nn_, cplx{0.0, 0.0});
}

std::vector<double> ModeField::physical_row(int j) const {
    std::vector<cplx> coeffs(nx_);
    for (int b = 0; b < nx_; ++b) coeffs[b] = at(b, j);
    return dft_inverse(coeffs);
}

void ModeField::set_physical_row(int j, const std::vector<double>& row) {
    auto coeffs = dft_forward(row);
    for (int b = 0; b < nx_; ++b) at(b, j) = coeffs[b];
}

ModeProfile ModeField::profile(int bin) const {
    ModeProfile p;
    p.mode = wavenumber(bin, nx_);
    auto m = mode(bin);
    p.values.assign(m.begin(), m.end());
    return p;
}

double ModeField::max_abs() const {
    double m = 0.0;
    for (const auto& c : data_) m = std::max(m, std::abs(c));
    return m;
}

// ---------------------------------------------------------------------------
// Derivatives

void ddx_inplace(ModeField& f) {
    int nx = f.nx();
    for (int b = 0; b < nx; ++b) {
        int n = wavenumber(b, nx);
        cplx factor = (b == nx / 2) ? cplx{0.0, 0.0} : cplx{0.0, static_cast<double>(n)};
        auto m = f.mode(b);
        for (auto& c : m) c *= factor;
    }
}

namespace {

template <class T>
std::vector<T> d1_impl(const Grid1D& g, std::span<const T> v) {
    int n = g.size();
    double h = g.h();
    std::vector<T> r(n);
    for (int j = 1; j < n - 1; ++j) r[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
    // 3rd-order one-sided boundary rows
    r[0] = (-11.0 * v[0] + 18.0 * v[1] - 9.0 * v[2] + 2.0 * v[3]) / (6.0 * h);
    r[n - 1] = (11.0 * v[n - 1] - 18.0 * v[n - 2] + 9.0 * v[n - 3] - 2.0 * v[n - 4]) / (6.0 * h);
    return r;
}

template <class T>
std::vector<T> d2_impl(const Grid1D& g, std::span<const T> v) {
    int n = g.size();
    double h2 = g.h() * g.h();
    std::vector<T> r(n);
    for (int j = 1; j < n - 1; ++j) r[j] = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / h2;
    r[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    r[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    return r;
}

template <class T>
std::vector<T> d1_o4_impl(const Grid1D& g, std::span<const T> v) {
    int n = g.size();
    double h = g.h();
    std::vector<T> r(n);
    for (int j = 2; j < n - 2; ++j)
        r[j] = (-v[j + 2] + 8.0 * v[j + 1] - 8.0 * v[j - 1] + v[j - 2]) / (12.0 * h);
    auto onesided = [&](int at, int dir) {
        // 5-point 4th-order biased stencils
        static const double w0[5] = {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -1.0 / 4};
        static const double w1[5] = {-1.0 / 4, -5.0 / 6, 3.0 / 2, -1.0 / 2, 1.0 / 12};
        const double* w = (at == 0 || at == n - 1) ? w0 : w1;
        T s{};
        for (int k = 0; k < 5; ++k) s += w[k] * v[at + dir * k];
        return s * (dir / h);
    };
    r[0] = onesided(0, 1);
    r[1] = onesided(1, 1);
    r[n - 1] = onesided(n - 1, -1);
    r[n - 2] = onesided(n - 2, -1);
    return r;
}

template <class T>
std::vector<T> d2_o4_impl(const Grid1D& g, std::span<const T> v) {
    int n = g.size();
    double h2 = g.h() * g.h();
    std::vector<T> r(n);
    for (int j = 2; j < n - 2; ++j)
        r[j] = (-v[j + 2] + 16.0 * v[j + 1] - 30.0 * v[j] + 16.0 * v[j - 1] - v[j - 2]) / (12.0 * h2);
    auto onesided = [&](int at, int dir) {
        // 6-point 4th-order biased second-derivative stencils
        static const double w0[6] = {15.0 / 4, -77.0 / 6, 107.0 / 6, -13.0, 61.0 / 12, -5.0 / 6};
        static const double w1[6] = {5.0 / 6, -5.0 / 4, -1.0 / 3, 7.0 / 6, -1.0 / 2, 1.0 / 12};
        const double* w = (at == 0 || at == n - 1) ? w0 : w1;
        T s{};
        for (int k = 0; k < 6; ++k) s += w[k] * v[at + dir * k];
        return s / h2;
    };
    r[0] = onesided(0, 1);
    r[1] = onesided(1, 1);
    r[n - 1] = onesided(n - 1, -1);
    r[n - 2] = onesided(n - 2, -1);
    return r;
}

}  // namespace

std::vector<cplx> apply_d1(const Grid1D& g, std::span<const cplx> v) { return d1_impl<cplx>(g, v); }
std::vector<cplx> apply_d2(const Grid1D& g, std::span<const cplx> v) { return d2_impl<cplx>(g, v); }
std::vector<double> apply_d1(const Grid1D& g, std::span<const double> v) { return d1_impl<double>(g, v); }
std::vector<double> apply_d2(const Grid1D& g, std::span<const double> v) { return d2_impl<double>(g, v); }
std::vector<cplx> apply_d1_o4(const Grid1D& g, std::span<const cplx> v) { return d1_o4_impl<cplx>(g, v); }
std::vector<cplx> apply_d2_o4(const Grid1D& g, std::span<const cplx> v) { return d2_o4_impl<cplx>(g, v); }

void ddy_inplace(ModeField& f) {
    for (int b = 0; b < f.nx(); ++b) {
        auto m = f.mode(b);
        auto d = apply_d1(f.grid(), std::span<const cplx>(m.data(), m.size()));
        std::copy(d.begin(), d.end(), m.begin());
    }
}

// ---------------------------------------------------------------------------
// Quadrature

double quad_x(const std::vector<double>& samples) {
    double s = 0.0;
    for (double v : samples) s += v;
    return s * (two_pi / samples.size());
}

double trapz(const Grid1D& g, std::span<const double> f) {
    double s = 0.0;
    for (int j = 0; j + 1 < g.size(); ++j) s += 0.5 * (f[j] + f[j + 1]) * (g.nodes[j + 1] - g.nodes[j]);
    return s;
}

cplx trapz(const Grid1D& g, std::span<const cplx> f) {
    cplx s = 0.0;
    for (int j = 0; j + 1 < g.size(); ++j) s += 0.5 * (f[j] + f[j + 1]) * (g.nodes[j + 1] - g.nodes[j]);
    return s;
}

double quad_y(const Grid1D& g, std::span<const double> f, double w) {
    if (w == 0.0) return trapz(g, f);
    int n = g.size();
    std::vector<double> fw(n);
    int start = 0;
    double s = 0.0;
    if (w < 0.0 && g.nodes[0] == 0.0) {
        // integrate the first cell analytically with f frozen at its nodal value
        if (w <= -1.0) throw std::invalid_argument("quad_y: weight exponent must exceed -1");
        double h = g.nodes[1] - g.nodes[0];
        s += f[0] * std::pow(h, w + 1.0) / (w + 1.0);
        start = 1;
    }
    for (int j = 0; j < n; ++j) fw[j] = (g.nodes[j] == 0.0 && w < 0.0) ? 0.0 : f[j] * std::pow(g.nodes[j], w);
    for (int j = start; j + 1 < n; ++j) s += 0.5 * (fw[j] + fw[j + 1]) * (g.nodes[j + 1] - g.nodes[j]);
    return s;
}

std::vector<cplx> cumtrapz_from_left(const Grid1D& g, std::span<const cplx> f) {
    int n = g.size();
    std::vector<cplx> r(n);
    r[0] = 0.0;
    for (int j = 1; j < n; ++j) r[j] = r[j - 1] + 0.5 * (f[j] + f[j - 1]) * (g.nodes[j] - g.nodes[j - 1]);
    return r;
}

std::vector<cplx> cumtrapz_from_right(const Grid1D& g, std::span<const cplx> f) {
    int n = g.size();
    std::vector<cplx> r(n);
    r[n - 1] = 0.0;
    for (int j = n - 2; j >= 0; --j) r[j] = r[j + 1] - 0.5 * (f[j] + f[j + 1]) * (g.nodes[j + 1] - g.nodes[j]);
    return r;
}

void periodic_antiderivative_inplace(ModeField& f) {
    int nx = f.nx(), nn = f.nn();
    for (int j = 0; j < nn; ++j) {
        cplx at_zero = 0.0;
        for (int b = 1; b < nx; ++b) {
            int n = wavenumber(b, nx);
            if (b == nx / 2 || n == 0) {
                f.at(b, j) = 0.0;
                continue;
            }
            f.at(b, j) /= cplx{0.0, static_cast<double>(n)};
            at_zero += f.at(b, j);
        }
        f.at(0, j) = -at_zero;  // pins P[g](0) = 0
    }
}

// ---------------------------------------------------------------------------
// Helmholtz and tridiagonal solve

std::vector<cplx> solve_tridiag(std::vector<cplx> a, std::vector<cplx> d, std::vector<cplx> c, std::vector<cplx> r) {
    size_t n = d.size();
    for (size_t i = 1; i < n; ++i) {
        cplx w = a[i] / d[i - 1];
        d[i] -= w * c[i - 1];
        r[i] -= w * r[i - 1];
    }
    std::vector<cplx> x(n);
    x[n - 1] = r[n - 1] / d[n - 1];
    for (size_t i = n - 1; i-- > 0;) x[i] = (r[i] - c[i] * x[i + 1]) / d[i];
    return x;
}

ModeProfile solve_mode_helmholtz(int n, const Grid1D& gy, std::span<const cplx> rhs, cplx bc_bottom, cplx bc_top) {
    if (static_cast<int>(rhs.size()) != gy.size()) throw std::invalid_argument("solve_mode_helmholtz: grid mismatch");
    int m = gy.size();
    double h2 = gy.h() * gy.h();
    double n2 = static_cast<double>(n) * n;
    std::vector<cplx> lo(m, 0.0), di(m, 0.0), up(m, 0.0), r(m, 0.0);
    di[0] = 1.0;
    r[0] = bc_bottom;
    di[m - 1] = 1.0;
    r[m - 1] = bc_top;
    for (int j = 1; j < m - 1; ++j) {
        lo[j] = 1.0 / h2;
        di[j] = -2.0 / h2 - n2;
        up[j] = 1.0 / h2;
        r[j] = rhs[j];
    }
    ModeProfile p;
    p.mode = n;
    p.values = solve_tridiag(std::move(lo), std::move(di), std::move(up), std::move(r));
    return p;
}

// ---------------------------------------------------------------------------
// Hardy checks

HardySides hardy_check(const Grid1D& gy, std::span<const double> f, double kappa, HardyVariant variant) {
    int n = gy.size();
    double tol = 1e-9 * (1.0 + std::abs(f[0]) + std::abs(f[n - 1]));
    if (variant == HardyVariant::Hardy1) {
        if (std::abs(f[n - 1]) > tol) throw std::invalid_argument("hardy_check: hardy1 requires f(1)=0");
        if (kappa <= -1.0) throw std::invalid_argument("hardy_check: kappa must exceed -1");
    } else {
        if (std::abs(f[0]) > tol || std::abs(f[n - 1]) > tol)
            throw std::invalid_argument("hardy_check: hardy2 requires f(0)=f(1)=0");
    }
    std::vector<double> fy = apply_d1(gy, f);
    std::vector<double> f2(n), fy2(n);
    for (int j = 0; j < n; ++j) {
        f2[j] = f[j] * f[j];
        fy2[j] = fy[j] * fy[j];
    }
    HardySides out;
    switch (variant) {
        case HardyVariant::Hardy1: {
            out.lhs = quad_y(gy, f2, kappa);
            double c = 4.0 / ((kappa + 1.0) * (kappa + 1.0));
            out.rhs = c * quad_y(gy, fy2, kappa + 2.0);
            break;
        }
        case HardyVariant::Hardy2Lower:
        case HardyVariant::Hardy2Upper: {
            std::vector<double> integ(n);
            for (int j = 0; j < n; ++j) {
                double den = variant == HardyVariant::Hardy2Lower ? gy.nodes[j] : 1.0 - gy.nodes[j];
                if (den == 0.0) {
                    // limit value (f/den -> f') at the zero of the weight
                    integ[j] = fy[j] * fy[j];
                } else {
                    integ[j] = f2[j] / (den * den);
                }
            }
            out.lhs = trapz(gy, std::span<const double>(integ.data(), integ.size()));
            out.rhs = 4.0 * trapz(gy, std::span<const double>(fy2.data(), fy2.size()));
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fornberg weights and boundary traces

std::vector<double> fd_weights(double x0, std::span<const double> x, int m) {
    int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

cplx boundary_derivative(const Grid1D& g, std::span<const cplx> f, int j, bool at_right) {
    int n = g.size();
    int pts = std::min(n, j + 5);
    std::vector<double> xs(pts);
    std::vector<cplx> vs(pts);
    for (int k = 0; k < pts; ++k) {
        int idx = at_right ? n - 1 - k : k;
        xs[k] = g.nodes[idx];
        vs[k] = f[idx];
    }
    double x0 = at_right ? g.nodes[n - 1] : g.nodes[0];
    auto w = fd_weights(x0, xs, j);
    cplx s = 0.0;
    for (int k = 0; k < pts; ++k) s += w[k] * vs[k];
    return s;
}

}  // namespace vvlab
