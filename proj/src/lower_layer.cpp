#include "vvlab/lower_layer.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvlab/prandtl_upper.hpp"

namespace vvlab {

ZeroModeSolution zero_mode_solve(const Grid1D& ge, std::span<const double> f0) {
    int n = ge.size();
    double tail = 0.0, scale = 0.0;
    for (int k = 0; k < n; ++k) scale = std::max(scale, std::abs(f0[k]));
    for (int k = n - std::max(2, n / 20); k < n; ++k) tail = std::max(tail, std::abs(f0[k]));
    if (tail > 1e-6 * (1.0 + scale)) throw std::invalid_argument("zero_mode_solve: forcing tail too fat");

    std::vector<cplx> fc(n);
    for (int k = 0; k < n; ++k) fc[k] = f0[k];
    auto from_right = cumtrapz_from_right(ge, std::span<const cplx>(fc.data(), fc.size()));
    std::vector<cplx> inner(n);
    for (int k = 0; k < n; ++k) inner[k] = -from_right[k];  // int_eta^max f0
    auto outer = cumtrapz_from_left(ge, std::span<const cplx>(inner.data(), inner.size()));

    ZeroModeSolution s;
    s.u0.resize(n);
    for (int k = 0; k < n; ++k) s.u0[k] = outer[k].real();
    s.Ahat = s.u0[n - 1];
    return s;
}

LowerModeSolution nonzero_mode_solve(int n_mode, const Grid1D& ge, std::span<const cplx> f, double A) {
    if (n_mode == 0) throw std::invalid_argument("nonzero_mode_solve: mode must be nonzero");
    int n = ge.size();  // nodes 0..N
    int N = n - 1;
    double h = ge.h();
    double h2 = h * h;
    cplx ik{0.0, static_cast<double>(n_mode)};

    // unknowns interleaved [u_0, v_0, u_1, v_1, ...]; rows:
    //   2j   : u-equation (Dirichlet at j=0, momentum interior, Neumann at j=N)
    //   2j+1 : continuity at cell j (j<N), v(eta_max)=0 at j=N
    int size = 2 * n;
    int kl = 4, ku = 2;
    int ldab = 2 * kl + ku + 1;
    std::vector<cplx> ab(static_cast<size_t>(ldab) * size, cplx{0.0, 0.0});
    std::vector<cplx> rhs(size, cplx{0.0, 0.0});
    auto put = [&](int row, int col, cplx val) {
        // LAPACK band storage: AB(kl+ku+1+row-col, col) in 1-based indexing
        int r = kl + ku + row - col;  // 0-based
        ab[static_cast<size_t>(col) * ldab + r] = val;
    };

    // u rows
    put(0, 0, 1.0);
    rhs[0] = 0.0;
    for (int j = 1; j < N; ++j) {
        int row = 2 * j;
        put(row, 2 * (j - 1), -1.0 / h2);
        put(row, 2 * j, A * ik * ge.nodes[j] + 2.0 / h2);
        put(row, 2 * (j + 1), -1.0 / h2);
        put(row, 2 * j + 1, A);
        rhs[row] = f[j];
    }
    {   // u'(eta_max) = 0, one-sided 2nd order
        int row = 2 * N;
        put(row, 2 * N, 3.0 / (2.0 * h));
        put(row, 2 * (N - 1), -4.0 / (2.0 * h));
        put(row, 2 * (N - 2), 1.0 / (2.0 * h));
        rhs[row] = 0.0;
    }
    // v rows
    for (int c = 0; c < N; ++c) {
        int row = 2 * c + 1;
        put(row, 2 * c + 1, -1.0 / h);
        put(row, 2 * (c + 1) + 1, 1.0 / h);
        put(row, 2 * c, ik * 0.5);
        put(row, 2 * (c + 1), ik * 0.5);
        rhs[row] = 0.0;
    }
    put(2 * N + 1, 2 * N + 1, 1.0);
    rhs[2 * N + 1] = 0.0;

    std::vector<lapack_int> ipiv(size);
    lapack_int info = LAPACKE_zgbsv(LAPACK_COL_MAJOR, size, kl, ku, 1,
                                    reinterpret_cast<lapack_complex_double*>(ab.data()), ldab, ipiv.data(),
                                    reinterpret_cast<lapack_complex_double*>(rhs.data()), size);
    if (info != 0) throw std::runtime_error("nonzero_mode_solve: banded solve failed");

    LowerModeSolution s;
    s.u.resize(n);
    s.v.resize(n);
    for (int j = 0; j < n; ++j) {
        s.u[j] = rhs[2 * j];
        s.v[j] = rhs[2 * j + 1];
    }
    return s;
}

LayerField homogenize_lower(const std::vector<cplx>& wall_modes, const LayerField& rhs, double A) {
    const Grid1D& ge = rhs.grid();
    int nx = rhs.nx(), nn = ge.size();
    LayerField out = rhs;
    for (int b = 0; b < nx; ++b) {
        int n = wavenumber(b, nx);
        cplx ik = (b == nx / 2) ? cplx{0.0, 0.0} : cplx{0.0, static_cast<double>(n)};
        cplx w = wall_modes[b];
        cplx wx = ik * w;
        auto m = out.mode(b);
        for (int k = 0; k < nn; ++k) {
            double e = ge.nodes[k];
            m[k] += A * wx * (e * Homogenizer::kappa_lower(e) - Homogenizer::kappa_lower_antideriv(e)) -
                    w * Homogenizer::d2kappa_lower(e);
        }
    }
    return out;
}

LayerField v_hat_from_continuity(const LayerField& u_layer) { return v_from_continuity(u_layer); }

LayerField lower_pressure(const LayerField& g_layer, const std::vector<cplx>& v_wall_modes, double A) {
    const Grid1D& ge = g_layer.grid();
    int nx = g_layer.nx(), nn = ge.size();
    double scale = 0.0;
    for (const auto& c : v_wall_modes) scale = std::max(scale, std::abs(c));
    if (std::abs(v_wall_modes[0]) > 1e-9 * (1.0 + scale))
        throw std::invalid_argument("lower_pressure: wall trace of v must have zero x-mean");

    LayerField p(g_layer.grid_ptr(), nx, "p_hat", g_layer.eps3);
    for (int b = 0; b < nx; ++b) {
        auto mg = g_layer.mode(b);
        auto from_right = cumtrapz_from_right(ge, std::span<const cplx>(mg.data(), mg.size()));
        auto mp = p.mode(b);
        for (int k = 0; k < nn; ++k) mp[k] = from_right[k];  // = -int_eta^max g
        // + A * P[v_wall] (x-antiderivative of the wall trace, constant in eta)
        int n = wavenumber(b, nx);
        if (n != 0 && b != nx / 2) {
            cplx add = A * v_wall_modes[b] / cplx{0.0, static_cast<double>(n)};
            for (int k = 0; k < nn; ++k) mp[k] += add;
        }
    }
    // pin the x=0 value of the antiderivative part to zero via mode 0
    cplx at_zero = 0.0;
    for (int b = 1; b < nx; ++b) {
        int n = wavenumber(b, nx);
        if (n != 0 && b != nx / 2) at_zero += A * v_wall_modes[b] / cplx{0.0, static_cast<double>(n)};
    }
    auto m0 = p.mode(0);
    for (int k = 0; k < nn; ++k) m0[k] -= at_zero;
    return p;
}

LayerField solve_lower_layer(const LayerField& rhs, double A) {
    const Grid1D& ge = rhs.grid();
    int nx = rhs.nx(), nn = ge.size();
    LayerField u(rhs.grid_ptr(), nx, "u_hat", rhs.eps3);
    for (int b = 0; b < nx; ++b) {
        int n = wavenumber(b, nx);
        auto mf = rhs.mode(b);
        if (n == 0 || b == nx / 2) {
            if (n == 0) {
                std::vector<double> f0(nn);
                for (int k = 0; k < nn; ++k) f0[k] = mf[k].real();
                auto zm = zero_mode_solve(ge, f0);
                auto mu = u.mode(b);
                for (int k = 0; k < nn; ++k) mu[k] = zm.u0[k];
            }
            continue;  // Nyquist content is not propagated
        }
        auto sol = nonzero_mode_solve(n, ge, std::span<const cplx>(mf.data(), mf.size()), A);
        auto mu = u.mode(b);
        std::copy(sol.u.begin(), sol.u.end(), mu.begin());
    }
    return u;
}

}  // namespace vvlab
