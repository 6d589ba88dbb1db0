#ifndef LAXFORGE_NUMERICS_HPP
#define LAXFORGE_NUMERICS_HPP

// Pseudospectral side of the package: evolve the coupled (q, r) flows on a
// periodic grid, evaluate symbolic densities pointwise, and track charges
// against their anomaly rates.
//
// Conventions fixed here once and for all:
//   * reduction r = -conj(q), i.e. kappa = -1, and the flow constant
//     alpha = -i, so flow 2 reads q_t = (i/2) q_xx + i |q|^2 q;
//   * the deformed potential family replaces the cubic term through
//     W'(s) = sign(Re s) |s|^{1+eps} with s = q r (eps = 0 reproduces the
//     integrable system exactly, same code path);
//   * time stepping is classical RK4 in physical space with a 2/3-rule
//     low-pass after each right-hand side; the step must satisfy
//     dt <= 0.5 (L/N)^2, which keeps (1/2) k_max^2 dt <= pi^2/4, inside
//     the RK4 imaginary-axis stability bound 2*sqrt(2).

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "laxforge/diffpoly.hpp"
#include "laxforge/hierarchy.hpp"
#include "laxforge/quasi.hpp"

namespace laxforge {

using CVec = std::vector<std::complex<double>>;
using ParamValues = std::map<std::string, std::complex<double>>;

struct Grid {
    int N = 0;
    double length = 0.0;

    Grid() = default;
    Grid(int n, double L);  // N must be a power of two >= 64, L > 0

    double dx() const { return length / N; }
    double x(int k) const { return -0.5 * length + k * dx(); }
    // FFT-ordered wavenumbers 2*pi*m/L, m = 0..N/2-1, -N/2..-1.
    std::vector<double> wavenumbers() const;
};

CVec fft(const Grid &g, const CVec &v);
CVec ifft(const Grid &g, const CVec &v);
CVec spectral_derivative(const Grid &g, const CVec &v, int order = 1);
// Zero every mode with |k| above two thirds of the Nyquist wavenumber.
void lowpass_23(const Grid &g, CVec &v);

struct FieldState {
    CVec q, r;
    double t = 0.0;
};

// q = A sech(A(x - x0 - v t)) exp(i(v x + (A^2 - v^2) t / 2 + phase)),
// r = -conj(q).  Exact solution of the reduction above; the phase period
// is 4*pi / |A^2 - v^2|.
CVec soliton_profile(const Grid &g, double A, double v, double x0, double phase, double t);
FieldState bright_soliton(const Grid &g, double A, double v, double x0, double phase = 0.0);

// Solitary wave of the deformed potential family with exponent 1 + eps:
// q = [Omega(2+eps)]^{1/(2+2eps)} sech^{1/(1+eps)}((1+eps) sqrt(2 Omega) (x-x0-vt))
//   * exp(i(v x + (Omega - v^2/2) t + phase)).
// Reduces to bright_soliton with A = sqrt(2 Omega) at eps = 0.
CVec deformed_profile(const Grid &g, double Omega, double v, double x0, double eps, double phase,
                      double t);
FieldState deformed_solitary(const Grid &g, double Omega, double v, double x0, double eps,
                             double phase = 0.0);

struct UnsupportedDensity : std::runtime_error {
    explicit UnsupportedDensity(const std::string &m) : std::runtime_error(m) {}
};

struct BlowUp : std::runtime_error {
    double t_last;  // last time with finite data
    BlowUp(const std::string &m, double t) : std::runtime_error(m), t_last(t) {}
};

// Pointwise evaluation of a differential polynomial on a grid state.
//   * x-jets of q and r come from spectral differentiation;
//   * R = sqrt(q r / kappa) pointwise, higher jets spectrally from that;
//   * phi enters only through phi_x = (i/2)(q_x/q - r_x/r) (the polar map
//     q = i kappa R e^{-i phi}, r = -i R e^{i phi}); a bare phi has no
//     pointwise meaning and is rejected;
//   * points where |q| or |r| < 1e-12 are masked to zero;
//   * t-jets are rejected (UnsupportedDensity).
class DensityEvaluator {
  public:
    DensityEvaluator(Grid g, DiffPoly p, ParamValues params = {});

    CVec pointwise(const FieldState &s) const;
    // Trapezoid quadrature sum * (L/N); exact for band-limited data.
    std::complex<double> integral(const FieldState &s) const;

  private:
    Grid g_;
    DiffPoly poly_;
    ParamValues params_;
    bool polar_ = false;
    int max_q_ = 0, max_r_ = 0, max_R_ = 0, max_phi_ = 0;
    struct CTerm {
        std::complex<double> coeff;
        // (field tag, dx, exponent); tag 0=q 1=r 2=R 3=phi
        std::vector<std::array<int, 3>> factors;
    };
    std::vector<CTerm> cterms_;
};

// A polynomial flow q_t = P(q, r, jets), r_t = Q(q, r, jets) compiled to a
// pointwise right-hand side.  Only x-jets of q and r may appear; parameters
// must all be given numeric values.
class CompiledRhs {
  public:
    CompiledRhs(Grid g, const EomPair &eom, ParamValues params = {});
    void eval(const CVec &q, const CVec &r, CVec &dq, CVec &dr) const;

  private:
    Grid g_;
    struct Side {
        int max_q = 0, max_r = 0;
        struct CTerm {
            std::complex<double> coeff;
            std::vector<std::array<int, 3>> factors;  // (0=q/1=r, dx, exp)
        };
        std::vector<CTerm> cterms;
    };
    Side qside_, rside_;
    Side compile(const DiffPoly &p, const ParamValues &params) const;
};

struct SimConfig {
    double dt = 0.0;
    double t_end = 0.0;
    int snap_every = 10;   // steps between stored snapshots
    bool dealias = true;
    double eps = 0.0;      // potential exponent offset (potential family only)
};

struct Trajectory {
    Grid grid;
    std::vector<FieldState> snaps;
};

// Generic polynomial flow (NLS family, Kaup-Newell, ...).
Trajectory evolve(const Grid &g, const EomPair &eom, const ParamValues &params,
                  const FieldState &init, const SimConfig &cfg);

// Deformed potential family; cfg.eps = 0 gives the integrable flow 2.
Trajectory evolve_potential(const Grid &g, const FieldState &init, const SimConfig &cfg);

// The defect alpha (W'(qr) - qr) that multiplies the anomaly weights of the
// potential family; identically zero at eps = 0.
CVec potential_defect(const Grid &g, const FieldState &s, double eps);

// Named charge densities plus the weights whose product with the pointwise
// defect integrates to the anomaly rate Gamma^j.
struct BalanceSet {
    std::vector<std::string> names;
    std::vector<DiffPoly> q_density;      // polar (phi, R, kappa) basis
    std::vector<DiffPoly> gamma_weight;   // same basis; may be zero
};

// Charges j = 1..depth of the focusing reduction: Q^j integrates the
// abelianized density at grade -j, and the weight is 2i R times the grade
// -j response of the deformation direction under the dressing map.
BalanceSet nls_balance_set(int depth);

struct ChargeSeries {
    std::vector<std::string> names;
    std::vector<double> times;
    // indexed [charge][snapshot]
    std::vector<std::vector<std::complex<double>>> charge;
    std::vector<std::vector<std::complex<double>>> anomaly;
    // |dQ/dt - Gamma| by centered differences; zero at the two endpoints
    std::vector<std::vector<double>> residual;
    std::vector<double> scale;  // max(1, sup_t |Q^j|)

    double max_residual(std::size_t j) const;
    double drift(std::size_t j) const;  // max_t |Q(t) - Q(0)| / scale
};

ChargeSeries measure(const Trajectory &traj, const BalanceSet &set, double eps);

// One row per snapshot: t, then Re/Im of Q^j, Re/Im of Gamma^j and the
// balance residual for every charge in the set.
std::string charge_csv(const ChargeSeries &s);

// Little-endian binary snapshot: int64 N, float64 L, float64 t, then N
// interleaved (re, im) pairs for q followed by N for r.
void save_state(const std::string &path, const Grid &g, const FieldState &s);
std::pair<Grid, FieldState> load_state(const std::string &path);

}  // namespace laxforge

#endif
