#include "laxforge/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace laxforge {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plans are cached per size; FFTW_UNALIGNED lets one plan serve any
// array through fftw_execute_dft.
struct PlanPair {
    fftw_plan fwd = nullptr, bwd = nullptr;
};

PlanPair &plans_for(int n) {
    static std::map<int, PlanPair> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> a(n), b(n);
    auto *pa = reinterpret_cast<fftw_complex *>(a.data());
    auto *pb = reinterpret_cast<fftw_complex *>(b.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

}  // namespace

Grid::Grid(int n, double L) : N(n), length(L) {
    if (!power_of_two(n) || n < 64)
        throw std::invalid_argument("grid size must be a power of two >= 64");
    if (!(L > 0.0)) throw std::invalid_argument("domain length must be positive");
}

std::vector<double> Grid::wavenumbers() const {
    std::vector<double> k(N);
    const double base = 2.0 * M_PI / length;
    for (int m = 0; m < N; ++m) k[m] = base * (m < N / 2 ? m : m - N);
    return k;
}

CVec fft(const Grid &g, const CVec &v) {
    if (static_cast<int>(v.size()) != g.N) throw std::invalid_argument("fft: size mismatch");
    CVec out(g.N);
    auto &p = plans_for(g.N);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(v.data())),
                     reinterpret_cast<fftw_complex *>(out.data()));
    return out;
}

CVec ifft(const Grid &g, const CVec &v) {
    if (static_cast<int>(v.size()) != g.N) throw std::invalid_argument("ifft: size mismatch");
    CVec out(g.N);
    auto &p = plans_for(g.N);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(v.data())),
                     reinterpret_cast<fftw_complex *>(out.data()));
    const double inv = 1.0 / g.N;
    for (auto &z : out) z *= inv;
    return out;
}

CVec spectral_derivative(const Grid &g, const CVec &v, int order) {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (order == 0) return v;
    CVec hat = fft(g, v);
    const auto k = g.wavenumbers();
    for (int m = 0; m < g.N; ++m) {
        std::complex<double> ik(0.0, k[m]);
        std::complex<double> f = 1.0;
        for (int j = 0; j < order; ++j) f *= ik;
        hat[m] *= f;
    }
    // the unpaired Nyquist mode has no consistent odd derivative
    if (order % 2 == 1) hat[g.N / 2] = 0.0;
    return ifft(g, hat);
}

void lowpass_23(const Grid &g, CVec &v) {
    CVec hat = fft(g, v);
    const int cut = g.N / 3;  // keep |m| <= N/3, i.e. two thirds of Nyquist
    for (int m = 0; m < g.N; ++m) {
        int mm = m < g.N / 2 ? m : g.N - m;
        if (mm > cut) hat[m] = 0.0;
    }
    v = ifft(g, hat);
}

CVec soliton_profile(const Grid &g, double A, double v, double x0, double phase, double t) {
    CVec q(g.N);
    const double omega = 0.5 * (A * A - v * v);
    for (int k = 0; k < g.N; ++k) {
        // wrap the moving center back into the periodic cell
        double xr = g.x(k) - x0 - v * t;
        xr -= g.length * std::floor(xr / g.length + 0.5);
        const double env = A / std::cosh(A * xr);
        const double th = v * g.x(k) + omega * t + phase;
        q[k] = env * std::complex<double>(std::cos(th), std::sin(th));
    }
    return q;
}

FieldState bright_soliton(const Grid &g, double A, double v, double x0, double phase) {
    FieldState s;
    s.q = soliton_profile(g, A, v, x0, phase, 0.0);
    s.r.resize(g.N);
    for (int k = 0; k < g.N; ++k) s.r[k] = -std::conj(s.q[k]);
    s.t = 0.0;
    return s;
}

CVec deformed_profile(const Grid &g, double Omega, double v, double x0, double eps, double phase,
                      double t) {
    if (!(Omega > 0.0)) throw std::invalid_argument("solitary wave needs Omega > 0");
    const double sig = 1.0 + eps;
    const double amp = std::pow(Omega * (1.0 + sig), 1.0 / (2.0 * sig));
    const double width = sig * std::sqrt(2.0 * Omega);
    CVec q(g.N);
    for (int k = 0; k < g.N; ++k) {
        double xr = g.x(k) - x0 - v * t;
        xr -= g.length * std::floor(xr / g.length + 0.5);
        const double env = amp * std::pow(1.0 / std::cosh(width * xr), 1.0 / sig);
        const double th = v * g.x(k) + (Omega - 0.5 * v * v) * t + phase;
        q[k] = env * std::complex<double>(std::cos(th), std::sin(th));
    }
    return q;
}

FieldState deformed_solitary(const Grid &g, double Omega, double v, double x0, double eps,
                             double phase) {
    FieldState s;
    s.q = deformed_profile(g, Omega, v, x0, eps, phase, 0.0);
    s.r.resize(g.N);
    for (int k = 0; k < g.N; ++k) s.r[k] = -std::conj(s.q[k]);
    s.t = 0.0;
    return s;
}

}  // namespace laxforge
