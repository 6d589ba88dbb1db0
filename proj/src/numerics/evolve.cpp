#include "laxforge/numerics.hpp"

#include <cmath>
#include <functional>

namespace laxforge {

namespace {

using RhsFn = std::function<void(const CVec &, const CVec &, CVec &, CVec &)>;

bool finite(const CVec &v) {
    for (const auto &z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void validate(const Grid &g, const SimConfig &cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (cfg.snap_every < 1) throw std::invalid_argument("snap_every must be >= 1");
    const double bound = 0.5 * g.dx() * g.dx();
    if (cfg.dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument("dt exceeds the stability bound 0.5 (L/N)^2");
}

Trajectory run_rk4(const Grid &g, const FieldState &init, const SimConfig &cfg, const RhsFn &rhs) {
    validate(g, cfg);
    const long long steps = std::llround(cfg.t_end / cfg.dt);
    if (steps < 1 || std::abs(steps * cfg.dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end))
        throw std::invalid_argument("t_end must be an integer number of steps");

    const int n = g.N;
    if (static_cast<int>(init.q.size()) != n || static_cast<int>(init.r.size()) != n)
        throw std::invalid_argument("initial state size does not match the grid");

    auto call = [&](const CVec &q, const CVec &r, CVec &dq, CVec &dr) {
        rhs(q, r, dq, dr);
        if (cfg.dealias) {
            lowpass_23(g, dq);
            lowpass_23(g, dr);
        }
    };

    Trajectory traj;
    traj.grid = g;
    CVec q = init.q, r = init.r;
    traj.snaps.push_back({q, r, init.t});

    CVec k1q(n), k1r(n), k2q(n), k2r(n), k3q(n), k3r(n), k4q(n), k4r(n), tq(n), tr(n);
    const double dt = cfg.dt;
    double t_good = init.t;
    for (long long i = 1; i <= steps; ++i) {
        call(q, r, k1q, k1r);
        for (int k = 0; k < n; ++k) {
            tq[k] = q[k] + 0.5 * dt * k1q[k];
            tr[k] = r[k] + 0.5 * dt * k1r[k];
        }
        call(tq, tr, k2q, k2r);
        for (int k = 0; k < n; ++k) {
            tq[k] = q[k] + 0.5 * dt * k2q[k];
            tr[k] = r[k] + 0.5 * dt * k2r[k];
        }
        call(tq, tr, k3q, k3r);
        for (int k = 0; k < n; ++k) {
            tq[k] = q[k] + dt * k3q[k];
            tr[k] = r[k] + dt * k3r[k];
        }
        call(tq, tr, k4q, k4r);
        for (int k = 0; k < n; ++k) {
            q[k] += dt / 6.0 * (k1q[k] + 2.0 * k2q[k] + 2.0 * k3q[k] + k4q[k]);
            r[k] += dt / 6.0 * (k1r[k] + 2.0 * k2r[k] + 2.0 * k3r[k] + k4r[k]);
        }
        const double t = init.t + i * dt;
        if (!finite(q) || !finite(r))
            throw BlowUp("solution lost finiteness by t = " + std::to_string(t), t_good);
        t_good = t;
        if (i % cfg.snap_every == 0 || i == steps)
            traj.snaps.push_back({q, r, t});
    }
    return traj;
}

double wprime(const std::complex<double> &s, double eps) {
    const double sg = s.real() < 0.0 ? -1.0 : 1.0;
    return sg * std::pow(std::abs(s), 1.0 + eps);
}

}  // namespace

Trajectory evolve(const Grid &g, const EomPair &eom, const ParamValues &params,
                  const FieldState &init, const SimConfig &cfg) {
    CompiledRhs rhs(g, eom, params);
    return run_rk4(g, init, cfg,
                   [&rhs](const CVec &q, const CVec &r, CVec &dq, CVec &dr) { rhs.eval(q, r, dq, dr); });
}

Trajectory evolve_potential(const Grid &g, const FieldState &init, const SimConfig &cfg) {
    const double eps = cfg.eps;
    const std::complex<double> alpha(0.0, -1.0);
    auto rhs = [&g, eps, alpha](const CVec &q, const CVec &r, CVec &dq, CVec &dr) {
        CVec qxx = spectral_derivative(g, q, 2);
        CVec rxx = spectral_derivative(g, r, 2);
        const int n = g.N;
        dq.resize(n);
        dr.resize(n);
        for (int k = 0; k < n; ++k) {
            const std::complex<double> s = q[k] * r[k];
            const std::complex<double> w = eps == 0.0 ? s : std::complex<double>(wprime(s, eps));
            dq[k] = alpha * (-0.5 * qxx[k] + w * q[k]);
            dr[k] = alpha * (0.5 * rxx[k] - w * r[k]);
        }
    };
    return run_rk4(g, init, cfg, rhs);
}

CVec potential_defect(const Grid &g, const FieldState &s, double eps) {
    const std::complex<double> alpha(0.0, -1.0);
    CVec out(g.N, 0.0);
    if (eps == 0.0) return out;
    for (int k = 0; k < g.N; ++k) {
        const std::complex<double> sv = s.q[k] * s.r[k];
        out[k] = alpha * (std::complex<double>(wprime(sv, eps)) - sv);
    }
    return out;
}

}  // namespace laxforge
