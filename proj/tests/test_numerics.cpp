#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>

#include "laxforge/numerics.hpp"

using namespace laxforge;

namespace {

const std::complex<double> kAlpha(0.0, -1.0);

double rel_l2_error(const Grid &g, const CVec &got, const CVec &want) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < g.N; ++k) {
        num += std::norm(got[k] - want[k]);
        den += std::norm(want[k]);
    }
    return std::sqrt(num / den);
}

FieldState superpose(const Grid &g, const CVec &a, const CVec &b) {
    FieldState s;
    s.t = 0.0;
    s.q.resize(g.N);
    s.r.resize(g.N);
    for (int k = 0; k < g.N; ++k) {
        s.q[k] = a[k] + b[k];
        s.r[k] = -std::conj(s.q[k]);
    }
    return s;
}

double balance_tol(double dt) { return std::max(1e-6, 50.0 * dt * dt * dt * dt); }

}  // namespace

TEST_CASE("grid and spectral derivatives") {
    CHECK_THROWS_AS(Grid(100, 10.0), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(Grid(32, 10.0), std::invalid_argument);   // too small
    CHECK_THROWS_AS(Grid(128, 0.0), std::invalid_argument);

    Grid g(256, 2.0 * M_PI);
    CHECK(g.dx() == doctest::Approx(2.0 * M_PI / 256));
    CHECK(g.x(0) == doctest::Approx(-M_PI));
    CHECK(g.wavenumbers()[1] == doctest::Approx(1.0));
    CHECK(g.wavenumbers()[255] == doctest::Approx(-1.0));

    // sin(m x) differentiates exactly for every m below N/4
    for (int m : {1, 5, 23, 63}) {
        CVec v(g.N), d1(g.N), d2(g.N);
        for (int k = 0; k < g.N; ++k) {
            v[k] = std::sin(m * g.x(k));
            d1[k] = m * std::cos(m * g.x(k));
            d2[k] = -m * m * std::sin(m * g.x(k));
        }
        CVec g1 = spectral_derivative(g, v, 1), g2 = spectral_derivative(g, v, 2);
        double e1 = 0.0, e2 = 0.0;
        for (int k = 0; k < g.N; ++k) {
            e1 = std::max(e1, std::abs(g1[k] - d1[k]));
            e2 = std::max(e2, std::abs(g2[k] - d2[k]));
        }
        CHECK(e1 < 1e-10);
        CHECK(e2 < 1e-8);
    }

    // fft/ifft round trip
    CVec v(g.N);
    for (int k = 0; k < g.N; ++k) v[k] = {std::cos(3 * g.x(k)), std::sin(7 * g.x(k))};
    CVec back = ifft(g, fft(g, v));
    double e = 0.0;
    for (int k = 0; k < g.N; ++k) e = std::max(e, std::abs(back[k] - v[k]));
    CHECK(e < 1e-13);

    // the low-pass kills exactly the top third of the spectrum
    CVec w(g.N);
    for (int k = 0; k < g.N; ++k)
        w[k] = std::exp(std::complex<double>(0, 100.0 * g.x(k))) +
               std::exp(std::complex<double>(0, 20.0 * g.x(k)));
    lowpass_23(g, w);
    CVec kept(g.N);
    for (int k = 0; k < g.N; ++k) kept[k] = std::exp(std::complex<double>(0, 20.0 * g.x(k)));
    e = 0.0;
    for (int k = 0; k < g.N; ++k) e = std::max(e, std::abs(w[k] - kept[k]));
    CHECK(e < 1e-12);
}

TEST_CASE("density evaluation oracles") {
    Grid g(256, 40.0);
    const ParamValues params = {{"kappa", {-1.0, 0.0}}, {"alpha", kAlpha}};

    // integral of q r over a Gaussian against the closed form -sqrt(pi)
    FieldState gauss;
    gauss.q.resize(g.N);
    gauss.r.resize(g.N);
    for (int k = 0; k < g.N; ++k) {
        gauss.q[k] = std::exp(-0.5 * g.x(k) * g.x(k));
        gauss.r[k] = -std::conj(gauss.q[k]);
    }
    DensityEvaluator qr(g, parse_poly("q*r", {field_q(), field_r()}), params);
    CHECK(std::abs(qr.integral(gauss) - std::complex<double>(-std::sqrt(M_PI))) < 1e-8);

    // zero density integrates to exactly zero
    DensityEvaluator zero(g, DiffPoly::zero(), params);
    CHECK(zero.integral(gauss) == std::complex<double>(0.0));

    // mass density i q r on a sech profile: integral is -2 i A
    const double A = 1.0;
    FieldState sol = bright_soliton(g, A, 0.0, 0.0);
    auto set = nls_balance_set(3);
    DensityEvaluator mass(g, set.q_density[0], params);
    CHECK(std::abs(mass.integral(sol) - std::complex<double>(0.0, -2.0 * A)) < 1e-10);

    // momentum in the polar basis equals its (q, r) form (1/4)(q r_x - q_x r)
    FieldState mov = bright_soliton(g, A, 2.0 * M_PI * 3.0 / 40.0, 5.0);
    DensityEvaluator mom_polar(g, set.q_density[1], params);
    DensityEvaluator mom_direct(
        g, parse_poly("(1/4)*q*r[x] - (1/4)*q[x]*r", {field_q(), field_r()}), params);
    CHECK(std::abs(mom_polar.integral(mov) - mom_direct.integral(mov)) < 1e-12);

    // rejected densities
    FieldSymbol gt{"g", Parity::Even, true};
    CHECK_THROWS_AS(DensityEvaluator(g, DiffPoly::jet(field_q(), 0, 1), params), UnsupportedDensity);
    CHECK_THROWS_AS(DensityEvaluator(g, DiffPoly::jet(field_phi(), 0, 0), params), UnsupportedDensity);
    CHECK_THROWS_AS(DensityEvaluator(g, DiffPoly::jet(gt), params), UnsupportedDensity);
    CHECK_THROWS_AS(DensityEvaluator(g, DiffPoly::jet(field_R()), ParamValues{}), MissingAssignment);
    CHECK_THROWS_AS(DensityEvaluator(g, DiffPoly::param("beta"), params), MissingAssignment);
}

TEST_CASE("evolution basics") {
    Grid g(128, 40.0);
    SimConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 1.0;

    // zero stays exactly zero
    FieldState null;
    null.q.assign(g.N, 0.0);
    null.r.assign(g.N, 0.0);
    auto traj = evolve_potential(g, null, cfg);
    for (const auto &s : traj.snaps)
        for (int k = 0; k < g.N; ++k) {
            CHECK(s.q[k] == std::complex<double>(0.0));
            CHECK(s.r[k] == std::complex<double>(0.0));
        }

    // the documented step bound dt <= 0.5 (L/N)^2 is enforced
    SimConfig bad = cfg;
    bad.dt = 0.1;
    CHECK_THROWS_AS(evolve_potential(g, null, bad), std::invalid_argument);

    // absurd data loses finiteness and reports the last good time
    FieldState huge;
    huge.q.assign(g.N, {1e200, 0.0});
    huge.r.assign(g.N, {-1e200, 0.0});
    try {
        evolve_potential(g, huge, cfg);
        CHECK(false);
    } catch (const BlowUp &b) {
        CHECK(b.t_last == doctest::Approx(0.0));
    }
}

TEST_CASE("eps = 0 deformation matches the compiled integrable flow") {
    Grid g(256, 80.0);
    const double A = 1.0, v = 2.0 * M_PI * 6.0 / 80.0;
    SimConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 10.0;
    cfg.snap_every = 1 << 20;
    FieldState init = bright_soliton(g, A, v, 0.0);
    auto ta = evolve_potential(g, init, cfg);
    auto tb = evolve(g, nls_eom(2), {{"alpha", kAlpha}}, init, cfg);
    double m = 0.0;
    for (int k = 0; k < g.N; ++k)
        m = std::max(m, std::abs(ta.snaps.back().q[k] - tb.snaps.back().q[k]));
    CHECK(m < 1e-10);
}

TEST_CASE("single soliton over ten phase periods") {
    Grid g(512, 80.0);
    const double A = 1.0, v = 2.0 * M_PI * 6.0 / 80.0, x0 = -10.0;
    const double period = 2.0 * M_PI / (0.5 * (A * A - v * v));
    SimConfig cfg;
    cfg.dt = 0.005;
    cfg.snap_every = 200;
    cfg.t_end = std::round(10.0 * period / cfg.dt) * cfg.dt;
    auto traj = evolve_potential(g, bright_soliton(g, A, v, x0), cfg);

    double traj_err = 0.0;
    for (const auto &s : traj.snaps)
        traj_err = std::max(traj_err, rel_l2_error(g, s.q, soliton_profile(g, A, v, x0, 0.0, s.t)));
    CHECK(traj_err < 1e-6);

    auto cs = measure(traj, nls_balance_set(3), 0.0);
    CHECK(cs.drift(0) < 1e-6);  // mass
    const double tol = balance_tol(cfg.dt);
    CHECK(cs.max_residual(0) < tol * cs.scale[0]);
    CHECK(cs.max_residual(1) < tol * cs.scale[1]);
    CHECK(cs.max_residual(2) < 1e-8);  // third charge is conserved here too

    // charge values against closed forms: Q1 = -2iA, Q2 = i v A
    CHECK(std::abs(cs.charge[0][0] - std::complex<double>(0.0, -2.0 * A)) < 1e-10);
    CHECK(std::abs(cs.charge[1][0] - std::complex<double>(0.0, v * A)) < 1e-10);
}

TEST_CASE("balance law on the eps = 0.06 deformed run") {
    Grid g(512, 80.0);
    const double v = 2.0 * M_PI * 6.0 / 80.0;
    SimConfig cfg;
    cfg.dt = 0.005;
    cfg.t_end = 40.0;
    cfg.snap_every = 40;
    cfg.eps = 0.06;

    // the deformed solitary wave is an exact solution of the deformed flow
    const double Omega = 0.5;
    auto traj = evolve_potential(g, deformed_solitary(g, Omega, v, -10.0, cfg.eps), cfg);
    double traj_err = 0.0;
    for (const auto &s : traj.snaps)
        traj_err = std::max(
            traj_err, rel_l2_error(g, s.q, deformed_profile(g, Omega, v, -10.0, cfg.eps, 0.0, s.t)));
    CHECK(traj_err < 1e-6);

    auto cs = measure(traj, nls_balance_set(3), cfg.eps);
    const double tol = balance_tol(cfg.dt);
    CHECK(cs.max_residual(0) < tol * cs.scale[0]);
    CHECK(cs.max_residual(1) < tol * cs.scale[1]);

    // same law along a non-stationary deformed trajectory
    auto traj2 = evolve_potential(g, bright_soliton(g, 1.0, v, -10.0), cfg);
    auto cs2 = measure(traj2, nls_balance_set(3), cfg.eps);
    CHECK(cs2.max_residual(0) < tol * cs2.scale[0]);
    CHECK(cs2.max_residual(1) < tol * cs2.scale[1]);
    // the third charge genuinely moves under the deformation
    CHECK(cs2.drift(2) > 1e-4);
}

TEST_CASE("fourth-order convergence under dt halving") {
    Grid g(512, 56.0);
    const double A = 1.0, v = 2.0 * M_PI * 4.0 / 56.0;
    auto err_at = [&](double dt) {
        SimConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 30.0;
        cfg.snap_every = 1 << 20;
        auto traj = evolve_potential(g, bright_soliton(g, A, v, 0.0), cfg);
        const auto &fin = traj.snaps.back();
        return rel_l2_error(g, fin.q, soliton_profile(g, A, v, 0.0, 0.0, fin.t));
    };
    const double ratio = err_at(0.005) / err_at(0.0025);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("parity-odd anomaly density integrates to zero on even data") {
    // gamma_2 = beta_2 scaled off the integrable value keeps the order-2
    // anomaly a parity-odd total derivative
    QidSpec spec = QidSpec::undeformed_nls(2);
    spec.beta[1] = spec.beta[1].scaled(GRat::of(13, 10));
    spec.gamma[1] = spec.gamma[1].scaled(GRat::of(13, 10));
    QidResult qid = qid_deform(nls_coeffs(2), spec);
    const AnomalyOrder *x2 = nullptr;
    for (const auto &o : qid.report.orders)
        if (o.m == 2) x2 = &o;
    REQUIRE(x2 != nullptr);
    CHECK(x2->parity == ParityClass::Odd);
    CHECK(x2->total_derivative);

    Grid g(256, 80.0);
    SimConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 6.0;
    cfg.snap_every = 50;
    auto traj = evolve_potential(g, bright_soliton(g, 1.0, 0.0, 0.0), cfg);

    DensityEvaluator x2eval(g, x2->density, {{"alpha", kAlpha}, {"kappa", {-1.0, 0.0}}});
    for (const auto &s : traj.snaps) {
        // the data stays even, so the odd density must integrate away
        CHECK(std::abs(x2eval.integral(s)) < 1e-8);
    }
}

TEST_CASE("deformed two-soliton collision restores the third charge") {
    Grid g(1024, 80.0);
    const double Omega = 0.5, v = 2.0 * M_PI * 10.0 / 80.0, eps = 0.06;
    // opposite velocities, pi relative phase: odd-parity configuration
    FieldState init = superpose(g, deformed_profile(g, Omega, v, -20.0, eps, 0.0, 0.0),
                                deformed_profile(g, Omega, -v, 20.0, eps, M_PI, 0.0));
    const double tc = 20.0 / v;  // collision time
    SimConfig cfg;
    cfg.dt = 0.0025;
    cfg.t_end = std::ceil(2.2 * tc);
    cfg.snap_every = 80;
    cfg.eps = eps;
    auto traj = evolve_potential(g, init, cfg);
    auto cs = measure(traj, nls_balance_set(3), eps);

    auto window_mean = [&](double lo, double hi) {
        std::complex<double> acc = 0.0;
        int cnt = 0;
        for (std::size_t i = 0; i < cs.times.size(); ++i)
            if (cs.times[i] >= lo && cs.times[i] <= hi) {
                acc += cs.charge[2][i];
                ++cnt;
            }
        return acc / static_cast<double>(cnt);
    };
    const auto pre = window_mean(0.2 * tc, 0.6 * tc);
    const auto post = window_mean(1.5 * tc, 1.9 * tc);
    CHECK(std::abs(post - pre) / std::abs(pre) < 1e-3);

    // the charge makes a large excursion while the waves overlap
    double excursion = 0.0;
    for (const auto &c : cs.charge[2]) excursion = std::max(excursion, std::abs(c - pre));
    CHECK(excursion / std::abs(pre) > 0.5);

    // the protected charges never budge
    CHECK(cs.drift(0) < 1e-8);
    CHECK(cs.drift(1) < 1e-8);
}

TEST_CASE("series output and snapshots") {
    Grid g(128, 40.0);
    SimConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 2.0;
    cfg.snap_every = 25;
    auto traj = evolve_potential(g, bright_soliton(g, 1.0, 0.0, 0.0), cfg);
    auto cs = measure(traj, nls_balance_set(2), 0.0);

    std::string csv = charge_csv(cs);
    CHECK(csv.substr(0, 2) == "t,");
    CHECK(csv.find("Q1_re") != std::string::npos);
    CHECK(csv.find("Q2_gamma_im") != std::string::npos);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == cs.times.size() + 1);
    CHECK(charge_csv(cs) == csv);  // deterministic

    const std::string path = "snapshot_roundtrip.bin";
    save_state(path, g, traj.snaps.back());
    auto [g2, s2] = load_state(path);
    CHECK(g2.N == g.N);
    CHECK(g2.length == g.length);
    CHECK(s2.t == traj.snaps.back().t);
    for (int k = 0; k < g.N; ++k) {
        CHECK(s2.q[k] == traj.snaps.back().q[k]);
        CHECK(s2.r[k] == traj.snaps.back().r[k]);
    }
    std::remove(path.c_str());
}
