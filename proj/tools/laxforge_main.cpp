// Command-line front end: renders hierarchy flows, quasi-integrable
// anomalies and abelianized tables, non-holonomic deformations, runs
// simulations, and checks the build against its golden files.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "laxforge/hierarchy.hpp"
#include "laxforge/nhd.hpp"
#include "laxforge/numerics.hpp"
#include "laxforge/quasi.hpp"
#include "laxforge/render.hpp"

using namespace laxforge;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- text forms

std::string poly_line(const DiffPoly &p) { return p.is_zero() ? "0" : p.str(); }

std::string eom_text(const EomPair &e) {
    return "  q_t = " + poly_line(e.q_t) + "\n  r_t = " + poly_line(e.r_t) + "\n";
}

void append_notes(std::ostringstream &os, const std::vector<std::string> &notes) {
    for (const auto &n : notes) os << "note: " << n << "\n";
}

std::string hierarchy_text(const CoeffTable &t, const EomPair &eom) {
    std::ostringstream os;
    os << "family: " << (t.family == Family::NLS ? "nls" : "dnls") << "\n";
    os << "n: " << t.n << "\n";
    os << "coefficients:\n";
    for (std::size_t m = 0; m < t.entries.size(); ++m) {
        os << "  a_" << m << " = " << poly_line(t.entries[m].a) << "\n";
        os << "  b_" << m << " = " << poly_line(t.entries[m].b) << "\n";
        os << "  c_" << m << " = " << poly_line(t.entries[m].c) << "\n";
    }
    os << "flow (" << eom.label << "):\n" << eom_text(eom);
    append_notes(os, eom.notes);
    return os.str();
}

std::string reduction_name(const Rational &beta) {
    if (beta == Rational(-1, 2)) return "kaup-newell";
    if (beta == Rational(-1, 4)) return "chen-lee-liu";
    if (beta == 0) return "gerdjikov-ivanov";
    return "";
}

std::string reduction_text(const EomPair &base, const Rational &beta) {
    EomPair red = dnls_reduce(base, beta);
    std::ostringstream os;
    os << "reduction beta = " << rational_str(beta);
    const std::string name = reduction_name(beta);
    if (!name.empty()) os << " (" << name << ")";
    os << ":\n" << eom_text(red);
    append_notes(os, red.notes);
    return os.str();
}

std::string verdict_text(const OrderVerdict &v) {
    std::string s;
    switch (v.verdict) {
        case AnomalyVerdict::Zero: s = "zero"; break;
        case AnomalyVerdict::ParityOdd: s = "parity-odd"; break;
        case AnomalyVerdict::ParityEven: s = "parity-even"; break;
        case AnomalyVerdict::Mixed: s = "mixed"; break;
    }
    if (v.total_derivative) s += ", total derivative";
    return s;
}

QidResult nls_qid_generic() {
    QidSpec spec;
    spec.n = 4;
    spec.hamiltonians = nls_hamiltonians(4);
    for (int m = 1; m <= 4; ++m) {
        spec.beta.push_back(DiffPoly::param("beta" + std::to_string(m)));
        spec.gamma.push_back(DiffPoly::param("gamma" + std::to_string(m)));
    }
    return qid_deform(nls_coeffs(4), spec);
}

QidResult nls_qid_matched() {
    QidSpec spec;
    spec.n = 4;
    spec.hamiltonians = nls_hamiltonians(4);
    for (int m = 1; m <= 4; ++m) {
        spec.beta.push_back(DiffPoly::param("beta" + std::to_string(m)));
        spec.gamma.push_back(DiffPoly::param("beta" + std::to_string(m)));
    }
    return qid_deform(nls_coeffs(4), spec);
}

std::string qid_order_text(int order) {
    QidResult gen = nls_qid_generic();
    QidResult mat = nls_qid_matched();
    auto vg = classify(gen.report);
    auto vm = classify(mat.report);
    std::ostringstream os;
    const auto &og = gen.report.orders[order - 1];
    const auto &om = mat.report.orders[order - 1];
    os << "anomaly order " << order << " (lambda grade " << og.grade << "):\n";
    os << "generic couplings:\n  X_" << order << " = " << poly_line(og.density) << "\n";
    os << "  verdict: " << verdict_text(vg[order - 1]) << "\n";
    os << "matched couplings (gamma_m = beta_m):\n  X_" << order << " = " << poly_line(om.density)
       << "\n";
    os << "  verdict: " << verdict_text(vm[order - 1]) << "\n";
    return os.str();
}

std::string qid_nls_all_text() {
    std::ostringstream os;
    os << "family: nls\n";
    for (int m = 1; m <= 4; ++m) os << qid_order_text(m);
    return os.str();
}

std::string qid_kn_text() {
    KnQidReport rep = kn_qid();
    std::ostringstream os;
    os << "family: kn\n";
    os << "default hamiltonian insertion:\n";
    os << "  H = " << poly_line(kn_qid_default_hamiltonian()) << "\n";
    os << "flow residuals at lambda^1:\n";
    os << "  e_q = " << poly_line(rep.e_q) << "\n";
    os << "  e_r = " << poly_line(rep.e_r) << "\n";
    os << "diagonal residual at lambda^2: " << poly_line(rep.anomaly) << "\n";
    os << "off-diagonal residuals at lambda^3: " << poly_line(rep.defect_plus) << ", "
       << poly_line(rep.defect_minus) << "\n";
    append_notes(os, rep.notes);
    return os.str();
}

std::string abelian_text(RotatedFamily fam, int J) {
    AbelianizationTable t = abelianize(fam, J + 1);
    std::ostringstream os;
    os << "family: " << (fam == RotatedFamily::NLS ? "nls" : "kn") << "\n";
    os << "dressing generator:\n";
    for (int j = 1; j <= J; ++j) {
        os << "  xi[" << -j << "]: F1 -> " << poly_line(t.xi.comps[j - 1].first) << "; F2 -> "
           << poly_line(t.xi.comps[j - 1].second) << "\n";
    }
    os << "alpha weights:\n";
    for (auto it = t.alpha.rbegin(); it != t.alpha.rend(); ++it) {
        if (it->first > 0 || it->first < -J) continue;
        os << "  alpha_0[" << it->first << "] = " << render_qr(it->second) << "\n";
    }
    os << "charge densities:\n";
    for (auto it = t.charge_density.rbegin(); it != t.charge_density.rend(); ++it) {
        if (it->first < -J) continue;
        os << "  density[" << it->first << "] = " << render_qr(it->second) << "\n";
    }
    return os.str();
}

std::string resolution_text(Resolution r) {
    switch (r) {
        case Resolution::Resolved: return "resolved";
        case Resolution::NotResolvable: return "not resolvable";
        default: return "not attempted";
    }
}

std::string nhd_text(const NhdResult &r, bool with_elimination, bool resolve) {
    std::ostringstream os;
    os << "label: " << r.deformed_eoms.label << "\n";
    os << "flow grade: " << r.eom_grade << "\n";
    os << "deformed flow:\n" << eom_text(r.deformed_eoms);
    os << "constraints:\n";
    for (const auto &c : r.constraints)
        os << "  [grade " << c.grade << ", " << c.component << "] " << poly_line(c.relation)
           << " = 0\n";
    ReducedConstraints rc = reduce_constraints(r);
    os << "reduced:\n";
    for (const auto &c : rc.relations)
        os << "  [grade " << c.grade << "] " << poly_line(c.relation) << " = 0\n";
    if (with_elimination) {
        EliminationResult el = eliminate_deformers(r);
        os << "eliminated equation (order " << el.order << "):\n  " << poly_line(el.equation)
           << " = 0\n";
        append_notes(os, el.notes);
    }
    auto list = [&os](const char *what, const std::vector<std::string> &names) {
        os << what << ":";
        for (const auto &n : names) os << " " << n;
        os << "\n";
    };
    std::vector<std::string> t_only, act;
    for (const auto &f : r.time_only) t_only.push_back(f.name);
    for (const auto &f : r.active) act.push_back(f.name);
    list("vanishing", r.vanishing);
    list("time-only", t_only);
    list("active", act);
    os << "resolution: " << resolution_text(r.resolution) << "\n";
    append_notes(os, r.notes);
    append_notes(os, rc.notes);
    if (resolve) {
        try {
            EomPair pot = kn_resolve(r);
            os << "potential form (" << pot.label << "):\n" << eom_text(pot);
            append_notes(os, pot.notes);
        } catch (const NotReducible &e) {
            os << "potential form: unavailable (" << e.what() << ")\n";
        }
    }
    return os.str();
}

// ------------------------------------------------------------------- verify

struct VerifyState {
    fs::path dir;
    bool update = false;
    unsigned seed = 20240817;
    int checks = 0, failures = 0;
    std::ostringstream out;

    void pass(const std::string &name, const std::string &how) {
        ++checks;
        out << "ok " << name << " (" << how << ")\n";
    }
    void fail(const std::string &name, const std::string &why) {
        ++checks;
        ++failures;
        out << "FAIL " << name << ": " << why << "\n";
    }
    void golden(const std::string &name, const std::string &file, const std::string &produced) {
        fs::path p = dir / file;
        if (update) {
            std::ofstream f(p, std::ios::binary);
            f << produced;
            pass(name, "wrote " + file);
            return;
        }
        std::ifstream f(p, std::ios::binary);
        if (!f) {
            fail(name, "missing golden file " + file + " (run verify --update-golden)");
            return;
        }
        std::stringstream buf;
        buf << f.rdbuf();
        if (buf.str() == produced)
            pass(name, "matches " + file);
        else
            fail(name, "output differs from " + file);
    }
};

JetSample random_sample(std::mt19937 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    JetSample s;
    s.params["alpha"] = {u(rng), u(rng)};
    s.params["beta"] = {u(rng), u(rng)};
    for (const auto &f : {field_q(), field_r()})
        for (int dx = 0; dx <= 16; ++dx) s.jets[jet_key(JetVar(f, dx, 0))] = {u(rng), u(rng)};
    return s;
}

void verify_curvature(VerifyState &st, const std::string &name, const CoeffTable &table,
                      const EomPair &eom) {
    LaxPair lax = build_lax(table);
    LoopElement F = curvature(lax.L, lax.M);
    if (!F.reduced(eom_rules(eom)).is_zero()) {
        st.fail("curvature/" + name, "reduced curvature is not symbolically zero");
        return;
    }
    // Independent numeric check: evaluate the unreduced residual with the
    // t-jets assigned from the flow's right-hand side.
    std::mt19937 rng(st.seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        JetSample s = random_sample(rng);
        DiffPoly rq = eom.q_t, rr = eom.r_t;
        for (int dx = 0; dx <= 3; ++dx) {
            s.jets[jet_key(JetVar(field_q(), dx, 1))] = rq.eval(s);
            s.jets[jet_key(JetVar(field_r(), dx, 1))] = rr.eval(s);
            rq = rq.d_x();
            rr = rr.d_x();
        }
        for (const auto &[grade, m] : F.grades()) {
            (void)grade;
            worst = std::max({worst, std::abs(m.id.eval(s)), std::abs(m.s3.eval(s)),
                              std::abs(m.sp.eval(s)), std::abs(m.sm.eval(s))});
        }
    }
    if (worst < 1e-10) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "symbolic zero; 100 samples, max %.2e", worst);
        st.pass("curvature/" + name, buf);
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "random residual %.2e above 1e-10", worst);
        st.fail("curvature/" + name, buf);
    }
}

void run_verify(VerifyState &st, const std::vector<std::string> &sections) {
    auto wants = [&sections](const char *s) {
        if (sections.empty()) return true;
        for (const auto &x : sections)
            if (x == s) return true;
        return false;
    };

    if (wants("hierarchy")) {
        st.golden("hierarchy/nls-2", "hierarchy_nls2.txt",
                  hierarchy_text(nls_coeffs(2), nls_eom(2)));
        st.golden("hierarchy/nls-3", "hierarchy_nls3.txt",
                  hierarchy_text(nls_coeffs(3), nls_eom(3)));
        EomPair d1 = dnls_eom(1);
        std::string dn = hierarchy_text(dnls_coeffs(1), d1);
        for (const auto &b : {Rational(-1, 2), Rational(-1, 4), Rational(0)})
            dn += reduction_text(d1, b);
        st.golden("hierarchy/dnls-1", "hierarchy_dnls1.txt", dn);
    }
    if (wants("curvature")) {
        for (int n = 1; n <= 6; ++n)
            verify_curvature(st, "nls-" + std::to_string(n), nls_coeffs(n), nls_eom(n));
        for (int n = 1; n <= 2; ++n)
            verify_curvature(st, "dnls-" + std::to_string(n), dnls_coeffs(n), dnls_eom(n));
    }
    if (wants("qid")) {
        st.golden("qid/nls", "qid_nls.txt", qid_nls_all_text());
        st.golden("qid/kn", "qid_kn.txt", qid_kn_text());
    }
    if (wants("abelianization")) {
        st.golden("abelianization/nls", "abelian_nls.txt", abelian_text(RotatedFamily::NLS, 4));
        st.golden("abelianization/kn", "abelian_kn.txt", abelian_text(RotatedFamily::KN, 4));
    }
    if (wants("dnls-qid")) {
        for (int n = 1; n <= 2; ++n) {
            DnlsQidReport rep = dnls_qid(n);
            bool ok = true;
            for (const auto &[g, p] : rep.odd_sigma3) {
                (void)g;
                ok = ok && p.is_zero();
            }
            const std::string name = "dnls-qid/odd-diagonal-n" + std::to_string(n);
            if (ok)
                st.pass(name, "all odd-grade diagonal residuals vanish identically");
            else
                st.fail(name, "odd-grade diagonal residual survives");
        }
    }
    if (wants("nhd")) {
        st.golden("nhd/nls-2-1", "nhd_nls2_d1.txt", nhd_text(nls_nhd(2, 1), true, false));
        st.golden("nhd/nls-2-2", "nhd_nls2_d2.txt", nhd_text(nls_nhd(2, 2), true, false));
        st.golden("nhd/nls-3-1", "nhd_nls3_d1.txt", nhd_text(nls_nhd(3, 1), true, false));
        st.golden("nhd/kn", "nhd_kn.txt", nhd_text(kn_nhd(), false, true));
        st.golden("nhd/cll", "nhd_cll.txt", nhd_text(cll_nhd(), false, true));
    }
}

// ----------------------------------------------------------------- simulate

int run_simulate(int N, double L, double dt, double tend, int snap_every, double eps, double A,
                 int v_mode, double x0, int charges, bool collide, const std::string &out_path) {
    Grid g(N, L);
    const double v = 2.0 * M_PI * v_mode / L;
    const double Omega = 0.5 * A * A;
    FieldState init;
    if (collide) {
        CVec a = deformed_profile(g, Omega, v, -L / 4.0, eps, 0.0, 0.0);
        CVec b = deformed_profile(g, Omega, -v, L / 4.0, eps, M_PI, 0.0);
        init.q.resize(g.N);
        init.r.resize(g.N);
        for (int k = 0; k < g.N; ++k) {
            init.q[k] = a[k] + b[k];
            init.r[k] = -std::conj(init.q[k]);
        }
    } else {
        init = deformed_solitary(g, Omega, v, x0, eps);
    }

    SimConfig cfg;
    cfg.dt = dt;
    cfg.t_end = std::llround(tend / dt) * dt;
    cfg.snap_every = snap_every;
    cfg.eps = eps;

    std::printf("grid: N=%d L=%g\n", g.N, g.length);
    std::printf("dt=%g t_end=%g eps=%g %s\n", cfg.dt, cfg.t_end, eps,
                collide ? "two solitary waves, pi relative phase" : "single solitary wave");
    Trajectory traj = evolve_potential(g, init, cfg);
    ChargeSeries cs = measure(traj, nls_balance_set(charges), eps);
    std::printf("snapshots: %zu\n", traj.snaps.size());
    for (std::size_t j = 0; j < cs.names.size(); ++j)
        std::printf("%s: value=(%.6e,%.6e) drift=%.3e max residual=%.3e\n", cs.names[j].c_str(),
                    cs.charge[j].back().real(), cs.charge[j].back().imag(), cs.drift(j),
                    cs.max_residual(j));
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 1;
    }
    f << charge_csv(cs);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"integrable hierarchies: exact flows, deformations, and pseudospectral runs"};
    app.require_subcommand(1);

    // hierarchy
    auto *hier = app.add_subcommand("hierarchy", "print a flow and its coefficient table");
    std::string h_family = "nls", h_format = "text", h_beta;
    int h_n = 2;
    hier->add_option("--family", h_family)->check(CLI::IsMember({"nls", "dnls"}));
    hier->add_option("--n", h_n)->check(CLI::PositiveNumber);
    hier->add_option("--beta", h_beta, "rational value for beta (dnls only)");
    hier->add_option("--format", h_format)->check(CLI::IsMember({"text", "latex", "json"}));

    // qid
    auto *qid = app.add_subcommand("qid", "quasi-integrable deformation report");
    std::string q_family = "nls", q_format = "text";
    int q_order = 2;
    qid->add_option("--family", q_family)->check(CLI::IsMember({"nls", "kn"}));
    qid->add_option("--order", q_order)->check(CLI::Range(1, 4));
    qid->add_option("--format", q_format)->check(CLI::IsMember({"text", "json"}));

    // nhd
    auto *nhd = app.add_subcommand("nhd", "non-holonomic deformation report");
    std::string n_system = "nls", n_grades = "-1", n_format = "text";
    int n_flow = 2;
    bool n_resolve = false;
    nhd->add_option("--system", n_system)->check(CLI::IsMember({"nls", "kn", "cll"}));
    nhd->add_option("--n", n_flow, "flow order (nls)")->check(CLI::Range(2, 3));
    nhd->add_option("--grades", n_grades, "deformation grades, e.g. -1 or -1,-2 (nls)");
    nhd->add_flag("--resolve", n_resolve, "integrate constraints in potential variables");
    nhd->add_option("--format", n_format)->check(CLI::IsMember({"text", "json"}));

    // simulate
    auto *sim = app.add_subcommand("simulate", "pseudospectral run with charge monitoring");
    std::string s_system = "nls", s_out = "run.csv";
    int s_N = 512, s_snap = 40, s_vmode = 6, s_charges = 3;
    double s_L = 80.0, s_dt = 0.005, s_tend = 40.0, s_eps = 0.0, s_A = 1.0, s_x0 = -10.0;
    bool s_soliton = false, s_collide = false;
    sim->add_option("--system", s_system)->check(CLI::IsMember({"nls"}));
    sim->add_flag("--soliton", s_soliton, "single solitary wave initial data");
    sim->add_flag("--collide", s_collide, "two counter-moving solitary waves");
    sim->add_option("--eps", s_eps, "potential exponent offset");
    sim->add_option("--N", s_N, "grid points (power of two)");
    sim->add_option("--L", s_L, "domain length");
    sim->add_option("--dt", s_dt);
    sim->add_option("--tend", s_tend);
    sim->add_option("--snap-every", s_snap)->check(CLI::PositiveNumber);
    sim->add_option("--amplitude", s_A);
    sim->add_option("--v-mode", s_vmode, "velocity as a periodic mode count");
    sim->add_option("--x0", s_x0);
    sim->add_option("--charges", s_charges)->check(CLI::Range(1, 4));
    sim->add_option("--out", s_out, "CSV output path");

    // verify
    auto *ver = app.add_subcommand("verify", "golden-file and random-eval checks");
    bool v_all = false, v_update = false;
    unsigned v_seed = 20240817;
    std::vector<std::string> v_sections;
    ver->add_flag("--all", v_all, "run every check");
    ver->add_option("--section", v_sections)
        ->check(CLI::IsMember({"hierarchy", "curvature", "qid", "abelianization", "dnls-qid", "nhd"}));
    ver->add_option("--seed", v_seed, "seed for the random-eval oracles");
    ver->add_flag("--update-golden", v_update, "rewrite the golden files from current output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (hier->parsed()) {
            CoeffTable table = h_family == "nls" ? nls_coeffs(h_n) : dnls_coeffs(h_n);
            EomPair eom = h_family == "nls" ? nls_eom(h_n) : dnls_eom(h_n);
            if (!h_beta.empty() && h_family != "dnls") {
                std::fprintf(stderr, "error: --beta applies to the dnls family\n");
                return 2;
            }
            if (h_format == "latex") {
                if (!h_beta.empty()) std::printf("%s\n", latex(dnls_reduce(eom, Rational(h_beta))).c_str());
                else std::printf("%s\n", latex(eom).c_str());
            } else if (h_format == "json") {
                Json j = hierarchy_json(table, eom);
                if (!h_beta.empty()) j["reduction"] = eom_json(dnls_reduce(eom, Rational(h_beta)));
                std::printf("%s\n", j.dump(2).c_str());
            } else {
                std::string out = hierarchy_text(table, eom);
                if (!h_beta.empty()) out += reduction_text(eom, Rational(h_beta));
                std::fputs(out.c_str(), stdout);
            }
            return 0;
        }

        if (qid->parsed()) {
            if (q_format == "json") {
                QidResult gen = nls_qid_generic();
                Json j;
                if (q_family == "nls") {
                    j = qid_json(gen, classify(gen.report));
                    j["tables"] = abelianization_json(abelianize(RotatedFamily::NLS, 5));
                } else {
                    j = Json{{"family", "kn"}};
                    KnQidReport rep = kn_qid();
                    j["e_q"] = rep.e_q.str();
                    j["e_r"] = rep.e_r.str();
                    j["anomaly"] = rep.anomaly.str();
                    j["tables"] = abelianization_json(abelianize(RotatedFamily::KN, 5));
                }
                std::printf("%s\n", j.dump(2).c_str());
            } else if (q_family == "nls") {
                std::fputs(("family: nls\n" + qid_order_text(q_order)).c_str(), stdout);
                std::fputs(abelian_text(RotatedFamily::NLS, 4).c_str(), stdout);
            } else {
                std::fputs(qid_kn_text().c_str(), stdout);
                std::fputs(abelian_text(RotatedFamily::KN, 4).c_str(), stdout);
            }
            return 0;
        }

        if (nhd->parsed()) {
            NhdResult result = [&] {
                if (n_system == "kn") return kn_nhd();
                if (n_system == "cll") return cll_nhd();
                int depth = 0;
                std::string piece;
                std::istringstream is(n_grades);
                while (std::getline(is, piece, ',')) {
                    ++depth;
                    if (piece != std::to_string(-depth))
                        throw std::invalid_argument(
                            "grades must run consecutively from -1, e.g. --grades -1,-2");
                }
                if (depth == 0) throw std::invalid_argument("no deformation grades given");
                return nls_nhd(n_flow, depth);
            }();
            const bool eliminate = n_system == "nls";
            if (n_format == "json") {
                ReducedConstraints rc = reduce_constraints(result);
                EliminationResult el =
                    eliminate ? eliminate_deformers(result) : EliminationResult{};
                std::printf("%s\n", nhd_json(result, rc, el).dump(2).c_str());
            } else {
                std::fputs(nhd_text(result, eliminate, n_resolve).c_str(), stdout);
            }
            return 0;
        }

        if (sim->parsed()) {
            if (s_soliton == s_collide) {
                std::fprintf(stderr, "error: choose exactly one of --soliton / --collide\n");
                return 2;
            }
            return run_simulate(s_N, s_L, s_dt, s_tend, s_snap, s_eps, s_A, s_vmode, s_x0,
                                s_charges, s_collide, s_out);
        }

        if (ver->parsed()) {
            if (!v_all && v_sections.empty()) {
                std::fprintf(stderr, "error: pass --all or at least one --section\n");
                return 2;
            }
            VerifyState st;
            const char *env = std::getenv("LAXFORGE_GOLDEN_DIR");
            st.dir = env ? fs::path(env) : fs::path("golden");
            st.update = v_update;
            st.seed = v_seed;
            std::printf("seed: %u\n", st.seed);
            run_verify(st, v_all ? std::vector<std::string>{} : v_sections);
            std::fputs(st.out.str().c_str(), stdout);
            std::printf("summary: %d checks, %d failures\n", st.checks, st.failures);
            return st.failures == 0 ? 0 : 1;
        }
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
