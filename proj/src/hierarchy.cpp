#include "laxforge/hierarchy.hpp"

namespace laxforge {

namespace {

DiffPoly q_jet(int dx = 0) { return DiffPoly::jet(field_q(), dx); }
DiffPoly r_jet(int dx = 0) { return DiffPoly::jet(field_r(), dx); }

// s = (1/2)(1+2beta) q r
DiffPoly dnls_s() {
    DiffPoly beta = DiffPoly::param("beta");
    DiffPoly qr = q_jet() * r_jet();
    return qr.scaled(GRat::of(1, 2)) + beta * qr;
}

}  // namespace

CoeffTable nls_coeffs(int n) {
    if (n < 0) throw std::invalid_argument("nls_coeffs: n must be >= 0");
    CoeffTable t;
    t.family = Family::NLS;
    t.n = n;
    GRat i = GRat::i(), half = GRat::of(1, 2);

    CoeffTable::Entry e0;
    e0.a = DiffPoly::param("alpha");
    t.entries.push_back(e0);
    for (int m = 0; m <= n; ++m) {
        const auto &prev = t.entries.back();
        CoeffTable::Entry e;
        e.b = (prev.b.d_x() + (q_jet() * prev.a).scaled(GRat(2))).scaled(i * half);
        e.c = (prev.c.d_x() - (r_jet() * prev.a).scaled(GRat(2))).scaled(-(i * half));
        e.a = (q_jet() * e.c - r_jet() * e.b).integrate_x();
        t.entries.push_back(std::move(e));
    }
    return t;
}

EomPair nls_eom(int n) {
    if (n < 1) throw std::invalid_argument("nls_eom: n must be >= 1");
    CoeffTable t = nls_coeffs(n);
    GRat two_i = GRat(2) * GRat::i();
    EomPair e;
    e.q_t = t.entries[n + 1].b.scaled(-two_i);
    e.r_t = t.entries[n + 1].c.scaled(two_i);
    e.label = "nls n=" + std::to_string(n);
    return e;
}

CoeffTable dnls_coeffs(int n) {
    if (n < 1) throw std::invalid_argument("dnls_coeffs: n must be >= 1");
    CoeffTable t;
    t.family = Family::DNLS;
    t.n = n;
    GRat i = GRat::i(), half = GRat::of(1, 2);
    DiffPoly s = dnls_s();

    t.entries.resize(2 * n + 3);
    t.entries[0].a = DiffPoly::constant(GRat::imag(-2, 1));
    t.entries[1].b = q_jet().scaled(GRat(2));
    t.entries[1].c = r_jet().scaled(GRat(2));

    for (int m = 0; m + 1 <= 2 * n + 2; ++m) {
        const auto &em = t.entries[m];
        DiffPoly rhs = (r_jet() * s * em.b - q_jet() * s * em.c) -
                       (q_jet() * em.c.d_x() + r_jet() * em.b.d_x()).scaled(i * half);
        t.entries[m + 1].a = rhs.integrate_x();
        if (m + 2 <= 2 * n + 2) {
            t.entries[m + 2].b =
                (em.b.d_x() + (s * em.b).scaled(GRat(2) * i) +
                 (q_jet() * t.entries[m + 1].a).scaled(GRat(2)))
                    .scaled(i * half);
            t.entries[m + 2].c =
                (em.c.d_x() - (s * em.c).scaled(GRat(2) * i) -
                 (r_jet() * t.entries[m + 1].a).scaled(GRat(2)))
                    .scaled(-(i * half));
        }
    }
    return t;
}

EomPair dnls_eom(int n) {
    CoeffTable t = dnls_coeffs(n);
    DiffPoly one_2b = DiffPoly::constant(GRat(1)) + DiffPoly::param("beta").scaled(GRat(2));
    DiffPoly qr = q_jet() * r_jet();
    const DiffPoly &b_top = t.entries[2 * n + 1].b;
    const DiffPoly &c_top = t.entries[2 * n + 1].c;
    const DiffPoly &a_top = t.entries[2 * n + 2].a;

    EomPair e;
    e.q_t = b_top.d_x() + (one_2b * qr * b_top).scaled(GRat::i()) +
            (one_2b * q_jet() * a_top).scaled(GRat(2));
    e.r_t = c_top.d_x() - (one_2b * qr * c_top).scaled(GRat::i()) -
            (one_2b * r_jet() * a_top).scaled(GRat(2));
    e.label = "dnls n=" + std::to_string(n);
    if (n == 1) {
        e.notes.push_back(
            "diagonal feed term taken as 2(1+2beta) r a_4, the choice consistent "
            "with the expanded n=1 flow");
        e.notes.push_back(
            "qr c_3 coupling taken as i(1+2beta) qr c_3, the choice consistent "
            "with the expanded n=1 flow");
    }
    return e;
}

EomPair dnls_reduce(const EomPair &eom, const Rational &beta_value) {
    EomPair e;
    e.q_t = substitute_param(eom.q_t, "beta", GRat(beta_value));
    e.r_t = substitute_param(eom.r_t, "beta", GRat(beta_value));
    if (beta_value == Rational(-1, 2)) e.label = "kn";
    else if (beta_value == Rational(-1, 4)) e.label = "cll";
    else if (beta_value == 0) e.label = "gi";
    else e.label = "dnls beta=" + rational_str(beta_value);
    return e;
}

LaxPair build_lax(const CoeffTable &t) {
    GRat i = GRat::i();
    LaxPair p;
    if (t.family == Family::NLS) {
        p.L.add(1, Mat2{{}, DiffPoly::constant(-i), {}, {}});
        p.L.add(0, Mat2{{}, {}, q_jet(), r_jet()});
        for (int m = 0; m < static_cast<int>(t.entries.size()) && m <= t.n; ++m) {
            const auto &e = t.entries[m];
            p.M.add(t.n - m, Mat2{{}, e.a, e.b, e.c});
        }
    } else {
        p.L.add(2, Mat2{{}, DiffPoly::constant(-i), {}, {}});
        p.L.add(1, Mat2{{}, {}, q_jet(), r_jet()});
        p.L.add(0, Mat2{{}, dnls_s().scaled(-i), {}, {}});
        int top = 2 * t.n + 2;
        for (int m = 0; m <= top; ++m) {
            const auto &e = t.entries[m];
            p.M.add(top - m, Mat2{{}, e.a, e.b, e.c});
        }
        // grade-0 closure term 2 beta a_{2n+2} sigma3
        p.M.add(0, Mat2{{}, DiffPoly::param("beta").scaled(GRat(2)) * t.entries[top].a,
                        {}, {}});
    }
    return p;
}

RewriteRules eom_rules(const EomPair &eom) {
    RewriteRules rules;
    rules.add_t_rule(field_q(), eom.q_t);
    rules.add_t_rule(field_r(), eom.r_t);
    return rules;
}

}  // namespace laxforge
