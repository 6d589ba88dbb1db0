#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>

#include "laxforge/hierarchy.hpp"

using namespace laxforge;

namespace {

DiffPoly P(const std::string &s) { return parse_poly(s, {field_q(), field_r()}); }

JetSample random_sample(std::mt19937 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    JetSample s;
    s.params["alpha"] = {u(rng), u(rng)};
    s.params["beta"] = {u(rng), u(rng)};
    for (const auto &f : {field_q(), field_r()})
        for (int dx = 0; dx <= 16; ++dx)
            s.jets[jet_key(JetVar(f, dx, 0))] = {u(rng), u(rng)};
    return s;
}

// Zero curvature after imposing the flow, checked symbolically at every
// grade and then by random evaluation of the unreduced residual with the
// t-jets assigned numerically from the flow's right-hand side.
void check_zero_curvature(const LaxPair &lax, const EomPair &eom, int samples) {
    RewriteRules rules = eom_rules(eom);
    LoopElement F = curvature(lax.L, lax.M);
    LoopElement Fred = F.reduced(rules);
    INFO("reduced curvature: ", Fred.str());
    CHECK(Fred.is_zero());

    std::mt19937 rng(20240817);
    for (int it = 0; it < samples; ++it) {
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
            CHECK(std::abs(m.id.eval(s)) < 1e-10);
            CHECK(std::abs(m.s3.eval(s)) < 1e-10);
            CHECK(std::abs(m.sp.eval(s)) < 1e-10);
            CHECK(std::abs(m.sm.eval(s)) < 1e-10);
        }
    }
}

}  // namespace

TEST_CASE("nls coefficient table matches the closed forms") {
    CoeffTable t = nls_coeffs(3);
    REQUIRE(t.entries.size() == 5);

    CHECK(t.entries[0].a == P("alpha"));
    CHECK(t.entries[0].b.is_zero());
    CHECK(t.entries[0].c.is_zero());

    CHECK(t.entries[1].b == P("(1i)*alpha*q"));
    CHECK(t.entries[1].c == P("(1i)*alpha*r"));
    CHECK(t.entries[1].a.is_zero());

    CHECK(t.entries[2].b == P("(-1/2)*alpha*q[x]"));
    CHECK(t.entries[2].c == P("(1/2)*alpha*r[x]"));
    CHECK(t.entries[2].a == P("(1/2)*alpha*q*r"));

    CHECK(t.entries[3].b == P("(1i)*alpha*((-1/4)*q[xx] + (1/2)*q^2*r)"));
    CHECK(t.entries[3].c == P("(1i)*alpha*((-1/4)*r[xx] + (1/2)*q*r^2)"));
    CHECK(t.entries[3].a == P("(1/4i)*alpha*(r*q[x] - q*r[x])"));

    CHECK(t.entries[4].b == P("(1/8)*alpha*(q[xxx] - (6)*q*q[x]*r)"));
    CHECK(t.entries[4].c == P("(-1/8)*alpha*(r[xxx] - (6)*q*r*r[x])"));
    // a_4 is fixed by the diagonal relation a_4' = q c_4 - r b_4:
    // integrating the 6qr(qr)_x piece contributes 3(qr)^2.
    CHECK(t.entries[4].a ==
          P("(1/8)*alpha*((3)*q^2*r^2 + q[x]*r[x] - q*r[xx] - r*q[xx])"));
}

TEST_CASE("nls coefficients satisfy the diagonal relation by substitution") {
    CoeffTable t = nls_coeffs(4);
    for (std::size_t m = 0; m < t.entries.size(); ++m) {
        DiffPoly lhs = t.entries[m].a.d_x();
        DiffPoly rhs = P("q") * t.entries[m].c - P("r") * t.entries[m].b;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("nls equations of motion") {
    EomPair e1 = nls_eom(1);
    CHECK(e1.q_t == P("(1i)*alpha*q[x]"));
    CHECK(e1.r_t == P("(1i)*alpha*r[x]"));

    EomPair e2 = nls_eom(2);
    CHECK(e2.q_t == P("alpha*((-1/2)*q[xx] + q^2*r)"));
    CHECK(e2.r_t == P("alpha*((1/2)*r[xx] - q*r^2)"));

    EomPair e3 = nls_eom(3);
    CHECK(e3.q_t == P("(1i)*alpha*((-1/4)*q[xxx] + (3/2)*q*q[x]*r)"));
    CHECK(e3.r_t == P("(1i)*alpha*((-1/4)*r[xxx] + (3/2)*r*r[x]*q)"));
}

TEST_CASE("dnls coefficient table") {
    CoeffTable t = dnls_coeffs(1);
    REQUIRE(t.entries.size() == 5);

    CHECK(t.entries[0].a == P("(-2i)"));
    CHECK(t.entries[1].b == P("(2)*q"));
    CHECK(t.entries[1].c == P("(2)*r"));
    CHECK(t.entries[1].a.is_zero());
    CHECK(t.entries[2].a == P("(-1i)*q*r"));
    CHECK(t.entries[2].b.is_zero());
    CHECK(t.entries[2].c.is_zero());
    CHECK(t.entries[3].b == P("(1i)*q[x] - (2)*beta*q^2*r"));
    CHECK(t.entries[3].c == P("(-1i)*r[x] - (2)*beta*q*r^2"));
    CHECK(t.entries[3].a.is_zero());
    CHECK(t.entries[4].b.is_zero());
    CHECK(t.entries[4].c.is_zero());
    CHECK(t.entries[4].a ==
          P("(1/2)*r*q[x] - (1/2)*q*r[x] + (1/4i)*q^2*r^2 + (2i)*beta*q^2*r^2"));
}

TEST_CASE("dnls parity pattern and diagonal identity") {
    for (int n = 1; n <= 2; ++n) {
        CoeffTable t = dnls_coeffs(n);
        for (int m = 0; m < static_cast<int>(t.entries.size()); ++m) {
            if (m % 2 == 1) CHECK(t.entries[m].a.is_zero());
            if (m % 2 == 0 && m > 0) {
                CHECK(t.entries[m].b.is_zero());
                CHECK(t.entries[m].c.is_zero());
            }
        }
        // a_{m+1}' = (r s b_m - q s c_m) - (i/2)(q c_m' + r b_m')
        DiffPoly s = P("(1/2)*q*r + beta*q*r");
        for (int m = 0; m + 1 < static_cast<int>(t.entries.size()); ++m) {
            DiffPoly lhs = t.entries[m + 1].a.d_x();
            DiffPoly rhs = P("r") * s * t.entries[m].b - P("q") * s * t.entries[m].c -
                           (P("q") * t.entries[m].c.d_x() + P("r") * t.entries[m].b.d_x())
                               .scaled(GRat::imag(1, 2));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("dnls n=1 equation of motion and reductions") {
    EomPair e = dnls_eom(1);
    CHECK(e.q_t == P("(1i)*q[xx] - (4)*beta*q^2*r[x] - q^2*r[x] - (4)*beta*q*q[x]*r "
                     "+ (1/2i)*q^3*r^2 + (3i)*beta*q^3*r^2 + (4i)*beta^2*q^3*r^2"));
    CHECK(e.notes.size() == 2);

    EomPair kn = dnls_reduce(e, Rational(-1, 2));
    CHECK(kn.q_t == P("(1i)*q[xx] + q^2*r[x] + (2)*q*q[x]*r"));
    CHECK(kn.r_t == P("(-1i)*r[xx] + r^2*q[x] + (2)*r*r[x]*q"));
    CHECK(kn.label == "kn");

    EomPair cll = dnls_reduce(e, Rational(-1, 4));
    CHECK(cll.q_t == P("(1i)*q[xx] + q*q[x]*r"));
    CHECK(cll.r_t == P("(-1i)*r[xx] + r*r[x]*q"));

    EomPair gi = dnls_reduce(e, Rational(0));
    CHECK(gi.q_t == P("(1i)*q[xx] - q^2*r[x] + (1/2i)*q^3*r^2"));
    CHECK(gi.r_t == P("(-1i)*r[xx] - r^2*q[x] - (1/2i)*q^2*r^3"));
}

TEST_CASE("nls lax pair structure") {
    CoeffTable t = nls_coeffs(2);
    LaxPair lax = build_lax(t);
    CHECK(lax.L.grades().size() == 2);
    REQUIRE(lax.M.at(2) != nullptr);
    REQUIRE(lax.M.at(1) != nullptr);
    REQUIRE(lax.M.at(0) != nullptr);
    CHECK(lax.M.at(2)->s3 == P("alpha"));
    CHECK(lax.M.at(1)->sp == P("(1i)*alpha*q"));
    CHECK(lax.M.at(0)->s3 == P("(1/2)*alpha*q*r"));
    CHECK(lax.M.at(0)->sp == P("(-1/2)*alpha*q[x]"));
}

TEST_CASE("dnls lax pair structure") {
    CoeffTable t = dnls_coeffs(1);
    LaxPair lax = build_lax(t);
    REQUIRE(lax.L.at(2) != nullptr);
    CHECK(lax.L.at(2)->s3 == P("(-1i)"));
    CHECK(lax.L.at(1)->sp == P("q"));
    CHECK(lax.L.at(0)->s3 == P("(-1/2i)*q*r - (1i)*beta*q*r"));
    // grade-0 diagonal of M: (1+2beta) a_4
    DiffPoly want = (P("(1)") + P("(2)*beta")) * t.entries[4].a;
    CHECK(lax.M.at(0)->s3 == want);
}

TEST_CASE("zero curvature holds for nls flows up to n=6") {
    for (int n = 1; n <= 6; ++n) {
        CAPTURE(n);
        CoeffTable t = nls_coeffs(n);
        check_zero_curvature(build_lax(t), nls_eom(n), n <= 2 ? 100 : 5);
    }
}

TEST_CASE("zero curvature holds for dnls flows n=1,2") {
    for (int n = 1; n <= 2; ++n) {
        CAPTURE(n);
        CoeffTable t = dnls_coeffs(n);
        check_zero_curvature(build_lax(t), dnls_eom(n), n == 1 ? 100 : 20);
    }
}
