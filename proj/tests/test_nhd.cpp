#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>

#include "laxforge/hierarchy.hpp"
#include "laxforge/nhd.hpp"

using namespace laxforge;

namespace {

DiffPoly PP(const std::string &s, std::vector<FieldSymbol> fs) {
    fs.push_back(field_q());
    fs.push_back(field_r());
    return parse_poly(s, fs);
}

bool has_field(const DiffPoly &p, const std::string &name) {
    for (const JetVar &j : p.jet_support())
        if (j.field.name == name) return true;
    return false;
}

bool notes_contain(const std::vector<std::string> &notes, const std::string &piece) {
    for (const auto &n : notes)
        if (n.find(piece) != std::string::npos) return true;
    return false;
}

// The deformed pair must be flat once the deformed flow and every
// constraint are imposed, identity component included.
void check_closed(const NhdResult &r) {
    RewriteRules rules = nhd_rules(r);
    LoopElement Fred = curvature(r.pair.L, r.pair.M).reduced(rules);
    INFO("reduced deformed curvature: ", Fred.str());
    CHECK(Fred.is_zero());

    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 10; ++it) {
        JetSample s;
        s.params["alpha"] = {u(rng), u(rng)};
        s.params["beta"] = {u(rng), u(rng)};
        for (const auto &f : {field_q(), field_r()})
            for (int dx = 0; dx <= 16; ++dx)
                s.jets[jet_key(JetVar(f, dx, 0))] = {u(rng), u(rng)};
        for (const FieldSymbol &f : r.active)
            for (int dx = 0; dx <= 16; ++dx)
                s.jets[jet_key(JetVar(f, dx, 0))] = {u(rng), u(rng)};
        for (const FieldSymbol &f : r.time_only)
            s.jets[jet_key(JetVar(f, 0, 0))] = {u(rng), u(rng)};
        for (const auto &[grade, m] : Fred.grades()) {
            (void)grade;
            CHECK(std::abs(m.id.eval(s)) < 1e-10);
            CHECK(std::abs(m.s3.eval(s)) < 1e-10);
            CHECK(std::abs(m.sp.eval(s)) < 1e-10);
            CHECK(std::abs(m.sm.eval(s)) < 1e-10);
        }
    }
}

}  // namespace

TEST_CASE("nls flow with a single deforming layer") {
    NhdResult r = nls_nhd(2, 1);
    std::vector<FieldSymbol> fs = {r.symbol("a"), r.symbol("g1"), r.symbol("g2")};

    CHECK(r.eom_grade == 0);
    CHECK(r.deformed_eoms.label == "nls n=2 nhd 1");
    CHECK(r.deformed_eoms.q_t == PP("(1/2i)*q[xx] - (1i)*q^2*r - g1", fs));
    CHECK(r.deformed_eoms.r_t == PP("(-1/2i)*r[xx] + (1i)*q*r^2 + g2", fs));

    REQUIRE(r.constraints.size() == 3);
    CHECK(r.constraints[0].grade == -1);
    CHECK(r.constraints[0].component == "s3");
    CHECK(r.constraints[0].relation == PP("a[x] - q*g2 + r*g1", fs));
    CHECK(r.constraints[1].component == "s+");
    CHECK(r.constraints[1].relation == PP("g1[x] + (2)*a*q", fs));
    CHECK(r.constraints[2].component == "s-");
    CHECK(r.constraints[2].relation == PP("g2[x] - (2)*a*r", fs));

    CHECK(r.vanishing.empty());
    CHECK(r.time_only.empty());
    REQUIRE(r.active.size() == 3);
    CHECK(r.active[0].name == "a");
    CHECK_FALSE(r.active[0].time_only);
    CHECK(r.resolution == Resolution::NotAttempted);

    ReducedConstraints rc = reduce_constraints(r);
    REQUIRE(rc.relations.size() == 1);
    CHECK(rc.relations[0].grade == -1);
    CHECK(rc.relations[0].relation ==
          PP("r*g1[xx] + q[x]*g2[x] + (2)*q^2*r*g2 - (2)*q*r^2*g1", fs));

    EliminationResult el = eliminate_deformers(r);
    CHECK(el.order == 4);
    CHECK(el.equation ==
          PP("(-1)*r*q[xxt] + q[x]*r[xt] + (2)*q*r^2*q[t] + (2)*q^2*r*r[t]"
             " + (1/2i)*r*q[xxxx] + (1/2i)*q[x]*r[xxx]"
             " - (3i)*q[x]^2*r^2 - (3i)*q*r^2*q[xx] - (6i)*q*q[x]*r*r[x]",
             fs));
    CHECK_FALSE(has_field(el.equation, "g1"));
    CHECK_FALSE(has_field(el.equation, "g2"));
    CHECK_FALSE(has_field(el.equation, "a"));

    check_closed(r);
}

TEST_CASE("nls flow with two deforming layers keeps the deeper constraints") {
    NhdResult r1 = nls_nhd(2, 1);
    NhdResult r = nls_nhd(2, 2);
    std::vector<FieldSymbol> fs = {r.symbol("a"),  r.symbol("g1"), r.symbol("g2"),
                                   r.symbol("b"),  r.symbol("f1"), r.symbol("f2")};

    // The deeper layer never reaches the flow grade.
    CHECK(r.deformed_eoms.q_t == r1.deformed_eoms.q_t);
    CHECK(r.deformed_eoms.r_t == r1.deformed_eoms.r_t);

    REQUIRE(r.constraints.size() == 6);
    CHECK(r.constraints[0].grade == -1);
    CHECK(r.constraints[0].relation == PP("a[x] - q*g2 + r*g1", fs));
    CHECK(r.constraints[1].relation == PP("g1[x] + (2)*a*q + (2i)*f1", fs));
    CHECK(r.constraints[2].relation == PP("g2[x] - (2)*a*r - (2i)*f2", fs));
    CHECK(r.constraints[3].grade == -2);
    CHECK(r.constraints[3].component == "s3");
    CHECK(r.constraints[3].relation == PP("b[x] - q*f2 + r*f1", fs));
    CHECK(r.constraints[4].relation == PP("f1[x] + (2)*b*q", fs));
    CHECK(r.constraints[5].relation == PP("f2[x] - (2)*b*r", fs));

    CHECK(r.vanishing.empty());
    CHECK(r.time_only.empty());
    CHECK(r.active.size() == 6);

    ReducedConstraints rc = reduce_constraints(r);
    REQUIRE(rc.relations.size() == 2);
    CHECK(rc.relations[0].grade == -1);
    CHECK(rc.relations[0].relation ==
          PP("r*g1[xx] + q[x]*g2[x] + (2)*q^2*r*g2 - (2)*q*r^2*g1"
             " + (2i)*r*f1[x] - (2i)*q[x]*f2",
             fs));
    CHECK(rc.relations[1].grade == -2);
    CHECK(rc.relations[1].relation ==
          PP("r*f1[xx] + q[x]*f2[x] + (2)*q^2*r*f2 - (2)*q*r^2*f1", fs));

    EliminationResult el = eliminate_deformers(r);
    CHECK(el.order == 5);
    CHECK(el.equation.max_dx() == 5);
    for (const char *gone : {"g1", "g2", "f1", "f2", "b"})
        CHECK_FALSE(has_field(el.equation, gone));
    // Only the derivative of the first diagonal field is fixed, so it
    // survives the elimination underived.
    CHECK(has_field(el.equation, "a"));
    CHECK(notes_contain(el.notes, "the field a survives underived"));

    check_closed(r);
}

TEST_CASE("third nls flow deformation mirrors the first-order structure") {
    NhdResult r = nls_nhd(3, 1);
    std::vector<FieldSymbol> fs = {r.symbol("a"), r.symbol("g1"), r.symbol("g2")};

    CHECK(r.deformed_eoms.q_t == PP("(-1/4)*q[xxx] + (3/2)*q*q[x]*r - g1", fs));
    EomPair base = nls_eom(3);
    CHECK(r.deformed_eoms.q_t ==
          substitute_param(base.q_t, "alpha", GRat::imag(-1, 1)) - PP("g1", fs));
    CHECK(r.deformed_eoms.r_t ==
          substitute_param(base.r_t, "alpha", GRat::imag(-1, 1)) + PP("g2", fs));

    // Same constraint triple as for the second flow: the deforming layer
    // only sees the spatial half of the pair.
    REQUIRE(r.constraints.size() == 3);
    CHECK(r.constraints[0].relation == PP("a[x] - q*g2 + r*g1", fs));
    CHECK(r.constraints[1].relation == PP("g1[x] + (2)*a*q", fs));
    CHECK(r.constraints[2].relation == PP("g2[x] - (2)*a*r", fs));

    ReducedConstraints rc = reduce_constraints(r);
    REQUIRE(rc.relations.size() == 1);
    CHECK(rc.relations[0].relation ==
          PP("r*g1[xx] + q[x]*g2[x] + (2)*q^2*r*g2 - (2)*q*r^2*g1", fs));

    EliminationResult el = eliminate_deformers(r);
    CHECK(el.order == 5);

    check_closed(r);
}

TEST_CASE("kaup-newell deformation forces the auxiliary layers") {
    NhdResult r = kn_nhd();
    std::vector<FieldSymbol> fs = {r.symbol("w"), r.symbol("g1"), r.symbol("g2"),
                                   r.symbol("b")};

    CHECK(r.eom_grade == 1);
    CHECK(r.deformed_eoms.label == "kn nhd");
    CHECK(r.deformed_eoms.q_t ==
          PP("(1/2i)*q[xx] + q*q[x]*r + (1/2)*q^2*r[x] - (2)*g1 + (2i)*q*w", fs));
    CHECK(r.deformed_eoms.r_t ==
          PP("(-1/2i)*r[xx] + q*r*r[x] + (1/2)*q[x]*r^2 + (2)*g2 - (2i)*r*w", fs));

    CHECK(r.vanishing == std::vector<std::string>{"m1", "m2", "a", "f1", "f2"});
    REQUIRE(r.time_only.size() == 1);
    CHECK(r.time_only[0].name == "b");
    CHECK(r.time_only[0].time_only);
    REQUIRE(r.active.size() == 3);
    CHECK(r.active[0].name == "w");
    CHECK_FALSE(r.active[0].time_only);

    REQUIRE(r.constraints.size() == 3);
    CHECK(r.constraints[0].grade == 0);
    CHECK(r.constraints[0].component == "s3");
    CHECK(r.constraints[0].relation == PP("w[x] - q*g2 + r*g1", fs));
    CHECK(r.constraints[1].grade == -1);
    CHECK(r.constraints[1].relation == PP("g1[x] + (2)*q*b", fs));
    CHECK(r.constraints[2].relation == PP("g2[x] - (2)*r*b", fs));

    CHECK(r.resolution == Resolution::Resolved);

    // The deepest diagonal only contributes its free function of time.
    const Mat2 *deep = r.pair.M.at(-2);
    REQUIRE(deep != nullptr);
    CHECK(deep->s3 == PP("(1i)*b", fs));
    CHECK(deep->sp.is_zero());
    CHECK(deep->sm.is_zero());

    ReducedConstraints rc = reduce_constraints(r);
    REQUIRE(rc.relations.size() == 1);
    CHECK(rc.relations[0].relation == PP("r*g1[xx] + q[x]*g2[x]", fs));

    check_closed(r);
}

TEST_CASE("kaup-newell resolution integrates to the potential equations") {
    NhdResult r = kn_nhd();
    EomPair pot = kn_resolve(r);

    FieldSymbol u = nhd_field("u"), v = nhd_field("v");
    FieldSymbol K{"K", Parity::Even, true};
    std::vector<FieldSymbol> fs = {u, v, K, r.symbol("b")};

    CHECK(pot.label == "kn nhd potentials");
    CHECK(pot.q_t ==
          PP("(1/2i)*u[xxx] + u[x]*u[xx]*v[x] + (1/2)*u[x]^2*v[xx]"
             " + (4)*b*u + (4i)*b*u*v*u[x] + (2i)*K*u[x]",
             fs));
    CHECK(pot.r_t ==
          PP("(-1/2i)*v[xxx] + u[x]*v[x]*v[xx] + (1/2)*u[xx]*v[x]^2"
             " + (4)*b*v - (4i)*b*u*v*v[x] - (2i)*K*v[x]",
             fs));
    CHECK(notes_contain(pot.notes, "q = u_x"));
    CHECK(notes_contain(pot.notes, "K(t)"));
}

TEST_CASE("chen-lee-liu deformation leaves a self-coupled constraint") {
    NhdResult r = cll_nhd();
    std::vector<FieldSymbol> fs = {r.symbol("w1"), r.symbol("w2"), r.symbol("g1"),
                                   r.symbol("g2"), r.symbol("b")};

    CHECK(r.eom_grade == 1);
    CHECK(r.deformed_eoms.q_t ==
          PP("(1i)*q[xx] + q*q[x]*r - (2)*g1 + (1i)*q*w1 - (1i)*q*w2", fs));
    CHECK(r.deformed_eoms.r_t ==
          PP("(-1i)*r[xx] + q*r*r[x] + (2)*g2 - (1i)*r*w1 + (1i)*r*w2", fs));

    CHECK(r.vanishing == std::vector<std::string>{"m1", "m2", "a", "f1", "f2"});
    REQUIRE(r.time_only.size() == 2);
    CHECK(r.time_only[0].name == "w2");
    CHECK(r.time_only[1].name == "b");
    REQUIRE(r.active.size() == 3);
    CHECK(r.active[0].name == "w1");

    REQUIRE(r.constraints.size() == 3);
    CHECK(r.constraints[0].grade == 0);
    CHECK(r.constraints[0].component == "11");
    CHECK(r.constraints[0].relation == PP("w1[x] - q*g2 + r*g1", fs));
    CHECK(r.constraints[1].component == "s+");
    CHECK(r.constraints[1].relation == PP("g1[x] + (2)*q*b + (1/2i)*q*r*g1", fs));
    CHECK(r.constraints[2].component == "s-");
    CHECK(r.constraints[2].relation == PP("g2[x] - (2)*r*b - (1/2i)*q*r*g2", fs));

    CHECK(r.resolution == Resolution::NotResolvable);
    CHECK(notes_contain(r.notes, "feeds back on itself"));
    CHECK_THROWS_AS((void)kn_resolve(r), NotReducible);

    ReducedConstraints rc = reduce_constraints(r);
    REQUIRE(rc.relations.size() == 1);
    CHECK(rc.relations[0].relation ==
          PP("r*g1[xx] + q[x]*g2[x] + (1/2i)*q[x]*r^2*g1 + (1/2i)*q*r*r[x]*g1"
             " + (1/2i)*q*r^2*g1[x] - (1/2i)*q*q[x]*r*g2",
             fs));
    CHECK_FALSE(has_field(rc.relations[0].relation, "b"));
    CHECK_FALSE(has_field(rc.relations[0].relation, "w1"));

    check_closed(r);
}

TEST_CASE("empty deformation degenerates to the plain flow") {
    NhdResult r = nls_nhd(2, 0);
    CHECK(r.constraints.empty());
    CHECK(r.active.empty());
    CHECK(r.deformed_eoms.q_t == PP("(1/2i)*q[xx] - (1i)*q^2*r", {}));
    CHECK(reduce_constraints(r).relations.empty());
    EliminationResult el = eliminate_deformers(r);
    CHECK(el.equation.is_zero());
    CHECK(el.order == 0);
    check_closed(r);
}

TEST_CASE("invalid input is rejected") {
    CHECK_THROWS_AS((void)nls_nhd(0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)nls_nhd(2, 3), std::invalid_argument);

    // A pair that is not flat above the flow grade cannot be split.
    LaxPair bad = build_lax(nls_coeffs(2));
    Mat2 junk;
    junk.sp = DiffPoly::jet(field_q());
    bad.M.add(1, junk);
    DeformationSpec ds;
    ds.prefactor = GRat::imag(1, 2);
    ds.blocks = {GradeBlock{-1, "a", "g1", "g2", ""}};
    CHECK_THROWS_AS((void)split_orders(bad, ds), PositiveGradeResidual);
}

TEST_CASE("diagonal fields that do not cancel stop the reduction") {
    FieldSymbol a = nhd_field("a"), g1 = nhd_field("g1"), g2 = nhd_field("g2");
    std::vector<FieldSymbol> fs = {a, g1, g2};
    NhdResult nr;
    nr.spec.blocks = {GradeBlock{-1, "a", "g1", "g2", ""}};
    nr.active = fs;
    nr.constraints = {Constraint{-1, "s3", PP("a[x] - q*g2 + r*g1", fs)},
                      Constraint{-1, "s+", PP("g1[x] + (3)*a*q", fs)},
                      Constraint{-1, "s-", PP("g2[x] - (2)*a*r", fs)}};
    CHECK_THROWS_AS((void)reduce_constraints(nr), NotReducible);
}
