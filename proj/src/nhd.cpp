#include "laxforge/nhd.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace laxforge {

namespace {

bool constant_value(const DiffPoly &p, GRat &out) {
    if (p.size() != 1) return false;
    const Term &t = p.terms()[0];
    if (!t.params.is_unit() || !t.jets.is_unit()) return false;
    out = t.coeff;
    return true;
}

LoopElement with_param(const LoopElement &e, const std::string &name, const GRat &v) {
    LoopElement out;
    for (const auto &[g, m] : e.grades()) {
        Mat2 mm;
        mm.id = substitute_param(m.id, name, v);
        mm.s3 = substitute_param(m.s3, name, v);
        mm.sp = substitute_param(m.sp, name, v);
        mm.sm = substitute_param(m.sm, name, v);
        out.add(g, mm);
    }
    return out;
}

bool mentions(const DiffPoly &p, const std::string &field_name) {
    for (const JetVar &j : p.jet_support())
        if (j.field.name == field_name) return true;
    return false;
}

std::set<std::string> spec_names(const DeformationSpec &spec) {
    std::set<std::string> names;
    for (const auto &b : spec.blocks)
        for (const std::string &n : {b.diag, b.up, b.low, b.diag2})
            if (!n.empty()) names.insert(n);
    return names;
}

// Highest x-derivative among the jets of `rel` belonging to deformation
// fields.
bool leading_jet(const DiffPoly &rel, const std::set<std::string> &names, JetVar &out) {
    bool found = false;
    for (const JetVar &j : rel.jet_support()) {
        if (!names.count(j.field.name)) continue;
        if (!found || j.dx > out.dx) {
            out = j;
            found = true;
        }
    }
    return found;
}

// For a relation monic in its leading deformation jet, return that jet and
// the solved right-hand side, so jet == rhs restates rel == 0.
std::pair<JetVar, DiffPoly> solve_leading(const DiffPoly &rel, const std::set<std::string> &names) {
    JetVar lead;
    if (!leading_jet(rel, names, lead))
        throw std::logic_error("relation carries no deformation jet: " + rel.str());
    return {lead, DiffPoly::jet(lead) - rel};
}

// ---- the grade-by-grade split ----
//
// Curvature of (L, M + dM) is linear in the deformation fields, so every
// component away from the flow grade is a candidate first-order relation.
// Three patterns consume a component outright:
//   * all terms share one underived field with field-free cofactors:
//     that field must vanish;
//   * one field appears underived with a constant coefficient: solve for
//     it and substitute;
//   * the component is a lone constant multiple of s_x: s depends on t
//     only, and its x-jets drop.
// One action per pass, scanning grades from the top; the curvature is
// rebuilt after each action so later components see the update.

struct SymState {
    FieldSymbol current;
    DiffPoly value;
    bool forced_zero = false;
    bool forced_time = false;
};

class Splitter {
  public:
    Splitter(LaxPair base, DeformationSpec spec, std::string label)
        : base_(std::move(base)), spec_(std::move(spec)), label_(std::move(label)) {
        for (const auto &b : spec_.blocks)
            for (const std::string &n : {b.diag, b.up, b.low, b.diag2})
                if (!n.empty()) {
                    if (st_.count(n)) throw std::invalid_argument("duplicate deformation field " + n);
                    order_.push_back(n);
                    SymState s;
                    s.current = nhd_field(n);
                    s.value = DiffPoly::jet(s.current);
                    st_.emplace(n, std::move(s));
                }
    }

    NhdResult run() {
        find_flow_grade();
        EomPair eoms;
        LoopElement fred;
        for (int pass = 0;; ++pass) {
            if (pass > 64) throw std::logic_error("deformation forcing did not settle");
            LoopElement f = curvature(base_.L, base_.M + delta());
            eoms = extract_eoms(f);
            fred = f.reduced(eom_rules(eoms));
            if (!force_once(fred)) break;
        }
        return collect(std::move(eoms), fred);
    }

  private:
    LaxPair base_;
    DeformationSpec spec_;
    std::string label_;
    std::vector<std::string> order_;
    std::map<std::string, SymState> st_;
    int eom_grade_ = 0;

    DiffPoly val(const std::string &n) const {
        return n.empty() ? DiffPoly::zero() : st_.at(n).value;
    }

    LoopElement delta() const {
        LoopElement d;
        for (const auto &b : spec_.blocks) {
            Mat2 m;
            if (b.diag2.empty()) {
                m.s3 = val(b.diag);
            } else {
                // diagonal given per matrix entry
                DiffPoly d1 = val(b.diag), d2 = val(b.diag2);
                m.id = (d1 + d2).scaled(GRat::of(1, 2));
                m.s3 = (d1 - d2).scaled(GRat::of(1, 2));
            }
            m.sp = val(b.up);
            m.sm = val(b.low);
            d.add(b.grade, m.scaled(spec_.prefactor));
        }
        return d;
    }

    void find_flow_grade() {
        LoopElement f = curvature(base_.L, base_.M + delta());
        int found = 0;
        for (const auto &[g, m] : f.grades())
            if (m.sp.has_t_jets() || m.sm.has_t_jets()) {
                eom_grade_ = g;
                ++found;
            }
        if (found != 1) throw std::logic_error("expected exactly one flow grade in the residual");
    }

    static DiffPoly solve_t(const DiffPoly &res, const FieldSymbol &f) {
        JetVar tj(f, 0, 1);
        GRat cv;
        if (!constant_value(res.partial(tj), cv) || cv.is_zero())
            throw std::logic_error("flow residual is not linear in " + jet_key(tj));
        return DiffPoly::jet(tj) - res.scaled(cv.inverse());
    }

    EomPair extract_eoms(const LoopElement &f) const {
        const Mat2 *m = f.at(eom_grade_);
        if (!m) throw std::logic_error("flow grade vanished from the residual");
        EomPair e;
        e.q_t = solve_t(m->sp, field_q());
        e.r_t = solve_t(m->sm, field_r());
        e.label = label_;
        return e;
    }

    // Components of one grade in reporting order; entry basis when the
    // block declares a second diagonal.
    std::vector<std::pair<std::string, DiffPoly>> components_at(int g, const Mat2 &m) const {
        const GradeBlock *blk = nullptr;
        for (const auto &b : spec_.blocks)
            if (b.grade == g) blk = &b;
        std::vector<std::pair<std::string, DiffPoly>> out;
        if (blk && !blk->diag2.empty()) {
            out.emplace_back("11", m.id + m.s3);
            out.emplace_back("22", m.id - m.s3);
        } else {
            out.emplace_back("s3", m.s3);
            if (!m.id.is_zero()) out.emplace_back("id", m.id);
        }
        out.emplace_back("s+", m.sp);
        out.emplace_back("s-", m.sm);
        return out;
    }

    bool is_symbol_field(const std::string &name) const { return st_.count(name) > 0; }

    bool force_once(const LoopElement &f) {
        const auto &gr = f.grades();
        for (auto it = gr.rbegin(); it != gr.rend(); ++it)
            for (const auto &[tag, p] : components_at(it->first, it->second)) {
                (void)tag;
                if (p.is_zero() || p.has_t_jets()) continue;
                if (try_zero(p) || try_subst(p) || try_time(p)) return true;
            }
        return false;
    }

    bool try_zero(const DiffPoly &p) {
        for (const std::string &n : order_) {
            SymState &s = st_[n];
            if (s.forced_zero) continue;
            JetVar bare(s.current, 0, 0);
            bool all = true;
            for (const Term &t : p.terms()) {
                bool has = false, other = false;
                for (const auto &[j, e] : t.jets.factors()) {
                    if (j == bare && e == 1) has = true;
                    else if (is_symbol_field(j.field.name)) other = true;
                }
                if (!has || other) {
                    all = false;
                    break;
                }
            }
            if (all) {
                force_zero(n);
                return true;
            }
        }
        return false;
    }

    bool try_subst(const DiffPoly &p) {
        // Only purely algebraic relations may be solved; a component that
        // differentiates any deformation field is a constraint, not a solve.
        for (const JetVar &j : p.jet_support())
            if (is_symbol_field(j.field.name) && (j.dx > 0 || j.dt > 0)) return false;
        for (const std::string &n : order_) {
            SymState &s = st_[n];
            if (s.forced_zero || s.forced_time) continue;
            JetVar bare(s.current, 0, 0);
            GRat cv;
            if (!constant_value(p.partial(bare), cv) || cv.is_zero()) continue;
            DiffPoly rest = p - DiffPoly::jet(bare).scaled(cv);
            if (mentions(rest, n)) continue;
            force_value(n, rest.scaled(-(cv.inverse())));
            return true;
        }
        return false;
    }

    bool try_time(const DiffPoly &p) {
        if (p.size() != 1) return false;
        const Term &t = p.terms()[0];
        if (!t.params.is_unit()) return false;
        const auto &fs = t.jets.factors();
        if (fs.size() != 1 || fs[0].second != 1) return false;
        const JetVar &j = fs[0].first;
        if (j.dx != 1 || j.dt != 0) return false;
        auto it = st_.find(j.field.name);
        if (it == st_.end() || it->second.forced_zero || it->second.forced_time) return false;
        if (!(j.field == it->second.current)) return false;
        force_time(j.field.name);
        return true;
    }

    void propagate(const std::string &n, const FieldSymbol &old, const DiffPoly &repl) {
        for (auto &[k, o] : st_)
            if (k != n) o.value = o.value.substitute_field(old, repl);
    }

    void force_zero(const std::string &n) {
        SymState &s = st_[n];
        FieldSymbol old = s.current;
        s.forced_zero = true;
        s.value = DiffPoly::zero();
        propagate(n, old, s.value);
    }

    void force_time(const std::string &n) {
        SymState &s = st_[n];
        FieldSymbol old = s.current;
        s.current = FieldSymbol{n, Parity::Even, true};
        s.forced_time = true;
        s.value = DiffPoly::jet(s.current);
        propagate(n, old, s.value);
    }

    void force_value(const std::string &n, DiffPoly v) {
        SymState &s = st_[n];
        FieldSymbol old = s.current;
        s.value = std::move(v);
        propagate(n, old, s.value);
    }

    DiffPoly monic(const DiffPoly &p) const {
        JetVar lead;
        bool found = false;
        for (const JetVar &j : p.jet_support())
            if (is_symbol_field(j.field.name) && (!found || j.dx > lead.dx)) {
                lead = j;
                found = true;
            }
        if (!found) return p;
        GRat cv;
        if (!constant_value(p.partial(lead), cv) || cv.is_zero()) return p;
        return p.scaled(cv.inverse());
    }

    NhdResult collect(EomPair eoms, const LoopElement &fred) {
        NhdResult r;
        r.pair = LaxPair{base_.L, base_.M + delta()};
        r.spec = spec_;
        r.deformed_eoms = std::move(eoms);
        r.eom_grade = eom_grade_;
        const auto &gr = fred.grades();
        for (auto it = gr.rbegin(); it != gr.rend(); ++it)
            for (const auto &[tag, p] : components_at(it->first, it->second)) {
                if (p.is_zero()) continue;
                bool symbolic = false;
                for (const JetVar &j : p.jet_support())
                    if (is_symbol_field(j.field.name)) symbolic = true;
                if (it->first > eom_grade_ || !symbolic) {
                    std::ostringstream os;
                    os << "irreducible residual at lambda^" << it->first << " (" << tag
                       << "): " << p.str();
                    throw PositiveGradeResidual(os.str());
                }
                r.constraints.push_back(Constraint{it->first, tag, monic(p)});
            }
        for (const std::string &n : order_) {
            const SymState &s = st_.at(n);
            if (s.value.is_zero()) r.vanishing.push_back(n);
            else if (s.forced_time) r.time_only.push_back(s.current);
            else r.active.push_back(s.current);
        }
        return r;
    }
};

// Off-diagonal constraint rows carry the next diagonal as +2*diag*q and
// -2*diag*r. Multiplying the differentiated upper row by r and the lower
// row by q_x cancels the underived diagonal without dividing by a field;
// the diagonal's own derivative is then replaced through its constraint.
DiffPoly pair_combination(const DiffPoly &up, const DiffPoly &low) {
    return DiffPoly::jet(field_r()) * up.d_x() + DiffPoly::jet(field_q(), 1) * low;
}

}  // namespace

FieldSymbol nhd_field(const std::string &name) {
    return FieldSymbol{name, Parity::Even, false};
}

FieldSymbol NhdResult::symbol(const std::string &name) const {
    for (const FieldSymbol &f : time_only)
        if (f.name == name) return f;
    for (const FieldSymbol &f : active)
        if (f.name == name) return f;
    return nhd_field(name);
}

NhdResult split_orders(const LaxPair &pair, const DeformationSpec &spec) {
    return Splitter(pair, spec, "nhd").run();
}

ReducedConstraints reduce_constraints(const NhdResult &r) {
    std::set<std::string> names = spec_names(r.spec);
    RewriteRules diag;
    std::vector<std::string> diag_fields;
    for (const Constraint &c : r.constraints)
        if (c.component == "s3" || c.component == "11") {
            auto [jv, rhs] = solve_leading(c.relation, names);
            diag.add_x_rule(jv.field, jv.dx, rhs);
            diag_fields.push_back(jv.field.name);
        }

    std::map<int, std::pair<DiffPoly, DiffPoly>, std::greater<int>> pairs;
    std::map<int, int> seen;
    for (const Constraint &c : r.constraints) {
        if (c.component == "s+") {
            pairs[c.grade].first = c.relation;
            seen[c.grade] |= 1;
        } else if (c.component == "s-") {
            pairs[c.grade].second = c.relation;
            seen[c.grade] |= 2;
        }
    }

    ReducedConstraints out;
    for (const auto &[g, pq] : pairs) {
        if (seen[g] != 3) continue;
        DiffPoly comb = diag.reduce(pair_combination(pq.first, pq.second));
        for (const std::string &dn : diag_fields)
            if (mentions(comb, dn))
                throw NotReducible("eliminating " + dn + " would require dividing by a field");
        out.relations.push_back(Constraint{g, "pair", comb});
    }
    out.notes.push_back(
        "per grade: r d_x(upper row) + q_x (lower row), diagonal derivatives replaced "
        "through their own constraints");
    return out;
}

EliminationResult eliminate_deformers(const NhdResult &r) {
    EliminationResult out;
    std::set<std::string> names = spec_names(r.spec);
    if (r.active.empty() && r.time_only.empty()) {
        out.notes.push_back("no deformation fields survive; the relation collapses to 0 = 0");
        return out;
    }
    ReducedConstraints rc = reduce_constraints(r);
    if (rc.relations.empty()) {
        out.notes.push_back("no off-diagonal constraint pair to eliminate into; 0 = 0");
        return out;
    }

    // Flow-grade off-diagonal fields come out of the equations of motion:
    // q_t - rhs|_{field=0} is the residual the field equals up to a constant
    // factor.
    std::vector<std::pair<FieldSymbol, DiffPoly>> subs;
    std::set<std::string> solved;
    auto solve_from_eom = [&](const DiffPoly &rhs, const JetVar &tj, const std::string &n) {
        FieldSymbol f = nhd_field(n);
        GRat cv;
        if (!constant_value(rhs.partial(JetVar(f, 0, 0)), cv) || cv.is_zero()) return;
        DiffPoly rhs0 = rhs.substitute_field(f, DiffPoly::zero());
        subs.emplace_back(f, (DiffPoly::jet(tj) - rhs0).scaled(cv.inverse()));
        solved.insert(n);
    };
    for (const auto &b : r.spec.blocks) {
        if (b.up.empty() || solved.count(b.up)) continue;
        if (!mentions(r.deformed_eoms.q_t, b.up)) continue;
        solve_from_eom(r.deformed_eoms.q_t, JetVar(field_q(), 0, 1), b.up);
        solve_from_eom(r.deformed_eoms.r_t, JetVar(field_r(), 0, 1), b.low);
        break;
    }
    if (solved.empty()) {
        out.notes.push_back("no deformation field enters the equations of motion; nothing to eliminate");
        return out;
    }

    // Deeper off-diagonal fields come out of the shallower constraints when
    // they sit there underived with constant coefficients.
    for (const Constraint &c : r.constraints) {
        if (c.component != "s+" && c.component != "s-") continue;
        for (const JetVar &j : c.relation.jet_support()) {
            if (j.dx != 0 || j.dt != 0) continue;
            if (!names.count(j.field.name) || solved.count(j.field.name)) continue;
            GRat cv;
            if (!constant_value(c.relation.partial(j), cv) || cv.is_zero()) continue;
            DiffPoly rest = c.relation - DiffPoly::jet(j).scaled(cv);
            if (mentions(rest, j.field.name)) continue;
            subs.emplace_back(j.field, rest.scaled(-(cv.inverse())));
            solved.insert(j.field.name);
        }
    }

    // Deepest reduced relation, deeper substitutions first.
    DiffPoly eq = rc.relations.back().relation;
    for (auto it = subs.rbegin(); it != subs.rend(); ++it)
        eq = eq.substitute_field(it->first, it->second);

    RewriteRules diag;
    for (const Constraint &c : r.constraints)
        if (c.component == "s3" || c.component == "11") {
            auto [jv, rhs] = solve_leading(c.relation, names);
            for (auto it = subs.rbegin(); it != subs.rend(); ++it)
                rhs = rhs.substitute_field(it->first, it->second);
            diag.add_x_rule(jv.field, jv.dx, rhs);
        }
    eq = diag.reduce(eq);

    out.equation = eq;
    out.order = eq.max_dx();
    for (const auto &b : r.spec.blocks)
        if (!b.diag.empty() && mentions(eq, b.diag))
            out.notes.push_back("the field " + b.diag +
                                " survives underived: the constraints fix only its derivative");
    return out;
}

NhdResult nls_nhd(int flow_n, int depth) {
    if (flow_n < 1) throw std::invalid_argument("flow order must be positive");
    if (depth < 0 || depth > 2) throw std::invalid_argument("deformation depth must be 0, 1 or 2");
    LaxPair lax = build_lax(nls_coeffs(flow_n));
    lax.M = with_param(lax.M, "alpha", GRat::imag(-1, 1));
    DeformationSpec ds;
    ds.prefactor = GRat::imag(1, 2);
    if (depth >= 1) ds.blocks.push_back(GradeBlock{-1, "a", "g1", "g2", ""});
    if (depth >= 2) ds.blocks.push_back(GradeBlock{-2, "b", "f1", "f2", ""});
    NhdResult r = Splitter(lax, ds, "nls n=" + std::to_string(flow_n) + " nhd " + std::to_string(depth)).run();
    r.notes.push_back("alpha fixed to -i so the flow takes its standard form");
    return r;
}

NhdResult kn_nhd() {
    GRat beta = GRat::of(-1, 2);
    LaxPair lax = build_lax(dnls_coeffs(1));
    lax.L = with_param(lax.L, "beta", beta);
    lax.M = with_param(lax.M, "beta", beta).scaled(DiffPoly::constant(GRat::of(1, 2)));
    DeformationSpec ds;
    ds.prefactor = GRat::i();
    ds.blocks = {GradeBlock{0, "w", "m1", "m2", ""}, GradeBlock{-1, "a", "g1", "g2", ""},
                 GradeBlock{-2, "b", "f1", "f2", ""}};
    NhdResult r = Splitter(lax, ds, "kn nhd").run();
    r.notes.push_back("temporal element halved so the flow matches the first Kaup-Newell form");
    r.resolution = Resolution::Resolved;
    for (const Constraint &c : r.constraints) {
        if (c.component != "s+" && c.component != "s-") continue;
        auto [jv, rhs] = solve_leading(c.relation, spec_names(ds));
        if (mentions(rhs, jv.field.name)) r.resolution = Resolution::NotResolvable;
    }
    return r;
}

EomPair kn_resolve(const NhdResult &r) {
    std::set<std::string> names = spec_names(r.spec);
    FieldSymbol u{"u", Parity::Even, false}, v{"v", Parity::Even, false};
    auto potentials = [&](DiffPoly p) {
        p = substitute_jet(p, JetVar(field_q(), 0, 1), DiffPoly::jet(u, 1, 1));
        p = substitute_jet(p, JetVar(field_r(), 0, 1), DiffPoly::jet(v, 1, 1));
        p = p.substitute_field(field_q(), DiffPoly::jet(u, 1));
        return p.substitute_field(field_r(), DiffPoly::jet(v, 1));
    };

    // x-integrate the off-diagonal constraints, then the diagonal one; with
    // q = u_x, r = v_x every right-hand side becomes exact. Off-diagonal
    // integration constants are dropped; the diagonal keeps a free K(t).
    std::map<std::string, DiffPoly> sol;
    for (const Constraint &c : r.constraints) {
        if (c.component != "s+" && c.component != "s-") continue;
        auto [jv, rhs] = solve_leading(c.relation, names);
        if (mentions(rhs, jv.field.name))
            throw NotReducible("constraint for " + jv.field.name +
                               " feeds back on itself and has no potential form");
        sol[jv.field.name] = potentials(rhs).integrate_x();
    }
    for (const Constraint &c : r.constraints) {
        if (c.component != "s3" && c.component != "11") continue;
        auto [jv, rhs] = solve_leading(c.relation, names);
        DiffPoly rp = potentials(rhs);
        for (const auto &[n, e] : sol) rp = rp.substitute_field(nhd_field(n), e);
        sol[jv.field.name] =
            rp.integrate_x() + DiffPoly::jet(FieldSymbol{"K", Parity::Even, true});
    }

    auto close = [&](DiffPoly res) {
        res = potentials(std::move(res));
        for (const auto &[n, e] : sol) res = res.substitute_field(nhd_field(n), e);
        return res;
    };
    DiffPoly res_q = close(DiffPoly::jet(field_q(), 0, 1) - r.deformed_eoms.q_t);
    DiffPoly res_r = close(DiffPoly::jet(field_r(), 0, 1) - r.deformed_eoms.r_t);

    EomPair out;
    out.q_t = DiffPoly::jet(u, 1, 1) - res_q;
    out.r_t = DiffPoly::jet(v, 1, 1) - res_r;
    out.label = r.deformed_eoms.label + " potentials";
    out.notes.push_back("q = u_x, r = v_x; flows are for u_xt and v_xt");
    out.notes.push_back("off-diagonal integration constants set to zero; the diagonal keeps K(t)");
    return out;
}

NhdResult cll_nhd() {
    GRat beta = GRat::of(-1, 4);
    // The spatial element gains an identity block at grade 0 so its lower
    // diagonal entry is (i/2) q r while the upper one stays zero.
    LoopElement l = with_param(build_lax(dnls_coeffs(1)).L, "beta", beta);
    Mat2 l0;
    l0.id = (DiffPoly::jet(field_q()) * DiffPoly::jet(field_r())).scaled(GRat::imag(1, 4));
    l.add(0, l0);

    // Temporal element: the order-2 tail down to grade 1, then a grade-0
    // block diag(0, -a_4); its trace part is what makes the pair close.
    CoeffTable t = dnls_coeffs(2);
    LoopElement m;
    for (int k = 0; k <= 3; ++k) {
        Mat2 mm;
        mm.s3 = substitute_param(t.entries[k].a, "beta", beta);
        mm.sp = substitute_param(t.entries[k].b, "beta", beta);
        mm.sm = substitute_param(t.entries[k].c, "beta", beta);
        m.add(4 - k, mm);
    }
    DiffPoly a4 = substitute_param(t.entries[4].a, "beta", beta);
    Mat2 g0;
    g0.s3 = a4.scaled(GRat::of(1, 2));
    g0.id = a4.scaled(GRat::of(-1, 2));
    m.add(0, g0);

    DeformationSpec ds;
    ds.prefactor = GRat::i();
    ds.blocks = {GradeBlock{0, "w1", "m1", "m2", "w2"}, GradeBlock{-1, "a", "g1", "g2", ""},
                 GradeBlock{-2, "b", "f1", "f2", ""}};
    NhdResult r = Splitter(LaxPair{l, m}, ds, "cll nhd").run();
    r.notes.push_back(
        "source prints the r flow with a garbled second-derivative term; read as "
        "r_t = -i r_xx + r r_x q + 2 g2 - 2 i r w");
    r.notes.push_back(
        "the identity parts of the pair force an independent (2,2) diagonal entry w2(t); "
        "the single w of the source is the (1,1) entry, and its constraint carries no i");
    r.resolution = Resolution::Resolved;
    std::set<std::string> names = spec_names(ds);
    for (const Constraint &c : r.constraints) {
        if (c.component != "s+" && c.component != "s-") continue;
        auto [jv, rhs] = solve_leading(c.relation, names);
        if (mentions(rhs, jv.field.name)) {
            r.resolution = Resolution::NotResolvable;
            r.notes.push_back("not resolvable in potentials: the relation for " + jv.field.name +
                              " feeds back on itself through the q r term");
        }
    }
    return r;
}

RewriteRules nhd_rules(const NhdResult &r) {
    RewriteRules rules = eom_rules(r.deformed_eoms);
    std::set<std::string> names = spec_names(r.spec);
    for (const Constraint &c : r.constraints) {
        auto [jv, rhs] = solve_leading(c.relation, names);
        rules.add_x_rule(jv.field, jv.dx, rhs);
    }
    return rules;
}

}  // namespace laxforge
