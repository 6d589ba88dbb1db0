#include "laxforge/rewrite.hpp"

#include <stdexcept>

namespace laxforge {

DiffPoly substitute_jet(const DiffPoly &p, const JetVar &j, const DiffPoly &repl) {
    DiffPoly acc;
    for (const auto &t : p.terms()) {
        DiffPoly prod = DiffPoly::term(t.coeff, t.params, JetMono::unit());
        for (const auto &[jv, e] : t.jets.factors()) {
            if (jv == j) prod = prod * repl.pow(e);
            else prod = prod * DiffPoly::jet(jv).pow(e);
        }
        acc += prod;
    }
    return acc;
}

void RewriteRules::add_t_rule(const FieldSymbol &f, DiffPoly rhs) {
    for (const auto &jv : rhs.jet_support())
        if (jv.field.name == f.name && jv.dt > 0)
            throw std::invalid_argument("t-rule rhs recurses on " + f.name);
    t_[f.name] = TRule{f, std::move(rhs)};
}

void RewriteRules::add_x_rule(const FieldSymbol &f, int base_dx, DiffPoly rhs) {
    if (base_dx < 0) throw std::invalid_argument("x-rule base must be non-negative");
    for (const auto &jv : rhs.jet_support())
        if (jv.field.name == f.name && jv.dx >= base_dx)
            throw std::invalid_argument("x-rule rhs recurses on " + f.name);
    x_[f.name] = XRule{f, base_dx, std::move(rhs)};
}

DiffPoly RewriteRules::reduce(DiffPoly p) const {
    const int cap = 100000;
    for (int pass = 0; pass < cap; ++pass) {
        bool applied = false;
        for (const auto &jv : p.jet_support()) {
            auto ti = t_.find(jv.field.name);
            if (jv.dt >= 1 && ti != t_.end()) {
                DiffPoly repl = ti->second.rhs;
                for (int k = 1; k < jv.dt; ++k) repl = repl.d_t();
                repl = repl.d_x(jv.dx);
                p = substitute_jet(p, jv, repl);
                applied = true;
                break;
            }
            auto xi = x_.find(jv.field.name);
            if (xi != x_.end() && jv.dx >= xi->second.base) {
                DiffPoly repl = xi->second.rhs.d_x(jv.dx - xi->second.base);
                for (int k = 0; k < jv.dt; ++k) repl = repl.d_t();
                p = substitute_jet(p, jv, repl);
                applied = true;
                break;
            }
        }
        if (!applied) return p;
    }
    throw std::logic_error("rewrite did not reach a fixed point");
}

}  // namespace laxforge
