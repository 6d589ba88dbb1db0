#ifndef LAXFORGE_REWRITE_HPP
#define LAXFORGE_REWRITE_HPP

// Jet rewrite rules: evolutionary t-rules (f_t = rhs) and x-rules
// (d_x^base f = rhs), applied repeatedly until no rule matches. Used to
// impose equations of motion on curvature residuals and to eliminate
// deformation fields from constraint sets.

#include <map>
#include <string>

#include "laxforge/diffpoly.hpp"

namespace laxforge {

// Replace every occurrence of one exact jet variable by a polynomial.
DiffPoly substitute_jet(const DiffPoly &p, const JetVar &j, const DiffPoly &repl);

class RewriteRules {
  public:
    // f_t = rhs; rhs must not contain t-jets of f.
    void add_t_rule(const FieldSymbol &f, DiffPoly rhs);
    // d_x^base f = rhs; rhs must not contain jets of f with dx >= base.
    void add_x_rule(const FieldSymbol &f, int base_dx, DiffPoly rhs);

    bool has_t_rule(const std::string &field_name) const { return t_.count(field_name) > 0; }
    bool has_x_rule(const std::string &field_name) const { return x_.count(field_name) > 0; }

    // Apply all rules to a fixed point. Mixed jets reduce through
    // jet(f,dx,dt) = d_x^dx d_t^{dt-1}(rhs_t) and
    // jet(f,dx,dt) = d_t^dt d_x^{dx-base}(rhs_x).
    DiffPoly reduce(DiffPoly p) const;

  private:
    struct TRule { FieldSymbol f; DiffPoly rhs; };
    struct XRule { FieldSymbol f; int base; DiffPoly rhs; };
    std::map<std::string, TRule> t_;
    std::map<std::string, XRule> x_;
};

}  // namespace laxforge

#endif
