#ifndef LAXFORGE_NHD_HPP
#define LAXFORGE_NHD_HPP

// Non-holonomic deformations: a hierarchy flow M is perturbed by a tail of
// negative lambda grades (plus a grade-0 block for the derivative family)
// carrying fresh deformation fields. Zero curvature then splits order by
// order into deformed equations of motion at the flow grade and first-order
// differential constraints on the deformation fields at the remaining
// grades. Components that force a field to vanish or to depend on t alone
// are consumed while the split runs; what survives is reported.

#include <stdexcept>
#include <string>
#include <vector>

#include "laxforge/hierarchy.hpp"
#include "laxforge/loop.hpp"

namespace laxforge {

// A grade residual that neither vanishes nor determines any deformation
// field; the undeformed pair was already inconsistent.
struct PositiveGradeResidual : std::runtime_error {
    explicit PositiveGradeResidual(const std::string &m) : std::runtime_error(m) {}
};

// Eliminating a diagonal field would require dividing by a field symbol.
struct NotReducible : std::runtime_error {
    explicit NotReducible(const std::string &m) : std::runtime_error(m) {}
};

// One lambda grade of the deformation, named by component symbols. Empty
// names mean the component is absent. A non-empty `diag2` switches the
// diagonal to matrix-entry form: `diag` is then the (1,1) entry and `diag2`
// the (2,2) entry, and diagonal constraints are reported per entry.
struct GradeBlock {
    int grade = 0;
    std::string diag, up, low;
    std::string diag2;
};

struct DeformationSpec {
    std::vector<GradeBlock> blocks;
    GRat prefactor = GRat(1);
};

// relation == 0, normalized so the highest-derivative deformation jet has
// unit coefficient. `component` is one of s3, s+, s-, 11, 22.
struct Constraint {
    int grade = 0;
    std::string component;
    DiffPoly relation;
};

enum class Resolution { NotAttempted, Resolved, NotResolvable };

struct NhdResult {
    LaxPair pair;  // L and the deformed M with forced fields substituted out
    DeformationSpec spec;
    EomPair deformed_eoms;
    int eom_grade = 0;
    std::vector<Constraint> constraints;
    std::vector<std::string> vanishing;   // fields forced to zero
    std::vector<FieldSymbol> time_only;   // fields forced to b = b(t) form
    std::vector<FieldSymbol> active;      // surviving x-dependent fields
    Resolution resolution = Resolution::NotAttempted;
    std::vector<std::string> notes;

    // Symbol a field name ended up as (time-only fields change identity).
    FieldSymbol symbol(const std::string &name) const;
};

// Deformation field factory; all deformation fields are even and ordinary
// until the split forces them to time-only form.
FieldSymbol nhd_field(const std::string &name);

// Grade-by-grade split of curvature(L, M + dM). Throws PositiveGradeResidual
// when a residual above the flow grade survives the forcing pass.
NhdResult split_orders(const LaxPair &pair, const DeformationSpec &spec);

struct ReducedConstraints {
    // One relation per grade carrying an off-diagonal pair, with every
    // diagonal deformation field eliminated through its own constraint.
    std::vector<Constraint> relations;
    std::vector<std::string> notes;
};
ReducedConstraints reduce_constraints(const NhdResult &r);

struct EliminationResult {
    DiffPoly equation;  // single higher-order equation in q, r and their jets
    int order = 0;      // highest x-derivative appearing
    std::vector<std::string> notes;
};
// Substitutes the deformation fields by the equation-of-motion residuals
// (and, for deeper tails, by the shallower constraint solutions) into the
// deepest reduced relation. Zero deformation collapses to 0 = 0.
EliminationResult eliminate_deformers(const NhdResult &r);

// AKNS family: flow `flow_n` (2 = NLS, 3 = coupled KdV) at alpha = -i,
// deformed by `depth` negative grades, each carrying (a, g1, g2)-type
// blocks. depth 1 gives the fourth-order eliminated equation, depth 2 the
// fifth-order one with the same equations of motion.
NhdResult nls_nhd(int flow_n, int depth);

// Kaup-Newell flow (beta = -1/2, half-normalized so the equations of motion
// take the standard form), deformed at grades {0, -1, -2}.
NhdResult kn_nhd();

// Integrates the Kaup-Newell constraints in potential variables q = u_x,
// r = v_x and returns the closed system for u, v.
EomPair kn_resolve(const NhdResult &r);

// Chen-Lee-Liu flow (beta = -1/4, including the identity parts of the pair),
// deformed at grades {0, -1, -2}; the constraint integration that closes
// the Kaup-Newell case fails here, and the result records why.
NhdResult cll_nhd();

// t-rules from the deformed equations of motion plus x-rules from the
// constraints; imposing them makes curvature(pair) vanish identically.
RewriteRules nhd_rules(const NhdResult &r);

}  // namespace laxforge

#endif
