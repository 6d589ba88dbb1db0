#ifndef LAXFORGE_RENDER_HPP
#define LAXFORGE_RENDER_HPP

// Output forms shared by the command line tool: a JSON term-list for
// polynomials that round-trips exactly, JSON views of graded elements and
// per-module reports, and LaTeX for equations and tables.

#include <string>

#include "json.hpp"

#include "laxforge/diffpoly.hpp"
#include "laxforge/hierarchy.hpp"
#include "laxforge/loop.hpp"
#include "laxforge/nhd.hpp"
#include "laxforge/quasi.hpp"

namespace laxforge {

using Json = nlohmann::ordered_json;

// {"re": "...", "im": "..."} with exact rational strings.
Json grat_json(const GRat &c);
GRat grat_from_json(const Json &j);

// Term list [{coeff, params, jets}, ...]; params carry possibly
// half-integer exponents as [name, num, den], jets carry the full field
// symbol so the polynomial reconstructs without a symbol table.
Json poly_json(const DiffPoly &p);
DiffPoly poly_from_json(const Json &j);

// [{grade, basis, poly}, ...] for the nonzero components, basis one of
// id, s3, s+, s- (matrix form) or b, F1, F2 (abstract form).
Json loop_json(const LoopElement &e);
Json loop_json(const AbsElement &e);

// Report views; polynomials appear in the canonical text form.
Json eom_json(const EomPair &e);
Json hierarchy_json(const CoeffTable &t, const EomPair &eom);
Json qid_json(const QidResult &qr, const std::vector<OrderVerdict> &verdicts);
Json abelianization_json(const AbelianizationTable &t);
Json nhd_json(const NhdResult &r, const ReducedConstraints &rc,
              const EliminationResult &el);

std::string latex(const GRat &c);
std::string latex(const DiffPoly &p);
std::string latex(const EomPair &e);

}  // namespace laxforge

#endif
