#ifndef LAXFORGE_QUASI_HPP
#define LAXFORGE_QUASI_HPP

// Quasi-integrable deformations. Two layers:
//
//  * Hamiltonian-driven deformation of the flow coefficients in the (q, r)
//    basis, with per-order anomaly densities and parity/total-derivative
//    verdicts.
//  * The abelianized charge machinery in the polar (phi, R) basis: grade by
//    grade rotation of the spatial Lax element into the diagonal subalgebra,
//    producing the xi tables, the anomaly-projection coefficients alpha and
//    the charge densities.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "laxforge/hierarchy.hpp"
#include "laxforge/loop.hpp"

namespace laxforge {

// Polar fields for the rotated frame: q = i kappa R e^{-i phi},
// r = -i R e^{i phi}, so qr = kappa R^2, phi flips under x -> -x and R does
// not. The exponential map itself never enters; everything downstream closes
// on polynomials in jets of phi and R with the parameter kappa.
inline const FieldSymbol &field_phi() {
    static const FieldSymbol f{"phi", Parity::Odd, false};
    return f;
}
inline const FieldSymbol &field_R() {
    static const FieldSymbol f{"R", Parity::Even, false};
    return f;
}

enum class RotatedFamily { NLS, KN };

// Spatial Lax element after the diagonal field rotation:
//   NLS:  -i b^1 + (i/2) phi_x b^0 + 2i R F1^0
//   KN :  -i b^2 + (i/2) phi_x b^1 + 2i R F1^1
AbsElement rotated_spatial_lax(RotatedFamily fam);

struct UnderdeterminedSystem : std::runtime_error {
    explicit UnderdeterminedSystem(const std::string &m) : std::runtime_error(m) {}
};

struct AbelianizationTable {
    RotatedFamily family = RotatedFamily::NLS;
    int depth = 0;
    // xi.comps[j-1] = (xi1^{-j}, xi2^{-j}), the F1/F2 components of the
    // generator that kills the off-diagonal part at relative depth j.
    GaugeGenerator xi;
    // b-coefficients of the fully conjugated spatial element, by grade.
    std::map<int, DiffPoly> charge_density;
    // b-coefficients of Ad_g(b^0), grades 0 .. -depth. These weight the
    // anomaly in each charge balance when the obstruction is diagonal.
    std::map<int, DiffPoly> alpha;
    // b-coefficients of Ad_g(F2^0); the analogous weights for an
    // obstruction along F2.
    std::map<int, DiffPoly> f2_response;
};

// Solve for xi grade by grade so that the conjugated spatial element is
// purely diagonal down to `depth` grades below the top, then read off the
// derived tables. Throws UnderdeterminedSystem if the top grade does not
// determine the per-grade updates uniquely.
AbelianizationTable abelianize(RotatedFamily fam, int depth);

// Shorthand for abelianize(fam, depth).charge_density.
std::map<int, DiffPoly> charges(RotatedFamily fam, int depth);

// Display form that folds kappa R^2 back into q r: in each term an
// undifferentiated even power R^{2k} backed by at least kappa^k absorbs k
// powers of kappa and prints as (q*r)^k. Purely cosmetic; comparisons stay
// in the (phi, R, kappa) basis.
std::string render_qr(const DiffPoly &p);

// ---------- Hamiltonian-driven deformation, (q, r) basis ----------

// Integrands of the first conserved functionals: qr; r q_x - q r_x;
// (1/2)(q_x r_x + q^2 r^2); q r_xxx - 3 q^2 r r_x. count <= 4.
std::vector<DiffPoly> nls_hamiltonians(int count);

struct QidSpec {
    int n = 0;
    std::vector<DiffPoly> hamiltonians;  // densities H_1..H_n
    std::vector<DiffPoly> beta;          // coupling in front of dH_m/dr
    std::vector<DiffPoly> gamma;         // coupling in front of dH_m/dq
    // Couplings at the values that reproduce the undeformed flows:
    // beta_m = gamma_m in (i alpha, -alpha/4, i alpha/2, -alpha/8).
    static QidSpec undeformed_nls(int n);
};

struct AnomalyOrder {
    int m = 0;      // Hamiltonian order
    int grade = 0;  // lambda-grade n - m where the diagonal residual sits
    DiffPoly density;
    ParityClass parity = ParityClass::Even;
    bool total_derivative = false;
};

struct AnomalyReport {
    std::vector<AnomalyOrder> orders;
    bool all_zero() const;
};

struct QidResult {
    std::vector<EomPair> eoms;  // deformed flow generated at each order m
    AnomalyReport report;
};

// Replace b_m -> beta_m dH_m/dr and c_m -> gamma_m dH_m/dq while keeping the
// diagonal coefficients at their recurrence values. The obstruction at order
// m is X_m = q gamma_m dH_m/dq - a_{m,x} - r beta_m dH_m/dr.
QidResult qid_deform(const CoeffTable &table, const QidSpec &spec);

enum class AnomalyVerdict { Zero, ParityOdd, ParityEven, Mixed };

struct OrderVerdict {
    int m = 0;
    AnomalyVerdict verdict = AnomalyVerdict::Zero;
    bool total_derivative = false;
};

std::vector<OrderVerdict> classify(const AnomalyReport &report);

// ---------- derivative-coupling deformation at the Lax level ----------

// Default Hamiltonian density i q_x r_x + (1/2) q^2 r^2, whose insertion
// reproduces the undeformed derivative-coupling system exactly.
DiffPoly kn_qid_default_hamiltonian();

struct KnQidReport {
    DiffPoly e_q, e_r;    // sigma+/sigma- residuals at lambda^1 (the flow)
    DiffPoly anomaly;     // sigma3 residual at lambda^2
    DiffPoly defect_plus;   // sigma+ residual at lambda^3
    DiffPoly defect_minus;  // sigma- residual at lambda^3
    std::vector<std::string> notes;
};

// Insert an arbitrary Hamiltonian density H(q, r, q_x, r_x) into the
// temporal element via b_3 -> i q_x + dH/dr + i q_xx, c_3 -> -i r_x + dH/dq
// + i r_xx, a_2 -> -(i/2) d/dq(dH/dr), and report every curvature component.
KnQidReport kn_qid(const DiffPoly &hamiltonian);
KnQidReport kn_qid();

// ---------- general even-hierarchy deformation with opaque slots ----------

// Placeholder fields standing for unspecified Hamiltonian data at order j:
// Hr_j ~ dH_j/dr, Hq_j ~ dH_j/dq, Z_j ~ combination entering the diagonal.
FieldSymbol dnls_qid_field_hr(int j);
FieldSymbol dnls_qid_field_hq(int j);
FieldSymbol dnls_qid_field_z(int j);

struct DnlsQidReport {
    int n = 0;
    EomPair eom;  // sigma+/- flow at lambda^1
    // Diagonal residuals at even grades 0..2n, after rewriting t-jets with
    // the deformed flow.
    std::map<int, DiffPoly> anomalies;
    // Diagonal components at odd grades; identically zero by the grading.
    std::map<int, DiffPoly> odd_sigma3;
    // sigma+/sigma- residuals at odd grades >= 3.
    std::map<int, std::pair<DiffPoly, DiffPoly>> defects;
    std::vector<std::string> notes;
};

// Deform every temporal coefficient above the kinematic seed: at order j,
// b_{2j+1} = -2j Hr_j, c_{2j+1} = -2j Hq_j, a_{2j+2} = (j/2) Z_j, with the
// usual beta-dependent closing term on the diagonal.
DnlsQidReport dnls_qid(int n);

// Substitute the undeformed values Hr_j = -b_{2j+1}/(2j),
// Hq_j = -c_{2j+1}/(2j), Z_j = (2/j) a_{2j+2} from the recurrence table.
DiffPoly dnls_qid_undeformed(const DiffPoly &p, int n);

}  // namespace laxforge

#endif
