#ifndef LAXFORGE_HIERARCHY_HPP
#define LAXFORGE_HIERARCHY_HPP

// Coefficient tables, equations of motion, and Lax pairs for the NLS and
// derivative-NLS (DNLS) hierarchies, generated from the grade-by-grade
// zero-curvature recurrences.

#include <string>
#include <vector>

#include "laxforge/loop.hpp"

namespace laxforge {

enum class Family { NLS, DNLS };

inline const FieldSymbol &field_q() {
    static const FieldSymbol f{"q", Parity::Even, false};
    return f;
}
inline const FieldSymbol &field_r() {
    static const FieldSymbol f{"r", Parity::Even, false};
    return f;
}

struct CoeffTable {
    Family family = Family::NLS;
    int n = 0;
    struct Entry {
        DiffPoly a, b, c;
    };
    // entries[m] holds (a_m, b_m, c_m); NLS carries m = 0..n+1,
    // DNLS m = 0..2n+2.
    std::vector<Entry> entries;
};

struct EomPair {
    DiffPoly q_t, r_t;
    std::string label;
    std::vector<std::string> notes;
};

// NLS recurrence with seed a_0 = alpha, b_0 = c_0 = 0:
//   b_{m+1} = (i/2)(b_m' + 2 q a_m)
//   c_{m+1} = -(i/2)(c_m' - 2 r a_m)
//   a_{m+1} = integrate_x(q c_{m+1} - r b_{m+1})
CoeffTable nls_coeffs(int n);

// q_t = -2i b_{n+1}, r_t = 2i c_{n+1}
EomPair nls_eom(int n);

// DNLS recurrence with s = (1/2)(1+2beta) q r inlined and seeds
// a_0 = -2i, b_0 = c_0 = 0, b_1 = 2q, c_1 = 2r:
//   a_{m+1} = integrate_x[(r s b_m - q s c_m) - (i/2)(q c_m' + r b_m')]
//   b_{m+2} = (i/2)(b_m' + 2i s b_m + 2 q a_{m+1})
//   c_{m+2} = -(i/2)(c_m' - 2i s c_m - 2 r a_{m+1})
CoeffTable dnls_coeffs(int n);

// q_t = b_{2n+1}' + i(1+2beta) q r b_{2n+1} + 2(1+2beta) q a_{2n+2}
// (r_t mirrored with flipped signs); n = 1 carries notes flagging the
// two source-formula discrepancies resolved here.
EomPair dnls_eom(int n);

// Substitute a rational value for beta; -1/2, -1/4, 0 give the coupled
// Kaup-Newell, Chen-Lee-Liu, and Gerdjikov-Ivanov systems.
EomPair dnls_reduce(const EomPair &eom, const Rational &beta_value);

struct LaxPair {
    LoopElement L, M;
};

// Assemble the graded Lax pair for the table's family and order.
LaxPair build_lax(const CoeffTable &t);

// t-rules q_t -> rhs, r_t -> rhs for imposing the flow on curvature.
RewriteRules eom_rules(const EomPair &eom);

}  // namespace laxforge

#endif
