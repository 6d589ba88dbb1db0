#ifndef LAXFORGE_LOOP_HPP
#define LAXFORGE_LOOP_HPP

// sl(2) loop-algebra layer over DiffPoly. Two interchangeable gradings of
// the same objects:
//   * LoopElement: lambda-graded 2x2 matrices in the (I, sigma3, sigma+,
//     sigma-) basis; carries the matrix commutator used for curvature.
//   * AbsElement: lambda-graded triples in the (b, F1, F2) basis with
//     structure constants [b,F1]=F2, [b,F2]=F1, [F1,F2]=(kappa/2) b;
//     carries the truncated gauge-conjugation (BCH) series.
// Conversion between the bases is exact: with matrix part
// d*sigma3 + p*sigma+ + m*sigma-, the triple is
// (b, F1, F2) = (d, p/kappa - m, p/kappa + m).

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "laxforge/diffpoly.hpp"
#include "laxforge/rewrite.hpp"

namespace laxforge {

struct WindowTooNarrow : std::runtime_error {
    explicit WindowTooNarrow(const std::string &m) : std::runtime_error(m) {}
};

// Inclusive grade range; conjugation results are truncated to it.
struct Window {
    int jmin;
    int jmax;
};

// 2x2 matrix a*I + b*sigma3 + c*sigma+ + d*sigma- with DiffPoly entries.
struct Mat2 {
    DiffPoly id, s3, sp, sm;

    bool is_zero() const;
    Mat2 operator+(const Mat2 &o) const;
    Mat2 operator-(const Mat2 &o) const;
    Mat2 operator-() const;
    Mat2 scaled(const GRat &c) const;
    Mat2 scaled(const DiffPoly &p) const;
    Mat2 d_x() const;
    Mat2 d_t() const;
    Mat2 reduced(const RewriteRules &rules) const;
    std::string str() const;
};

Mat2 mat_mul(const Mat2 &x, const Mat2 &y);
Mat2 mat_comm(const Mat2 &x, const Mat2 &y);

// Graded matrix element: finitely many lambda-powers, each a Mat2.
class LoopElement {
  public:
    LoopElement() = default;

    void set(int grade, Mat2 m);
    void add(int grade, const Mat2 &m);
    const Mat2 *at(int grade) const;
    const std::map<int, Mat2> &grades() const { return g_; }

    bool is_zero() const { return g_.empty(); }
    int top_grade() const;  // throws on zero element

    LoopElement operator+(const LoopElement &o) const;
    LoopElement operator-(const LoopElement &o) const;
    LoopElement operator-() const;
    LoopElement scaled(const DiffPoly &p) const;
    LoopElement shifted(int k) const;  // multiply by lambda^k
    LoopElement d_x() const;
    LoopElement d_t() const;
    LoopElement reduced(const RewriteRules &rules) const;
    std::string str() const;

  private:
    std::map<int, Mat2> g_;
};

LoopElement commutator(const LoopElement &x, const LoopElement &y);

// d_t(L) - d_x(M) + [L, M], grade by grade.
LoopElement curvature(const LoopElement &L, const LoopElement &M);

// Coefficients of b^j, F1^j, F2^j at one grade.
struct AbsComp {
    DiffPoly b, f1, f2;
    bool is_zero() const { return b.is_zero() && f1.is_zero() && f2.is_zero(); }
};

class AbsElement {
  public:
    AbsElement() = default;

    void set(int grade, AbsComp c);
    void add(int grade, const AbsComp &c);
    const AbsComp *at(int grade) const;
    const std::map<int, AbsComp> &grades() const { return g_; }

    bool is_zero() const { return g_.empty(); }
    int top_grade() const;

    AbsElement operator+(const AbsElement &o) const;
    AbsElement operator-(const AbsElement &o) const;
    AbsElement operator-() const;
    AbsElement scaled(const DiffPoly &p) const;
    AbsElement scaled(const GRat &c) const;
    AbsElement d_x() const;
    AbsElement d_t() const;
    AbsElement truncated(const Window &w) const;
    AbsElement reduced(const RewriteRules &rules) const;
    std::string str() const;

    static AbsElement basis_b(int grade);
    static AbsElement basis_f1(int grade);
    static AbsElement basis_f2(int grade);

  private:
    std::map<int, AbsComp> g_;
};

AbsElement commutator(const AbsElement &x, const AbsElement &y);
AbsElement curvature(const AbsElement &L, const AbsElement &M);

// Basis conversion; to_abstract requires every identity component to vanish.
AbsElement to_abstract(const LoopElement &x);
LoopElement to_matrix(const AbsElement &x);

// exp(sum_j F^{-j}) with F^{-j} = xi1*F1^{-j} + xi2*F2^{-j}; strictly
// negative grading makes every conjugation series terminate in a window.
struct GaugeGenerator {
    // comps[j-1] = (xi1^{-j}, xi2^{-j})
    std::vector<std::pair<DiffPoly, DiffPoly>> comps;

    int depth() const { return static_cast<int>(comps.size()); }
    AbsElement as_element() const;
};

enum class Deriv { none, x, t };

// e^g X e^{-g} + (D e^g) e^{-g} truncated to the window, computed by the
// iterated-ad series. With assume_complete=false the generator is treated
// as a depth-limited truncation of an infinite series and grades that
// would need deeper components raise WindowTooNarrow; assume_complete
// skips the check (the supplied g is the whole generator).
AbsElement gauge_conjugate(const AbsElement &X, const GaugeGenerator &g, Window w,
                           Deriv d = Deriv::x, bool assume_complete = false);

// 2 * Tr(X b^n) under Tr(b^n b^m) = (1/2) delta_{n,-m}: the b-coefficient
// of X at grade -n.
DiffPoly killing_project(const AbsElement &X, int n);
DiffPoly killing_project(const LoopElement &X, int n);

}  // namespace laxforge

#endif
