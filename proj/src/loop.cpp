#include "laxforge/loop.hpp"

#include <limits>

namespace laxforge {

// ---- Mat2 ----

bool Mat2::is_zero() const {
    return id.is_zero() && s3.is_zero() && sp.is_zero() && sm.is_zero();
}

Mat2 Mat2::operator+(const Mat2 &o) const {
    return Mat2{id + o.id, s3 + o.s3, sp + o.sp, sm + o.sm};
}

Mat2 Mat2::operator-(const Mat2 &o) const {
    return Mat2{id - o.id, s3 - o.s3, sp - o.sp, sm - o.sm};
}

Mat2 Mat2::operator-() const { return Mat2{-id, -s3, -sp, -sm}; }

Mat2 Mat2::scaled(const GRat &c) const {
    return Mat2{id.scaled(c), s3.scaled(c), sp.scaled(c), sm.scaled(c)};
}

Mat2 Mat2::scaled(const DiffPoly &p) const {
    return Mat2{id * p, s3 * p, sp * p, sm * p};
}

Mat2 Mat2::d_x() const { return Mat2{id.d_x(), s3.d_x(), sp.d_x(), sm.d_x()}; }
Mat2 Mat2::d_t() const { return Mat2{id.d_t(), s3.d_t(), sp.d_t(), sm.d_t()}; }

Mat2 Mat2::reduced(const RewriteRules &rules) const {
    return Mat2{rules.reduce(id), rules.reduce(s3), rules.reduce(sp), rules.reduce(sm)};
}

std::string Mat2::str() const {
    std::string s;
    auto app = [&](const char *tag, const DiffPoly &p) {
        if (p.is_zero()) return;
        if (!s.empty()) s += "  ";
        s += std::string(tag) + "(" + p.str() + ")";
    };
    app("I", id);
    app("s3", s3);
    app("s+", sp);
    app("s-", sm);
    return s.empty() ? "0" : s;
}

Mat2 mat_mul(const Mat2 &x, const Mat2 &y) {
    const DiffPoly &a = x.id, &b = x.s3, &c = x.sp, &d = x.sm;
    const DiffPoly &A = y.id, &B = y.s3, &C = y.sp, &D = y.sm;
    GRat half = GRat::of(1, 2);
    Mat2 r;
    r.id = a * A + b * B + (c * D + d * C).scaled(half);
    r.s3 = a * B + b * A + (c * D - d * C).scaled(half);
    r.sp = a * C + c * A + b * C - c * B;
    r.sm = a * D + d * A - b * D + d * B;
    return r;
}

Mat2 mat_comm(const Mat2 &x, const Mat2 &y) { return mat_mul(x, y) - mat_mul(y, x); }

// ---- LoopElement ----

void LoopElement::set(int grade, Mat2 m) {
    if (m.is_zero()) g_.erase(grade);
    else g_[grade] = std::move(m);
}

void LoopElement::add(int grade, const Mat2 &m) {
    auto it = g_.find(grade);
    if (it == g_.end()) {
        if (!m.is_zero()) g_[grade] = m;
        return;
    }
    it->second = it->second + m;
    if (it->second.is_zero()) g_.erase(it);
}

const Mat2 *LoopElement::at(int grade) const {
    auto it = g_.find(grade);
    return it == g_.end() ? nullptr : &it->second;
}

int LoopElement::top_grade() const {
    if (g_.empty()) throw std::logic_error("top_grade of zero element");
    return g_.rbegin()->first;
}

LoopElement LoopElement::operator+(const LoopElement &o) const {
    LoopElement r = *this;
    for (const auto &[j, m] : o.g_) r.add(j, m);
    return r;
}

LoopElement LoopElement::operator-(const LoopElement &o) const { return *this + (-o); }

LoopElement LoopElement::operator-() const {
    LoopElement r;
    for (const auto &[j, m] : g_) r.g_[j] = -m;
    return r;
}

LoopElement LoopElement::scaled(const DiffPoly &p) const {
    LoopElement r;
    for (const auto &[j, m] : g_) r.set(j, m.scaled(p));
    return r;
}

LoopElement LoopElement::shifted(int k) const {
    LoopElement r;
    for (const auto &[j, m] : g_) r.g_[j + k] = m;
    return r;
}

LoopElement LoopElement::d_x() const {
    LoopElement r;
    for (const auto &[j, m] : g_) r.set(j, m.d_x());
    return r;
}

LoopElement LoopElement::d_t() const {
    LoopElement r;
    for (const auto &[j, m] : g_) r.set(j, m.d_t());
    return r;
}

LoopElement LoopElement::reduced(const RewriteRules &rules) const {
    LoopElement r;
    for (const auto &[j, m] : g_) r.set(j, m.reduced(rules));
    return r;
}

std::string LoopElement::str() const {
    if (g_.empty()) return "0";
    std::string s;
    for (auto it = g_.rbegin(); it != g_.rend(); ++it) {
        if (!s.empty()) s += "\n";
        s += "lambda^" + std::to_string(it->first) + ": " + it->second.str();
    }
    return s;
}

LoopElement commutator(const LoopElement &x, const LoopElement &y) {
    LoopElement r;
    for (const auto &[j1, m1] : x.grades())
        for (const auto &[j2, m2] : y.grades()) r.add(j1 + j2, mat_comm(m1, m2));
    return r;
}

LoopElement curvature(const LoopElement &L, const LoopElement &M) {
    return L.d_t() - M.d_x() + commutator(L, M);
}

// ---- AbsElement ----

void AbsElement::set(int grade, AbsComp c) {
    if (c.is_zero()) g_.erase(grade);
    else g_[grade] = std::move(c);
}

void AbsElement::add(int grade, const AbsComp &c) {
    auto it = g_.find(grade);
    if (it == g_.end()) {
        if (!c.is_zero()) g_[grade] = c;
        return;
    }
    it->second.b += c.b;
    it->second.f1 += c.f1;
    it->second.f2 += c.f2;
    if (it->second.is_zero()) g_.erase(it);
}

const AbsComp *AbsElement::at(int grade) const {
    auto it = g_.find(grade);
    return it == g_.end() ? nullptr : &it->second;
}

int AbsElement::top_grade() const {
    if (g_.empty()) throw std::logic_error("top_grade of zero element");
    return g_.rbegin()->first;
}

AbsElement AbsElement::operator+(const AbsElement &o) const {
    AbsElement r = *this;
    for (const auto &[j, c] : o.g_) r.add(j, c);
    return r;
}

AbsElement AbsElement::operator-(const AbsElement &o) const { return *this + (-o); }

AbsElement AbsElement::operator-() const {
    AbsElement r;
    for (const auto &[j, c] : g_) r.g_[j] = AbsComp{-c.b, -c.f1, -c.f2};
    return r;
}

AbsElement AbsElement::scaled(const DiffPoly &p) const {
    AbsElement r;
    for (const auto &[j, c] : g_) r.set(j, AbsComp{c.b * p, c.f1 * p, c.f2 * p});
    return r;
}

AbsElement AbsElement::scaled(const GRat &k) const {
    AbsElement r;
    for (const auto &[j, c] : g_)
        r.set(j, AbsComp{c.b.scaled(k), c.f1.scaled(k), c.f2.scaled(k)});
    return r;
}

AbsElement AbsElement::d_x() const {
    AbsElement r;
    for (const auto &[j, c] : g_) r.set(j, AbsComp{c.b.d_x(), c.f1.d_x(), c.f2.d_x()});
    return r;
}

AbsElement AbsElement::d_t() const {
    AbsElement r;
    for (const auto &[j, c] : g_) r.set(j, AbsComp{c.b.d_t(), c.f1.d_t(), c.f2.d_t()});
    return r;
}

AbsElement AbsElement::truncated(const Window &w) const {
    AbsElement r;
    for (const auto &[j, c] : g_)
        if (j >= w.jmin && j <= w.jmax) r.g_[j] = c;
    return r;
}

AbsElement AbsElement::reduced(const RewriteRules &rules) const {
    AbsElement r;
    for (const auto &[j, c] : g_)
        r.set(j, AbsComp{rules.reduce(c.b), rules.reduce(c.f1), rules.reduce(c.f2)});
    return r;
}

std::string AbsElement::str() const {
    if (g_.empty()) return "0";
    std::string s;
    for (auto it = g_.rbegin(); it != g_.rend(); ++it) {
        if (!s.empty()) s += "\n";
        std::string row;
        auto app = [&](const char *tag, const DiffPoly &p) {
            if (p.is_zero()) return;
            if (!row.empty()) row += "  ";
            row += std::string(tag) + "(" + p.str() + ")";
        };
        app("b", it->second.b);
        app("F1", it->second.f1);
        app("F2", it->second.f2);
        s += "lambda^" + std::to_string(it->first) + ": " + (row.empty() ? "0" : row);
    }
    return s;
}

AbsElement AbsElement::basis_b(int grade) {
    AbsElement r;
    r.set(grade, AbsComp{DiffPoly::constant(GRat(1)), DiffPoly(), DiffPoly()});
    return r;
}

AbsElement AbsElement::basis_f1(int grade) {
    AbsElement r;
    r.set(grade, AbsComp{DiffPoly(), DiffPoly::constant(GRat(1)), DiffPoly()});
    return r;
}

AbsElement AbsElement::basis_f2(int grade) {
    AbsElement r;
    r.set(grade, AbsComp{DiffPoly(), DiffPoly(), DiffPoly::constant(GRat(1))});
    return r;
}

AbsElement commutator(const AbsElement &x, const AbsElement &y) {
    // [b,F1]=F2, [b,F2]=F1, [F1,F2]=(kappa/2) b at added grades
    DiffPoly half_kappa = DiffPoly::param("kappa").scaled(GRat::of(1, 2));
    AbsElement r;
    for (const auto &[j1, c1] : x.grades())
        for (const auto &[j2, c2] : y.grades()) {
            AbsComp out;
            out.b = half_kappa * (c1.f1 * c2.f2 - c1.f2 * c2.f1);
            out.f1 = c1.b * c2.f2 - c1.f2 * c2.b;
            out.f2 = c1.b * c2.f1 - c1.f1 * c2.b;
            r.add(j1 + j2, out);
        }
    return r;
}

AbsElement curvature(const AbsElement &L, const AbsElement &M) {
    return L.d_t() - M.d_x() + commutator(L, M);
}

// ---- basis conversion ----

AbsElement to_abstract(const LoopElement &x) {
    AbsElement r;
    for (const auto &[j, m] : x.grades()) {
        if (!m.id.is_zero())
            throw std::invalid_argument("identity component obstructs (b,F1,F2) conversion");
        // p*sigma+ + m*sigma-  ->  F1: p/kappa - m,  F2: p/kappa + m
        DiffPoly pk;
        {
            std::vector<Term> raw;
            for (const auto &t : m.sp.terms())
                raw.push_back(Term{t.coeff,
                                   t.params * ParamMono::var("kappa", -1, 1),
                                   t.jets});
            pk = DiffPoly(std::move(raw));
        }
        r.set(j, AbsComp{m.s3, pk - m.sm, pk + m.sm});
    }
    return r;
}

LoopElement to_matrix(const AbsElement &x) {
    DiffPoly kappa = DiffPoly::param("kappa");
    GRat half = GRat::of(1, 2);
    LoopElement r;
    for (const auto &[j, c] : x.grades()) {
        Mat2 m;
        m.s3 = c.b;
        m.sp = (kappa * (c.f1 + c.f2)).scaled(half);
        m.sm = (c.f2 - c.f1).scaled(half);
        r.set(j, m);
    }
    return r;
}

// ---- gauge conjugation ----

AbsElement GaugeGenerator::as_element() const {
    AbsElement g;
    for (int j = 1; j <= depth(); ++j) {
        const auto &[x1, x2] = comps[j - 1];
        g.set(-j, AbsComp{DiffPoly(), x1, x2});
    }
    return g;
}

AbsElement gauge_conjugate(const AbsElement &X, const GaugeGenerator &g, Window w,
                           Deriv d, bool assume_complete) {
    if (w.jmin > w.jmax) throw std::invalid_argument("empty window");
    const int J = g.depth();
    if (J == 0) return X.truncated(w);  // identity gauge

    if (!assume_complete) {
        if (!X.is_zero() && w.jmin < X.top_grade() - J)
            throw WindowTooNarrow("window reaches grade " + std::to_string(w.jmin) +
                                  " but generator depth is " + std::to_string(J));
        if (d != Deriv::none && w.jmin < -J)
            throw WindowTooNarrow("derivative term needs generator depth " +
                                  std::to_string(-w.jmin));
    }

    AbsElement G = g.as_element();
    Window deep{w.jmin, std::numeric_limits<int>::max()};

    // e^g X e^{-g} = sum_k ad_g^k(X)/k!
    AbsElement acc = X.truncated(deep);
    AbsElement term = acc;
    Rational kfact = 1;
    for (int k = 1; !term.is_zero(); ++k) {
        term = commutator(G, term).truncated(deep);
        kfact *= k;
        acc = acc + term.scaled(GRat(Rational(1) / kfact));
    }

    if (d != Deriv::none) {
        // (D e^g) e^{-g} = sum_k ad_g^k(Dg)/(k+1)!
        AbsElement dg = (d == Deriv::x) ? G.d_x() : G.d_t();
        AbsElement u = dg.truncated(deep);
        Rational f = 1;  // (k+1)! running value
        acc = acc + u;
        for (int k = 1; !u.is_zero(); ++k) {
            u = commutator(G, u).truncated(deep);
            f *= (k + 1);
            acc = acc + u.scaled(GRat(Rational(1) / f));
        }
    }
    return acc.truncated(w);
}

DiffPoly killing_project(const AbsElement &X, int n) {
    const AbsComp *c = X.at(-n);
    return c ? c->b : DiffPoly();
}

DiffPoly killing_project(const LoopElement &X, int n) {
    const Mat2 *m = X.at(-n);
    return m ? m->s3 : DiffPoly();
}

}  // namespace laxforge
