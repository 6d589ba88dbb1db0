#include "laxforge/diffpoly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace laxforge {

std::string rational_str(const Rational &r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

GRat GRat::inverse() const {
    Rational n = re * re + im * im;
    if (n == 0) throw std::domain_error("division by zero GRat");
    return GRat(re / n, -im / n);
}

std::complex<double> GRat::to_complex() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
}

std::string GRat::str() const {
    // (a), (a/b), (ai), (a/bi), (a+bi), (a-bi); always parenthesised
    auto rat = [](const Rational &r) { return rational_str(r); };
    if (im == 0) return "(" + rat(re) + ")";
    if (re == 0) return "(" + rat(im) + "i)";
    std::string s = "(" + rat(re);
    if (im > 0) s += "+" + rat(im) + "i)";
    else s += rat(im) + "i)";
    return s;
}

std::string JetVar::str() const { return jet_key(*this); }

std::string jet_key(const JetVar &j) {
    if (j.dx == 0 && j.dt == 0) return j.field.name;
    std::string s = j.field.name + "[";
    s.append(j.dx, 'x');
    s.append(j.dt, 't');
    s += "]";
    return s;
}

// ---- ParamMono ----

void ParamMono::check() const {
    for (const auto &[name, e2] : e2_) {
        if (name != "kappa" && (e2 < 0 || e2 % 2 != 0))
            throw std::invalid_argument("parameter " + name +
                                        " must have a non-negative integer exponent");
    }
}

ParamMono ParamMono::var(const std::string &name, int num, int den) {
    if (den != 1 && den != 2) throw std::invalid_argument("parameter exponent denominator must be 1 or 2");
    ParamMono m;
    int e2 = (den == 1) ? 2 * num : num;
    if (e2 != 0) m.e2_.push_back({name, e2});
    m.check();
    return m;
}

ParamMono ParamMono::operator*(const ParamMono &o) const {
    ParamMono r;
    auto a = e2_.begin(), b = o.e2_.begin();
    while (a != e2_.end() || b != o.e2_.end()) {
        if (b == o.e2_.end() || (a != e2_.end() && a->first < b->first)) {
            r.e2_.push_back(*a++);
        } else if (a == e2_.end() || b->first < a->first) {
            r.e2_.push_back(*b++);
        } else {
            int e2 = a->second + b->second;
            if (e2 != 0) r.e2_.push_back({a->first, e2});
            ++a; ++b;
        }
    }
    r.check();
    return r;
}

ParamMono ParamMono::inverse_kappa_only() const {
    for (const auto &[name, e2] : e2_)
        if (name != "kappa")
            throw std::invalid_argument("only kappa monomials can be inverted");
    ParamMono r;
    for (const auto &[name, e2] : e2_) r.e2_.push_back({name, -e2});
    return r;
}

std::string ParamMono::str() const {
    std::string s;
    for (const auto &[name, e2] : e2_) {
        if (!s.empty()) s += "*";
        s += name;
        if (e2 != 2) {
            if (e2 % 2 == 0) s += "^" + std::to_string(e2 / 2);
            else s += "^(" + std::to_string(e2) + "/2)";
        }
    }
    return s;
}

// ---- JetMono ----

JetMono::JetMono(std::vector<std::pair<JetVar, int>> factors) {
    std::sort(factors.begin(), factors.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto &f : factors) {
        if (f.second <= 0) throw std::invalid_argument("jet exponent must be positive");
        if (!f_.empty() && f_.back().first == f.first) f_.back().second += f.second;
        else f_.push_back(f);
    }
}

JetMono JetMono::var(const JetVar &j, int exp) { return JetMono({{j, exp}}); }

int JetMono::total_degree() const {
    int d = 0;
    for (const auto &f : f_) d += f.second;
    return d;
}

int JetMono::parity_bit() const {
    int p = 0;
    for (const auto &f : f_) p += f.second * f.first.parity_bit();
    return p & 1;
}

JetMono JetMono::operator*(const JetMono &o) const {
    JetMono r;
    auto a = f_.begin(), b = o.f_.begin();
    while (a != f_.end() || b != o.f_.end()) {
        if (b == o.f_.end() || (a != f_.end() && a->first < b->first)) r.f_.push_back(*a++);
        else if (a == f_.end() || b->first < a->first) r.f_.push_back(*b++);
        else { r.f_.push_back({a->first, a->second + b->second}); ++a; ++b; }
    }
    return r;
}

bool JetMono::operator<(const JetMono &o) const {
    // graded, then lexicographic on the sorted factor list
    int da = total_degree(), db = o.total_degree();
    if (da != db) return da < db;
    auto a = f_.begin(), b = o.f_.begin();
    while (a != f_.end() && b != o.f_.end()) {
        if (a->first < b->first) return true;
        if (b->first < a->first) return false;
        if (a->second != b->second) return a->second > b->second;  // higher power first
        ++a; ++b;
    }
    return f_.size() < o.f_.size();
}

std::string JetMono::str() const {
    std::string s;
    for (const auto &[j, e] : f_) {
        if (!s.empty()) s += "*";
        s += jet_key(j);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

// ---- DiffPoly ----

namespace {
bool term_key_less(const Term &a, const Term &b) {
    if (a.jets == b.jets) return a.params < b.params;
    return a.jets < b.jets;
}
}  // namespace

void DiffPoly::assign(std::vector<Term> raw) {
    std::sort(raw.begin(), raw.end(), term_key_less);
    terms_.clear();
    for (auto &t : raw) {
        if (t.coeff.is_zero()) continue;
        if (!terms_.empty() && terms_.back().jets == t.jets && terms_.back().params == t.params) {
            terms_.back().coeff = terms_.back().coeff + t.coeff;
            if (terms_.back().coeff.is_zero()) terms_.pop_back();
        } else {
            terms_.push_back(std::move(t));
        }
    }
}

DiffPoly DiffPoly::constant(const GRat &c) {
    return DiffPoly({Term{c, ParamMono::unit(), JetMono::unit()}});
}

DiffPoly DiffPoly::param(const std::string &name, int num, int den) {
    return DiffPoly({Term{GRat(1), ParamMono::var(name, num, den), JetMono::unit()}});
}

DiffPoly DiffPoly::jet(const JetVar &j) {
    return DiffPoly({Term{GRat(1), ParamMono::unit(), JetMono::var(j)}});
}

DiffPoly DiffPoly::jet(const FieldSymbol &f, int dx, int dt) {
    return jet(JetVar(f, dx, dt));
}

DiffPoly DiffPoly::term(const GRat &c, const ParamMono &p, const JetMono &j) {
    return DiffPoly({Term{c, p, j}});
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly r(*this);
    for (auto &t : r.terms_) t.coeff = -t.coeff;
    return r;
}

DiffPoly DiffPoly::operator+(const DiffPoly &o) const {
    std::vector<Term> raw = terms_;
    raw.insert(raw.end(), o.terms_.begin(), o.terms_.end());
    return DiffPoly(std::move(raw));
}

DiffPoly DiffPoly::operator-(const DiffPoly &o) const { return *this + (-o); }

DiffPoly DiffPoly::operator*(const DiffPoly &o) const {
    std::vector<Term> raw;
    raw.reserve(terms_.size() * o.terms_.size());
    for (const auto &a : terms_)
        for (const auto &b : o.terms_)
            raw.push_back(Term{a.coeff * b.coeff, a.params * b.params, a.jets * b.jets});
    return DiffPoly(std::move(raw));
}

bool DiffPoly::operator==(const DiffPoly &o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Term &a = terms_[k], &b = o.terms_[k];
        if (!(a.coeff == b.coeff) || !(a.params == b.params) || !(a.jets == b.jets)) return false;
    }
    return true;
}

DiffPoly DiffPoly::scaled(const GRat &c) const {
    if (c.is_zero()) return DiffPoly();
    DiffPoly r(*this);
    for (auto &t : r.terms_) t.coeff = t.coeff * c;
    return r;
}

DiffPoly DiffPoly::pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative polynomial power");
    DiffPoly r = constant(GRat(1));
    for (int k = 0; k < n; ++k) r = r * *this;
    return r;
}

namespace {
// Derivative of a single monomial via the Leibniz rule; `raise` maps an atom
// to its derivative atom, or nullopt when the derivative vanishes.
template <typename Raise>
std::vector<Term> leibniz(const Term &t, Raise raise) {
    std::vector<Term> out;
    const auto &fs = t.jets.factors();
    for (std::size_t k = 0; k < fs.size(); ++k) {
        std::optional<JetVar> up = raise(fs[k].first);
        if (!up) continue;
        std::vector<std::pair<JetVar, int>> nf;
        nf.reserve(fs.size() + 1);
        for (std::size_t m = 0; m < fs.size(); ++m) {
            if (m == k) {
                if (fs[m].second > 1) nf.push_back({fs[m].first, fs[m].second - 1});
            } else {
                nf.push_back(fs[m]);
            }
        }
        nf.push_back({*up, 1});
        out.push_back(Term{t.coeff * GRat(fs[k].second), t.params, JetMono(std::move(nf))});
    }
    return out;
}
}  // namespace

DiffPoly DiffPoly::d_x() const {
    std::vector<Term> raw;
    for (const auto &t : terms_) {
        auto part = leibniz(t, [](const JetVar &j) -> std::optional<JetVar> {
            if (j.field.time_only) return std::nullopt;
            return JetVar(j.field, j.dx + 1, j.dt);
        });
        raw.insert(raw.end(), part.begin(), part.end());
    }
    return DiffPoly(std::move(raw));
}

DiffPoly DiffPoly::d_t() const {
    std::vector<Term> raw;
    for (const auto &t : terms_) {
        auto part = leibniz(t, [](const JetVar &j) -> std::optional<JetVar> {
            return JetVar(j.field, j.dx, j.dt + 1);
        });
        raw.insert(raw.end(), part.begin(), part.end());
    }
    return DiffPoly(std::move(raw));
}

DiffPoly DiffPoly::d_x(int n) const {
    DiffPoly r = *this;
    for (int k = 0; k < n; ++k) r = r.d_x();
    return r;
}

DiffPoly DiffPoly::partial(const JetVar &j) const {
    std::vector<Term> raw;
    for (const auto &t : terms_) {
        const auto &fs = t.jets.factors();
        for (std::size_t k = 0; k < fs.size(); ++k) {
            if (!(fs[k].first == j)) continue;
            std::vector<std::pair<JetVar, int>> nf;
            for (std::size_t m = 0; m < fs.size(); ++m) {
                if (m == k) {
                    if (fs[m].second > 1) nf.push_back({fs[m].first, fs[m].second - 1});
                } else {
                    nf.push_back(fs[m]);
                }
            }
            raw.push_back(Term{t.coeff * GRat(fs[k].second), t.params, JetMono(std::move(nf))});
        }
    }
    return DiffPoly(std::move(raw));
}

DiffPoly DiffPoly::variational_derivative(const FieldSymbol &f) const {
    if (has_t_jets())
        throw std::invalid_argument("variational derivative rejects densities with t-jets");
    int top = max_dx(f.name);
    DiffPoly acc;
    for (int k = 0; k <= top; ++k) {
        DiffPoly p = partial(JetVar(f, k, 0));
        if (p.is_zero()) continue;
        p = p.d_x(k);
        acc += (k % 2 == 0) ? p : -p;
    }
    return acc;
}

ParityClass DiffPoly::parity() const {
    if (terms_.empty()) return ParityClass::Even;
    int p0 = terms_.front().jets.parity_bit();
    for (const auto &t : terms_)
        if (t.jets.parity_bit() != p0) return ParityClass::Mixed;
    return p0 == 0 ? ParityClass::Even : ParityClass::Odd;
}

std::complex<double> DiffPoly::eval(const JetSample &s) const {
    std::complex<double> acc = 0.0;
    for (const auto &t : terms_) {
        std::complex<double> v = t.coeff.to_complex();
        for (const auto &[name, e2] : t.params.entries2()) {
            auto it = s.params.find(name);
            if (it == s.params.end()) throw MissingAssignment("parameter " + name);
            v *= std::pow(it->second, e2 / 2.0);
        }
        for (const auto &[j, e] : t.jets.factors()) {
            auto it = s.jets.find(jet_key(j));
            if (it == s.jets.end()) throw MissingAssignment("jet " + jet_key(j));
            std::complex<double> b = it->second, p = 1.0;
            for (int k = 0; k < e; ++k) p *= b;
            v *= p;
        }
        acc += v;
    }
    return acc;
}

DiffPoly DiffPoly::substitute_field(const FieldSymbol &f, const DiffPoly &repl) const {
    std::map<int, DiffPoly> repl_dx;  // cache of d_x^k(repl)
    DiffPoly acc;
    for (const auto &t : terms_) {
        DiffPoly prod = DiffPoly::term(t.coeff, t.params, JetMono::unit());
        for (const auto &[j, e] : t.jets.factors()) {
            DiffPoly factor;
            if (j.field == f) {
                if (j.dt != 0)
                    throw std::invalid_argument("substitute_field: t-jet of " + f.name);
                auto it = repl_dx.find(j.dx);
                if (it == repl_dx.end())
                    it = repl_dx.emplace(j.dx, repl.d_x(j.dx)).first;
                factor = it->second;
            } else {
                factor = DiffPoly::jet(j);
            }
            prod = prod * factor.pow(e);
        }
        acc += prod;
    }
    return acc;
}

std::vector<JetVar> DiffPoly::jet_support() const {
    std::vector<JetVar> out;
    for (const auto &t : terms_)
        for (const auto &[j, e] : t.jets.factors()) {
            bool seen = false;
            for (const auto &k : out)
                if (k == j) { seen = true; break; }
            if (!seen) out.push_back(j);
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> DiffPoly::param_support() const {
    std::set<std::string> s;
    for (const auto &t : terms_)
        for (const auto &[name, e2] : t.params.entries2()) s.insert(name);
    return {s.begin(), s.end()};
}

bool DiffPoly::has_t_jets() const {
    for (const auto &t : terms_)
        for (const auto &[j, e] : t.jets.factors())
            if (j.dt > 0) return true;
    return false;
}

int DiffPoly::max_dx(const std::string &field_name) const {
    int m = 0;
    for (const auto &t : terms_)
        for (const auto &[j, e] : t.jets.factors())
            if (field_name.empty() || j.field.name == field_name) m = std::max(m, j.dx);
    return m;
}

// ---- integrate_x ----

namespace {

// Lower one x-derivative on a single factor in all possible ways.
std::vector<JetMono> lowerings(const JetMono &m) {
    std::vector<JetMono> out;
    const auto &fs = m.factors();
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (fs[k].first.dx == 0) continue;
        std::vector<std::pair<JetVar, int>> nf;
        for (std::size_t j = 0; j < fs.size(); ++j) {
            if (j == k) {
                if (fs[j].second > 1) nf.push_back({fs[j].first, fs[j].second - 1});
            } else {
                nf.push_back(fs[j]);
            }
        }
        nf.push_back({JetVar(fs[k].first.field, fs[k].first.dx - 1, fs[k].first.dt), 1});
        out.push_back(JetMono(std::move(nf)));
    }
    return out;
}

}  // namespace

DiffPoly DiffPoly::integrate_x() const {
    if (is_zero()) return DiffPoly();
    // Work per parameter monomial: d_x never touches parameters.
    std::map<ParamMono, std::vector<Term>> groups;
    for (const auto &t : terms_) groups[t.params].push_back(t);

    DiffPoly result;
    for (auto &[pm, group] : groups) {
        // Candidate antiderivative monomials: close the lowering set under
        // "monomials produced by d_x of a candidate".
        std::set<JetMono> cand;
        std::set<JetMono> target;  // monomial support of this group
        for (const auto &t : group) {
            target.insert(t.jets);
            for (auto &c : lowerings(t.jets)) cand.insert(c);
        }
        for (int pass = 0; pass < 8; ++pass) {
            std::set<JetMono> grow = cand;
            for (const auto &c : cand) {
                DiffPoly dc = DiffPoly::term(GRat(1), ParamMono::unit(), c).d_x();
                for (const auto &t : dc.terms()) {
                    if (target.count(t.jets)) continue;
                    for (auto &l : lowerings(t.jets)) grow.insert(l);
                }
            }
            if (grow.size() == cand.size()) break;
            cand.swap(grow);
        }
        cand.erase(JetMono::unit());  // constants integrate trivially; fix constant to 0

        std::vector<JetMono> cols(cand.begin(), cand.end());
        if (cols.empty()) throw NotExact("no antiderivative candidates for " + str());

        // Row space: monomials of d_x(candidates) united with the group support.
        std::map<JetMono, std::size_t> rows;
        std::vector<std::vector<GRat>> A;  // rows x cols
        std::vector<GRat> rhs;
        auto row_of = [&](const JetMono &m) {
            auto it = rows.find(m);
            if (it != rows.end()) return it->second;
            std::size_t idx = rows.size();
            rows.emplace(m, idx);
            A.push_back(std::vector<GRat>(cols.size()));
            rhs.push_back(GRat(0));
            return idx;
        };
        for (std::size_t c = 0; c < cols.size(); ++c) {
            DiffPoly dc = DiffPoly::term(GRat(1), ParamMono::unit(), cols[c]).d_x();
            for (const auto &t : dc.terms()) {
                std::size_t r = row_of(t.jets);
                A[r][c] = A[r][c] + t.coeff;
            }
        }
        for (const auto &t : group) rhs[row_of(t.jets)] = t.coeff;

        // Exact Gaussian elimination.
        std::size_t nr = A.size(), nc = cols.size();
        std::vector<std::size_t> pivot_col(nr, SIZE_MAX);
        std::size_t rank = 0;
        for (std::size_t c = 0; c < nc && rank < nr; ++c) {
            std::size_t p = SIZE_MAX;
            for (std::size_t r = rank; r < nr; ++r)
                if (!A[r][c].is_zero()) { p = r; break; }
            if (p == SIZE_MAX) continue;
            std::swap(A[p], A[rank]);
            std::swap(rhs[p], rhs[rank]);
            GRat inv = A[rank][c].inverse();
            for (std::size_t cc = c; cc < nc; ++cc) A[rank][cc] = A[rank][cc] * inv;
            rhs[rank] = rhs[rank] * inv;
            for (std::size_t r = 0; r < nr; ++r) {
                if (r == rank || A[r][c].is_zero()) continue;
                GRat f = A[r][c];
                for (std::size_t cc = c; cc < nc; ++cc)
                    A[r][cc] = A[r][cc] - f * A[rank][cc];
                rhs[r] = rhs[r] - f * rhs[rank];
            }
            pivot_col[rank] = c;
            ++rank;
        }
        for (std::size_t r = rank; r < nr; ++r)
            if (!rhs[r].is_zero())
                throw NotExact("no polynomial antiderivative exists");

        std::vector<GRat> x(nc, GRat(0));
        for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = rhs[r];

        std::vector<Term> raw;
        for (std::size_t c = 0; c < nc; ++c)
            if (!x[c].is_zero()) raw.push_back(Term{x[c], pm, cols[c]});
        result += DiffPoly(std::move(raw));
    }

    // Self-check: guards against an under-closed candidate basis.
    if (!(result.d_x() == *this)) throw NotExact("antiderivative verification failed");
    return result;
}

// ---- printing ----

std::string DiffPoly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Term &t = terms_[k];
        GRat c = t.coeff;
        if (k == 0) {
            // leading term keeps its sign inside the coefficient
        } else {
            bool neg = (c.re < 0) || (c.re == 0 && c.im < 0);
            if (neg) { s += " - "; c = -c; }
            else s += " + ";
        }
        std::string mono;
        if (!t.params.is_unit()) mono += t.params.str();
        if (!t.jets.is_unit()) {
            if (!mono.empty()) mono += "*";
            mono += t.jets.str();
        }
        if (mono.empty()) s += c.str();
        else if (c == GRat(1)) s += mono;
        else s += c.str() + "*" + mono;
    }
    return s;
}

DiffPoly operator*(const GRat &c, const DiffPoly &p) { return p.scaled(c); }

DiffPoly substitute_param(const DiffPoly &p, const std::string &name, const GRat &value) {
    std::vector<Term> raw;
    for (const auto &t : p.terms()) {
        GRat c = t.coeff;
        ParamMono pm;
        for (const auto &[n, e2] : t.params.entries2()) {
            if (n != name) {
                pm = pm * [&] {
                    ParamMono one;
                    one = ParamMono::var(n, e2, 2);
                    return one;
                }();
                continue;
            }
            if (e2 % 2 != 0)
                throw std::invalid_argument("cannot substitute " + name +
                                            " at half-integer exponent");
            int e = e2 / 2;
            GRat v = (e >= 0) ? value : value.inverse();
            for (int k = 0; k < std::abs(e); ++k) c = c * v;
        }
        raw.push_back(Term{c, pm, t.jets});
    }
    return DiffPoly(std::move(raw));
}

// ---- parser ----

namespace {

struct Parser {
    const std::string &src;
    std::size_t pos = 0;
    const std::vector<FieldSymbol> &fields;

    explicit Parser(const std::string &s, const std::vector<FieldSymbol> &f)
        : src(s), fields(f) {}

    void skip_ws() { while (pos < src.size() && std::isspace((unsigned char)src[pos])) ++pos; }
    bool eof() { skip_ws(); return pos >= src.size(); }
    char peek() { skip_ws(); return pos < src.size() ? src[pos] : '\0'; }
    bool accept(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw std::invalid_argument("parse error at position " + std::to_string(pos) +
                                        ": expected '" + std::string(1, c) + "' in \"" + src + "\"");
    }

    Rational parse_int_rat() {
        skip_ws();
        bool neg = false;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) neg = (src[pos++] == '-');
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
        if (start == pos)
            throw std::invalid_argument("parse error: expected integer in \"" + src + "\"");
        Rational num(src.substr(start, pos - start));
        if (neg) num = -num;
        if (pos < src.size() && src[pos] == '/') {
            ++pos;
            std::size_t ds = pos;
            while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
            if (ds == pos) throw std::invalid_argument("parse error: expected denominator");
            num /= Rational(src.substr(ds, pos - ds));
        }
        return num;
    }

    // (a), (a/b), (ai), (a+bi), (a-bi), optionally with rational parts
    GRat parse_coeff() {
        expect('(');
        Rational a = parse_int_rat();
        GRat out;
        if (accept('i')) {
            out = GRat(Rational(0), a);
        } else if (peek() == '+' || peek() == '-') {
            Rational b = parse_int_rat();
            if (!accept('i')) throw std::invalid_argument("parse error: expected 'i'");
            out = GRat(a, b);
        } else {
            out = GRat(a);
        }
        expect(')');
        return out;
    }

    std::string parse_name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && (std::isalnum((unsigned char)src[pos]) || src[pos] == '_')) ++pos;
        if (start == pos) throw std::invalid_argument("parse error: expected name in \"" + src + "\"");
        return src.substr(start, pos - start);
    }

    const FieldSymbol *find_field(const std::string &n) {
        for (const auto &f : fields)
            if (f.name == n) return &f;
        return nullptr;
    }

    // factor := coeff | '(' expr ')' [^int] | number | name [jets] [^exp]
    DiffPoly parse_factor() {
        if (peek() == '(') {
            std::size_t save = pos;
            try {
                return DiffPoly::constant(parse_coeff());
            } catch (const std::invalid_argument &) {
                pos = save;
            }
            expect('(');
            DiffPoly sub = parse_expr();
            expect(')');
            if (accept('^')) sub = sub.pow((int)parse_int_rat().convert_to<long>());
            return sub;
        }
        if (std::isdigit((unsigned char)peek()))
            return DiffPoly::constant(GRat(parse_int_rat()));

        std::string n = parse_name();
        const FieldSymbol *f = find_field(n);
        if (f) {
            int dx = 0, dt = 0;
            if (accept('[')) {
                while (peek() == 'x') { ++pos; ++dx; }
                while (peek() == 't') { ++pos; ++dt; }
                expect(']');
            }
            int e = 1;
            if (accept('^')) e = (int)parse_int_rat().convert_to<long>();
            return DiffPoly::term(GRat(1), ParamMono::unit(), JetMono::var(JetVar(*f, dx, dt), e));
        }
        int num = 1, den = 1;
        if (accept('^')) {
            if (accept('(')) {
                Rational r = parse_int_rat();
                expect(')');
                num = (int)Rational(boost::multiprecision::numerator(r)).convert_to<long>();
                den = (int)Rational(boost::multiprecision::denominator(r)).convert_to<long>();
            } else {
                num = (int)parse_int_rat().convert_to<long>();
            }
        }
        return DiffPoly::term(GRat(1), ParamMono::var(n, num, den), JetMono::unit());
    }

    DiffPoly parse_term() {
        DiffPoly acc = parse_factor();
        while (accept('*')) acc *= parse_factor();
        return acc;
    }

    DiffPoly parse_expr() {
        bool neg = accept('-');
        DiffPoly acc = parse_term();
        if (neg) acc = -acc;
        for (;;) {
            if (accept('+')) acc += parse_term();
            else if (accept('-')) acc -= parse_term();
            else return acc;
        }
    }

    DiffPoly parse_all() {
        DiffPoly acc = parse_expr();
        if (!eof())
            throw std::invalid_argument("parse error: trailing input in \"" + src + "\"");
        return acc;
    }
};

}  // namespace

DiffPoly parse_poly(const std::string &text, const std::vector<FieldSymbol> &fields) {
    Parser p(text, fields);
    return p.parse_all();
}

}  // namespace laxforge
