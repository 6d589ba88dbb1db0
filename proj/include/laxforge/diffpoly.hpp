#ifndef LAXFORGE_DIFFPOLY_HPP
#define LAXFORGE_DIFFPOLY_HPP

// Exact differential-polynomial algebra over Gaussian rationals extended by
// named symbolic parameters. Fields enter through jet variables (field,
// dx, dt) with two commuting derivations d_x, d_t.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace laxforge {

using Rational = boost::multiprecision::cpp_rational;

std::string rational_str(const Rational &r);

// Complex number with exact rational real and imaginary parts.
struct GRat {
    Rational re, im;

    GRat() = default;
    GRat(long n) : re(n) {}
    GRat(Rational r) : re(std::move(r)) {}
    GRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GRat i() { return GRat(Rational(0), Rational(1)); }
    static GRat of(long num, long den) { return GRat(Rational(num, den)); }
    static GRat imag(long num, long den) { return GRat(Rational(0), Rational(num, den)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GRat operator-() const { return GRat(-re, -im); }
    GRat operator+(const GRat &o) const { return GRat(re + o.re, im + o.im); }
    GRat operator-(const GRat &o) const { return GRat(re - o.re, im - o.im); }
    GRat operator*(const GRat &o) const {
        return GRat(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    GRat inverse() const;
    GRat operator/(const GRat &o) const { return *this * o.inverse(); }
    GRat conj() const { return GRat(re, -im); }
    bool operator==(const GRat &o) const { return re == o.re && im == o.im; }
    bool operator!=(const GRat &o) const { return !(*this == o); }

    std::complex<double> to_complex() const;
    std::string str() const;
};

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

// Classification of a whole polynomial under (x,t) -> (-x,-t).
enum class ParityClass : std::uint8_t { Even, Odd, Mixed };

struct FieldSymbol {
    std::string name;
    Parity base_parity = Parity::Even;
    bool time_only = false;  // x-derivative identically zero, e.g. b(t)

    bool operator==(const FieldSymbol &o) const {
        return name == o.name && base_parity == o.base_parity && time_only == o.time_only;
    }
    bool operator<(const FieldSymbol &o) const { return name < o.name; }
};

// A field together with derivative counts; the atoms of the algebra.
struct JetVar {
    FieldSymbol field;
    int dx = 0;
    int dt = 0;

    JetVar() = default;
    JetVar(FieldSymbol f, int x = 0, int t = 0) : field(std::move(f)), dx(x), dt(t) {
        if (field.time_only && dx != 0)
            throw std::invalid_argument("time-only field cannot carry x-jets: " + field.name);
    }

    int parity_bit() const {
        return (static_cast<int>(field.base_parity) + dx + dt) & 1;
    }
    bool operator==(const JetVar &o) const {
        return field == o.field && dx == o.dx && dt == o.dt;
    }
    // Canonical atom order: field name, then dt, then dx.
    bool operator<(const JetVar &o) const {
        if (field.name != o.field.name) return field.name < o.field.name;
        if (dt != o.dt) return dt < o.dt;
        return dx < o.dx;
    }
    std::string str() const;
};

// Monomial in named parameters. Exponents are stored doubled so kappa may
// carry half-integer powers; every other parameter must keep an integral,
// non-negative exponent.
class ParamMono {
  public:
    ParamMono() = default;

    static ParamMono unit() { return ParamMono(); }
    static ParamMono var(const std::string &name, int num = 1, int den = 1);

    bool is_unit() const { return e2_.empty(); }
    ParamMono operator*(const ParamMono &o) const;
    ParamMono inverse_kappa_only() const;  // used by basis conversion
    bool operator==(const ParamMono &o) const { return e2_ == o.e2_; }
    bool operator<(const ParamMono &o) const { return e2_ < o.e2_; }

    const std::vector<std::pair<std::string, int>> &entries2() const { return e2_; }
    std::string str() const;

  private:
    // sorted by name; exponent doubled; no zero entries
    std::vector<std::pair<std::string, int>> e2_;
    void check() const;
};

// Multiset of jet variables with positive exponents, kept sorted.
class JetMono {
  public:
    JetMono() = default;
    explicit JetMono(std::vector<std::pair<JetVar, int>> factors);

    static JetMono unit() { return JetMono(); }
    static JetMono var(const JetVar &j, int exp = 1);

    bool is_unit() const { return f_.empty(); }
    int total_degree() const;
    int parity_bit() const;  // sum of exponent-weighted atom parities mod 2
    JetMono operator*(const JetMono &o) const;
    bool operator==(const JetMono &o) const { return f_ == o.f_; }
    bool operator<(const JetMono &o) const;

    const std::vector<std::pair<JetVar, int>> &factors() const { return f_; }
    std::string str() const;

  private:
    std::vector<std::pair<JetVar, int>> f_;
};

struct Term {
    GRat coeff;
    ParamMono params;
    JetMono jets;
};

struct NotExact : std::runtime_error {
    explicit NotExact(const std::string &m) : std::runtime_error(m) {}
};
struct MissingAssignment : std::runtime_error {
    explicit MissingAssignment(const std::string &m) : std::runtime_error(m) {}
};

// Point sample for numerical evaluation: values for jets and parameters.
struct JetSample {
    std::map<std::string, std::complex<double>> params;
    // key: jet canonical name, e.g. "q[xx]"
    std::map<std::string, std::complex<double>> jets;
};

class DiffPoly {
  public:
    DiffPoly() = default;
    explicit DiffPoly(std::vector<Term> raw) { assign(std::move(raw)); }

    static DiffPoly zero() { return DiffPoly(); }
    static DiffPoly constant(const GRat &c);
    static DiffPoly param(const std::string &name, int num = 1, int den = 1);
    static DiffPoly jet(const JetVar &j);
    static DiffPoly jet(const FieldSymbol &f, int dx = 0, int dt = 0);
    static DiffPoly term(const GRat &c, const ParamMono &p, const JetMono &j);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    DiffPoly operator-() const;
    DiffPoly operator+(const DiffPoly &o) const;
    DiffPoly operator-(const DiffPoly &o) const;
    DiffPoly operator*(const DiffPoly &o) const;
    DiffPoly &operator+=(const DiffPoly &o) { *this = *this + o; return *this; }
    DiffPoly &operator-=(const DiffPoly &o) { *this = *this - o; return *this; }
    DiffPoly &operator*=(const DiffPoly &o) { *this = *this * o; return *this; }
    bool operator==(const DiffPoly &o) const;
    bool operator!=(const DiffPoly &o) const { return !(*this == o); }

    DiffPoly scaled(const GRat &c) const;
    DiffPoly pow(int n) const;

    DiffPoly d_x() const;
    DiffPoly d_t() const;
    DiffPoly d_x(int n) const;

    // Formal partial derivative with respect to one jet variable.
    DiffPoly partial(const JetVar &j) const;

    // Euler operator sum_k (-d_x)^k d/d(jet(f,k)); rejects t-jets.
    DiffPoly variational_derivative(const FieldSymbol &f) const;

    // Polynomial antiderivative in x with zero constant; throws NotExact.
    DiffPoly integrate_x() const;

    ParityClass parity() const;

    std::complex<double> eval(const JetSample &s) const;

    // Replace every jet of `f` by the matching x-derivative of `repl`
    // (jets of f must have dt == 0).
    DiffPoly substitute_field(const FieldSymbol &f, const DiffPoly &repl) const;

    // All distinct jet variables appearing in the polynomial.
    std::vector<JetVar> jet_support() const;
    // All parameter names appearing in the polynomial.
    std::vector<std::string> param_support() const;
    bool has_t_jets() const;
    int max_dx(const std::string &field_name = "") const;

    std::string str() const;

  private:
    std::vector<Term> terms_;  // canonically sorted, no zero coefficients
    void assign(std::vector<Term> raw);
};

DiffPoly operator*(const GRat &c, const DiffPoly &p);

// Canonical jet name, e.g. q, q[x], q[xxt].
std::string jet_key(const JetVar &j);

// Substitute an exact value for a named parameter; the parameter must
// occur with integer exponents only.
DiffPoly substitute_param(const DiffPoly &p, const std::string &name, const GRat &value);

// Parse the canonical text form back into a polynomial. `fields` supplies
// the symbols referenced by name; parameter names are free-form.
DiffPoly parse_poly(const std::string &text, const std::vector<FieldSymbol> &fields);

}  // namespace laxforge

#endif
