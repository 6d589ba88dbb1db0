#include "laxforge/render.hpp"

#include <cstdlib>
#include <sstream>

namespace laxforge {

namespace {

const char *parity_str(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

const char *parity_class_str(ParityClass p) {
    switch (p) {
        case ParityClass::Even: return "even";
        case ParityClass::Odd: return "odd";
        default: return "mixed";
    }
}

const char *verdict_str(AnomalyVerdict v) {
    switch (v) {
        case AnomalyVerdict::Zero: return "zero";
        case AnomalyVerdict::ParityOdd: return "parity_odd";
        case AnomalyVerdict::ParityEven: return "parity_even";
        default: return "mixed";
    }
}

const char *resolution_str(Resolution r) {
    switch (r) {
        case Resolution::Resolved: return "resolved";
        case Resolution::NotResolvable: return "not_resolvable";
        default: return "not_attempted";
    }
}

Json mat_components(const Mat2 &m) {
    Json out = Json::array();
    auto push = [&](const char *basis, const DiffPoly &p) {
        if (!p.is_zero()) out.push_back(Json{{"basis", basis}, {"poly", p.str()}});
    };
    push("id", m.id);
    push("s3", m.s3);
    push("s+", m.sp);
    push("s-", m.sm);
    return out;
}

// ---------- LaTeX ----------

std::string tex_int(const boost::multiprecision::cpp_int &v) { return v.str(); }

// magnitude of a rational as \frac or integer
std::string tex_frac(const Rational &r) {
    Rational a = r < 0 ? Rational(-r) : r;
    auto num = numerator(a);
    auto den = denominator(a);
    if (den == 1) return tex_int(num);
    return "\\frac{" + tex_int(num) + "}{" + tex_int(den) + "}";
}

std::string tex_param_name(const std::string &n) {
    if (n == "alpha") return "\\alpha";
    if (n == "beta") return "\\beta";
    if (n == "kappa") return "\\kappa";
    if (n == "gamma") return "\\gamma";
    if (n == "epsilon") return "\\epsilon";
    return n;
}

std::string tex_field(const JetVar &j, int exp) {
    std::string name = j.field.name;
    std::string digits;
    while (name.size() > 1 && std::isdigit(static_cast<unsigned char>(name.back()))) {
        digits.insert(digits.begin(), name.back());
        name.pop_back();
    }
    if (name == "phi") name = "\\varphi";
    std::string sub = digits + std::string(j.dx, 'x') + std::string(j.dt, 't');
    std::string s = name;
    if (!sub.empty()) s += "_{" + sub + "}";
    if (exp > 1) s += "^{" + std::to_string(exp) + "}";
    return s;
}

struct CoeffTex {
    bool negative = false;
    bool is_one = false;  // magnitude 1 and purely real
    std::string body;     // magnitude without sign
};

CoeffTex coeff_tex(const GRat &c) {
    CoeffTex out;
    if (c.im == 0) {
        out.negative = c.re < 0;
        Rational a = out.negative ? Rational(-c.re) : c.re;
        out.is_one = (a == 1);
        out.body = tex_frac(a);
    } else if (c.re == 0) {
        out.negative = c.im < 0;
        Rational a = out.negative ? Rational(-c.im) : c.im;
        out.body = (a == 1) ? "i" : tex_frac(a) + " i";
    } else {
        std::string re = (c.re < 0 ? "-" : "") + tex_frac(c.re);
        std::string im = (c.im < 0 ? " - " : " + ") + tex_frac(c.im) + " i";
        out.body = "\\left(" + re + im + "\\right)";
    }
    return out;
}

std::string term_factors(const Term &t) {
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << " ";
        first = false;
    };
    for (const auto &[name, e2] : t.params.entries2()) {
        sep();
        os << tex_param_name(name);
        if (e2 == 2) continue;
        if (e2 % 2 == 0)
            os << "^{" << e2 / 2 << "}";
        else
            os << "^{" << e2 << "/2}";
    }
    for (const auto &[j, e] : t.jets.factors()) {
        sep();
        os << tex_field(j, e);
    }
    return os.str();
}

}  // namespace

std::string latex(const GRat &c) {
    CoeffTex t = coeff_tex(c);
    std::string body = t.is_one ? "1" : t.body;
    return t.negative ? "-" + body : body;
}

std::string latex(const DiffPoly &p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const Term &t : p.terms()) {
        CoeffTex c = coeff_tex(t.coeff);
        if (first)
            os << (c.negative ? "-" : "");
        else
            os << (c.negative ? " - " : " + ");
        first = false;
        std::string rest = term_factors(t);
        if (rest.empty())
            os << (c.is_one ? "1" : c.body);
        else if (c.is_one)
            os << rest;
        else
            os << c.body << " " << rest;
    }
    return os.str();
}

std::string latex(const EomPair &e) {
    return "\\begin{aligned}\nq_{t} &= " + latex(e.q_t) + " \\\\\nr_{t} &= " + latex(e.r_t) +
           "\n\\end{aligned}";
}

// ---------- JSON ----------

Json grat_json(const GRat &c) {
    return Json{{"re", rational_str(c.re)}, {"im", rational_str(c.im)}};
}

GRat grat_from_json(const Json &j) {
    return GRat(Rational(j.at("re").get<std::string>()),
                Rational(j.at("im").get<std::string>()));
}

Json poly_json(const DiffPoly &p) {
    Json out = Json::array();
    for (const Term &t : p.terms()) {
        Json params = Json::array();
        for (const auto &[name, e2] : t.params.entries2()) {
            if (e2 % 2 == 0)
                params.push_back(Json::array({name, e2 / 2, 1}));
            else
                params.push_back(Json::array({name, e2, 2}));
        }
        Json jets = Json::array();
        for (const auto &[j, e] : t.jets.factors())
            jets.push_back(Json{{"field", j.field.name},
                                {"parity", parity_str(j.field.base_parity)},
                                {"time_only", j.field.time_only},
                                {"dx", j.dx},
                                {"dt", j.dt},
                                {"exp", e}});
        out.push_back(Json{{"coeff", grat_json(t.coeff)}, {"params", params}, {"jets", jets}});
    }
    return out;
}

DiffPoly poly_from_json(const Json &j) {
    DiffPoly out;
    for (const Json &tj : j) {
        GRat c = grat_from_json(tj.at("coeff"));
        ParamMono pm = ParamMono::unit();
        for (const Json &pj : tj.at("params"))
            pm = pm * ParamMono::var(pj.at(0).get<std::string>(), pj.at(1).get<int>(),
                                     pj.at(2).get<int>());
        JetMono jm = JetMono::unit();
        for (const Json &jj : tj.at("jets")) {
            FieldSymbol f{jj.at("field").get<std::string>(),
                          jj.at("parity").get<std::string>() == "odd" ? Parity::Odd
                                                                      : Parity::Even,
                          jj.at("time_only").get<bool>()};
            jm = jm * JetMono::var(JetVar(f, jj.at("dx").get<int>(), jj.at("dt").get<int>()),
                                   jj.at("exp").get<int>());
        }
        out += DiffPoly::term(c, pm, jm);
    }
    return out;
}

Json loop_json(const LoopElement &e) {
    Json out = Json::array();
    for (const auto &[grade, m] : e.grades())
        for (const Json &c : mat_components(m))
            out.push_back(Json{{"grade", grade}, {"basis", c.at("basis")}, {"poly", c.at("poly")}});
    return out;
}

Json loop_json(const AbsElement &e) {
    Json out = Json::array();
    for (const auto &[grade, c] : e.grades()) {
        auto push = [&, g = grade](const char *basis, const DiffPoly &p) {
            if (!p.is_zero())
                out.push_back(Json{{"grade", g}, {"basis", basis}, {"poly", p.str()}});
        };
        push("b", c.b);
        push("F1", c.f1);
        push("F2", c.f2);
    }
    return out;
}

Json eom_json(const EomPair &e) {
    Json out{{"label", e.label}, {"q_t", e.q_t.str()}, {"r_t", e.r_t.str()}};
    if (!e.notes.empty()) out["notes"] = e.notes;
    return out;
}

Json hierarchy_json(const CoeffTable &t, const EomPair &eom) {
    Json coeffs = Json::array();
    for (std::size_t m = 0; m < t.entries.size(); ++m)
        coeffs.push_back(Json{{"m", m},
                              {"a", t.entries[m].a.str()},
                              {"b", t.entries[m].b.str()},
                              {"c", t.entries[m].c.str()}});
    return Json{{"family", t.family == Family::NLS ? "nls" : "dnls"},
                {"n", t.n},
                {"coefficients", coeffs},
                {"eom", eom_json(eom)}};
}

Json qid_json(const QidResult &qr, const std::vector<OrderVerdict> &verdicts) {
    Json orders = Json::array();
    for (const AnomalyOrder &o : qr.report.orders) {
        Json jo{{"m", o.m},
                {"grade", o.grade},
                {"anomaly_density", o.density.str()},
                {"parity", parity_class_str(o.parity)},
                {"total_derivative", o.total_derivative}};
        for (const OrderVerdict &v : verdicts)
            if (v.m == o.m) jo["verdict"] = verdict_str(v.verdict);
        orders.push_back(jo);
    }
    Json eoms = Json::array();
    for (const EomPair &e : qr.eoms) eoms.push_back(eom_json(e));
    return Json{{"orders", orders}, {"eoms", eoms}};
}

Json abelianization_json(const AbelianizationTable &t) {
    Json xi = Json::array();
    for (int j = 1; j <= t.xi.depth(); ++j)
        xi.push_back(Json{{"grade", -j},
                          {"f1", t.xi.comps[j - 1].first.str()},
                          {"f2", t.xi.comps[j - 1].second.str()}});
    Json charges = Json::array();
    for (const auto &[grade, p] : t.charge_density)
        charges.push_back(Json{{"grade", grade}, {"density", render_qr(p)}});
    Json alphas = Json::array();
    for (const auto &[grade, p] : t.alpha)
        alphas.push_back(Json{{"grade", grade}, {"value", render_qr(p)}});
    return Json{{"family", t.family == RotatedFamily::NLS ? "nls" : "kn"},
                {"depth", t.depth},
                {"xi", xi},
                {"charges", charges},
                {"alphas", alphas}};
}

Json nhd_json(const NhdResult &r, const ReducedConstraints &rc, const EliminationResult &el) {
    Json constraints = Json::array();
    for (const Constraint &c : r.constraints)
        constraints.push_back(
            Json{{"grade", c.grade}, {"component", c.component}, {"relation", c.relation.str()}});
    Json reduced = Json::array();
    for (const Constraint &c : rc.relations)
        reduced.push_back(Json{{"grade", c.grade}, {"relation", c.relation.str()}});
    auto names = [](const std::vector<FieldSymbol> &fs) {
        Json a = Json::array();
        for (const FieldSymbol &f : fs) a.push_back(f.name);
        return a;
    };
    Json out{{"deformed_eoms", eom_json(r.deformed_eoms)},
             {"eom_grade", r.eom_grade},
             {"constraints", constraints},
             {"reduced", reduced},
             {"vanishing", r.vanishing},
             {"time_only", names(r.time_only)},
             {"active", names(r.active)},
             {"eliminated", Json{{"equation", el.equation.str()}, {"order", el.order}}},
             {"verdict", resolution_str(r.resolution)}};
    if (!r.notes.empty()) out["notes"] = r.notes;
    return out;
}

}  // namespace laxforge
