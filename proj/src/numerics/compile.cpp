#include "laxforge/numerics.hpp"

#include <cmath>

namespace laxforge {

namespace {

constexpr double kMaskFloor = 1e-12;

std::complex<double> param_value(const ParamValues &params, const std::string &name, int e2) {
    auto it = params.find(name);
    if (it == params.end()) throw MissingAssignment("no numeric value for parameter " + name);
    if (e2 % 2 == 0) {
        std::complex<double> f = 1.0;
        std::complex<double> base = e2 > 0 ? it->second : 1.0 / it->second;
        for (int j = 0; j < std::abs(e2) / 2; ++j) f *= base;
        return f;
    }
    return std::pow(it->second, 0.5 * e2);
}

std::complex<double> term_coeff(const Term &t, const ParamValues &params) {
    std::complex<double> c = t.coeff.to_complex();
    for (const auto &[name, e2] : t.params.entries2()) c *= param_value(params, name, e2);
    return c;
}

// binomial table up to the order we ever differentiate
double binom(int n, int k) {
    static std::vector<std::vector<double>> pas;
    while (static_cast<int>(pas.size()) <= n) {
        int m = pas.size();
        std::vector<double> row(m + 1, 1.0);
        for (int j = 1; j < m; ++j) row[j] = pas[m - 1][j - 1] + pas[m - 1][j];
        pas.push_back(std::move(row));
    }
    return pas[n][k];
}

// Logarithmic jets l_m = (d/dx)^m log f, m >= 1, built pointwise from the
// normalized spectral jets v_m = f^(m)/f through
//   l_m = v_m - sum_{j=1..m-1} C(m-1,j) v_j l_{m-j}.
// Masked points get zero.
std::vector<CVec> log_jets(const std::vector<CVec> &v, const std::vector<char> &mask, int depth) {
    const std::size_t n = mask.size();
    std::vector<CVec> l(depth + 1, CVec(n, 0.0));
    for (int m = 1; m <= depth; ++m)
        for (std::size_t k = 0; k < n; ++k) {
            if (mask[k]) continue;
            std::complex<double> s = v[m][k];
            for (int j = 1; j < m; ++j) s -= binom(m - 1, j) * v[j][k] * l[m - j][k];
            l[m][k] = s;
        }
    return l;
}

}  // namespace

DensityEvaluator::DensityEvaluator(Grid g, DiffPoly p, ParamValues params)
    : g_(g), poly_(std::move(p)), params_(std::move(params)) {
    if (poly_.has_t_jets())
        throw UnsupportedDensity("density carries t-jets; only x-jets evaluate on a snapshot");
    for (const JetVar &j : poly_.jet_support()) {
        const std::string &f = j.field.name;
        if (j.field.time_only)
            throw UnsupportedDensity("time-only field " + f + " has no grid samples");
        if (f == "q") max_q_ = std::max(max_q_, j.dx);
        else if (f == "r") max_r_ = std::max(max_r_, j.dx);
        else if (f == "R") {
            polar_ = true;
            max_R_ = std::max(max_R_, j.dx);
        } else if (f == "phi") {
            if (j.dx == 0)
                throw UnsupportedDensity("a bare phi is not determined by (q, r); only its x-jets are");
            polar_ = true;
            max_phi_ = std::max(max_phi_, j.dx);
        } else {
            throw UnsupportedDensity("field " + f + " has no pointwise realization");
        }
    }
    if (polar_ && params_.find("kappa") == params_.end())
        throw MissingAssignment("densities in the polar basis need a numeric kappa");
    for (const Term &t : poly_.terms()) {
        CTerm ct;
        ct.coeff = term_coeff(t, params_);
        for (const auto &[jv, exp] : t.jets.factors()) {
            int tag = jv.field.name == "q" ? 0 : jv.field.name == "r" ? 1
                      : jv.field.name == "R" ? 2 : 3;
            ct.factors.push_back({tag, jv.dx, exp});
        }
        cterms_.push_back(std::move(ct));
    }
}

CVec DensityEvaluator::pointwise(const FieldState &s) const {
    if (static_cast<int>(s.q.size()) != g_.N || static_cast<int>(s.r.size()) != g_.N)
        throw std::invalid_argument("state size does not match the grid");
    const int n = g_.N;
    const bool polar = polar_;
    const int log_depth = std::max(max_R_, max_phi_);
    const int need_q = std::max(max_q_, polar ? log_depth : 0);
    const int need_r = std::max(max_r_, polar ? log_depth : 0);

    std::vector<CVec> qj(need_q + 1), rj(need_r + 1);
    qj[0] = s.q;
    rj[0] = s.r;
    for (int d = 1; d <= need_q; ++d) qj[d] = spectral_derivative(g_, s.q, d);
    for (int d = 1; d <= need_r; ++d) rj[d] = spectral_derivative(g_, s.r, d);

    std::vector<char> mask(n, 0);
    std::vector<CVec> Rj, phij;
    if (polar) {
        for (int k = 0; k < n; ++k)
            mask[k] = std::abs(s.q[k]) < kMaskFloor || std::abs(s.r[k]) < kMaskFloor;
        std::vector<CVec> vq(log_depth + 1, CVec(n, 0.0)), vr(log_depth + 1, CVec(n, 0.0));
        for (int m = 1; m <= log_depth; ++m)
            for (int k = 0; k < n; ++k)
                if (!mask[k]) {
                    vq[m][k] = qj[m][k] / s.q[k];
                    vr[m][k] = rj[m][k] / s.r[k];
                }
        auto lq = log_jets(vq, mask, log_depth);
        auto lr = log_jets(vr, mask, log_depth);

        const std::complex<double> kappa = params_.at("kappa");
        Rj.assign(max_R_ + 1, CVec(n, 0.0));
        for (int k = 0; k < n; ++k)
            if (!mask[k]) Rj[0][k] = std::sqrt(s.q[k] * s.r[k] / kappa);
        if (max_R_ > 0) {
            // R^(m) = R * B_m with B_m = sum C(m-1,j) B_j lam_{m-j},
            // lam_m = (l_m(q) + l_m(r)) / 2 from log R = (log q + log r - log kappa)/2
            std::vector<CVec> B(max_R_ + 1, CVec(n, 0.0));
            for (int k = 0; k < n; ++k) B[0][k] = 1.0;
            for (int m = 1; m <= max_R_; ++m)
                for (int k = 0; k < n; ++k) {
                    if (mask[k]) continue;
                    std::complex<double> acc = 0.0;
                    for (int j = 0; j < m; ++j)
                        acc += binom(m - 1, j) * B[j][k] * 0.5 * (lq[m - j][k] + lr[m - j][k]);
                    B[m][k] = acc;
                    Rj[m][k] = Rj[0][k] * acc;
                }
        }
        if (max_phi_ > 0) {
            // phi^(m) = (i/2)(l_m(q) - l_m(r)) from exp(2 i phi) = -kappa r / q
            phij.assign(max_phi_ + 1, CVec(n, 0.0));
            const std::complex<double> ih(0.0, 0.5);
            for (int m = 1; m <= max_phi_; ++m)
                for (int k = 0; k < n; ++k)
                    if (!mask[k]) phij[m][k] = ih * (lq[m][k] - lr[m][k]);
        }
    }

    CVec out(n, 0.0);
    for (const CTerm &t : cterms_) {
        for (int k = 0; k < n; ++k) {
            if (polar && mask[k]) continue;
            std::complex<double> prod = t.coeff;
            for (const auto &f : t.factors) {
                const CVec &arr = f[0] == 0 ? qj[f[1]] : f[0] == 1 ? rj[f[1]]
                                  : f[0] == 2 ? Rj[f[1]] : phij[f[1]];
                for (int e = 0; e < f[2]; ++e) prod *= arr[k];
            }
            out[k] += prod;
        }
    }
    if (polar)
        for (int k = 0; k < n; ++k)
            if (mask[k]) out[k] = 0.0;
    return out;
}

std::complex<double> DensityEvaluator::integral(const FieldState &s) const {
    CVec d = pointwise(s);
    std::complex<double> acc = 0.0;
    for (const auto &z : d) acc += z;
    return acc * g_.dx();
}

CompiledRhs::Side CompiledRhs::compile(const DiffPoly &p, const ParamValues &params) const {
    if (p.has_t_jets())
        throw UnsupportedDensity("flow right-hand side may not carry t-jets");
    Side side;
    for (const JetVar &j : p.jet_support()) {
        if (j.field.name == "q") side.max_q = std::max(side.max_q, j.dx);
        else if (j.field.name == "r") side.max_r = std::max(side.max_r, j.dx);
        else
            throw UnsupportedDensity("flow right-hand side may only involve q and r, got " +
                                     j.field.name);
    }
    for (const Term &t : p.terms()) {
        Side::CTerm ct;
        ct.coeff = term_coeff(t, params);
        for (const auto &[jv, exp] : t.jets.factors())
            ct.factors.push_back({jv.field.name == "q" ? 0 : 1, jv.dx, exp});
        side.cterms.push_back(std::move(ct));
    }
    return side;
}

CompiledRhs::CompiledRhs(Grid g, const EomPair &eom, ParamValues params) : g_(g) {
    qside_ = compile(eom.q_t, params);
    rside_ = compile(eom.r_t, params);
}

void CompiledRhs::eval(const CVec &q, const CVec &r, CVec &dq, CVec &dr) const {
    const int n = g_.N;
    const int mq = std::max(qside_.max_q, rside_.max_q);
    const int mr = std::max(qside_.max_r, rside_.max_r);
    std::vector<CVec> qj(mq + 1), rj(mr + 1);
    qj[0] = q;
    rj[0] = r;
    for (int d = 1; d <= mq; ++d) qj[d] = spectral_derivative(g_, q, d);
    for (int d = 1; d <= mr; ++d) rj[d] = spectral_derivative(g_, r, d);

    auto run = [&](const Side &side, CVec &out) {
        out.assign(n, 0.0);
        for (const auto &t : side.cterms)
            for (int k = 0; k < n; ++k) {
                std::complex<double> prod = t.coeff;
                for (const auto &f : t.factors) {
                    const CVec &arr = f[0] == 0 ? qj[f[1]] : rj[f[1]];
                    for (int e = 0; e < f[2]; ++e) prod *= arr[k];
                }
                out[k] += prod;
            }
    };
    run(qside_, dq);
    run(rside_, dr);
}

}  // namespace laxforge
