#include "laxforge/numerics.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>

namespace laxforge {

BalanceSet nls_balance_set(int depth) {
    if (depth < 1) throw std::invalid_argument("need at least one charge");
    AbelianizationTable tab = abelianize(RotatedFamily::NLS, depth + 1);
    BalanceSet set;
    for (int j = 1; j <= depth; ++j) {
        set.names.push_back("Q" + std::to_string(j));
        set.q_density.push_back(tab.charge_density.at(-j));
        DiffPoly w;
        auto f2 = tab.f2_response.find(-j);
        if (f2 != tab.f2_response.end())
            w = DiffPoly::jet(field_R()).scaled(GRat::imag(2, 1)) * f2->second;
        set.gamma_weight.push_back(w);
    }
    return set;
}

double ChargeSeries::max_residual(std::size_t j) const {
    double m = 0.0;
    for (double v : residual.at(j)) m = std::max(m, v);
    return m;
}

double ChargeSeries::drift(std::size_t j) const {
    const auto &c = charge.at(j);
    double m = 0.0;
    for (const auto &v : c) m = std::max(m, std::abs(v - c.front()));
    return m / scale.at(j);
}

ChargeSeries measure(const Trajectory &traj, const BalanceSet &set, double eps) {
    const std::size_t nj = set.names.size();
    const std::size_t ns = traj.snaps.size();
    ChargeSeries out;
    out.names = set.names;
    out.times.reserve(ns);
    out.charge.assign(nj, {});
    out.anomaly.assign(nj, {});
    out.residual.assign(nj, std::vector<double>(ns, 0.0));
    out.scale.assign(nj, 1.0);

    const ParamValues params = {{"kappa", {-1.0, 0.0}}, {"alpha", {0.0, -1.0}}};
    std::vector<DensityEvaluator> qeval;
    std::vector<std::unique_ptr<DensityEvaluator>> weval;
    for (std::size_t j = 0; j < nj; ++j) {
        qeval.emplace_back(traj.grid, set.q_density[j], params);
        weval.push_back(set.gamma_weight[j].is_zero()
                            ? nullptr
                            : std::make_unique<DensityEvaluator>(traj.grid, set.gamma_weight[j], params));
    }

    const double dx = traj.grid.dx();
    for (const FieldState &s : traj.snaps) {
        out.times.push_back(s.t);
        CVec defect = potential_defect(traj.grid, s, eps);
        for (std::size_t j = 0; j < nj; ++j) {
            out.charge[j].push_back(qeval[j].integral(s));
            std::complex<double> gam = 0.0;
            if (weval[j] && eps != 0.0) {
                CVec w = weval[j]->pointwise(s);
                for (int k = 0; k < traj.grid.N; ++k) gam += defect[k] * w[k];
                gam *= dx;
            }
            out.anomaly[j].push_back(gam);
        }
    }

    for (std::size_t j = 0; j < nj; ++j) {
        for (const auto &v : out.charge[j]) out.scale[j] = std::max(out.scale[j], std::abs(v));
        for (std::size_t i = 1; i + 1 < ns; ++i) {
            const double span = out.times[i + 1] - out.times[i - 1];
            const std::complex<double> rate = (out.charge[j][i + 1] - out.charge[j][i - 1]) / span;
            out.residual[j][i] = std::abs(rate - out.anomaly[j][i]);
        }
    }
    return out;
}

std::string charge_csv(const ChargeSeries &s) {
    std::string out = "t";
    for (const auto &n : s.names)
        out += "," + n + "_re," + n + "_im," + n + "_gamma_re," + n + "_gamma_im," + n + "_residual";
    out += "\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.12e", v);
        out += buf;
    };
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12e", s.times[i]);
        out += buf;
        for (std::size_t j = 0; j < s.names.size(); ++j) {
            put(s.charge[j][i].real());
            put(s.charge[j][i].imag());
            put(s.anomaly[j][i].real());
            put(s.anomaly[j][i].imag());
            put(s.residual[j][i]);
        }
        out += "\n";
    }
    return out;
}

void save_state(const std::string &path, const Grid &g, const FieldState &s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const std::int64_t n = g.N;
    f.write(reinterpret_cast<const char *>(&n), sizeof n);
    f.write(reinterpret_cast<const char *>(&g.length), sizeof g.length);
    f.write(reinterpret_cast<const char *>(&s.t), sizeof s.t);
    auto dump = [&](const CVec &v) {
        for (const auto &z : v) {
            const double re = z.real(), im = z.imag();
            f.write(reinterpret_cast<const char *>(&re), sizeof re);
            f.write(reinterpret_cast<const char *>(&im), sizeof im);
        }
    };
    dump(s.q);
    dump(s.r);
    if (!f) throw std::runtime_error("short write to " + path);
}

std::pair<Grid, FieldState> load_state(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::int64_t n = 0;
    double L = 0.0, t = 0.0;
    f.read(reinterpret_cast<char *>(&n), sizeof n);
    f.read(reinterpret_cast<char *>(&L), sizeof L);
    f.read(reinterpret_cast<char *>(&t), sizeof t);
    if (!f) throw std::runtime_error("truncated snapshot " + path);
    Grid g(static_cast<int>(n), L);
    FieldState s;
    s.t = t;
    auto slurp = [&](CVec &v) {
        v.resize(g.N);
        for (auto &z : v) {
            double re = 0.0, im = 0.0;
            f.read(reinterpret_cast<char *>(&re), sizeof re);
            f.read(reinterpret_cast<char *>(&im), sizeof im);
            z = {re, im};
        }
    };
    slurp(s.q);
    slurp(s.r);
    if (!f) throw std::runtime_error("truncated snapshot " + path);
    return {g, std::move(s)};
}

}  // namespace laxforge
