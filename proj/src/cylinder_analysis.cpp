#include "willmore/cylinder_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

struct Rows {
    std::vector<int> idx;
    std::vector<double> w;
};

Rows select_rows(const QuadratureGrid& grid, const TRange& range) {
    if (!grid.s.periodic()) throw Error(ErrorKind::precondition, "cylinder analysis needs a periodic theta axis");
    int i0 = -1, i1 = -1;
    for (int i = 0; i < grid.nt(); ++i) {
        const double t = grid.t.nodes[i];
        if (t >= range.ta - 1e-12 && t <= range.tb + 1e-12) {
            if (i0 < 0) i0 = i;
            i1 = i;
        }
    }
    if (i0 < 0) throw Error(ErrorKind::domain, "t-range contains no grid rows");
    Rows r;
    const bool whole = i0 == 0 && i1 == grid.nt() - 1;
    const std::vector<double> w = whole ? grid.t.weights : (i1 > i0 ? row_weights(grid.t, i0, i1)
                                                                    : std::vector<double>(grid.nt(), 0.0));
    for (int i = i0; i <= i1; ++i) {
        r.idx.push_back(i);
        r.w.push_back(w[i]);
    }
    return r;
}

std::vector<Vec5> circle_means(const ConformalGaussField& F) {
    const QuadratureGrid& G = F.grid;
    double total = 0.0;
    for (double w : G.s.weights) total += w;
    std::vector<Vec5> out(G.nt(), Vec5::Zero());
    for (int i = 0; i < G.nt(); ++i) {
        for (int j = 0; j < G.ns(); ++j) out[i] += G.s.weights[j] * F.Y[G.index(i, j)];
        out[i] /= total;
    }
    return out;
}

double lorentz_circle(const ConformalGaussField& F, int i) {
    double v = 0.0;
    for (int j = 0; j < F.grid.ns(); ++j) {
        const int k = F.grid.index(i, j);
        v += F.grid.s.weights[j] * (eta_norm2(F.dY[0][k]) + eta_norm2(F.dY[1][k]));
    }
    return v;
}

}  // namespace

CylinderDiagnostics circle_quantities(const ConformalGaussField& F, const TRange& range) {
    const Rows rows = select_rows(F.grid, range);
    const QuadratureGrid& G = F.grid;
    const std::vector<Vec5> ystar = circle_means(F);
    const std::vector<Vec5> ystar_t = diff_1d(AxisDiff(G.t), ystar, 1);

    CylinderDiagnostics d;
    d.rows = rows.idx;
    d.w = rows.w;
    for (std::size_t r = 0; r < rows.idx.size(); ++r) {
        const int i = rows.idx[r];
        double a = 0, b = 0, c = 0, e = 0;
        for (int j = 0; j < G.ns(); ++j) {
            const int k = G.index(i, j);
            const double w = G.s.weights[j];
            const double th = F.dY[1][k].squaredNorm();
            a += w * th;
            b += w * (F.dY[0][k].squaredNorm() + th);
            c += w * ((F.dY[0][k] - ystar_t[i]).squaredNorm() + th);
            e += w * (F.d2Y[1][k].squaredNorm() + F.d2Y[2][k].squaredNorm());
        }
        d.t.push_back(G.t.nodes[i]);
        d.alpha.push_back(a);
        d.beta.push_back(b);
        d.gamma.push_back(c);
        d.delta.push_back(e);
        d.Ystar.push_back(ystar[i]);
        const double dens = std::sqrt(std::max(lorentz_circle(F, i), 0.0));
        d.lorentz_density.push_back(dens);
    }
    d.ell = cumulative_integral(d.t, d.lorentz_density).back();
    return d;
}

ResidueReport residue_identity_defect(const ConformalGaussField& F, const TRange& range) {
    const Rows rows = select_rows(F.grid, range);
    const QuadratureGrid& G = F.grid;
    ResidueReport rep;
    for (int i : rows.idx) {
        double dt = 0, ds = 0, beta = 0;
        for (int j = 0; j < G.ns(); ++j) {
            const int k = G.index(i, j);
            const double w = G.s.weights[j];
            dt += w * eta_norm2(F.dY[0][k]);
            ds += w * eta_norm2(F.dY[1][k]);
            beta += w * (F.dY[0][k].squaredNorm() + F.dY[1][k].squaredNorm());
        }
        const double def = std::abs(dt - ds);
        rep.t.push_back(G.t.nodes[i]);
        rep.defect.push_back(def);
        rep.beta.push_back(beta);
        rep.max_defect = std::max(rep.max_defect, def);
        if (beta > 0) rep.max_relative = std::max(rep.max_relative, def / beta);
        else if (def > 0) rep.max_relative = std::numeric_limits<double>::infinity();
    }
    return rep;
}

ConvexityReport convexity_certificate(const std::vector<double>& t, const std::vector<double>& alpha, double t1,
                                      double t2, double tol) {
    if (t.size() != alpha.size()) throw Error(ErrorKind::validation, "t and alpha differ in length");
    if (!(t2 > t1)) throw Error(ErrorKind::domain, "convexity certificate needs t1 < t2");
    std::vector<int> in;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t1 - 1e-12 && t[i] <= t2 + 1e-12) in.push_back(static_cast<int>(i));
    if (in.size() < 3) throw Error(ErrorKind::size, "convexity certificate needs at least 3 circles");

    const double ta = t[in.front()], tb = t[in.back()];
    const double a1 = alpha[in.front()], a2 = alpha[in.back()];
    ConvexityReport rep;
    // tau = lambda e^t + mu e^-t through the two end values
    const double det = std::exp(ta - tb) - std::exp(tb - ta);
    rep.lambda = (a1 * std::exp(-tb) - a2 * std::exp(-ta)) / det;
    rep.mu = (a2 * std::exp(ta) - a1 * std::exp(tb)) / det;

    std::vector<double> second(in.size(), 0.0);
    double amax = 0.0, smax = 0.0;
    for (std::size_t r = 0; r < in.size(); ++r) amax = std::max(amax, std::abs(alpha[in[r]]));
    for (std::size_t r = 1; r + 1 < in.size(); ++r) {
        const int i = in[r];
        const double hm = t[i] - t[i - 1], hp = t[i + 1] - t[i];
        second[r] = 2.0 * (hm * alpha[i + 1] - (hm + hp) * alpha[i] + hp * alpha[i - 1]) / (hm * hp * (hm + hp));
        smax = std::max(smax, std::abs(second[r]));
    }
    rep.tol = tol >= 0.0 ? tol : 1e-3 * std::max(amax, smax);

    rep.worst_convexity = 1e300;
    for (std::size_t r = 1; r + 1 < in.size(); ++r) {
        const double gap = second[r] - alpha[in[r]];
        rep.worst_convexity = std::min(rep.worst_convexity, gap);
        ++rep.interior;
        if (gap < -rep.tol) ++rep.convex_violations;
    }
    const double cap = std::max(a1, a2);
    for (int i : in) {
        if (alpha[i] > cap + rep.tol) rep.max_principle = false;
        const double tau = rep.lambda * std::exp(t[i]) + rep.mu * std::exp(-t[i]);
        rep.barrier_excess = std::max(rep.barrier_excess, alpha[i] - tau);
        if (alpha[i] > tau + rep.tol) rep.barrier = false;
    }
    return rep;
}

ConvexityReport convexity_certificate(const CylinderDiagnostics& diag, double t1, double t2, double tol) {
    return convexity_certificate(diag.t, diag.alpha, t1, t2, tol);
}

OscillationReport oscillation(const ConformalGaussField& F, const TRange& range) {
    const Rows rows = select_rows(F.grid, range);
    const QuadratureGrid& G = F.grid;
    OscillationReport rep;
    std::vector<Vec5> pts;
    for (std::size_t r = 0; r < rows.idx.size(); ++r) {
        const int i = rows.idx[r];
        double circle = 0.0;
        for (int j = 0; j < G.ns(); ++j) {
            const int k = G.index(i, j);
            const double g2 = F.dY[0][k].squaredNorm() + F.dY[1][k].squaredNorm();
            rep.grad_sup = std::max(rep.grad_sup, std::sqrt(g2));
            circle += G.s.weights[j] * g2;
            pts.push_back(F.Y[k]);
        }
        rep.euclid_length += rows.w[r] * std::sqrt(circle);
    }
    double osc2 = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p)
        for (std::size_t q = p + 1; q < pts.size(); ++q) osc2 = std::max(osc2, (pts[p] - pts[q]).squaredNorm());
    rep.osc = std::sqrt(osc2);
    rep.bound = 4.0 * std::numbers::pi * rep.grad_sup + rep.euclid_length / std::sqrt(2.0 * std::numbers::pi);
    rep.within_bound = rep.osc <= rep.bound * (1.0 + 1e-9) + 1e-12;
    return rep;
}

Reparametrization reparametrize(const ConformalGaussField& F, ReparamMode mode, const TRange& range) {
    const Rows rows = select_rows(F.grid, range);
    const QuadratureGrid& G = F.grid;
    Reparametrization out;
    out.mode = mode;
    out.rows = rows.idx;
    std::vector<Vec5> ystar_t;
    if (mode == ReparamMode::euclid_arclength_of_average) ystar_t = diff_1d(AxisDiff(G.t), circle_means(F), 1);

    double dmax = 0.0;
    for (int i : rows.idx) {
        out.t.push_back(G.t.nodes[i]);
        double d;
        if (mode == ReparamMode::lorentz_average) {
            d = std::sqrt(std::max(lorentz_circle(F, i), 0.0));
        } else {
            d = ystar_t[i].norm();
        }
        out.density.push_back(d);
        dmax = std::max(dmax, d);
    }
    for (std::size_t r = 0; r < rows.idx.size(); ++r) {
        const int i = rows.idx[r];
        bool all_umbilic = true;
        for (int j = 0; j < G.ns() && all_umbilic; ++j) all_umbilic = F.umbilic[G.index(i, j)] != 0;
        if (out.density[r] <= 1e-7 * dmax || (mode == ReparamMode::lorentz_average && all_umbilic) || dmax == 0.0)
            throw Error(ErrorKind::umbilic_circle,
                        "vanishing density on the circle t = " + std::to_string(out.t[r]) +
                            "; remove the umbilic circle with umbilic_circle_perturbation first");
    }
    out.s = cumulative_integral(out.t, out.density);
    out.length = out.s.back();
    return out;
}

LineFit line_fit(const std::vector<double>& s, const std::vector<Vec5>& samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 2 || static_cast<int>(s.size()) != n) throw Error(ErrorKind::size, "line fit needs at least 2 samples");
    double spread = 0.0, srange = 0.0;
    for (int k = 1; k < n; ++k) {
        spread = std::max(spread, (samples[k] - samples[0]).norm());
        srange = std::max(srange, std::abs(s[k] - s[0]));
    }
    if (spread <= 1e-14 * (1.0 + samples[0].norm()) || srange == 0.0)
        throw Error(ErrorKind::degenerate_fit, "line fit samples coincide");
    Eigen::MatrixXd X(n, 2);
    Eigen::MatrixXd Yv(n, 5);
    for (int k = 0; k < n; ++k) {
        X(k, 0) = s[k];
        X(k, 1) = 1.0;
        Yv.row(k) = samples[k].transpose();
    }
    const Eigen::MatrixXd C = X.colPivHouseholderQr().solve(Yv);
    LineFit f;
    f.a = C.row(0).transpose();
    f.b = C.row(1).transpose();
    for (int k = 0; k < n; ++k) f.residual = std::max(f.residual, (samples[k] - (f.a * s[k] + f.b)).norm());
    f.a_eta2 = eta_norm2(f.a);
    f.b_eta2_minus_one = eta_norm2(f.b) - 1.0;
    f.ab_eta = eta_inner(f.a, f.b);
    const double ax = f.a.squaredNorm();
    f.null_ratio = ax > 0 ? std::abs(f.a_eta2) / ax : 0.0;
    f.causal = causal_class(f.a);
    return f;
}

GeodesicReport geodesic_residual(const ConformalGaussField& F, const TRange& range) {
    const Rows rows = select_rows(F.grid, range);
    const AxisDiff D(F.grid.t);
    const std::vector<Vec5> ys = circle_means(F);
    const std::vector<Vec5> y1 = diff_1d(D, ys, 1);
    const std::vector<Vec5> y2 = diff_1d(D, ys, 2);
    GeodesicReport rep;
    for (int i : rows.idx) {
        const double sp = y1[i].norm();
        if (sp == 0.0) continue;
        const double spp = y1[i].dot(y2[i]) / sp;
        const Vec5 yss = (y2[i] - y1[i] * (spp / sp)) / (sp * sp);
        rep.residual = std::max(rep.residual, yss.norm());
    }
    rep.sup_alpha_over_beta = sup_alpha_over_beta(circle_quantities(F, range));
    return rep;
}

double sup_alpha_over_beta(const CylinderDiagnostics& diag) {
    double r = 0.0;
    for (std::size_t i = 0; i < diag.alpha.size(); ++i)
        if (diag.beta[i] > 0) r = std::max(r, diag.alpha[i] / diag.beta[i]);
    return r;
}

void write_cylinder_csv(const CylinderDiagnostics& diag, std::ostream& os) {
    os << "# schema=willmore.cylinder_diagnostics.v1\n";
    os << "t,alpha,beta,gamma,delta,Ystar_1,Ystar_2,Ystar_3,Ystar_4,Ystar_5\n";
    os.precision(12);
    for (std::size_t i = 0; i < diag.t.size(); ++i) {
        os << diag.t[i] << ',' << diag.alpha[i] << ',' << diag.beta[i] << ',' << diag.gamma[i] << ',' << diag.delta[i];
        for (int c = 0; c < 5; ++c) os << ',' << diag.Ystar[i](c);
        os << '\n';
    }
}

}  // namespace willmore
