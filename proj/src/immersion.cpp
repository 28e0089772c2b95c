#include "willmore/immersion.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "willmore/errors.hpp"
#include "willmore/smoothstep.hpp"

namespace willmore {

namespace {

constexpr double kPi = std::numbers::pi;

Jet fd_jet(const std::function<Vec4(double, double)>& f, double t, double s, double h) {
    static const double c1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    static const double c2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    Vec4 v[5][5];
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) v[a][b] = f(t + (a - 2) * h, s + (b - 2) * h);
    Jet j;
    j.x = v[2][2];
    for (int k = 0; k < 5; ++k) {
        j.xt += c1[k] * v[k][2] / h;
        j.xs += c1[k] * v[2][k] / h;
        j.xtt += c2[k] * v[k][2] / (h * h);
        j.xss += c2[k] * v[2][k] / (h * h);
        for (int m = 0; m < 5; ++m) j.xts += c1[k] * c1[m] * v[k][m] / (h * h);
    }
    return j;
}

// Second-order jet of a map R^3 -> R^4 at a point.
struct PointMapJet {
    Vec4 y = Vec4::Zero();
    Eigen::Matrix<double, 4, 3> D = Eigen::Matrix<double, 4, 3>::Zero();
    std::array<Eigen::Matrix3d, 4> D2{};
};

Jet compose(const PointMapJet& F, const Jet& j) {
    auto lin = [&](const Vec4& v) -> Vec4 { return F.D * v.head<3>(); };
    auto quad = [&](const Vec4& a, const Vec4& b) -> Vec4 {
        Vec4 out;
        for (int k = 0; k < 4; ++k) out(k) = a.head<3>().dot(F.D2[k] * b.head<3>());
        return out;
    };
    Jet o;
    o.x = F.y;
    o.xt = lin(j.xt);
    o.xs = lin(j.xs);
    o.xtt = quad(j.xt, j.xt) + lin(j.xtt);
    o.xts = quad(j.xt, j.xs) + lin(j.xts);
    o.xss = quad(j.xs, j.xs) + lin(j.xss);
    return o;
}

PointMapJet moebius_point_jet(const Mat5& M, const Eigen::Vector3d& x, double t, double s) {
    Vec5 L;
    L << x, 0.5 * (x.squaredNorm() - 1.0), 0.5 * (x.squaredNorm() + 1.0);
    Eigen::Matrix<double, 5, 3> DL;
    DL.topRows<3>().setIdentity();
    DL.row(3) = x.transpose();
    DL.row(4) = x.transpose();
    const Vec5 v = M * L;
    const Eigen::Matrix<double, 5, 3> Dv = M * DL;
    const double w = v(4) - v(3);
    if (std::abs(w) <= 1e-12 * v.norm()) {
        std::ostringstream msg;
        msg << "transformed chart hits infinity at node (t=" << t << ", theta=" << s << ")";
        throw Error(ErrorKind::pole_on_surface, msg.str());
    }
    const Eigen::RowVector3d Dw = Dv.row(4) - Dv.row(3);
    const double d2w = (M(4, 3) + M(4, 4)) - (M(3, 3) + M(3, 4));
    PointMapJet F;
    F.y.head<3>() = v.head<3>() / w;
    for (int k = 0; k < 3; ++k) {
        F.D.row(k) = (Dv.row(k) - F.y(k) * Dw) / w;
        const double d2u = M(k, 3) + M(k, 4);
        F.D2[k] = (d2u * Eigen::Matrix3d::Identity() - F.D.row(k).transpose() * Dw - Dw.transpose() * F.D.row(k) -
                   F.y(k) * d2w * Eigen::Matrix3d::Identity()) /
                  w;
    }
    F.D2[3].setZero();
    return F;
}

PointMapJet inverse_stereo_jet(const Eigen::Vector3d& x) {
    const double d = x.squaredNorm() + 1.0;
    const double q = 1.0 / d;
    const Eigen::Vector3d dq = -2.0 * x / (d * d);
    const Eigen::Matrix3d d2q = -2.0 * Eigen::Matrix3d::Identity() / (d * d) + 8.0 * x * x.transpose() / (d * d * d);
    PointMapJet F;
    for (int k = 0; k < 3; ++k) {
        F.y(k) = 2.0 * x(k) * q;
        Eigen::RowVector3d row = 2.0 * x(k) * dq.transpose();
        row(k) += 2.0 * q;
        F.D.row(k) = row;
        Eigen::Matrix3d H = 2.0 * x(k) * d2q;
        H.row(k) += 2.0 * dq.transpose();
        H.col(k) += 2.0 * dq;
        F.D2[k] = H;
    }
    F.y(3) = 1.0 - 2.0 * q;
    F.D.row(3) = -2.0 * dq.transpose();
    F.D2[3] = -2.0 * d2q;
    return F;
}

double det3(const Vec4& a, const Vec4& b, const Vec4& c, int skip) {
    Eigen::Matrix3d m;
    int r = 0;
    for (int k = 0; k < 4; ++k) {
        if (k == skip) continue;
        m.row(r++) << a(k), b(k), c(k);
    }
    return m.determinant();
}

}  // namespace

Jet ParametricImmersion::evaluate(double t, double s) const {
    if (jet_mode == JetMode::analytic && analytic) return analytic(t, s);
    if (!position) throw Error(ErrorKind::validation, name + ": no evaluator");
    return fd_jet(position, t, s, fd_step);
}

Rule ParametricImmersion::t_rule() const {
    if (periodic_t) return Rule::periodic;
    if (singular_ends) return Rule::gauss_legendre;
    return Rule::trapezoid;
}

QuadratureGrid default_grid(const ParametricImmersion& phi, int nt, int ns) {
    return {make_axis(phi.t_rule(), phi.t0, phi.t1, nt), make_axis(Rule::periodic, 0.0, 2.0 * kPi, ns)};
}

FundamentalForms fundamental_forms(const Jet& j, Ambient ambient) {
    FundamentalForms ff;
    ff.g << j.xt.dot(j.xt), j.xt.dot(j.xs), j.xs.dot(j.xt), j.xs.dot(j.xs);
    ff.det_g = ff.g.determinant();
    const double scale = ff.g.trace();
    if (!(ff.det_g > 1e-14 * scale * scale) || !std::isfinite(ff.det_g))
        throw Error(ErrorKind::degenerate_immersion, "det g <= 0");
    ff.g_inv = ff.g.inverse();
    if (ambient == Ambient::R3) {
        const Eigen::Vector3d n = j.xt.head<3>().cross(j.xs.head<3>()).normalized();
        ff.N << n, 0.0;
    } else {
        Vec4 n;
        for (int k = 0; k < 4; ++k) n(k) = ((k % 2) ? -1.0 : 1.0) * det3(j.x, j.xt, j.xs, k);
        n.normalize();
        Eigen::Matrix4d frame;
        frame << j.x, j.xt, j.xs, n;
        if (frame.determinant() < 0) n = -n;
        ff.N = n;
    }
    ff.A << j.xtt.dot(ff.N), j.xts.dot(ff.N), j.xts.dot(ff.N), j.xss.dot(ff.N);
    ff.H = 0.5 * (ff.g_inv * ff.A).trace();
    ff.A0 = ff.A - ff.H * ff.g;
    const Eigen::Matrix2d m = ff.g_inv * ff.A0;
    ff.A0_norm2 = (m * m).trace();
    ff.K = ff.H * ff.H - 0.5 * ff.A0_norm2 + (ambient == Ambient::S3 ? 1.0 : 0.0);
    ff.lambda_conf = 0.5 * std::log(ff.g(0, 0));
    ff.conformal = std::abs(ff.g(0, 0) - ff.g(1, 1)) <= 1e-10 * scale && std::abs(ff.g(0, 1)) <= 1e-10 * scale;
    return ff;
}

FundamentalForms fundamental_forms(const ParametricImmersion& phi, double t, double s) {
    return fundamental_forms(phi.evaluate(t, s), phi.ambient);
}

namespace {

template <class F>
double integrate(const ParametricImmersion& phi, const QuadratureGrid& grid, F&& integrand) {
    double total = 0.0;
    for (int i = 0; i < grid.nt(); ++i)
        for (int j = 0; j < grid.ns(); ++j) {
            const FundamentalForms ff = fundamental_forms(phi, grid.t.nodes[i], grid.s.nodes[j]);
            total += grid.weight(i, j) * integrand(ff) * std::sqrt(ff.det_g);
        }
    return total;
}

}  // namespace

double willmore_W(const ParametricImmersion& phi, const QuadratureGrid& grid) {
    return integrate(phi, grid, [](const FundamentalForms& ff) { return ff.H * ff.H; });
}

double traceless_E(const ParametricImmersion& phi, const QuadratureGrid& grid) {
    return integrate(phi, grid, [](const FundamentalForms& ff) { return ff.A0_norm2; });
}

double chart_area(const ParametricImmersion& phi, const QuadratureGrid& grid) {
    return integrate(phi, grid, [](const FundamentalForms&) { return 1.0; });
}

EnergyIdentity energy_identity(const ParametricImmersion& phi, const QuadratureGrid& grid) {
    if (!phi.closed) throw Error(ErrorKind::precondition, phi.name + ": chi identity needs a closed surface");
    EnergyIdentity out{};
    double area = 0.0, dn = 0.0;
    for (int i = 0; i < grid.nt(); ++i)
        for (int j = 0; j < grid.ns(); ++j) {
            const FundamentalForms ff = fundamental_forms(phi, grid.t.nodes[i], grid.s.nodes[j]);
            const double dv = grid.weight(i, j) * std::sqrt(ff.det_g);
            out.W += ff.H * ff.H * dv;
            out.E += ff.A0_norm2 * dv;
            area += dv;
            const Eigen::Matrix2d m = ff.g_inv * ff.A;
            dn += (m * m).trace() * dv;
        }
    out.chi = phi.euler_characteristic;
    const double w_conf = phi.ambient == Ambient::S3 ? out.W + area : out.W;
    out.defect = std::abs(out.E - 2.0 * w_conf + 4.0 * kPi * out.chi);
    out.normal_form = 0.5 * dn - out.chi;
    return out;
}

double gauss_curvature_integral(const ParametricImmersion& phi, const QuadratureGrid& grid, double ta, double tb) {
    int i0 = grid.nt(), i1 = -1;
    for (int i = 0; i < grid.nt(); ++i)
        if (grid.t.nodes[i] >= ta - 1e-12 && grid.t.nodes[i] <= tb + 1e-12) {
            i0 = std::min(i0, i);
            i1 = std::max(i1, i);
        }
    if (i1 < i0) throw Error(ErrorKind::domain, "empty t-range for curvature integral");
    const bool full = i0 == 0 && i1 == grid.nt() - 1;
    const std::vector<double> wt = full ? grid.t.weights : row_weights(grid.t, i0, i1);
    double total = 0.0;
    for (int i = i0; i <= i1; ++i)
        for (int j = 0; j < grid.ns(); ++j) {
            const FundamentalForms ff = fundamental_forms(phi, grid.t.nodes[i], grid.s.nodes[j]);
            total += wt[i] * grid.s.weights[j] * ff.K * std::sqrt(ff.det_g);
        }
    return total;
}

ParametricImmersion scale_immersion(const ParametricImmersion& phi, double factor) {
    ParametricImmersion out = phi;
    if (phi.analytic) {
        auto base = phi.analytic;
        out.analytic = [base, factor](double t, double s) {
            Jet j = base(t, s);
            j.x *= factor;
            j.xt *= factor;
            j.xs *= factor;
            j.xtt *= factor;
            j.xts *= factor;
            j.xss *= factor;
            return j;
        };
    }
    if (phi.position) {
        auto base = phi.position;
        out.position = [base, factor](double t, double s) { return Vec4(factor * base(t, s)); };
    }
    return out;
}

ParametricImmersion moebius_transform_immersion(const ParametricImmersion& phi, const Mat5& M) {
    if (phi.ambient != Ambient::R3) throw Error(ErrorKind::domain, "moebius transform acts on R3 charts");
    ParametricImmersion out = phi;
    out.name = phi.name + "*M";
    auto base = phi;
    out.analytic = [base, M](double t, double s) {
        const Jet j = base.evaluate(t, s);
        return compose(moebius_point_jet(M, j.x.head<3>(), t, s), j);
    };
    out.position = [base, M](double t, double s) {
        const Vec4 x = base.position ? base.position(t, s) : base.evaluate(t, s).x;
        Vec4 y = Vec4::Zero();
        y.head<3>() = moebius_point_jet(M, x.head<3>(), t, s).y.head<3>();
        return y;
    };
    out.jet_mode = JetMode::analytic;
    return out;
}

ParametricImmersion inverse_stereographic(const ParametricImmersion& phi) {
    if (phi.ambient != Ambient::R3) throw Error(ErrorKind::domain, "inverse stereographic needs an R3 chart");
    ParametricImmersion out = phi;
    out.name = phi.name + "@S3";
    out.ambient = Ambient::S3;
    auto base = phi;
    out.analytic = [base](double t, double s) {
        const Jet j = base.evaluate(t, s);
        return compose(inverse_stereo_jet(j.x.head<3>()), j);
    };
    out.position = [base](double t, double s) {
        return inverse_stereo_jet(base.evaluate(t, s).x.head<3>()).y;
    };
    out.jet_mode = JetMode::analytic;
    return out;
}

double umbilic_cutoff(double tau, double t, double s, int derivative) {
    if (tau <= t) return ramp(tau, t - 2.0 * s / 3.0, t - s / 3.0, derivative);
    const double sign = (derivative % 2) ? -1.0 : 1.0;
    return sign * ramp(2.0 * t - tau, t - 2.0 * s / 3.0, t - s / 3.0, derivative);
}

ReparamReport umbilic_circle_perturbation(const ParametricImmersion& phi, double t, double s, double a, int k,
                                          double eps, const QuadratureGrid& grid) {
    if (!(s > 0.0 && s < 0.5)) throw Error(ErrorKind::precondition, "perturbation width s must lie in (0, 1/2)");
    if (k < 1 || k > 3) throw Error(ErrorKind::validation, "smoothness order k must be 1, 2 or 3");
    if (!phi.periodic_t && (t - s < phi.t0 || t + s > phi.t1))
        throw Error(ErrorKind::domain, "perturbation support leaves the chart");

    // sup |eta^(p)| over a fine sampling plus the grid rows
    std::vector<double> taus;
    const int fine = 4001;
    for (int i = 0; i < fine; ++i) taus.push_back(t - s + 2.0 * s * i / (fine - 1));
    for (double tau : grid.t.nodes) taus.push_back(tau);
    double sup_eta[4] = {0, 0, 0, 0};
    for (double tau : taus)
        for (int p = 0; p <= 3; ++p) sup_eta[p] = std::max(sup_eta[p], std::abs(umbilic_cutoff(tau, t, s, p)));

    ReparamReport rep;
    double amp = a;
    for (int step = 0; step <= 80; ++step) {
        const double abs_a = std::abs(amp);
        const double w1 = abs_a * (sup_eta[0] + sup_eta[1] + 1.0);
        double wk = 0.0;
        for (int p = 0; p <= k; ++p) wk += abs_a * sup_eta[p] * (k - p + 1);
        double min_jac = 1e300;
        for (int i = 0; i < grid.nt(); ++i)
            for (int j = 0; j < grid.ns(); ++j)
                min_jac = std::min(min_jac, 1.0 + amp * umbilic_cutoff(grid.t.nodes[i], t, s, 1) *
                                                      std::sin(grid.s.nodes[j]));
        min_jac = std::min(min_jac, 1.0 - abs_a * sup_eta[1]);
        if (w1 <= eps && min_jac > 0.0) {
            rep.a = amp;
            rep.w1_norm = w1;
            rep.wk_norm = wk;
            double bound = 0.0;
            for (int i = 0; i <= k; ++i) bound += std::pow(s, -i);
            rep.wk_bound = abs_a * bound;
            rep.min_jacobian = min_jac;
            rep.shrink_steps = step;
            break;
        }
        if (step == 80) throw Error(ErrorKind::diffeomorphism_failure, "no admissible amplitude: slice not monotone");
        amp *= 0.5;
    }

    ParametricImmersion out = phi;
    out.name = phi.name + "*f";
    auto base = phi;
    const double aa = rep.a;
    out.analytic = [base, aa, t, s](double tau, double th) {
        const double e0 = umbilic_cutoff(tau, t, s, 0), e1 = umbilic_cutoff(tau, t, s, 1),
                     e2 = umbilic_cutoff(tau, t, s, 2);
        const double sn = std::sin(th), cs = std::cos(th);
        const double T = tau + aa * e0 * sn;
        const double Tt = 1.0 + aa * e1 * sn, Ts = aa * e0 * cs;
        const double Ttt = aa * e2 * sn, Tts = aa * e1 * cs, Tss = -aa * e0 * sn;
        const Jet j = base.evaluate(T, th);
        Jet o;
        o.x = j.x;
        o.xt = j.xt * Tt;
        o.xs = j.xt * Ts + j.xs;
        o.xtt = j.xtt * Tt * Tt + j.xt * Ttt;
        o.xts = j.xtt * Tt * Ts + j.xts * Tt + j.xt * Tts;
        o.xss = j.xtt * Ts * Ts + 2.0 * j.xts * Ts + j.xss + j.xt * Tss;
        return o;
    };
    out.position = [base, aa, t, s](double tau, double th) {
        return base.evaluate(tau + aa * umbilic_cutoff(tau, t, s, 0) * std::sin(th), th).x;
    };
    out.jet_mode = JetMode::analytic;
    rep.immersion = out;
    return rep;
}

}  // namespace willmore
