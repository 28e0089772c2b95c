#include "willmore/conformal_gauss.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "willmore/errors.hpp"

namespace willmore {

int ConformalGaussField::umbilic_count() const {
    return static_cast<int>(std::count(umbilic.begin(), umbilic.end(), 1));
}

ConformalGaussField build_cgm(const ParametricImmersion& phi, const QuadratureGrid& grid) {
    ConformalGaussField F;
    F.grid = grid;
    F.ambient = phi.ambient;
    F.source_name = phi.name;
    F.closed = phi.closed;
    F.euler_characteristic = phi.euler_characteristic;
    const int n = grid.size();
    F.Y.resize(n);
    F.x.resize(n);
    F.H.resize(n);
    F.g.resize(n);
    F.g_inv.resize(n);
    F.A0.resize(n);
    F.sqrt_g.resize(n);
    F.A0_norm2.resize(n);
    F.K.resize(n);
    F.nu.resize(n);
    F.dnu[0].resize(n);
    F.dnu[1].resize(n);
    F.nu_star.assign(n, Vec5::Zero());
    F.umbilic.assign(n, 0);

    bool conformal = true;
    for (int i = 0; i < grid.nt(); ++i)
        for (int j = 0; j < grid.ns(); ++j) {
            const int k = grid.index(i, j);
            const Jet jet = phi.evaluate(grid.t.nodes[i], grid.s.nodes[j]);
            const FundamentalForms ff = fundamental_forms(jet, phi.ambient);
            conformal = conformal && ff.conformal;
            F.x[k] = jet.x;
            F.H[k] = ff.H;
            F.g[k] = ff.g;
            F.g_inv[k] = ff.g_inv;
            F.A0[k] = ff.A0;
            F.sqrt_g[k] = std::sqrt(ff.det_g);
            F.A0_norm2[k] = ff.A0_norm2;
            F.K[k] = ff.K;
            const Vec4* d[2] = {&jet.xt, &jet.xs};
            if (phi.ambient == Ambient::R3) {
                const Eigen::Vector3d p = jet.x.head<3>();
                const double p2 = p.squaredNorm();
                F.nu[k] << p, 0.5 * (p2 - 1.0), 0.5 * (p2 + 1.0);
                for (int a = 0; a < 2; ++a) {
                    const double pd = p.dot(d[a]->head<3>());
                    F.dnu[a][k] << d[a]->head<3>(), pd, pd;
                }
                const Eigen::Vector3d nn = ff.N.head<3>();
                const double np = nn.dot(p);
                Vec5 tail;
                tail << nn, np, np;
                F.Y[k] = ff.H * F.nu[k] + tail;
            } else {
                F.nu[k] << jet.x, 1.0;
                for (int a = 0; a < 2; ++a) F.dnu[a][k] << *d[a], 0.0;
                F.Y[k] << ff.H * jet.x + ff.N, ff.H;
            }
        }
    F.conformal_chart = conformal;

    const GridDiff D(grid);
    F.dY[0] = D.dt(F.Y);
    F.dY[1] = D.ds(F.Y);
    F.d2Y[0] = D.dtt(F.Y);
    F.d2Y[1] = D.dts(F.Y);
    F.d2Y[2] = D.dss(F.Y);
    F.dH[0] = D.dt(F.H);
    F.dH[1] = D.ds(F.H);

    F.dY_closed[0].resize(n);
    F.dY_closed[1].resize(n);
    double disc = 0.0;
    for (int k = 0; k < n; ++k) {
        const Eigen::Matrix2d S = F.A0[k] * F.g_inv[k];  // S(i,j) = A0_i^j
        for (int a = 0; a < 2; ++a) {
            F.dY_closed[a][k] = F.dH[a][k] * F.nu[k] - S(a, 0) * F.dnu[0][k] - S(a, 1) * F.dnu[1][k];
            disc = std::max(disc, (F.dY_closed[a][k] - F.dY[a][k]).cwiseAbs().maxCoeff());
        }
    }
    F.closed_form_discrepancy = disc;

    std::vector<double> sorted = F.A0_norm2;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double threshold = std::max(kUmbilicRelative * sorted[n / 2], kUmbilicFloor);
    for (int k = 0; k < n; ++k) {
        if (F.A0_norm2[k] <= threshold) {
            F.umbilic[k] = 1;
            continue;
        }
        try {
            F.nu_star[k] = null_normal_pair(F.Y[k], F.dY_closed[0][k], F.dY_closed[1][k]).nu_star;
        } catch (const Error&) {
            F.umbilic[k] = 1;
        }
    }
    return F;
}

ConformalGaussField transform_field(const ConformalGaussField& F, const Mat5& M) {
    ConformalGaussField out = F;
    auto apply = [&M](std::vector<Vec5>& v) {
        for (auto& e : v) e = M * e;
    };
    apply(out.Y);
    for (int a = 0; a < 2; ++a) {
        apply(out.dY[a]);
        apply(out.dY_closed[a]);
        apply(out.dnu[a]);
    }
    for (auto& v : out.d2Y) apply(v);
    apply(out.nu);
    apply(out.nu_star);
    return out;
}

std::vector<double> grad_eta2(const ConformalGaussField& F) {
    std::vector<double> out(F.size());
    for (int k = 0; k < F.size(); ++k) {
        const Eigen::Matrix2d& gi = F.g_inv[k];
        const double a = eta_inner(F.dY[0][k], F.dY[0][k]);
        const double b = eta_inner(F.dY[0][k], F.dY[1][k]);
        const double c = eta_inner(F.dY[1][k], F.dY[1][k]);
        out[k] = gi(0, 0) * a + 2.0 * gi(0, 1) * b + gi(1, 1) * c;
    }
    return out;
}

namespace {

template <class T>
std::vector<T> laplace_impl(const ConformalGaussField& F, const std::vector<T>& f) {
    const GridDiff D(F.grid);
    const std::vector<T> ft = D.dt(f);
    const std::vector<T> fs = D.ds(f);
    std::vector<T> pt(f.size()), ps(f.size());
    for (int k = 0; k < F.size(); ++k) {
        const Eigen::Matrix2d m = F.sqrt_g[k] * F.g_inv[k];
        pt[k] = m(0, 0) * ft[k] + m(0, 1) * fs[k];
        ps[k] = m(1, 0) * ft[k] + m(1, 1) * fs[k];
    }
    std::vector<T> a = D.dt(pt);
    const std::vector<T> b = D.ds(ps);
    for (int k = 0; k < F.size(); ++k) a[k] = (a[k] + b[k]) / F.sqrt_g[k];
    return a;
}

}  // namespace

std::vector<double> laplace_g(const ConformalGaussField& F, const std::vector<double>& f) {
    return laplace_impl(F, f);
}

std::vector<Vec5> laplace_g(const ConformalGaussField& F, const std::vector<Vec5>& f) {
    return laplace_impl(F, f);
}

ConformalityReport conformality_defect(const ConformalGaussField& F) {
    ConformalityReport rep;
    rep.defect.resize(F.size());
    for (int k = 0; k < F.size(); ++k) {
        double worst = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double lhs = eta_inner(F.dY[i][k], F.dY[j][k]);
                const double rhs = 0.5 * F.A0_norm2[k] * F.g[k](i, j);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        rep.defect[k] = worst;
        rep.max_defect = std::max(rep.max_defect, worst);
    }
    return rep;
}

EnergyReport energies(const ConformalGaussField& F) {
    EnergyReport rep;
    for (int i = 0; i < F.grid.nt(); ++i)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const int k = F.grid.index(i, j);
            const double w = F.grid.weight(i, j);
            const double a = eta_inner(F.dY[0][k], F.dY[0][k]);
            const double b = eta_inner(F.dY[0][k], F.dY[1][k]);
            const double c = eta_inner(F.dY[1][k], F.dY[1][k]);
            rep.area += w * std::sqrt(std::max(a * c - b * b, 0.0));
            const Eigen::Matrix2d m = F.sqrt_g[k] * F.g_inv[k];
            rep.dirichlet += 0.5 * w * (m(0, 0) * a + 2.0 * m(0, 1) * b + m(1, 1) * c);
            rep.E_of_source += w * F.A0_norm2[k] * F.sqrt_g[k];
        }
    return rep;
}

WillmoreResidual willmore_residual(const ConformalGaussField& F) {
    WillmoreResidual rep;
    const std::vector<Vec5> lap = laplace_g(F, F.Y);
    const std::vector<double> lapH = laplace_g(F, F.H);
    const std::vector<double> e2 = grad_eta2(F);
    const int n = F.size();
    rep.R.resize(n);
    rep.R_norm.resize(n);
    rep.constraint_defect.resize(n);
    for (int k = 0; k < n; ++k) {
        rep.R[k] = lap[k] + e2[k] * F.Y[k];
        rep.R_norm[k] = rep.R[k].norm();
        rep.constraint_defect[k] = (rep.R[k] - (lapH[k] + e2[k] * F.H[k]) * F.nu[k]).norm();
        rep.sup = std::max(rep.sup, rep.R_norm[k]);
        rep.sup_constraint = std::max(rep.sup_constraint, rep.constraint_defect[k]);
    }
    return rep;
}

HopfReport hopf_and_quartic(const ConformalGaussField& F) {
    using cd = std::complex<double>;
    HopfReport rep;
    const int n = F.size();
    rep.h.resize(n);
    rep.Q.resize(n);
    for (int k = 0; k < n; ++k) {
        const Vec5& yt = F.dY[0][k];
        const Vec5& ys = F.dY[1][k];
        rep.h[k] = 0.25 * cd(eta_inner(yt, yt) - eta_inner(ys, ys), -2.0 * eta_inner(yt, ys));
        const Vec5 U = 0.25 * (F.d2Y[0][k] - F.d2Y[2][k]);
        const Vec5 V = -0.5 * F.d2Y[1][k];
        rep.Q[k] = cd(eta_inner(U, U) - eta_inner(V, V), 2.0 * eta_inner(U, V));
        rep.sup_h = std::max(rep.sup_h, std::abs(rep.h[k]));
        rep.sup_Q = std::max(rep.sup_Q, std::abs(rep.Q[k]));
    }
    const GridDiff D(F.grid);
    const std::vector<cd> qt = D.dt(rep.Q);
    const std::vector<cd> qs = D.ds(rep.Q);
    rep.dbar_Q.resize(n);
    for (int k = 0; k < n; ++k) {
        rep.dbar_Q[k] = std::abs(0.5 * (qt[k] + cd(0, 1) * qs[k]));
        rep.sup_dbar_Q = std::max(rep.sup_dbar_Q, rep.dbar_Q[k]);
    }
    return rep;
}

RecoveryReport recover_immersion(const ConformalGaussField& F) {
    RecoveryReport rep;
    const int n = F.size();
    rep.x.assign(n, Vec4::Constant(std::nan("")));
    rep.valid.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        if (F.umbilic[k]) continue;
        NullPair pair;
        try {
            pair = null_normal_pair(F.Y[k], F.dY[0][k], F.dY[1][k]);
        } catch (const Error&) {
            continue;
        }
        if (!pair.normalized) continue;
        Vec4 p = Vec4::Zero();
        if (F.ambient == Ambient::S3) {
            p = pair.nu.head<4>();
        } else {
            const double w = pair.nu(4) - pair.nu(3);
            if (std::abs(w) <= 1e-14) continue;
            p.head<3>() = pair.nu.head<3>() / w;
        }
        rep.x[k] = p;
        rep.valid[k] = 1;
        ++rep.valid_count;
        rep.max_error = std::max(rep.max_error, (p - F.x[k]).norm());
    }
    rep.impossible = rep.valid_count == 0;
    return rep;
}

double shape_operator_defect(const ConformalGaussField& F) {
    double worst = 0.0;
    for (int k = 0; k < F.size(); ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                worst = std::max(worst, std::abs(eta_inner(F.dY[i][k], F.dnu[j][k]) + F.A0[k](i, j)));
    return worst;
}

void write_field_csv(const ConformalGaussField& F, std::ostream& os) {
    os << "# schema=willmore.cgm_field.v1\n";
    os << "t,theta,Y1,Y2,Y3,Y4,Y5,grad_eta2,grad_xi2\n";
    const std::vector<double> e2 = grad_eta2(F);
    os.precision(12);
    for (int i = 0; i < F.grid.nt(); ++i)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const int k = F.grid.index(i, j);
            const Eigen::Matrix2d& gi = F.g_inv[k];
            const double xi2 = gi(0, 0) * F.dY[0][k].squaredNorm() + 2.0 * gi(0, 1) * F.dY[0][k].dot(F.dY[1][k]) +
                               gi(1, 1) * F.dY[1][k].squaredNorm();
            os << F.grid.t.nodes[i] << ',' << F.grid.s.nodes[j];
            for (int c = 0; c < 5; ++c) os << ',' << F.Y[k](c);
            os << ',' << e2[k] << ',' << xi2 << '\n';
        }
}

}  // namespace willmore
