#include "willmore/gauge.hpp"

#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

struct Band {
    std::vector<int> rows;
    std::vector<double> w;  // per row
};

Band band_rows(const QuadratureGrid& grid, const AnnulusSpec& A) {
    if (!(A.tb > A.ta)) throw Error(ErrorKind::domain, "annulus needs ta < tb");
    if (A.ta < grid.t.lo - 1e-12 || A.tb > grid.t.hi + 1e-12)
        throw Error(ErrorKind::domain, "annulus leaves the chart");
    Band b;
    int i0 = -1, i1 = -1;
    for (int i = 0; i < grid.nt(); ++i) {
        const double t = grid.t.nodes[i];
        if (t >= A.ta - 1e-12 && t <= A.tb + 1e-12) {
            if (i0 < 0) i0 = i;
            i1 = i;
        }
    }
    if (i0 < 0 || i1 <= i0) throw Error(ErrorKind::domain, "annulus contains fewer than two grid rows");
    const bool whole = i0 == 0 && i1 == grid.nt() - 1;
    std::vector<double> w = whole ? grid.t.weights : row_weights(grid.t, i0, i1);
    for (int i = i0; i <= i1; ++i) {
        b.rows.push_back(i);
        b.w.push_back(w[i]);
    }
    return b;
}

double traceless_on_band(const ConformalGaussField& F, const Band& b) {
    double e = 0.0;
    for (std::size_t r = 0; r < b.rows.size(); ++r)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const int k = F.grid.index(b.rows[r], j);
            e += b.w[r] * F.grid.s.weights[j] * F.A0_norm2[k] * F.sqrt_g[k];
        }
    return e;
}

}  // namespace

AnnulusAverage annulus_averages(const ConformalGaussField& F, const AnnulusSpec& A) {
    const Band b = band_rows(F.grid, A);
    AnnulusAverage out;
    double total = 0.0;
    for (std::size_t r = 0; r < b.rows.size(); ++r)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const double w = b.w[r] * F.grid.s.weights[j];
            out.Ybar += w * F.Y[F.grid.index(b.rows[r], j)];
            total += w;
        }
    out.Ybar /= total;
    out.Hbar = out.Ybar(4) - out.Ybar(3);
    out.rows = static_cast<int>(b.rows.size());
    return out;
}

double balancing_tolerance(const Vec5& Ybar) { return 1e-8 * (1.0 + Ybar.norm()); }

std::optional<BalancingSphere> balancing_sphere(const Vec5& Ybar, double Hbar) {
    if (std::abs(Hbar) <= balancing_tolerance(Ybar)) return std::nullopt;
    const double n2 = eta_norm2(Ybar);
    if (n2 <= 0.0) throw Error(ErrorKind::not_spacelike, "average of Y is not spacelike: |Ybar|^2 = " + std::to_string(n2));
    BalancingSphere s;
    s.center = Ybar.head<3>() / Hbar;
    s.radius = std::sqrt(n2) / std::abs(Hbar);
    return s;
}

double predicted_balanced_H(const Vec5& Ybar, const Eigen::Vector3d& a) {
    const Vec5 v = inversion_about(a) * Ybar;
    return v(4) - v(3);
}

GaugeReport find_balancing_inversion(const ParametricImmersion& phi, const ConformalGaussField& F,
                                     const AnnulusSpec& A, double t_bound) {
    if (phi.ambient != Ambient::R3) throw Error(ErrorKind::precondition, "balancing inversion needs an R3 immersion");
    GaugeReport rep;
    rep.annulus = A;
    const Band band = band_rows(F.grid, A);
    const AnnulusAverage avg = annulus_averages(F, A);
    rep.Ybar = avg.Ybar;
    rep.Hbar = avg.Hbar;
    rep.E_before = traceless_on_band(F, band);

    const auto sphere = balancing_sphere(avg.Ybar, avg.Hbar);
    if (!sphere) {
        rep.already_balanced = true;
        rep.post_average = std::abs(avg.Hbar);
        rep.E_after = rep.E_before;
        return rep;
    }
    rep.sphere = *sphere;

    double sup_x = 0.0;
    for (int i : band.rows)
        for (int j = 0; j < F.grid.ns(); ++j) sup_x = std::max(sup_x, F.x[F.grid.index(i, j)].norm());
    rep.t_bound = t_bound > 0.0 ? t_bound : std::max(2.0 * sup_x, sphere->center.norm() + sphere->radius);

    // Fibonacci sphere, scored by distance to the whole sampled surface.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    double best = -1.0;
    Eigen::Vector3d best_a = Eigen::Vector3d::Zero();
    rep.candidates = kBalancingCandidates;
    for (int k = 0; k < kBalancingCandidates; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / kBalancingCandidates;
        const double rho = std::sqrt(1.0 - z * z);
        const Eigen::Vector3d u(rho * std::cos(golden * k), rho * std::sin(golden * k), z);
        const Eigen::Vector3d a = sphere->center + sphere->radius * u;
        if (a.norm() > rep.t_bound) continue;
        ++rep.admissible;
        double d = 1e300;
        for (const Vec4& x : F.x) d = std::min(d, (x.head<3>() - a).norm());
        if (d > best) {
            best = d;
            best_a = a;
        }
    }
    const double scale = 1.0 + sup_x;
    if (best <= 1e-8 * scale)
        throw Error(ErrorKind::search_failure,
                    "no balancing point off the surface among " + std::to_string(rep.admissible) +
                        " admissible candidates; best distance " + std::to_string(std::max(best, 0.0)));
    rep.a = best_a;
    rep.min_distance = best;
    rep.M = inversion_about(best_a);

    const ParametricImmersion psi = moebius_transform_immersion(phi, rep.M);
    const ConformalGaussField G = build_cgm(psi, F.grid);
    const AnnulusAverage post = annulus_averages(G, A);
    rep.post_average = std::abs(post.Hbar);
    rep.E_after = traceless_on_band(G, band);
    rep.invariance_defect = std::abs(rep.E_after - rep.E_before);

    // H(psi_a) = -Hbar (|a - c|^2 - r^2): at the chosen point against the rebuilt
    // field, at off-sphere points against the averages.
    auto quadratic = [&](const Eigen::Vector3d& a) {
        return -avg.Hbar * ((a - sphere->center).squaredNorm() - sphere->radius * sphere->radius);
    };
    double qdef = std::abs(post.Hbar - quadratic(best_a));
    for (double f : {0.5, 1.5, 2.0}) {
        const Eigen::Vector3d a = sphere->center + f * (best_a - sphere->center);
        qdef = std::max(qdef, std::abs(predicted_balanced_H(avg.Ybar, a) - quadratic(a)));
    }
    rep.quadratic_identity_defect = qdef;

    double dmin = 1e300, dmax = 0.0;
    for (int i : band.rows)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const double d = (F.x[F.grid.index(i, j)].head<3>() - best_a).norm();
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    rep.conformal_factor_ratio = (dmax / dmin) * (dmax / dmin);
    return rep;
}

}  // namespace willmore
