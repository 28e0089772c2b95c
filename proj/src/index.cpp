#include "willmore/index.hpp"

#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"
#include "willmore/smoothstep.hpp"

namespace willmore {

namespace {

void check_field(const ConformalGaussField& F, const VariationField& V) {
    if (static_cast<int>(V.Z.size()) != F.size()) throw Error(ErrorKind::size, "variation field does not match the grid");
    if (V.ta < F.grid.t.lo - 1e-12 || V.tb > F.grid.t.hi + 1e-12 || V.tb < V.ta)
        throw Error(ErrorKind::domain, "variation support exceeds the grid");
}

double gram_sum(const Eigen::Matrix2d& m, double a, double b, double c) {
    return m(0, 0) * a + 2.0 * m(0, 1) * b + m(1, 1) * c;
}

std::vector<Vec5> normalized(const std::vector<Vec5>& Y, const std::vector<Vec5>& Z, double u) {
    std::vector<Vec5> W(Y.size());
    for (std::size_t k = 0; k < Y.size(); ++k) {
        const Vec5 v = Y[k] + u * Z[k];
        W[k] = v / std::sqrt(eta_norm2(v));
    }
    return W;
}

// Cumulative trapezoid area along the t rows.
std::vector<double> cumulative_area(const ConformalGaussField& F) {
    const QuadratureGrid& G = F.grid;
    std::vector<double> row(G.nt(), 0.0);
    for (int i = 0; i < G.nt(); ++i)
        for (int j = 0; j < G.ns(); ++j) {
            const int k = G.index(i, j);
            const double a = eta_norm2(F.dY[0][k]);
            const double b = eta_inner(F.dY[0][k], F.dY[1][k]);
            const double c = eta_norm2(F.dY[1][k]);
            row[i] += G.s.weights[j] * std::sqrt(std::max(a * c - b * b, 0.0));
        }
    std::vector<double> C(G.nt(), 0.0);
    for (int i = 1; i < G.nt(); ++i)
        C[i] = C[i - 1] + 0.5 * (G.t.nodes[i] - G.t.nodes[i - 1]) * (row[i] + row[i - 1]);
    return C;
}

std::pair<int, int> row_span(const QuadratureGrid& G, const TRange& r) {
    int i0 = -1, i1 = -1;
    for (int i = 0; i < G.nt(); ++i)
        if (G.t.nodes[i] >= r.ta - 1e-12 && G.t.nodes[i] <= r.tb + 1e-12) {
            if (i0 < 0) i0 = i;
            i1 = i;
        }
    if (i0 < 0) throw Error(ErrorKind::domain, "t-range contains no grid rows");
    return {i0, i1};
}

}  // namespace

double second_variation_dirichlet(const ConformalGaussField& F, const VariationField& V) {
    check_field(F, V);
    const GridDiff D(F.grid);
    const std::vector<Vec5> dZ[2] = {D.dt(V.Z), D.ds(V.Z)};
    double total = 0.0;
    for (int i = 0; i < F.grid.nt(); ++i)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const int k = F.grid.index(i, j);
            const Vec5& Y = F.Y[k];
            const Vec5& Z = V.Z[k];
            Vec5 cov[2];
            for (int a = 0; a < 2; ++a) cov[a] = dZ[a][k] - eta_inner(dZ[a][k], Y) * Y;
            const Eigen::Matrix2d m = F.sqrt_g[k] * F.g_inv[k];
            const double z2 = eta_norm2(Z);
            const double zy0 = eta_inner(Z, F.dY[0][k]);
            const double zy1 = eta_inner(Z, F.dY[1][k]);
            const double grad = gram_sum(m, eta_norm2(cov[0]), eta_inner(cov[0], cov[1]), eta_norm2(cov[1]));
            const double curv = z2 * gram_sum(m, eta_norm2(F.dY[0][k]), eta_inner(F.dY[0][k], F.dY[1][k]),
                                              eta_norm2(F.dY[1][k])) -
                                gram_sum(m, zy0 * zy0, zy0 * zy1, zy1 * zy1);
            total += F.grid.weight(i, j) * (grad - curv);
        }
    return total;
}

double dirichlet_energy(const ConformalGaussField& F, const std::vector<Vec5>& W) {
    const GridDiff D(F.grid);
    const std::vector<Vec5> wt = D.dt(W), ws = D.ds(W);
    double total = 0.0;
    for (int i = 0; i < F.grid.nt(); ++i)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const int k = F.grid.index(i, j);
            const Eigen::Matrix2d m = F.sqrt_g[k] * F.g_inv[k];
            total += 0.5 * F.grid.weight(i, j) *
                     gram_sum(m, eta_norm2(wt[k]), eta_inner(wt[k], ws[k]), eta_norm2(ws[k]));
        }
    return total;
}

double area_functional(const ConformalGaussField& F, const std::vector<Vec5>& W) {
    const GridDiff D(F.grid);
    const std::vector<Vec5> wt = D.dt(W), ws = D.ds(W);
    double total = 0.0;
    for (int i = 0; i < F.grid.nt(); ++i)
        for (int j = 0; j < F.grid.ns(); ++j) {
            const int k = F.grid.index(i, j);
            const double a = eta_norm2(wt[k]), b = eta_inner(wt[k], ws[k]), c = eta_norm2(ws[k]);
            total += F.grid.weight(i, j) * std::sqrt(std::max(a * c - b * b, 0.0));
        }
    return total;
}

FdSecondDerivative fd_second_variation(const ConformalGaussField& F, const VariationField& V, Functional which,
                                       double h) {
    check_field(F, V);
    double zmax = 0.0;
    for (const Vec5& z : V.Z) zmax = std::max(zmax, z.norm());
    FdSecondDerivative out;
    if (zmax == 0.0) return out;
    out.h = h > 0.0 ? h : 1e-3 / zmax;
    auto J = [&](double u) {
        const std::vector<Vec5> W = normalized(F.Y, V.Z, u);
        return which == Functional::dirichlet ? dirichlet_energy(F, W) : area_functional(F, W);
    };
    const double j0 = J(0.0);
    const double h1 = out.h, h2 = 2.0 * out.h;
    out.fine = (J(h1) - 2.0 * j0 + J(-h1)) / (h1 * h1);
    out.coarse = (J(h2) - 2.0 * j0 + J(-h2)) / (h2 * h2);
    out.value = (4.0 * out.fine - out.coarse) / 3.0;
    return out;
}

ConstraintResiduals constraint_residuals(const ConformalGaussField& F, const VariationField& V) {
    check_field(F, V);
    const GridDiff D(F.grid);
    const std::vector<Vec5> lap = laplace_g(F, V.Z);
    const std::vector<Vec5> dZ[2] = {D.dt(V.Z), D.ds(V.Z)};
    const std::vector<double> e2 = grad_eta2(F);
    ConstraintResiduals out;
    const int n = F.size();
    out.r1.assign(n, 0.0);
    out.r2.assign(n, Eigen::Vector2d::Zero());
    out.used.assign(n, 1);
    for (int i = 0; i < F.grid.nt(); ++i) {
        const double t = F.grid.t.nodes[i];
        const bool inside = t >= V.ta - 1e-12 && t <= V.tb + 1e-12;
        for (int j = 0; j < F.grid.ns(); ++j) {
            const int k = F.grid.index(i, j);
            if (F.umbilic[k]) {
                out.used[k] = 0;
                ++out.excluded;
                if (inside) out.warning = true;
                continue;
            }
            const Vec5& nu = F.nu[k];
            out.r1[k] = eta_inner(nu, lap[k] - e2[k] * V.Z[k]);
            for (int a = 0; a < 2; ++a)
                out.r2[k](a) = eta_inner(nu, dZ[a][k] - eta_inner(dZ[a][k], F.Y[k]) * F.Y[k]);
            out.r1_max = std::max(out.r1_max, std::abs(out.r1[k]));
            out.r2_max = std::max(out.r2_max, out.r2[k].cwiseAbs().maxCoeff());
        }
    }
    return out;
}

Vec5 parallel_direction(const Vec5& a, const Vec5& b) {
    Eigen::Matrix<double, 5, 2> S;
    S << a, b;
    const Eigen::JacobiSVD<Eigen::Matrix<double, 5, 2>> sv(S);
    if (sv.singularValues()(1) <= 1e-12 * sv.singularValues()(0))
        throw Error(ErrorKind::rank, "line direction and base point are parallel");
    // kernel of S^T eta
    const Eigen::Matrix<double, 2, 5> L = S.transpose() * eta_matrix();
    const Eigen::JacobiSVD<Eigen::Matrix<double, 2, 5>> ks(L, Eigen::ComputeFullV);
    const Eigen::Matrix<double, 5, 3> K = ks.matrixV().rightCols<3>();
    const Mat5 P = K * K.transpose();

    Vec5 best = Vec5::Zero();
    bool found = false;
    for (int i = 0; i < 5; ++i) {
        Vec5 v = P * basis5(i);
        const double n2 = eta_norm2(v);
        if (n2 <= 1e-8 * v.squaredNorm() || v.norm() < 1e-12) continue;
        v /= std::sqrt(n2);
        for (int c = 0; c < 5; ++c)
            if (std::abs(v(c)) > 1e-12) {
                if (v(c) < 0) v = -v;
                break;
            }
        if (!found || std::abs(v(4)) < std::abs(best(4)) - 1e-12) {
            best = v;
            found = true;
        }
    }
    if (!found) throw Error(ErrorKind::rank, "no spacelike unit vector orthogonal to the line");
    return best;
}

double cylinder_area(const ConformalGaussField& F, const TRange& range) {
    const auto [i0, i1] = row_span(F.grid, range);
    const std::vector<double> C = cumulative_area(F);
    return C[i1] - C[i0];
}

TestField build_test_field(const ConformalGaussField& F, const TRange& interval, const LineFit& fit) {
    const Reparametrization rp = reparametrize(F, ReparamMode::lorentz_average, interval);
    const double ell = rp.length;
    if (ell < 2.0)
        throw Error(ErrorKind::precondition, "lorentz length " + std::to_string(ell) + " is too short for the cutoff");
    const Vec5 E = parallel_direction(fit.a, fit.b);

    TestField out;
    TestFieldIngredients& P = out.parts;
    P.E = E;
    P.rows = rp.rows;
    P.s = rp.s;
    P.density = rp.density;
    P.ell = ell;
    const QuadratureGrid& G = F.grid;
    const int n = F.size();
    std::vector<double> phi_row(G.nt(), 0.0), phi_t_row;
    for (std::size_t r = 0; r < rp.rows.size(); ++r) {
        const double s = rp.s[r];
        const double up = ramp(s, 0.5, 1.0);
        const double dn = 1.0 - ramp(s, ell - 1.0, ell - 0.5);
        const double rho = up * dn;
        const double f = std::sin(std::numbers::pi * s / ell);
        P.f.push_back(f);
        P.rho.push_back(rho);
        phi_row[rp.rows[r]] = rho * f;
    }
    // differentiated on the grid so that the residual checks see the same operator
    phi_t_row = diff_1d(AxisDiff(G.t), phi_row, 1);
    std::vector<Vec5> field(n, Vec5::Zero());
    for (int i = 0; i < G.nt(); ++i)
        for (int j = 0; j < G.ns(); ++j) field[G.index(i, j)] = phi_row[i] * E;
    const std::vector<Vec5> lap = laplace_g(F, field);
    const std::vector<double> e2 = grad_eta2(F);

    P.d.assign(n, 0.0);
    P.e.assign(n, Eigen::Vector2d::Zero());
    out.field.Z.assign(n, Vec5::Zero());
    out.field.ta = rp.t.front();
    out.field.tb = rp.t.back();
    out.field.recipe = "rho f E - rho f <E,Y> Y + d nu + e^i d_i nu";
    for (std::size_t r = 0; r < rp.rows.size(); ++r) {
        // the cutoff is flat there, so every derivative of phi vanishes too
        if (P.rho[r] == 0.0) continue;
        const int i = rp.rows[r];
        for (int j = 0; j < G.ns(); ++j) {
            const int k = G.index(i, j);
            const double phi = phi_row[i];
            const Eigen::Vector2d grad(phi_t_row[i], 0.0);
            const Eigen::Vector2d up = F.g_inv[k] * grad;  // g^{ij} d_j phi
            const Vec5& nu = F.nu[k];
            const Eigen::Vector2d e = up * eta_inner(E, nu);
            const double d = -0.5 * eta_inner(nu, lap[k] + e2[k] * field[k]) -
                             (up(0) * eta_inner(E, F.dnu[0][k]) + up(1) * eta_inner(E, F.dnu[1][k]));
            P.d[k] = d;
            P.e[k] = e;
            out.field.Z[k] = field[k] - phi * eta_inner(E, F.Y[k]) * F.Y[k] + d * nu + e(0) * F.dnu[0][k] +
                             e(1) * F.dnu[1][k];
        }
    }
    return out;
}

QuadraticFormReport negativity_certificate(const ConformalGaussField& F, const TRange& interval, double mu,
                                           double tol) {
    QuadraticFormReport rep;
    rep.mu = mu;
    rep.area = cylinder_area(F, interval);
    if (!(rep.area >= mu && rep.area <= 2.0 * mu))
        throw Error(ErrorKind::precondition, "sub-cylinder area " + std::to_string(rep.area) + " is outside [" +
                                                 std::to_string(mu) + ", " + std::to_string(2.0 * mu) + "]");
    const CylinderDiagnostics diag = circle_quantities(F, interval);
    const Reparametrization eu = reparametrize(F, ReparamMode::euclid_arclength_of_average, interval);
    rep.fit = line_fit(eu.s, diag.Ystar);
    const TestField tf = build_test_field(F, interval, rep.fit);
    const VariationField& V = tf.field;
    rep.ta = V.ta;
    rep.tb = V.tb;
    rep.ell = tf.parts.ell;

    rep.d2D = second_variation_dirichlet(F, V);
    rep.d2D_fd = fd_second_variation(F, V, Functional::dirichlet).value;
    rep.d2A_fd = fd_second_variation(F, V, Functional::area).value;
    rep.bound = -std::pow(std::numbers::pi, 3) * mu / (2.0 * rep.ell * rep.ell);
    const ConstraintResiduals cr = constraint_residuals(F, V);
    rep.r1_max = cr.r1_max;
    rep.r2_max = cr.r2_max;
    for (int k = 0; k < F.size(); ++k) rep.tangency = std::max(rep.tangency, std::abs(eta_inner(V.Z[k], F.Y[k])));

    // int_1^{ell-1} alpha (4 pi f_s^2 - f^2) ds, once in t with differentiated f
    // and once through the cos/sin expansion in s.
    const double ell = rep.ell, pi = std::numbers::pi;
    std::vector<double> f_all(F.grid.nt(), 0.0);
    for (std::size_t r = 0; r < tf.parts.rows.size(); ++r) f_all[tf.parts.rows[r]] = tf.parts.f[r];
    const std::vector<double> f_t = diff_1d(AxisDiff(F.grid.t), f_all, 1);
    const auto& rows = tf.parts.rows;
    for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
        const double s0 = tf.parts.s[r], s1 = tf.parts.s[r + 1];
        if (s0 < 1.0 || s1 > ell - 1.0) continue;
        const double dt = F.grid.t.nodes[rows[r + 1]] - F.grid.t.nodes[rows[r]];
        auto direct = [&](std::size_t q) {
            const double a = tf.parts.density[q];
            const double ft = f_t[rows[q]];
            return 4.0 * pi * ft * ft - tf.parts.f[q] * tf.parts.f[q] * a * a;
        };
        auto expansion = [&](std::size_t q) {
            const double a = tf.parts.density[q];
            const double sn = std::sin(pi * tf.parts.s[q] / ell);
            const double c = 4.0 * pi * pi * pi / (ell * ell);
            return a * a * (c - (1.0 + c) * sn * sn);
        };
        rep.profile_direct += 0.5 * dt * (direct(r) + direct(r + 1));
        rep.profile_expansion += 0.5 * dt * (expansion(r) + expansion(r + 1));
    }
    rep.profile_defect = std::abs(rep.profile_direct - rep.profile_expansion);
    rep.negative = rep.d2D < 0.0;
    rep.area_below_dirichlet = rep.d2A_fd <= rep.d2D + tol;
    return rep;
}

std::vector<TRange> subdivide(const ConformalGaussField& F, double lambda, int J, const TRange& range) {
    if (J < 1) return {};
    const auto [i0, i1] = row_span(F.grid, range);
    const std::vector<double> C = cumulative_area(F);
    const double lo = lambda / (2.0 * J), hi = lambda / J;
    std::vector<TRange> pieces;
    int start = i0;
    for (int p = 0; p < J; ++p) {
        int end = -1;
        for (int j = start + 1; j <= i1; ++j) {
            if (C[j] - C[start] <= hi) end = j;
            else break;
        }
        if (end < 0 || C[end] - C[start] < lo) return {};
        pieces.push_back({F.grid.t.nodes[start], F.grid.t.nodes[end]});
        start = end;
    }
    return pieces;
}

IndexBoundReport index_lower_bound(const ConformalGaussField& F, double lambda, int J, const TRange& range) {
    if (J < 1) throw Error(ErrorKind::validation, "J must be positive");
    IndexBoundReport rep;
    rep.lambda = lambda;
    rep.J = J;
    rep.total_area = cylinder_area(F, range);
    if (rep.total_area < lambda)
        throw Error(ErrorKind::precondition, "cylinder area " + std::to_string(rep.total_area) + " is below lambda");
    const std::vector<TRange> pieces = subdivide(F, lambda, J, range);
    if (pieces.empty()) {
        int best = 0;
        for (int j = 1; j <= 4 * J + 16; ++j)
            if (!subdivide(F, lambda, j, range).empty()) best = j;
        throw InfeasibleError("no subdivision into " + std::to_string(J) + " pieces; largest feasible J is " +
                                  std::to_string(best),
                              best);
    }
    const double mu = lambda / (2.0 * J);
    for (const TRange& piece : pieces) {
        rep.pieces.push_back(negativity_certificate(F, piece, mu));
        if (rep.pieces.back().negative) ++rep.count;
    }
    return rep;
}

}  // namespace willmore
