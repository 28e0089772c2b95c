#include "willmore/grid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

// Roots of P_n by Newton iteration from Chebyshev-like guesses.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int k = 0; k < n; ++k) {
        double r = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double p = std::legendre(n, r);
            const double pm = std::legendre(n - 1, r);
            dp = n * (r * p - pm) / (r * r - 1.0);
            const double dr = p / dp;
            r -= dr;
            if (std::abs(dr) < 1e-16) break;
        }
        const double p = std::legendre(n, r);
        const double pm = std::legendre(n - 1, r);
        dp = n * (r * p - pm) / (r * r - 1.0);
        x[n - 1 - k] = r;
        w[n - 1 - k] = 2.0 / ((1.0 - r * r) * dp * dp);
    }
}

}  // namespace

Axis make_axis(Rule rule, double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw Error(ErrorKind::size, "axis needs n >= 2 and hi > lo");
    Axis a;
    a.rule = rule;
    a.lo = lo;
    a.hi = hi;
    const double L = hi - lo;
    switch (rule) {
        case Rule::periodic:
            a.step = L / n;
            for (int k = 0; k < n; ++k) {
                a.nodes.push_back(lo + k * a.step);
                a.weights.push_back(a.step);
            }
            break;
        case Rule::trapezoid:
            a.step = L / (n - 1);
            for (int k = 0; k < n; ++k) {
                a.nodes.push_back(lo + k * a.step);
                a.weights.push_back((k == 0 || k == n - 1) ? 0.5 * a.step : a.step);
            }
            break;
        case Rule::gauss_legendre: {
            std::vector<double> x, w;
            gauss_legendre(n, x, w);
            a.step = L / n;
            for (int k = 0; k < n; ++k) {
                a.nodes.push_back(lo + 0.5 * L * (x[k] + 1.0));
                a.weights.push_back(0.5 * L * w[k]);
            }
            break;
        }
    }
    return a;
}

double QuadratureGrid::area() const {
    double st = 0, ss = 0;
    for (double w : t.weights) st += w;
    for (double w : s.weights) ss += w;
    return st * ss;
}

std::vector<double> row_weights(const Axis& t, int i0, int i1) {
    std::vector<double> w(t.size(), 0.0);
    for (int i = i0; i < i1; ++i) {
        const double h = t.nodes[i + 1] - t.nodes[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

std::vector<double> fd_weights(const std::vector<double>& x, double x0, int order) {
    const int n = static_cast<int>(x.size());
    double scale = 0;
    for (double xi : x) scale = std::max(scale, std::abs(xi - x0));
    if (scale == 0) scale = 1;
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) V(m, k) = std::pow((x[k] - x0) / scale, m);
    rhs(order) = std::tgamma(order + 1.0);
    Eigen::VectorXd w = V.fullPivLu().solve(rhs);
    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) out[k] = w(k) / std::pow(scale, order);
    return out;
}

std::vector<double> cumulative_integral(const std::vector<double>& x, const std::vector<double>& f) {
    const int n = static_cast<int>(x.size());
    std::vector<double> out(n, 0.0);
    for (int r = 0; r + 1 < n; ++r) {
        double piece;
        if (n < 4) {
            piece = 0.5 * (x[r + 1] - x[r]) * (f[r] + f[r + 1]);
        } else {
            const int start = std::max(0, std::min(r - 1, n - 4));
            // weights integrate the cubic through four nodes over [x_r, x_{r+1}]
            Eigen::Matrix4d V;
            Eigen::Vector4d m;
            const double c = x[r], h = x[r + 1] - x[r];
            for (int p = 0; p < 4; ++p) {
                for (int k = 0; k < 4; ++k) V(p, k) = std::pow((x[start + k] - c) / h, p);
                m(p) = h / (p + 1.0);
            }
            const Eigen::Vector4d w = V.fullPivLu().solve(m);
            piece = 0.0;
            for (int k = 0; k < 4; ++k) piece += w(k) * f[start + k];
        }
        out[r + 1] = out[r] + piece;
    }
    return out;
}

namespace {

// Fourier differentiation on an equispaced periodic axis.
void periodic_rows(const Axis& axis, std::vector<Stencil>& d1, std::vector<Stencil>& d2) {
    const int n = axis.size();
    const double c = 2.0 * std::numbers::pi / (axis.hi - axis.lo);
    const double h = 2.0 * std::numbers::pi / n;
    const bool even = n % 2 == 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            d1[i].idx.push_back(j);
            d2[i].idx.push_back(j);
            if (i == j) {
                d1[i].w.push_back(0.0);
                d2[i].w.push_back(c * c * (even ? -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0
                                                 : -std::numbers::pi * std::numbers::pi / (3.0 * h * h) + 1.0 / 12.0));
                continue;
            }
            const double x = 0.5 * (i - j) * h;
            const double sgn = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            if (even) {
                d1[i].w.push_back(c * 0.5 * sgn / std::tan(x));
                d2[i].w.push_back(-c * c * 0.5 * sgn / (std::sin(x) * std::sin(x)));
            } else {
                d1[i].w.push_back(c * 0.5 * sgn / std::sin(x));
                d2[i].w.push_back(-c * c * 0.5 * sgn / (std::sin(x) * std::tan(x)));
            }
        }
    }
}

// Differentiation of the interpolating polynomial through all nodes.
void lagrange_rows(const Axis& axis, std::vector<Stencil>& d1, std::vector<Stencil>& d2) {
    const int n = axis.size();
    const std::vector<double>& x = axis.nodes;
    std::vector<double> logw(n, 0.0), sgn(n, 1.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double d = x[j] - x[k];
            logw[j] -= std::log(std::abs(d));
            if (d < 0) sgn[j] = -sgn[j];
        }
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            D(i, j) = sgn[j] * sgn[i] * std::exp(logw[j] - logw[i]) / (x[i] - x[j]);
            diag -= D(i, j);
        }
        D(i, i) = diag;
    }
    const Eigen::MatrixXd D2 = D * D;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d1[i].idx.push_back(j);
            d1[i].w.push_back(D(i, j));
            d2[i].idx.push_back(j);
            d2[i].w.push_back(D2(i, j));
        }
}

}  // namespace

AxisDiff::AxisDiff(const Axis& axis) {
    const int n = axis.size();
    d1_.resize(n);
    d2_.resize(n);
    if (axis.periodic()) {
        periodic_rows(axis, d1_, d2_);
        return;
    }
    if (axis.rule == Rule::gauss_legendre) {
        lagrange_rows(axis, d1_, d2_);
        return;
    }
    if (n < 8) throw Error(ErrorKind::size, "trapezoid axis needs at least 8 nodes");
    auto build = [&](int i, int width) {
        int start = i - width / 2;
        if (width % 2 == 0 && i >= n / 2) start = i - width / 2 + 1;
        start = std::max(0, std::min(start, n - width));
        Stencil st;
        std::vector<double> x;
        for (int k = 0; k < width; ++k) {
            st.idx.push_back(start + k);
            x.push_back(axis.nodes[start + k]);
        }
        return std::make_pair(st, x);
    };
    for (int i = 0; i < n; ++i) {
        const bool interior = i >= 3 && i <= n - 4;
        auto [s1, x1] = build(i, interior ? 7 : 8);
        s1.w = fd_weights(x1, axis.nodes[i], 1);
        d1_[i] = s1;
        auto [s2, x2] = build(i, interior ? 7 : 8);
        s2.w = fd_weights(x2, axis.nodes[i], 2);
        d2_[i] = s2;
    }
}

}  // namespace willmore
