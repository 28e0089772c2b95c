#pragma once

#include <vector>

namespace willmore {

enum class Rule { trapezoid, periodic, gauss_legendre };

struct Axis {
    Rule rule = Rule::trapezoid;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    double step = 0.0;  // nominal spacing

    int size() const { return static_cast<int>(nodes.size()); }
    bool periodic() const { return rule == Rule::periodic; }
};

Axis make_axis(Rule rule, double lo, double hi, int n);

// Tensor grid over (t, theta); node (i, j) has flat index i * ns + j.
struct QuadratureGrid {
    Axis t;
    Axis s;

    int nt() const { return t.size(); }
    int ns() const { return s.size(); }
    int size() const { return nt() * ns(); }
    int index(int i, int j) const { return i * ns() + j; }
    double weight(int i, int j) const { return t.weights[i] * s.weights[j]; }
    double area() const;
};

// Trapezoid weights over the rows i0..i1 (inclusive) of the t-axis.
std::vector<double> row_weights(const Axis& t, int i0, int i1);

// Running integral of samples f on nodes x, piecewise from local cubics; out[0] = 0.
std::vector<double> cumulative_integral(const std::vector<double>& x, const std::vector<double>& f);

struct Stencil {
    std::vector<int> idx;
    std::vector<double> w;
};

// Finite-difference weights for derivative `order` at x0 from the given nodes.
std::vector<double> fd_weights(const std::vector<double>& x, double x0, int order);

// Differentiation along one axis: Fourier on periodic axes, the global
// interpolating polynomial on Gauss-Legendre axes, sixth-order stencils
// (one-sided near the ends) on trapezoid axes.
class AxisDiff {
public:
    explicit AxisDiff(const Axis& axis);

    const Stencil& d1(int i) const { return d1_[i]; }
    const Stencil& d2(int i) const { return d2_[i]; }

private:
    std::vector<Stencil> d1_;
    std::vector<Stencil> d2_;
};

class GridDiff {
public:
    explicit GridDiff(const QuadratureGrid& grid) : nt_(grid.nt()), ns_(grid.ns()), dt_(grid.t), ds_(grid.s) {}

    template <class T>
    std::vector<T> dt(const std::vector<T>& f) const { return along_t(f, 1); }
    template <class T>
    std::vector<T> ds(const std::vector<T>& f) const { return along_s(f, 1); }
    template <class T>
    std::vector<T> dtt(const std::vector<T>& f) const { return along_t(f, 2); }
    template <class T>
    std::vector<T> dss(const std::vector<T>& f) const { return along_s(f, 2); }
    template <class T>
    std::vector<T> dts(const std::vector<T>& f) const { return along_t(along_s(f, 1), 1); }

    const AxisDiff& t_axis() const { return dt_; }

private:
    template <class T>
    std::vector<T> along_t(const std::vector<T>& f, int order) const {
        std::vector<T> out(f.size());
        for (int i = 0; i < nt_; ++i) {
            const Stencil& st = order == 1 ? dt_.d1(i) : dt_.d2(i);
            for (int j = 0; j < ns_; ++j) {
                T acc = f[0] * 0.0;
                for (std::size_t k = 0; k < st.idx.size(); ++k) acc += st.w[k] * f[st.idx[k] * ns_ + j];
                out[i * ns_ + j] = acc;
            }
        }
        return out;
    }

    template <class T>
    std::vector<T> along_s(const std::vector<T>& f, int order) const {
        std::vector<T> out(f.size());
        for (int j = 0; j < ns_; ++j) {
            const Stencil& st = order == 1 ? ds_.d1(j) : ds_.d2(j);
            for (int i = 0; i < nt_; ++i) {
                T acc = f[0] * 0.0;
                for (std::size_t k = 0; k < st.idx.size(); ++k) acc += st.w[k] * f[i * ns_ + st.idx[k]];
                out[i * ns_ + j] = acc;
            }
        }
        return out;
    }

    int nt_;
    int ns_;
    AxisDiff dt_;
    AxisDiff ds_;
};

// Derivative of a sampled curve on the given axis.
template <class T>
std::vector<T> diff_1d(const AxisDiff& d, const std::vector<T>& f, int order) {
    std::vector<T> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Stencil& st = order == 1 ? d.d1(static_cast<int>(i)) : d.d2(static_cast<int>(i));
        T acc = f[0] * 0.0;
        for (std::size_t k = 0; k < st.idx.size(); ++k) acc += st.w[k] * f[st.idx[k]];
        out[i] = acc;
    }
    return out;
}

}  // namespace willmore
