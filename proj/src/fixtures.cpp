#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"
#include "willmore/immersion.hpp"
#include "willmore/moebius.hpp"

namespace willmore {

namespace {

constexpr double kPi = std::numbers::pi;

ParametricImmersion from_jet(std::string name, std::function<Jet(double, double)> jet) {
    ParametricImmersion p;
    p.name = std::move(name);
    p.analytic = jet;
    p.position = [jet](double t, double s) { return jet(t, s).x; };
    return p;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::validation, what);
}

}  // namespace

ParametricImmersion ellipsoid(double a, double b, double c) {
    require(a > 0 && b > 0 && c > 0, "ellipsoid semi-axes must be positive");
    auto p = from_jet("ellipsoid", [a, b, c](double t, double s) {
        const double st = std::sin(t), ct = std::cos(t), ss = std::sin(s), cs = std::cos(s);
        Jet j;
        j.x << a * st * cs, b * st * ss, -c * ct, 0;
        j.xt << a * ct * cs, b * ct * ss, c * st, 0;
        j.xs << -a * st * ss, b * st * cs, 0, 0;
        j.xtt << -a * st * cs, -b * st * ss, c * ct, 0;
        j.xts << -a * ct * ss, b * ct * cs, 0, 0;
        j.xss << -a * st * cs, -b * st * ss, 0, 0;
        return j;
    });
    p.t0 = 0.0;
    p.t1 = kPi;
    p.singular_ends = true;
    p.closed = true;
    p.euler_characteristic = 2;
    return p;
}

ParametricImmersion round_sphere(double R) {
    require(R > 0, "sphere radius must be positive");
    ParametricImmersion p = ellipsoid(R, R, R);
    p.name = "round_sphere";
    return p;
}

ParametricImmersion clifford_torus() {
    const double R = std::sqrt(2.0);
    auto p = from_jet("clifford_torus", [R](double t, double s) {
        const double st = std::sin(t), ct = std::cos(t), ss = std::sin(s), cs = std::cos(s);
        const double rho = R + ct;
        Jet j;
        j.x << rho * cs, rho * ss, st, 0;
        j.xt << -st * cs, -st * ss, ct, 0;
        j.xs << -rho * ss, rho * cs, 0, 0;
        j.xtt << -ct * cs, -ct * ss, -st, 0;
        j.xts << st * ss, -st * cs, 0, 0;
        j.xss << -rho * cs, -rho * ss, 0, 0;
        return j;
    });
    p.t0 = 0.0;
    p.t1 = 2.0 * kPi;
    p.periodic_t = true;
    p.closed = true;
    p.euler_characteristic = 0;
    return p;
}

ParametricImmersion catenoid(double t0, double t1) {
    require(t1 > t0, "catenoid needs t1 > t0");
    auto p = from_jet("catenoid", [](double t, double s) {
        const double ch = std::cosh(t), sh = std::sinh(t), ss = std::sin(s), cs = std::cos(s);
        Jet j;
        j.x << ch * cs, ch * ss, t, 0;
        j.xt << sh * cs, sh * ss, 1, 0;
        j.xs << -ch * ss, ch * cs, 0, 0;
        j.xtt << ch * cs, ch * ss, 0, 0;
        j.xts << -sh * ss, sh * cs, 0, 0;
        j.xss << -ch * cs, -ch * ss, 0, 0;
        return j;
    });
    p.t0 = t0;
    p.t1 = t1;
    return p;
}

ParametricImmersion inverted_catenoid(double eps, double t0, double t1) {
    require(eps > 0, "inverted catenoid needs eps > 0");
    ParametricImmersion p = moebius_transform_immersion(scale_immersion(catenoid(t0, t1), eps),
                                                        matrix_of(UnitInversion{}));
    p.name = "inverted_catenoid";
    return p;
}

double neck_scale(double eps) {
    require(eps > 0 && eps < 1, "neck member needs 0 < eps < 1");
    return std::acosh(1.0 / eps);
}

ParametricImmersion neck_member(double eps) {
    const double T = 2.0 * neck_scale(eps);
    return inverted_catenoid(eps, -T, T);
}

ParametricImmersion clifford_torus_s3() {
    const double k = 1.0 / std::sqrt(2.0);
    auto p = from_jet("clifford_torus_s3", [k](double t, double s) {
        const double st = std::sin(t), ct = std::cos(t), ss = std::sin(s), cs = std::cos(s);
        Jet j;
        j.x << k * ct, k * st, k * cs, k * ss;
        j.xt << -k * st, k * ct, 0, 0;
        j.xs << 0, 0, -k * ss, k * cs;
        j.xtt << -k * ct, -k * st, 0, 0;
        j.xss << 0, 0, -k * cs, -k * ss;
        return j;
    });
    p.ambient = Ambient::S3;
    p.t0 = 0.0;
    p.t1 = 2.0 * kPi;
    p.periodic_t = true;
    p.closed = true;
    p.euler_characteristic = 0;
    return p;
}

ParametricImmersion umbilic_band(double t0, double t1) {
    require(t0 > -0.9 && t1 < 0.9 && t1 > t0, "umbilic band needs -0.9 < t0 < t1 < 0.9");
    constexpr double c = 0.5;
    auto p = from_jet("umbilic_band", [](double t, double s) {
        const double q = std::sqrt(1.0 - t * t);
        const double r = q + c * t * t * t;
        const double r1 = -t / q + 3.0 * c * t * t;
        const double r2 = -1.0 / (q * q * q) + 6.0 * c * t;
        const double ss = std::sin(s), cs = std::cos(s);
        Jet j;
        j.x << r * cs, r * ss, t, 0;
        j.xt << r1 * cs, r1 * ss, 1, 0;
        j.xs << -r * ss, r * cs, 0, 0;
        j.xtt << r2 * cs, r2 * ss, 0, 0;
        j.xts << -r1 * ss, r1 * cs, 0, 0;
        j.xss << -r * cs, -r * ss, 0, 0;
        return j;
    });
    p.t0 = t0;
    p.t1 = t1;
    return p;
}

ParametricImmersion build_fixture(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "round_sphere") return round_sphere(get("R", 1.0));
    if (name == "clifford_torus") return clifford_torus();
    if (name == "clifford_torus_s3") return clifford_torus_s3();
    if (name == "catenoid") return catenoid(get("t0", -2.0), get("t1", 2.0));
    if (name == "ellipsoid") return ellipsoid(get("a", 2.0), get("b", 1.0), get("c", 1.0));
    if (name == "umbilic_band") return umbilic_band(get("t0", -0.5), get("t1", 0.5));
    if (name == "inverted_catenoid") {
        const double eps = get("eps", 0.1);
        if (params.count("t0") || params.count("t1")) {
            const double T = 2.0 * neck_scale(eps);
            return inverted_catenoid(eps, get("t0", -T), get("t1", T));
        }
        return neck_member(eps);
    }
    throw Error(ErrorKind::config, "unknown fixture '" + name + "'");
}

}  // namespace willmore
