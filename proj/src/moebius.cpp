#include "willmore/moebius.hpp"

#include <cmath>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

Mat5 translation_matrix(const Eigen::Vector3d& a) {
    const double h = 0.5 * a.squaredNorm();
    Mat5 M = Mat5::Zero();
    M.block<3, 3>(0, 0).setIdentity();
    M.block<3, 1>(0, 3) = -a;
    M.block<3, 1>(0, 4) = a;
    M.block<1, 3>(3, 0) = a.transpose();
    M(3, 3) = 1.0 - h;
    M(3, 4) = h;
    M.block<1, 3>(4, 0) = a.transpose();
    M(4, 3) = -h;
    M(4, 4) = 1.0 + h;
    return M;
}

Mat5 dilation_matrix(double lambda) {
    Mat5 M = Mat5::Identity();
    M(3, 3) = std::cosh(lambda);
    M(3, 4) = std::sinh(lambda);
    M(4, 3) = std::sinh(lambda);
    M(4, 4) = std::cosh(lambda);
    return M;
}

Mat5 rotation_matrix(const Eigen::Matrix3d& theta) {
    const double defect = (theta.transpose() * theta - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (!(defect <= 1e-10)) throw Error(ErrorKind::validation, "rotation matrix is not orthogonal");
    Mat5 M = Mat5::Identity();
    M.block<3, 3>(0, 0) = theta;
    return M;
}

Mat5 unit_inversion_matrix() {
    Mat5 M = Mat5::Identity();
    M.block<3, 3>(0, 0) *= -1.0;
    M(4, 4) = -1.0;
    return M;
}

struct MatrixVisitor {
    Mat5 operator()(const Translation& t) const { return translation_matrix(t.a); }
    Mat5 operator()(const Dilation& d) const { return dilation_matrix(d.lambda); }
    Mat5 operator()(const Rotation& r) const { return rotation_matrix(r.theta); }
    Mat5 operator()(const UnitInversion&) const { return unit_inversion_matrix(); }
};

}  // namespace

Mat5 matrix_of(const MoebiusGenerator& g) { return std::visit(MatrixVisitor{}, g); }

Mat5 inversion_about(const Eigen::Vector3d& a, double r) {
    if (!(r > 0)) throw Error(ErrorKind::validation, "inversion radius must be positive");
    return dilation_matrix(2.0 * std::log(r)) * unit_inversion_matrix() * translation_matrix(-a);
}

Vec5 lift_point(const ExtPoint& p) {
    Vec5 v;
    if (p.infinite) {
        v << 0, 0, 0, 0.5, 0.5;
        return v;
    }
    const double n2 = p.x.squaredNorm();
    v << p.x, 0.5 * (n2 - 1.0), 0.5 * (n2 + 1.0);
    return v;
}

ExtPoint project_point(const Vec5& v) {
    const double w = v(4) - v(3);
    if (std::abs(w) <= 1e-14 * v.norm()) return ExtPoint::infinity();
    return ExtPoint::at(v.head<3>() / w);
}

ExtPoint apply_to_point(const Mat5& M, const ExtPoint& p) { return project_point(M * lift_point(p)); }

Vec5 sphere_to_desitter(const OrientedSphere& s) {
    if (!(s.radius > 0)) throw Error(ErrorKind::validation, "sphere radius must be positive");
    const double r = s.radius;
    const double p2 = s.center.squaredNorm();
    Vec5 Y;
    Y << s.center / r, (p2 - r * r - 1.0) / (2.0 * r), (p2 - r * r + 1.0) / (2.0 * r);
    return Y;
}

OrientedSphere desitter_to_sphere(const Vec5& Y) {
    const double w = Y(4) - Y(3);
    if (std::abs(w) <= 1e-14 * Y.norm()) throw Error(ErrorKind::plane_not_sphere, "Y5 - Y4 = 0: plane, not a sphere");
    return {Y.head<3>() / w, 1.0 / w};
}

OrientedSphere sphere_through(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& p2, const Eigen::Vector3d& p3) {
    Eigen::Matrix3d A;
    Eigen::Vector3d b;
    const Eigen::Vector3d* q[3] = {&p1, &p2, &p3};
    for (int i = 0; i < 3; ++i) {
        A.row(i) = 2.0 * (*q[i] - p0).transpose();
        b(i) = q[i]->squaredNorm() - p0.squaredNorm();
    }
    const Eigen::Vector3d c = A.fullPivLu().solve(b);
    return {c, (p0 - c).norm()};
}

}  // namespace willmore
