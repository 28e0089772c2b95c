#pragma once

#include <variant>

#include "willmore/minkowski.hpp"

namespace willmore {

struct Translation { Eigen::Vector3d a; };
struct Dilation { double lambda; };  // factor e^lambda
struct Rotation { Eigen::Matrix3d theta; };
struct UnitInversion {};

using MoebiusGenerator = std::variant<Translation, Dilation, Rotation, UnitInversion>;

Mat5 matrix_of(const MoebiusGenerator& g);

// x -> r^2 (x - a) / |x - a|^2
Mat5 inversion_about(const Eigen::Vector3d& a, double r = 1.0);

// A point of R^3 or the point at infinity.
struct ExtPoint {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    bool infinite = false;

    static ExtPoint at(const Eigen::Vector3d& p) { return {p, false}; }
    static ExtPoint infinity() { return {Eigen::Vector3d::Zero(), true}; }
};

Vec5 lift_point(const ExtPoint& p);
ExtPoint project_point(const Vec5& v);
ExtPoint apply_to_point(const Mat5& M, const ExtPoint& p);

struct OrientedSphere {
    Eigen::Vector3d center;
    double radius;
};

Vec5 sphere_to_desitter(const OrientedSphere& s);
// The returned radius is 1/(Y5 - Y4); it is negative for the opposite orientation.
OrientedSphere desitter_to_sphere(const Vec5& Y);

// Circumsphere of four points in general position.
OrientedSphere sphere_through(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& p2, const Eigen::Vector3d& p3);

}  // namespace willmore
