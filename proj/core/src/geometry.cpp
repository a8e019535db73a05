#include "spinaniso/geometry.hpp"

#include <cmath>

namespace spinaniso {

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Mat3 mat3_zero() { return {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}; }

Mat3 mat3_identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

Mat3 mat3_add(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

Mat3 mat3_scale(const Mat3& a, double s) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] * s;
    return r;
}

Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 r = mat3_zero();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i] * b[j];
    return r;
}

double trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

double contract(const Mat3& m, const Vec3& n) {
    double r = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r += n[i] * m[i][j] * n[j];
    return r;
}

double contract(const Mat3& a, const Mat3& b) {
    double r = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r += a[i][j] * b[i][j];
    return r;
}

FieldDirection::FieldDirection(double theta, double phi) {
    double two_pi = 2.0 * M_PI;
    double th = std::fmod(theta, two_pi);
    if (th < 0) th += two_pi;
    if (th > M_PI) {
        th = two_pi - th;
        phi += M_PI;
    }
    double ph = std::fmod(phi, two_pi);
    if (ph < 0) ph += two_pi;
    if (ph == two_pi) ph = 0.0;  // fmod rounding at the wrap
    theta_ = th;
    phi_ = ph;
}

Vec3 FieldDirection::unit_vector() const {
    double st = std::sin(theta_);
    return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
}

FieldDirection FieldDirection::antipode() const {
    return FieldDirection(M_PI - theta_, phi_ + M_PI);
}

FieldDirection direction_from_angles(double theta, double phi) {
    return FieldDirection(theta, phi);
}

WeightMatrix transverse_weight(const FieldDirection& dir) {
    double st = std::sin(dir.theta()), ct = std::cos(dir.theta());
    double sp = std::sin(dir.phi()), cp = std::cos(dir.phi());
    WeightMatrix w;
    w.kind = WeightKind::transverse;
    w.entries = {{{cp * cp * ct * ct + sp * sp, -cp * sp * st * st, -cp * ct * st},
                  {-cp * sp * st * st, sp * sp * ct * ct + cp * cp, -sp * ct * st},
                  {-cp * ct * st, -sp * ct * st, st * st}}};
    return w;
}

WeightMatrix longitudinal_weight(const FieldDirection& dir) {
    double st = std::sin(dir.theta()), ct = std::cos(dir.theta());
    double sp = std::sin(dir.phi()), cp = std::cos(dir.phi());
    WeightMatrix w;
    w.kind = WeightKind::longitudinal;
    w.entries = {{{cp * cp * st * st, cp * sp * st * st, cp * ct * st},
                  {cp * sp * st * st, sp * sp * st * st, sp * ct * st},
                  {cp * ct * st, sp * ct * st, ct * ct}}};
    return w;
}

}  // namespace spinaniso
