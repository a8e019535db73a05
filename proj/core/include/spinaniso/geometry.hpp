#ifndef SPINANISO_GEOMETRY_HPP_INCLUDED
#define SPINANISO_GEOMETRY_HPP_INCLUDED

#include <array>
#include <cstddef>

// Field-direction geometry and the two angular weight matrices that
// contract noise correlation tensors into relaxation (transverse) and
// dephasing (longitudinal) rates.

namespace spinaniso {

struct Vec3 {
    double x = 0, y = 0, z = 0;
    double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

// 3x3 real symmetric matrices are stored dense; row-major m[i][j].
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat3_zero();
Mat3 mat3_identity();
Mat3 mat3_add(const Mat3& a, const Mat3& b);
Mat3 mat3_scale(const Mat3& a, double s);
Mat3 mat3_mul(const Mat3& a, const Mat3& b);
Mat3 outer(const Vec3& a, const Vec3& b);
double trace(const Mat3& a);
// n^T M n for the quadratic form of a direction with a symmetric tensor.
double contract(const Mat3& m, const Vec3& n);
// Frobenius-style full contraction sum_ij A_ij B_ij.
double contract(const Mat3& a, const Mat3& b);

// Applied-field direction on the unit sphere, canonicalized at
// construction: theta in [0, pi], phi in [0, 2pi). Out-of-range angles
// fold onto the sphere, e.g. (-pi/4, 0) -> (pi/4, pi).
class FieldDirection {
public:
    FieldDirection(double theta, double phi);

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    Vec3 unit_vector() const;  // (sin t cos p, sin t sin p, cos t)
    FieldDirection antipode() const;

private:
    double theta_;
    double phi_;
};

FieldDirection direction_from_angles(double theta, double phi);

enum class WeightKind { transverse, longitudinal };

struct WeightMatrix {
    Mat3 entries;
    WeightKind kind;
};

// Q1 = I - n n^T, written out as the closed-form trig entries.
WeightMatrix transverse_weight(const FieldDirection& dir);
// Q2 = n n^T, closed-form trig entries.
WeightMatrix longitudinal_weight(const FieldDirection& dir);

}  // namespace spinaniso

#endif
