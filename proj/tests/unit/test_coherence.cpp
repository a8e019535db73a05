#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <spinaniso/coherence.hpp>
#include <spinaniso/constants.hpp>

#include "support.hpp"

using namespace spinaniso;
namespace K = spinaniso::constants;

namespace {

// n.G_m for gradient column m
double ndotg(const Vec3& n, const GradientMatrix& g, int m) {
    return n.x * g.g[0][m] + n.y * g.g[1][m] + n.z * g.g[2][m];
}

double w2_manual(const Vec3& n, const InPlaneWeights& s, const GradientMatrix& g) {
    double w = 0;
    for (int m = 0; m < 2; ++m)
        for (int p = 0; p < 2; ++p) w += s.s[m][p] * ndotg(n, g, m) * ndotg(n, g, p);
    return w;
}

double w1_manual(const Vec3& n, const InPlaneWeights& s, const GradientMatrix& g) {
    double w = 0;
    for (int m = 0; m < 2; ++m)
        for (int p = 0; p < 2; ++p) {
            double gdotg = g.g[0][m] * g.g[0][p] + g.g[1][m] * g.g[1][p] + g.g[2][m] * g.g[2][p];
            w += s.s[m][p] * (gdotg - ndotg(n, g, m) * ndotg(n, g, p));
        }
    return w;
}

Mat3 combined_ewjn_tensor(const DeviceParams& dev) {
    CorrelationTensor e = ewjn_electric_tensor(dev, dev.omega_op);
    CorrelationTensor b = ewjn_magnetic_tensor(dev, dev.omega_op);
    return mat3_add(b.s, effective_from_electric(e, dev).entries);
}

}  // namespace

TEST_CASE("gradient conversion of electric noise") {
    DeviceParams dev = testsup::case_device();
    double conv = dev.displacement_response();

    // identity in-plane electric tensor: effective entries are plain
    // gradient-column products scaled by the displacement response
    CorrelationTensor e;
    e.kind = FieldKind::electric;
    e.omega = dev.omega_op;
    e.s[0][0] = 1.0;
    e.s[1][1] = 1.0;
    EffectiveTensor m = effective_from_electric(e, dev);
    CHECK(m.omega == doctest::Approx(dev.omega_op).epsilon(1e-15));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double want = conv * conv *
                          (dev.gradients.g[i][0] * dev.gradients.g[j][0] +
                           dev.gradients.g[i][1] * dev.gradients.g[j][1]);
            CHECK(m.entries[i][j] == doctest::Approx(want).epsilon(1e-13));
        }

    // z components of the electric tensor never couple: the qubit cannot
    // be displaced against an infinite spring
    CorrelationTensor ez = e;
    ez.s[2][2] = 1e12;
    ez.s[0][2] = ez.s[2][0] = 3e7;
    EffectiveTensor mz = effective_from_electric(ez, dev);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(mz.entries[i][j] == doctest::Approx(m.entries[i][j]).epsilon(1e-14));

    // cross-spectrum contributes through both orderings
    CorrelationTensor ex;
    ex.s[0][1] = ex.s[1][0] = 0.5;
    EffectiveTensor mx = effective_from_electric(ex, dev);
    double want01 = conv * conv * 0.5 *
                    (dev.gradients.g[0][0] * dev.gradients.g[0][1] +
                     dev.gradients.g[0][1] * dev.gradients.g[0][0]);
    CHECK(mx.entries[0][0] == doctest::Approx(want01).epsilon(1e-13));
}

TEST_CASE("combined half-space tensor frozen values") {
    DeviceParams dev = testsup::case_device();
    Mat3 m = combined_ewjn_tensor(dev);
    const double want[3][3] = {
        {1.013952283515e-14, 2.006371883736e-18, 2.381476192434e-17},
        {2.006371883736e-18, 1.013690582834e-14, 4.318061228040e-18},
        {2.381476192434e-17, 4.318061228040e-18, 2.027533824398e-14}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(testsup::rel(m[i][j], want[i][j]) < 1e-9);
}

TEST_CASE("relaxation contraction") {
    DeviceParams dev = testsup::case_device();
    Mat3 m = combined_ewjn_tensor(dev);

    // transverse contraction equals tr M - n^T M n, the closed form of
    // summing (I - n n^T) against a symmetric tensor
    FieldDirection dir(0.9, 4.1);
    Vec3 n = dir.unit_vector();
    double gam = dev.gyromagnetic();
    double rate = (gam / 2.0) * (gam / 2.0) * (trace(m) - contract(m, n));
    CHECK(testsup::rel(t1_from_tensor(m, dir, dev), 1.0 / rate) < 1e-12);

    CHECK(is_no_decay(t1_from_tensor(mat3_zero(), dir, dev)));
    CHECK_FALSE(is_no_decay(1.0));
}

TEST_CASE("half-space relaxation times") {
    DeviceParams dev = testsup::case_device();
    CHECK(testsup::rel(ewjn_t1(dev, testsup::xhat()), 4.2517598633e-01) < 1e-9);
    CHECK(testsup::rel(ewjn_t1(dev, testsup::zhat()), 6.3771367653e-01) < 1e-9);

    // the override recomputes both field tensors at the given conductivity
    CHECK(testsup::rel(ewjn_t1(dev, testsup::xhat(), dev.sigma), 4.2517598633e-01) < 1e-9);

    // rate is A sigma + B / sigma: the magnetic part grows with sigma, the
    // electric part shrinks. Fit from two conductivities, predict a third.
    double s1 = 2e8 * K::sigma_si_to_gaussian;
    double s2 = 2e7 * K::sigma_si_to_gaussian;
    double s3 = 2e6 * K::sigma_si_to_gaussian;
    FieldDirection dir(1.2, 0.7);
    double r1 = 1.0 / ewjn_t1(dev, dir, s1);
    double r2 = 1.0 / ewjn_t1(dev, dir, s2);
    double a = (r1 * s1 - r2 * s2) / (s1 * s1 - s2 * s2);
    double b = s1 * (r1 - a * s1);
    CHECK(testsup::rel(1.0 / ewjn_t1(dev, dir, s3), a * s3 + b / s3) < 1e-10);
}

TEST_CASE("constant-alpha compatibility switch") {
    // The exact direct-magnetic contraction carries a (2 + sin^2 theta)/4
    // shape; the compat switch pins it at the vertical-field value. The
    // difference is the full <BzBz> weight at the poles and half of it in
    // the plane.
    DeviceParams dev = testsup::case_device();
    double gam = dev.gyromagnetic();
    double sb = ewjn_magnetic_tensor(dev, dev.omega_op).s[2][2];
    double quarter = (gam / 2.0) * (gam / 2.0);

    double d_pole = 1.0 / ewjn_t1(dev, testsup::zhat(), std::nullopt, true) -
                    1.0 / ewjn_t1(dev, testsup::zhat());
    CHECK(testsup::rel(d_pole, quarter * sb) < 1e-10);

    double d_plane = 1.0 / ewjn_t1(dev, testsup::xhat(), std::nullopt, true) -
                     1.0 / ewjn_t1(dev, testsup::xhat());
    CHECK(testsup::rel(d_plane, 0.5 * quarter * sb) < 1e-10);
}

TEST_CASE("half-space dephasing") {
    DeviceParams dev = testsup::case_device();
    CHECK(testsup::rel(1.0 / ewjn_dephasing_rate(dev, testsup::xhat()), 2.1629113633e-01) < 1e-9);
    CHECK(testsup::rel(1.0 / ewjn_dephasing_rate(dev, testsup::zhat()), 1.0816534301e-01) < 1e-9);

    // the coth factors cancel against the low-frequency spectrum: the rate
    // is exactly linear in temperature
    DeviceParams cold = dev;
    cold.temperature = dev.temperature / 10.0;
    CHECK(testsup::rel(ewjn_dephasing_rate(cold, testsup::xhat()),
                       ewjn_dephasing_rate(dev, testsup::xhat()) / 10.0) < 1e-12);

    CHECK(testsup::rel(ewjn_dephasing_rate(dev, testsup::xhat(), dev.sigma),
                       ewjn_dephasing_rate(dev, testsup::xhat())) < 1e-13);
}

TEST_CASE("dephasing exponent") {
    DeviceParams dev = testsup::case_device();
    double gam = dev.gyromagnetic();
    double conv = dev.displacement_response();

    NoiseModel ud = testsup::ud_model(1e-6);
    {
        UniformDipoles& u = std::get<UniformDipoles>(ud);
        u.rho_v = 3.6604338777e+13;
    }
    std::vector<NoiseModel> models{ud};

    FieldDirection dir(1.3, 2.4);
    Vec3 n = dir.unit_vector();
    double t = 7.7e-7;
    double w2 = w2_manual(n, in_plane_weights(ud, dev), dev.gradients);
    double want = gam * gam * conv * conv * w2 * temporal_factor(1e-6, t);
    CHECK(testsup::rel(gamma_exponent(t, dir, models, dev), want) < 1e-12);

    CHECK(gamma_exponent(0.0, dir, models, dev) == 0.0);
    CHECK(gamma_exponent(2e-6, dir, models, dev) > gamma_exponent(1e-6, dir, models, dev));
    CHECK(gamma_exponent(t, dir, {}, dev) == 0.0);

    // two sources decohere independently: exponents add
    NoiseModel ct = testsup::ct_model(37.0, 0.0, 137.0, 2e-6);
    {
        ClusterTrap& c = std::get<ClusterTrap>(ct);
        c.p0 = 1e-18;
    }
    std::vector<NoiseModel> both{ud, ct};
    CHECK(testsup::rel(gamma_exponent(t, dir, both, dev),
                       gamma_exponent(t, dir, {ud}, dev) + gamma_exponent(t, dir, {ct}, dev)) <
          1e-13);

    CHECK_THROWS_AS(gamma_exponent(-1e-9, dir, models, dev), std::invalid_argument);
    CHECK_THROWS_AS(gamma_exponent(t, dir, {NoiseModel{EwjnModel{}}}, dev), std::invalid_argument);
    CHECK_THROWS_AS(gamma_exponent(t, dir, {testsup::hyper_model()}, dev), std::invalid_argument);
}

TEST_CASE("dephasing time solve") {
    DeviceParams dev = testsup::case_device();

    NoiseModel ud = testsup::ud_model(1e-6);
    std::get<UniformDipoles>(ud).rho_v = 3.6604338777e+13;
    std::vector<NoiseModel> models{ud};

    double tphi = dephasing_time(testsup::xhat(), models, dev);
    CHECK(testsup::rel(tphi, 1.443076923077e-06) < 1e-9);
    CHECK(std::abs(gamma_exponent(tphi, testsup::xhat(), models, dev) - 1.0) < 1e-6);

    // vanishing strength never decoheres
    NoiseModel dead = testsup::ud_model(1e-6);
    std::get<UniformDipoles>(dead).rho_v = 0.0;
    CHECK(is_no_decay(dephasing_time(testsup::xhat(), {dead}, dev)));
    CHECK(is_no_decay(dephasing_time(testsup::xhat(), {}, dev)));

    // a fast solve across twelve decades of strength stays exact: Gamma is
    // linear in rho and quadratic-to-linear in t, so Tphi spans wide ranges
    NoiseModel weak = testsup::ud_model(1e-6);
    std::get<UniformDipoles>(weak).rho_v = 3.6604338777e+13 * 1e-8;
    double tw = dephasing_time(testsup::xhat(), {weak}, dev);
    CHECK(std::abs(gamma_exponent(tw, testsup::xhat(), {weak}, dev) - 1.0) < 1e-6);
    NoiseModel strong = testsup::ud_model(1e-6);
    std::get<UniformDipoles>(strong).rho_v = 3.6604338777e+13 * 1e8;
    double ts = dephasing_time(testsup::xhat(), {strong}, dev);
    CHECK(std::abs(gamma_exponent(ts, testsup::xhat(), {strong}, dev) - 1.0) < 1e-6);
    CHECK(ts < tphi);
    CHECK(tw > tphi);
}

TEST_CASE("rate combination") {
    CHECK(combine_t2(2e-6, 0.0) == doctest::Approx(2e-6).epsilon(1e-15));
    double h = 1.0 / 2.01e-6;
    CHECK(testsup::rel(combine_t2(2e-6, h), 1.0 / (1.0 / 2e-6 + h)) < 1e-14);
    CHECK(testsup::rel(combine_t2(no_decay_value, h), 2.01e-6) < 1e-14);
    CHECK(is_no_decay(combine_t2(no_decay_value, 0.0)));
    // optional relaxation contribution enters at half weight
    CHECK(testsup::rel(combine_t2(2e-6, h, 1e-3), 1.0 / (1.0 / 2e-6 + h + 0.5e3)) < 1e-14);
}

TEST_CASE("single-source relaxation from charge noise") {
    DeviceParams dev = testsup::case_device();

    NoiseModel ud = testsup::ud_model(1e-6);
    std::get<UniformDipoles>(ud).rho_v = 3.6604338777e+13;
    double t1_ud = charge_t1(testsup::xhat(), ud, dev);
    CHECK(testsup::rel(t1_ud, 2.11978516e+04) < 1e-8);

    NoiseModel ut = testsup::ut_model(1e-6);
    std::get<UniformTraps>(ut).rho_a = 1.9410438702e+08;
    double t1_ut = charge_t1(testsup::xhat(), ut, dev);
    CHECK(testsup::rel(t1_ut / t1_ud, 1.1101181728) < 1e-9);

    // manual transverse contraction for a generic direction and model
    NoiseModel cd = testsup::cd_model(30.0, 40.0, 50.0, 7e-7);
    std::get<ClusterDipole>(cd).p0 = 3e-19;
    FieldDirection dir(0.8, 5.6);
    double gam = dev.gyromagnetic();
    double conv = dev.displacement_response();
    double w1 = w1_manual(dir.unit_vector(), in_plane_weights(cd, dev), dev.gradients);
    double want = 1.0 / ((gam / 2.0) * (gam / 2.0) * conv * conv * w1 *
                         lorentzian_spectrum(7e-7, dev.omega_op));
    CHECK(testsup::rel(charge_t1(dir, cd, dev), want) < 1e-12);

    CHECK_THROWS_AS(charge_t1(dir, NoiseModel{EwjnModel{}}, dev), std::invalid_argument);
    CHECK_THROWS_AS(charge_t1(dir, testsup::hyper_model(), dev), std::invalid_argument);
}
