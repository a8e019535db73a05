#ifndef SPINANISO_TEST_SUPPORT_HPP_INCLUDED
#define SPINANISO_TEST_SUPPORT_HPP_INCLUDED

#include <cmath>
#include <string>

#include <spinaniso/anisotropy_map.hpp>
#include <spinaniso/coherence.hpp>
#include <spinaniso/constants.hpp>
#include <spinaniso/device.hpp>
#include <spinaniso/noise.hpp>

namespace testsup {

inline std::string cases_dir() { return std::string(SPINANISO_SOURCE_DIR) + "/cases"; }

// Case-study device, constructed in code so most unit tests do not depend
// on config parsing (load_config has its own tests against the bundled file).
inline spinaniso::DeviceParams case_device() {
    nlohmann::json j = {
        {"d_nm", 137.0},
        {"l_nm", 100.0},
        {"eps_d", 13.05},
        {"sigma_S_per_m", 2.0e8},
        {"m_eff_me", 0.19},
        {"omega_orb_rad_s", 6.84e11},
        {"f_op_GHz", 12.9},
        {"temperature_mK", 150.0},
        {"g_factor", 2.0},
        {"gradients_mT_per_nm",
         {{"dBx_dx", -0.20},
          {"dBy_dx", -0.05},
          {"dBz_dx", -0.27},
          {"dBx_dy", -0.03},
          {"dBy_dy", 0.18},
          {"dBz_dy", -0.02}}}};
    return spinaniso::device_from_json(j);
}

inline spinaniso::FieldDirection xhat() { return spinaniso::FieldDirection(M_PI / 2.0, 0.0); }
inline spinaniso::FieldDirection yhat() {
    return spinaniso::FieldDirection(M_PI / 2.0, M_PI / 2.0);
}
inline spinaniso::FieldDirection zhat() { return spinaniso::FieldDirection(0.0, 0.0); }

constexpr double hyper_rate_default = 1.0 / 2.01e-6;  // s^-1
constexpr double t2_reference = 840e-9;               // s
constexpr double p0_default_statC_cm = 2.0e-29 * spinaniso::constants::statC_cm_per_C_m;
constexpr double nm = 1e-7;  // cm

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Uncalibrated model builders for the six charge configurations.
inline spinaniso::NoiseModel ud_model(double tau) {
    spinaniso::UniformDipoles m;
    m.p0 = p0_default_statC_cm;
    m.tau = tau;
    return m;
}
inline spinaniso::NoiseModel ut_model(double tau) {
    spinaniso::UniformTraps m;
    m.p0 = p0_default_statC_cm;
    m.tau = tau;
    return m;
}
inline spinaniso::NoiseModel cd_model(double x_nm, double y_nm, double z_nm, double tau) {
    spinaniso::ClusterDipole m;
    m.position = {x_nm * nm, y_nm * nm, z_nm * nm};
    m.tau = tau;
    return m;
}
inline spinaniso::NoiseModel ct_model(double x_nm, double y_nm, double z_nm, double tau) {
    spinaniso::ClusterTrap m;
    m.position = {x_nm * nm, y_nm * nm, z_nm * nm};
    m.tau = tau;
    return m;
}

inline spinaniso::NoiseModel hyper_model(double rate = hyper_rate_default) {
    spinaniso::HyperfineModel m;
    m.rate = rate;
    return m;
}

}  // namespace testsup

#endif
