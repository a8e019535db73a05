#include "spinaniso/device.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "spinaniso/constants.hpp"

namespace spinaniso {

namespace K = constants;

namespace {

double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key))
        throw std::invalid_argument(std::string("device config: missing key '") + key + "'");
    const nlohmann::json& v = j.at(key);
    if (!v.is_number())
        throw std::invalid_argument(std::string("device config: '") + key + "' is not a number");
    double x = v.get<double>();
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string("device config: '") + key + "' is not finite");
    return x;
}

double require_positive(const nlohmann::json& j, const char* key) {
    double x = require_number(j, key);
    if (x <= 0)
        throw std::invalid_argument(std::string("device config: '") + key + "' must be positive");
    return x;
}

}  // namespace

double DeviceParams::spring_constant() const { return m_eff * omega_orb * omega_orb; }

double DeviceParams::displacement_response() const {
    return K::q_elem / (2.0 * spring_constant());
}

double DeviceParams::gyromagnetic() const {
    return K::q_elem * g_factor / (2.0 * K::m_electron * K::c_light);
}

double DeviceParams::coth_factor(double omega) const {
    return 1.0 / std::tanh(K::hbar * omega / (2.0 * K::k_boltzmann * temperature));
}

DeviceParams device_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("device config: not a JSON object");
    DeviceParams dev;
    dev.d = require_positive(j, "d_nm") * K::cm_per_nm;
    dev.l = require_positive(j, "l_nm") * K::cm_per_nm;
    dev.eps_d = require_positive(j, "eps_d");
    dev.sigma = require_positive(j, "sigma_S_per_m") * K::sigma_si_to_gaussian;
    dev.m_eff = require_positive(j, "m_eff_me") * K::m_electron;
    dev.omega_orb = require_positive(j, "omega_orb_rad_s");
    dev.omega_op = require_positive(j, "f_op_GHz") * K::rad_s_per_GHz;
    dev.temperature = require_positive(j, "temperature_mK") * K::kelvin_per_mK;
    dev.g_factor = j.contains("g_factor") ? require_positive(j, "g_factor") : 2.0;
    if (dev.l >= dev.d)
        throw std::invalid_argument("device config: oxide thickness l_nm must be below d_nm");

    if (!j.contains("gradients_mT_per_nm"))
        throw std::invalid_argument("device config: missing key 'gradients_mT_per_nm'");
    const nlohmann::json& g = j.at("gradients_mT_per_nm");
    const char* keys[3][2] = {{"dBx_dx", "dBx_dy"}, {"dBy_dx", "dBy_dy"}, {"dBz_dx", "dBz_dy"}};
    for (int i = 0; i < 3; ++i)
        for (int m = 0; m < 2; ++m)
            dev.gradients.g[i][m] = require_number(g, keys[i][m]) * K::gauss_cm_per_mT_nm;
    return dev;
}

DeviceParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open device config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("device config " + path + ": " + e.what());
    }
    return device_from_json(j);
}

nlohmann::json device_to_json(const DeviceParams& dev) {
    return nlohmann::json{
        {"d_nm", dev.d / K::cm_per_nm},
        {"l_nm", dev.l / K::cm_per_nm},
        {"eps_d", dev.eps_d},
        {"sigma_S_per_m", dev.sigma / K::sigma_si_to_gaussian},
        {"m_eff_me", dev.m_eff / K::m_electron},
        {"omega_orb_rad_s", dev.omega_orb},
        {"f_op_GHz", dev.omega_op / K::rad_s_per_GHz},
        {"temperature_mK", dev.temperature / K::kelvin_per_mK},
        {"g_factor", dev.g_factor},
        {"gradients_mT_per_nm",
         {{"dBx_dx", dev.gradients.g[0][0] / K::gauss_cm_per_mT_nm},
          {"dBy_dx", dev.gradients.g[1][0] / K::gauss_cm_per_mT_nm},
          {"dBz_dx", dev.gradients.g[2][0] / K::gauss_cm_per_mT_nm},
          {"dBx_dy", dev.gradients.g[0][1] / K::gauss_cm_per_mT_nm},
          {"dBy_dy", dev.gradients.g[1][1] / K::gauss_cm_per_mT_nm},
          {"dBz_dy", dev.gradients.g[2][1] / K::gauss_cm_per_mT_nm}}}};
}

double skin_depth(double sigma, double omega) {
    return K::c_light / std::sqrt(2.0 * M_PI * sigma * omega);
}

RegimeReport check_near_field_regime(const DeviceParams& dev) {
    RegimeReport r;
    r.d = dev.d;
    r.delta = skin_depth(dev.sigma, dev.omega_op);
    r.ratio = r.d / r.delta;
    r.warn = r.ratio > 0.5;
    return r;
}

}  // namespace spinaniso
