#ifndef SPINANISO_DEVICE_HPP_INCLUDED
#define SPINANISO_DEVICE_HPP_INCLUDED

#include <string>

#include <json.hpp>

namespace spinaniso {

// dB_i/dx_j for i in {x,y,z}, j in {x,y}; no z column: in the
// two-dimensional confinement approximation the qubit never moves in z.
// Input unit mT/nm, stored in G/cm. Signs are kept exactly as measured;
// cross terms dB_i/dx * dB_j/dx are sign-sensitive.
struct GradientMatrix {
    double g[3][2] = {{0, 0}, {0, 0}, {0, 0}};
};

// Device description in internal Gaussian units. Two distinct masses on
// purpose: the bare electron mass enters the magneton prefactors, the
// effective mass enters the orbital spring constants.
struct DeviceParams {
    double d = 0;            // qubit-to-gate distance, cm
    double l = 0;            // oxide layer thickness, cm
    double eps_d = 0;        // relative dielectric constant
    double sigma = 0;        // gate conductivity, 1/s
    double m_eff = 0;        // transverse effective mass, g
    double omega_orb = 0;    // lowest orbital frequency, rad/s
    double omega_op = 0;     // qubit operating frequency, rad/s
    double temperature = 0;  // K
    double g_factor = 2.0;
    GradientMatrix gradients;

    // k_x = k_y = m_eff * omega_orb^2; k_z is infinite (no z motion).
    double spring_constant() const;
    // Displacement response q/2k: position shift per unit field.
    double displacement_response() const;
    // gamma = q g / (2 m_e c), rad/s per G.
    double gyromagnetic() const;
    // coth(hbar omega / 2 kB T)
    double coth_factor(double omega) const;
};

DeviceParams device_from_json(const nlohmann::json& j);
DeviceParams load_config(const std::string& path);
nlohmann::json device_to_json(const DeviceParams& dev);  // lab units, canonical key order

// delta = c / sqrt(2 pi sigma omega), Gaussian-unit conductivity.
double skin_depth(double sigma, double omega);

struct RegimeReport {
    double d = 0;      // cm
    double delta = 0;  // cm
    double ratio = 0;  // d / delta
    bool warn = false; // true when the near-field assumption d << delta degrades
};

// Half-space noise formulas hold for d << delta; warn when d/delta > 0.5.
RegimeReport check_near_field_regime(const DeviceParams& dev);

}  // namespace spinaniso

#endif
