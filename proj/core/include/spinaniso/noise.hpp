#ifndef SPINANISO_NOISE_HPP_INCLUDED
#define SPINANISO_NOISE_HPP_INCLUDED

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "spinaniso/device.hpp"
#include "spinaniso/geometry.hpp"

// Field correlation tensors at the qubit for each noise source, both as
// spectral density at a frequency (T1, white-noise dephasing) and as the
// geometric weights that multiply the temporal factor inside Gamma(t).

namespace spinaniso {

enum class FieldKind { electric, magnetic, effective_magnetic };

// Power spectral density tensor of a real vector field at one point,
// evaluated at a single angular frequency. Symmetric, PSD.
struct CorrelationTensor {
    Mat3 s = mat3_zero();
    FieldKind kind = FieldKind::electric;
    double omega = 0;
};

// --- noise model variants -------------------------------------------------
// Densities in cm^-3 / cm^-2, dipole moments in statC cm, switching time
// tau in s, positions in cm relative to the qubit. A strength of nullopt
// means "uncalibrated": the map/calibration layer must fit it before use.

struct UniformDipoles {            // fixed dipoles, random orientation, volume-distributed
    std::optional<double> rho_v;   // cm^-3
    double p0 = 0;                 // statC cm
    double tau = 0;                // s
};

struct UniformTraps {              // z-oriented trap dipoles on the gate plane
    std::optional<double> rho_a;   // cm^-2
    double p0 = 0;
    double tau = 0;
};

struct ClusterDipole {             // localized orientation-averaged dipole cluster
    Vec3 position;                 // cm, source minus qubit
    std::optional<double> p0;      // statC cm; p0^2 is the fitted strength
    double tau = 0;
};

struct ClusterTrap {               // localized z-oriented trap cluster
    Vec3 position;                 // cm; z must be positive (gate side)
    std::optional<double> p0;
    double tau = 0;
};

struct EwjnModel {};               // thermal near-field noise of the gate half-space

struct HyperfineModel {            // isotropic nuclear-bath dephasing rate
    double rate = 0;               // s^-1
};

using NoiseModel = std::variant<UniformDipoles, UniformTraps, ClusterDipole,
                                ClusterTrap, EwjnModel, HyperfineModel>;

bool is_charge_model(const NoiseModel& m);
bool is_calibrated(const NoiseModel& m);
std::string model_type_name(const NoiseModel& m);

// JSON (de)serialization of tagged model lists, e.g.
// {"type":"UT","rho_a_per_cm2":...,"p0_Cm":...,"tau_s":...}
NoiseModel noise_model_from_json(const nlohmann::json& j);
nlohmann::json noise_model_to_json(const NoiseModel& m);
std::vector<NoiseModel> noise_models_from_json(const nlohmann::json& j);
nlohmann::json noise_models_to_json(const std::vector<NoiseModel>& models);

// --- spectral shape -------------------------------------------------------

// Random-telegraph Lorentzian g(omega) = 2 tau / (1 + (omega tau)^2);
// integrates to 2 pi over the real line.
double lorentzian_spectrum(double tau, double omega);

// F(tau, t) = 2 pi tau (t + (e^{-t/tau} - 1) tau)
//           = (t^2/2) Int g(omega) sinc^2(omega t / 2) domega.
// Small t: pi t^2. Large t: 2 pi tau t.
double temporal_factor(double tau, double t);

// --- EWJN tensors ---------------------------------------------------------

// diag(1/2, 1/2, 1) * <EzEz>, <EzEz> = hbar omega eps_d / (8 pi sigma d^3) coth.
CorrelationTensor ewjn_electric_tensor(const DeviceParams& dev, double omega);
// diag(1/2, 1/2, 1) * <BzBz>, <BzBz> = pi hbar sigma omega / (2 c^2 d) coth.
CorrelationTensor ewjn_magnetic_tensor(const DeviceParams& dev, double omega);

// --- charge-noise electric weights ---------------------------------------

// In-plane electric correlation weights S_mn, m,n in {x,y}, with the
// spectral part factored out: <E_m E_n>(omega) = S_mn * g(omega).
struct InPlaneWeights {
    double s[2][2] = {{0, 0}, {0, 0}};
};

// Closed forms for the uniform distributions:
//   UD: S_xx = S_yy = (pi rho_v p0^2 / 12)(1/l^3 - 1/d^3)
//   UT: S_xx = (9 pi + 6) rho_a p0^2 / (32 d^4), S_yy = (9 pi - 6)(...)
// Uncalibrated strength evaluates at unit density (the weights are linear
// in it, which is what calibration exploits).
InPlaneWeights charge_uniform_efield_weights(const UniformDipoles& m, const DeviceParams& dev);
InPlaneWeights charge_uniform_efield_weights(const UniformTraps& m, const DeviceParams& dev);

// Full 3x3 electric PSD tensor of a localized cluster at frequency omega,
// including the Lorentzian. Off-diagonals matter: cluster geometry
// correlates E_x with E_y.
CorrelationTensor cluster_efield_tensor(const ClusterDipole& m, double omega);
CorrelationTensor cluster_efield_tensor(const ClusterTrap& m, double omega);

// Spectral-free in-plane block for any charge model (cluster tensors
// divided by g(omega); uniform models via the closed forms above).
InPlaneWeights in_plane_weights(const NoiseModel& m, const DeviceParams& dev);

double model_tau(const NoiseModel& m);

double hyperfine_rate(const HyperfineModel& m);

// Near-field validity limit for localized sources: warn below 10 nm.
inline constexpr double cluster_min_distance_warn = 10.0e-7;  // cm

}  // namespace spinaniso

#endif
