#include "spinaniso/noise.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "spinaniso/constants.hpp"

namespace spinaniso {

namespace K = constants;

namespace {

constexpr double kDefaultP0 = 2.0e-29 * K::statC_cm_per_C_m;  // 2e-29 C m
constexpr double kDefaultTau = 1e-6;                          // s, survey default
constexpr double kDefaultHyperRate = 1.0 / 2.01e-6;           // s^-1

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    ok.insert("type");
    for (const auto& [key, value] : j.items())
        if (!ok.count(key))
            throw std::invalid_argument("noise model: unknown key '" + key + "'");
}

double number_or(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    if (!j.at(key).is_number())
        throw std::invalid_argument(std::string("noise model: '") + key + "' is not a number");
    double x = j.at(key).get<double>();
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string("noise model: '") + key + "' is not finite");
    return x;
}

std::optional<double> strength_opt(const nlohmann::json& j, const char* key, double scale) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    double x = number_or(j, key, 0.0);
    if (x < 0)
        throw std::invalid_argument(std::string("noise model: '") + key + "' must be >= 0");
    return x * scale;
}

double positive(const nlohmann::json& j, const char* key, double fallback) {
    double x = number_or(j, key, fallback);
    if (x <= 0)
        throw std::invalid_argument(std::string("noise model: '") + key + "' must be positive");
    return x;
}

Vec3 position_from(const nlohmann::json& j) {
    if (!j.contains("position_nm"))
        throw std::invalid_argument("noise model: cluster needs 'position_nm'");
    const nlohmann::json& p = j.at("position_nm");
    if (!p.is_array() || p.size() != 3)
        throw std::invalid_argument("noise model: 'position_nm' must be [x, y, z]");
    Vec3 r{p.at(0).get<double>() * K::cm_per_nm, p.at(1).get<double>() * K::cm_per_nm,
           p.at(2).get<double>() * K::cm_per_nm};
    if (norm(r) == 0.0)
        throw std::invalid_argument("noise model: cluster cannot sit on the qubit");
    return r;
}

// E_i E_j of a unit z-oriented dipole at -r, written out in the source
// coordinates r = source minus qubit.
double cluster_trap_weight(const Vec3& r, int i, int j) {
    double r2 = dot(r, r);
    double r10 = r2 * r2 * r2 * r2 * r2;
    double di = (i == 2) ? 1.0 : 0.0;
    double dj = (j == 2) ? 1.0 : 0.0;
    return (9.0 * r.z * r.z * r[i] * r[j] - 3.0 * r.z * r[j] * r2 * di -
            3.0 * r.z * r[i] * r2 * dj + r2 * r2 * di * dj) /
           r10;
}

// <E_i E_j> of a unit dipole at -r averaged over its orientation
double cluster_dipole_weight(const Vec3& r, int i, int j) {
    double r2 = dot(r, r);
    double r8 = r2 * r2 * r2 * r2;
    double dij = (i == j) ? 1.0 : 0.0;
    return (3.0 * r[i] * r[j] + dij * r2) / (3.0 * r8);
}

}  // namespace

bool is_charge_model(const NoiseModel& m) {
    return !std::holds_alternative<EwjnModel>(m) && !std::holds_alternative<HyperfineModel>(m);
}

bool is_calibrated(const NoiseModel& m) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformDipoles>) return v.rho_v.has_value();
            else if constexpr (std::is_same_v<T, UniformTraps>) return v.rho_a.has_value();
            else if constexpr (std::is_same_v<T, ClusterDipole>) return v.p0.has_value();
            else if constexpr (std::is_same_v<T, ClusterTrap>) return v.p0.has_value();
            else return true;
        },
        m);
}

std::string model_type_name(const NoiseModel& m) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformDipoles>) return "UD";
            else if constexpr (std::is_same_v<T, UniformTraps>) return "UT";
            else if constexpr (std::is_same_v<T, ClusterDipole>) return "cluster_dipole";
            else if constexpr (std::is_same_v<T, ClusterTrap>) return "cluster_trap";
            else if constexpr (std::is_same_v<T, EwjnModel>) return "ewjn";
            else return "hyperfine";
        },
        m);
}

NoiseModel noise_model_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("noise model: needs a 'type' field");
    std::string type = j.at("type").get<std::string>();

    if (type == "UD") {
        check_keys(j, {"rho_v_per_cm3", "p0_Cm", "tau_s"});
        UniformDipoles m;
        m.rho_v = strength_opt(j, "rho_v_per_cm3", 1.0);
        m.p0 = positive(j, "p0_Cm", kDefaultP0 / K::statC_cm_per_C_m) * K::statC_cm_per_C_m;
        m.tau = positive(j, "tau_s", kDefaultTau);
        return m;
    }
    if (type == "UT") {
        check_keys(j, {"rho_a_per_cm2", "p0_Cm", "tau_s"});
        UniformTraps m;
        m.rho_a = strength_opt(j, "rho_a_per_cm2", 1.0);
        m.p0 = positive(j, "p0_Cm", kDefaultP0 / K::statC_cm_per_C_m) * K::statC_cm_per_C_m;
        m.tau = positive(j, "tau_s", kDefaultTau);
        return m;
    }
    if (type == "cluster_dipole") {
        check_keys(j, {"position_nm", "p0_Cm", "tau_s"});
        ClusterDipole m;
        m.position = position_from(j);
        m.p0 = strength_opt(j, "p0_Cm", K::statC_cm_per_C_m);
        m.tau = positive(j, "tau_s", kDefaultTau);
        return m;
    }
    if (type == "cluster_trap") {
        check_keys(j, {"position_nm", "p0_Cm", "tau_s"});
        ClusterTrap m;
        m.position = position_from(j);
        if (m.position.z <= 0)
            throw std::invalid_argument(
                "noise model: trap cluster must sit on the gate side (z > 0)");
        m.p0 = strength_opt(j, "p0_Cm", K::statC_cm_per_C_m);
        m.tau = positive(j, "tau_s", kDefaultTau);
        return m;
    }
    if (type == "ewjn") {
        check_keys(j, {});
        return EwjnModel{};
    }
    if (type == "hyperfine") {
        check_keys(j, {"rate_per_s"});
        HyperfineModel m;
        m.rate = number_or(j, "rate_per_s", kDefaultHyperRate);
        if (m.rate < 0) throw std::invalid_argument("noise model: 'rate_per_s' must be >= 0");
        return m;
    }
    throw std::invalid_argument("noise model: unknown type '" + type + "'");
}

nlohmann::json noise_model_to_json(const NoiseModel& m) {
    nlohmann::json j{{"type", model_type_name(m)}};
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformDipoles>) {
                if (v.rho_v) j["rho_v_per_cm3"] = *v.rho_v;
                j["p0_Cm"] = v.p0 / K::statC_cm_per_C_m;
                j["tau_s"] = v.tau;
            } else if constexpr (std::is_same_v<T, UniformTraps>) {
                if (v.rho_a) j["rho_a_per_cm2"] = *v.rho_a;
                j["p0_Cm"] = v.p0 / K::statC_cm_per_C_m;
                j["tau_s"] = v.tau;
            } else if constexpr (std::is_same_v<T, ClusterDipole> ||
                                 std::is_same_v<T, ClusterTrap>) {
                j["position_nm"] = {v.position.x / K::cm_per_nm, v.position.y / K::cm_per_nm,
                                    v.position.z / K::cm_per_nm};
                if (v.p0) j["p0_Cm"] = *v.p0 / K::statC_cm_per_C_m;
                j["tau_s"] = v.tau;
            } else if constexpr (std::is_same_v<T, HyperfineModel>) {
                j["rate_per_s"] = v.rate;
            }
        },
        m);
    return j;
}

std::vector<NoiseModel> noise_models_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("noise models: expected a JSON array");
    std::vector<NoiseModel> out;
    for (const nlohmann::json& e : j) out.push_back(noise_model_from_json(e));
    return out;
}

nlohmann::json noise_models_to_json(const std::vector<NoiseModel>& models) {
    nlohmann::json arr = nlohmann::json::array();
    for (const NoiseModel& m : models) arr.push_back(noise_model_to_json(m));
    return arr;
}

double lorentzian_spectrum(double tau, double omega) {
    double x = omega * tau;
    return 2.0 * tau / (1.0 + x * x);
}

double temporal_factor(double tau, double t) {
    // expm1 keeps the small-t cancellation exact: F -> pi t^2 as t/tau -> 0
    return 2.0 * M_PI * tau * (t + std::expm1(-t / tau) * tau);
}

CorrelationTensor ewjn_electric_tensor(const DeviceParams& dev, double omega) {
    CorrelationTensor t;
    t.kind = FieldKind::electric;
    t.omega = omega;
    double szz = K::hbar * omega * dev.eps_d / (8.0 * M_PI * dev.sigma * dev.d * dev.d * dev.d) *
                 dev.coth_factor(omega);
    t.s[0][0] = 0.5 * szz;
    t.s[1][1] = 0.5 * szz;
    t.s[2][2] = szz;
    return t;
}

CorrelationTensor ewjn_magnetic_tensor(const DeviceParams& dev, double omega) {
    CorrelationTensor t;
    t.kind = FieldKind::magnetic;
    t.omega = omega;
    double szz = M_PI * K::hbar * dev.sigma * omega /
                 (2.0 * K::c_light * K::c_light * dev.d) * dev.coth_factor(omega);
    t.s[0][0] = 0.5 * szz;
    t.s[1][1] = 0.5 * szz;
    t.s[2][2] = szz;
    return t;
}

InPlaneWeights charge_uniform_efield_weights(const UniformDipoles& m, const DeviceParams& dev) {
    double rho = m.rho_v.value_or(1.0);
    double l3 = dev.l * dev.l * dev.l;
    double d3 = dev.d * dev.d * dev.d;
    double s = M_PI * rho * m.p0 * m.p0 / 12.0 * (1.0 / l3 - 1.0 / d3);
    InPlaneWeights w;
    w.s[0][0] = s;
    w.s[1][1] = s;
    return w;
}

InPlaneWeights charge_uniform_efield_weights(const UniformTraps& m, const DeviceParams& dev) {
    double rho = m.rho_a.value_or(1.0);
    double d4 = dev.d * dev.d * dev.d * dev.d;
    double base = rho * m.p0 * m.p0 / (32.0 * d4);
    InPlaneWeights w;
    w.s[0][0] = (9.0 * M_PI + 6.0) * base;
    w.s[1][1] = (9.0 * M_PI - 6.0) * base;
    return w;
}

CorrelationTensor cluster_efield_tensor(const ClusterDipole& m, double omega) {
    CorrelationTensor t;
    t.kind = FieldKind::electric;
    t.omega = omega;
    double p0 = m.p0.value_or(1.0);
    double g = lorentzian_spectrum(m.tau, omega);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t.s[i][j] = p0 * p0 * cluster_dipole_weight(m.position, i, j) * g;
    return t;
}

CorrelationTensor cluster_efield_tensor(const ClusterTrap& m, double omega) {
    CorrelationTensor t;
    t.kind = FieldKind::electric;
    t.omega = omega;
    double p0 = m.p0.value_or(1.0);
    double g = lorentzian_spectrum(m.tau, omega);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t.s[i][j] = p0 * p0 * cluster_trap_weight(m.position, i, j) * g;
    return t;
}

InPlaneWeights in_plane_weights(const NoiseModel& m, const DeviceParams& dev) {
    return std::visit(
        [&dev](const auto& v) -> InPlaneWeights {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformDipoles> || std::is_same_v<T, UniformTraps>) {
                return charge_uniform_efield_weights(v, dev);
            } else if constexpr (std::is_same_v<T, ClusterDipole>) {
                InPlaneWeights w;
                double p0 = v.p0.value_or(1.0);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        w.s[i][j] = p0 * p0 * cluster_dipole_weight(v.position, i, j);
                return w;
            } else if constexpr (std::is_same_v<T, ClusterTrap>) {
                InPlaneWeights w;
                double p0 = v.p0.value_or(1.0);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        w.s[i][j] = p0 * p0 * cluster_trap_weight(v.position, i, j);
                return w;
            } else {
                throw std::invalid_argument("in_plane_weights: not a charge model");
            }
        },
        m);
}

double model_tau(const NoiseModel& m) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EwjnModel> || std::is_same_v<T, HyperfineModel>)
                return 0.0;
            else
                return v.tau;
        },
        m);
}

double hyperfine_rate(const HyperfineModel& m) { return m.rate; }

}  // namespace spinaniso
