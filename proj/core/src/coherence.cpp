#include "spinaniso/coherence.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "spinaniso/constants.hpp"

namespace spinaniso {

namespace K = constants;

bool is_no_decay(double t) { return std::isinf(t) && t > 0; }

EffectiveTensor effective_from_electric(const CorrelationTensor& e, const DeviceParams& dev) {
    double conv = dev.displacement_response();
    EffectiveTensor out;
    out.omega = e.omega;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n)
                    s += dev.gradients.g[i][m] * dev.gradients.g[j][n] * e.s[m][n];
            out.entries[i][j] = conv * conv * s;
        }
    return out;
}

double t1_from_tensor(const Mat3& eff_at_omega_op, const FieldDirection& dir,
                      const DeviceParams& dev) {
    double half_gamma = dev.gyromagnetic() / 2.0;
    Vec3 n = dir.unit_vector();
    double rate = half_gamma * half_gamma * (trace(eff_at_omega_op) - contract(eff_at_omega_op, n));
    if (rate <= 0) return no_decay_value;
    return 1.0 / rate;
}

namespace {

Mat3 ewjn_combined_tensor(const DeviceParams& dev) {
    CorrelationTensor e = ewjn_electric_tensor(dev, dev.omega_op);
    CorrelationTensor b = ewjn_magnetic_tensor(dev, dev.omega_op);
    return mat3_add(b.s, effective_from_electric(e, dev).entries);
}

// Per-model longitudinal weights for the dephasing exponent: Gamma(t) =
// gamma^2 conv^2 sum_k w2_k F(tau_k, t).
struct DephasingTerms {
    std::vector<std::pair<double, double>> w2_tau;
    double prefactor = 0;
    double total_weight = 0;
};

DephasingTerms dephasing_terms(const FieldDirection& dir, const std::vector<NoiseModel>& models,
                               const DeviceParams& dev) {
    DephasingTerms terms;
    Vec3 n = dir.unit_vector();
    double a[2];
    for (int m = 0; m < 2; ++m)
        a[m] = n.x * dev.gradients.g[0][m] + n.y * dev.gradients.g[1][m] +
               n.z * dev.gradients.g[2][m];
    for (const NoiseModel& model : models) {
        if (!is_charge_model(model))
            throw std::invalid_argument(
                "dephasing exponent: " + model_type_name(model) +
                " contributes a plain rate, not a temporal exponent; remove it from the list");
        InPlaneWeights s = in_plane_weights(model, dev);
        double w2 = 0;
        for (int m = 0; m < 2; ++m)
            for (int p = 0; p < 2; ++p) w2 += s.s[m][p] * a[m] * a[p];
        terms.w2_tau.emplace_back(w2, model_tau(model));
        terms.total_weight += w2;
    }
    double gam = dev.gyromagnetic();
    terms.prefactor = gam * gam * dev.displacement_response() * dev.displacement_response();
    return terms;
}

double exponent_at(const DephasingTerms& terms, double t) {
    double g = 0;
    for (const auto& [w2, tau] : terms.w2_tau) g += w2 * temporal_factor(tau, t);
    return terms.prefactor * g;
}

}  // namespace

double ewjn_t1(const DeviceParams& dev, const FieldDirection& dir,
               std::optional<double> sigma_override, bool constant_alpha_compat) {
    DeviceParams d = dev;
    if (sigma_override) d.sigma = *sigma_override;
    if (!constant_alpha_compat) return t1_from_tensor(ewjn_combined_tensor(d), dir, d);

    // compat: the electric part stays exact, the direct magnetic
    // contraction is replaced by its vertical-field constant
    CorrelationTensor e = ewjn_electric_tensor(d, d.omega_op);
    Mat3 me = effective_from_electric(e, d).entries;
    double szz = ewjn_magnetic_tensor(d, d.omega_op).s[2][2];
    Vec3 n = dir.unit_vector();
    double half_gamma = d.gyromagnetic() / 2.0;
    double rate =
        half_gamma * half_gamma * (trace(me) - contract(me, n) + 2.0 * szz);
    if (rate <= 0) return no_decay_value;
    return 1.0 / rate;
}

double ewjn_dephasing_rate(const DeviceParams& dev, const FieldDirection& dir,
                           std::optional<double> sigma_override) {
    DeviceParams d = dev;
    if (sigma_override) d.sigma = *sigma_override;
    Mat3 m = ewjn_combined_tensor(d);
    Vec3 n = dir.unit_vector();
    double gam = d.gyromagnetic();
    // white-noise extrapolation of the tensor from the operating frequency
    // down to zero: the thermal coth cancels, leaving a plain 2 kB T / hbar
    double s0 = 2.0 * K::k_boltzmann * d.temperature *
                std::tanh(K::hbar * d.omega_op / (2.0 * K::k_boltzmann * d.temperature)) /
                (K::hbar * d.omega_op);
    return M_PI * gam * gam * contract(m, n) * s0;
}

double gamma_exponent(double t, const FieldDirection& dir,
                      const std::vector<NoiseModel>& models, const DeviceParams& dev) {
    if (t < 0) throw std::invalid_argument("dephasing exponent: negative time");
    return exponent_at(dephasing_terms(dir, models, dev), t);
}

double dephasing_time(const FieldDirection& dir, const std::vector<NoiseModel>& models,
                      const DeviceParams& dev) {
    DephasingTerms terms = dephasing_terms(dir, models, dev);
    if (terms.total_weight <= 0 || terms.prefactor <= 0) return no_decay_value;

    double tau_min = terms.w2_tau.front().second;
    for (const auto& [w2, tau] : terms.w2_tau) tau_min = std::min(tau_min, tau);

    double lo = tau_min / 100.0;
    for (int k = 0; k < 4000 && exponent_at(terms, lo) >= 1.0; ++k) lo /= 2.0;

    double hi = lo;
    int doublings = 0;
    while (exponent_at(terms, hi) < 1.0) {
        hi *= 2.0;
        if (++doublings > 200)
            throw std::runtime_error("dephasing solver: could not bracket the unit exponent");
    }
    // geometric bisection: Gamma is monotone, the scale is unknown a priori
    for (int k = 0; k < 200 && (hi - lo) > 1e-12 * lo; ++k) {
        double mid = std::sqrt(lo * hi);
        if (exponent_at(terms, mid) < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double combine_t2(double charge_tphi, double hyper_rate, std::optional<double> t1) {
    double rate = hyper_rate;
    if (!is_no_decay(charge_tphi)) rate += 1.0 / charge_tphi;
    if (t1 && !is_no_decay(*t1)) rate += 0.5 / *t1;
    if (rate <= 0) return no_decay_value;
    return 1.0 / rate;
}

double charge_t1(const FieldDirection& dir, const NoiseModel& model, const DeviceParams& dev) {
    if (!is_charge_model(model))
        throw std::invalid_argument("charge relaxation: " + model_type_name(model) +
                                    " is not a charge model");
    Vec3 n = dir.unit_vector();
    double a[2];
    for (int m = 0; m < 2; ++m)
        a[m] = n.x * dev.gradients.g[0][m] + n.y * dev.gradients.g[1][m] +
               n.z * dev.gradients.g[2][m];
    InPlaneWeights s = in_plane_weights(model, dev);
    double w1 = 0;
    for (int m = 0; m < 2; ++m)
        for (int p = 0; p < 2; ++p) {
            double gg = 0;
            for (int i = 0; i < 3; ++i) gg += dev.gradients.g[i][m] * dev.gradients.g[i][p];
            w1 += s.s[m][p] * (gg - a[m] * a[p]);
        }
    double half_gamma = dev.gyromagnetic() / 2.0;
    double conv = dev.displacement_response();
    double rate = half_gamma * half_gamma * conv * conv * w1 *
                  lorentzian_spectrum(model_tau(model), dev.omega_op);
    if (rate <= 0) return no_decay_value;
    return 1.0 / rate;
}

}  // namespace spinaniso
