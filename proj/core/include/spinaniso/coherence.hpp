#ifndef SPINANISO_COHERENCE_HPP_INCLUDED
#define SPINANISO_COHERENCE_HPP_INCLUDED

#include <limits>
#include <optional>
#include <vector>

#include "spinaniso/device.hpp"
#include "spinaniso/geometry.hpp"
#include "spinaniso/noise.hpp"

// Effective magnetic tensors from electric noise via micromagnet
// gradients, T1(theta,phi), Gamma(t;theta,phi), the Tphi root solve, and
// rate combination across sources.

namespace spinaniso {

// Distinguished "no decay" return value. A value, not an exception, so
// map sweeps over degenerate configurations complete.
inline constexpr double no_decay_value = std::numeric_limits<double>::infinity();
bool is_no_decay(double t);

struct EffectiveTensor {
    Mat3 entries = mat3_zero();
    double omega = 0;
};

// <B_i^eff B_j^eff> = sum_{m,n in {x,y}} (q^2 / 4 k_m k_n)
//                     (dB_i/dx_m)(dB_j/dx_n) <E_m E_n>.
// z electric components never contribute (k_z infinite); any z entries of
// the input are ignored.
EffectiveTensor effective_from_electric(const CorrelationTensor& e, const DeviceParams& dev);

// 1/T1 = (q g / 4 m_e c)^2 sum_ij Q1_ij <B_i B_j>(omega_op).
// Zero tensor -> no decay.
double t1_from_tensor(const Mat3& eff_at_omega_op, const FieldDirection& dir,
                      const DeviceParams& dev);

// Relaxation from the gate half-space: direct magnetic tensor plus the
// gradient-converted electric tensor, contracted with Q1. The direct part
// alone gives a (2 + sin^2 theta)/4 shape; the constant_alpha_compat flag
// replaces it with the angle-independent simplification some summaries
// use (full <BzBz> weight at every angle).
double ewjn_t1(const DeviceParams& dev, const FieldDirection& dir,
               std::optional<double> sigma_override = std::nullopt,
               bool constant_alpha_compat = false);

// White-noise dephasing from the half-space:
// rate = (q g / 2 m_e c)^2 (n^T S_eff n) 2 pi kB T / (hbar omega_op coth).
double ewjn_dephasing_rate(const DeviceParams& dev, const FieldDirection& dir,
                           std::optional<double> sigma_override = std::nullopt);

// Dephasing exponent Gamma(t; theta,phi) summed over the charge models in
// the list (EWJN and hyperfine contribute as rates elsewhere, never here).
// Monotone nondecreasing in t; Gamma(0) = 0.
double gamma_exponent(double t, const FieldDirection& dir,
                      const std::vector<NoiseModel>& models, const DeviceParams& dev);

// Solve Gamma(Tphi) = 1 to 1e-12 relative: bracket by doubling from
// tau/100, then bisection. All-zero noise -> no decay.
double dephasing_time(const FieldDirection& dir, const std::vector<NoiseModel>& models,
                      const DeviceParams& dev);

// 1/T2 = 1/Tphi + hyperfine rate (+ 1/2T1 when given; omitted by default
// because T1 >> T2 for every configuration in scope).
double combine_t2(double charge_tphi, double hyper_rate,
                  std::optional<double> t1 = std::nullopt);

// Relaxation from a single charge model: transverse contraction with
// spectral weight g(omega_op).
double charge_t1(const FieldDirection& dir, const NoiseModel& model, const DeviceParams& dev);

}  // namespace spinaniso

#endif
