#ifndef SPINANISO_ANISOTROPY_MAP_HPP_INCLUDED
#define SPINANISO_ANISOTROPY_MAP_HPP_INCLUDED

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spinaniso/coherence.hpp"
#include "spinaniso/device.hpp"
#include "spinaniso/noise.hpp"

// (theta,phi) grid sweeps, calibration of noise strengths against a
// reference measurement, and map topology: critical-point census,
// Euler-Morse check, extremal ratios.

namespace spinaniso {

enum class Quantity { t1, t2 };

std::string quantity_name(Quantity q);
Quantity quantity_from_name(const std::string& s);

struct Resolution {
    int n_theta = 181;  // inclusive [0, pi]
    int n_phi = 360;    // [0, 2pi), periodic
};

struct CalibrationRecord {
    std::string model_type;
    std::string parameter;     // "rho_v" | "rho_a" | "p0"
    double fitted_value = 0;   // in the model's lab-facing unit (cm^-3, cm^-2, C m)
    double charge_tphi = 0;    // s, charge-only dephasing target
    double hyper_rate = 0;     // s^-1
    double target_t2 = 0;      // s
    double reference_theta = 0;
    double reference_phi = 0;
};

struct MapMetadata {
    std::uint64_t device_hash = 0;
    nlohmann::json device;            // lab-unit device document
    nlohmann::json models;            // model list as configured
    double tau = 0;                   // s, 0 when no charge model present
    std::vector<CalibrationRecord> calibrations;
};

struct AnisotropyMap {
    std::vector<double> theta_grid;   // radians, uniform inclusive [0, pi]
    std::vector<double> phi_grid;     // radians, uniform [0, 2pi)
    std::vector<double> values;       // theta-major, values[i*n_phi + j], seconds
    Quantity quantity = Quantity::t2;
    MapMetadata metadata;

    int n_theta() const { return static_cast<int>(theta_grid.size()); }
    int n_phi() const { return static_cast<int>(phi_grid.size()); }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * phi_grid.size() + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * phi_grid.size() + j]; }
};

// Solver failure at one grid point, annotated with the point so a failed
// sweep names where it went wrong.
class SweepPointError : public std::runtime_error {
public:
    SweepPointError(int i_theta, int j_phi, const std::string& what_arg);
    int i_theta() const { return i_theta_; }
    int j_phi() const { return j_phi_; }

private:
    int i_theta_;
    int j_phi_;
};

// Scale the model's free strength (rho_v, rho_a, or p0^2) so that the
// combined T2 at the reference direction equals target_t2. Gamma is
// linear in the strength, so the fit is a single unit-strength solve.
// Hyperfine rate at or above the target rate is infeasible.
NoiseModel calibrate(const NoiseModel& model, const DeviceParams& dev,
                     const FieldDirection& reference_dir, double target_t2,
                     double hyper_rate, CalibrationRecord* record = nullptr);

// Evaluate the grid. T2 sweeps solve the dephasing time per direction and
// add hyperfine; T1 sweeps contract at omega_op. Pole rows are computed
// once and broadcast. Rows are evaluated in parallel.
AnisotropyMap sweep(Quantity quantity, const std::vector<NoiseModel>& models,
                    const DeviceParams& dev, const Resolution& res);

struct CriticalPointCensus {
    int n_max = 0;
    int n_min = 0;
    int n_saddle = 0;
    bool degenerate = false;
    // (i_theta, j_phi); j = -1 marks a pole row. Cells that forced the
    // degenerate flag (plateaus, ridges, unresolved clusters).
    std::vector<std::pair<int, int>> flagged_cells;
    std::vector<std::pair<int, int>> maxima_cells;
    std::vector<std::pair<int, int>> minima_cells;
    std::vector<std::pair<int, int>> saddle_cells;
};

// Eight-neighbor cyclic sign-change classification with plateau handling
// (differences within flat_tolerance relative count as ties), pole rows
// as single points against the full adjacent ring, connected-component
// deduplication of straddled critical points, a fixed-angular-extent
// verification ring that discards sub-cell discretization artifacts, and
// ridge detection via critical-cell chains. Invariant under uniform
// positive rescaling of the values.
CriticalPointCensus census(const AnisotropyMap& map, double flat_tolerance = 1e-9);

// True iff N_max + N_min = N_s + 2 or the degenerate flag is set (the
// relation is not applicable to degenerate maps).
bool euler_check(const CriticalPointCensus& c);

// max/min over finite entries; "no decay" entries excluded with a stderr
// warning.
double extremal_ratio(const AnisotropyMap& map);

// (theta, phi) of every census minimum.
std::vector<std::pair<double, double>> argmin_locations(const AnisotropyMap& map);

}  // namespace spinaniso

#endif
