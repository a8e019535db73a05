#include "spinaniso/anisotropy_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <thread>
#include <variant>

#include "spinaniso/constants.hpp"
#include "spinaniso/export.hpp"

namespace spinaniso {

std::string quantity_name(Quantity q) { return q == Quantity::t1 ? "t1" : "t2"; }

Quantity quantity_from_name(const std::string& s) {
    if (s == "t1") return Quantity::t1;
    if (s == "t2") return Quantity::t2;
    throw std::invalid_argument("unknown quantity \"" + s + "\" (expected \"t1\" or \"t2\")");
}

SweepPointError::SweepPointError(int i_theta, int j_phi, const std::string& what_arg)
    : std::runtime_error("grid point (" + std::to_string(i_theta) + ", " +
                         std::to_string(j_phi) + "): " + what_arg),
      i_theta_(i_theta),
      j_phi_(j_phi) {}

NoiseModel calibrate(const NoiseModel& model, const DeviceParams& dev,
                     const FieldDirection& reference_dir, double target_t2, double hyper_rate,
                     CalibrationRecord* record) {
    if (!is_charge_model(model))
        throw std::invalid_argument("calibrate: " + model_type_name(model) +
                                    " carries no free strength");
    if (target_t2 <= 0) throw std::invalid_argument("calibrate: target T2 must be positive");
    if (hyper_rate < 0) throw std::invalid_argument("calibrate: negative bath rate");

    double budget = 1.0 / target_t2 - hyper_rate;
    if (budget <= 0)
        throw std::runtime_error(
            "calibrate: infeasible target, the bath rate alone reaches or exceeds the "
            "target decay rate");
    double tphi_target = 1.0 / budget;

    // Gamma at fixed t is linear in rho (uniform ensembles) and in p0^2
    // (single clusters), so one unit-strength evaluation fixes the scale.
    NoiseModel unit = model;
    std::string parameter;
    std::visit(
        [&](auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UniformDipoles>) {
                m.rho_v = 1.0;
                parameter = "rho_v";
            } else if constexpr (std::is_same_v<T, UniformTraps>) {
                m.rho_a = 1.0;
                parameter = "rho_a";
            } else if constexpr (std::is_same_v<T, ClusterDipole> ||
                                 std::is_same_v<T, ClusterTrap>) {
                m.p0 = 1.0;
                parameter = "p0";
            }
        },
        unit);

    double unit_exponent = gamma_exponent(tphi_target, reference_dir, {unit}, dev);
    if (unit_exponent <= 0)
        throw std::runtime_error(
            "calibrate: the model produces no dephasing at the reference direction");
    double scale = 1.0 / unit_exponent;

    NoiseModel fitted = model;
    double fitted_lab = 0;
    std::visit(
        [&](auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UniformDipoles>) {
                m.rho_v = scale;
                fitted_lab = scale;
            } else if constexpr (std::is_same_v<T, UniformTraps>) {
                m.rho_a = scale;
                fitted_lab = scale;
            } else if constexpr (std::is_same_v<T, ClusterDipole> ||
                                 std::is_same_v<T, ClusterTrap>) {
                double p0_internal = std::sqrt(scale);
                m.p0 = p0_internal;
                fitted_lab = p0_internal / constants::statC_cm_per_C_m;
            }
        },
        fitted);

    if (record) {
        record->model_type = model_type_name(model);
        record->parameter = parameter;
        record->fitted_value = fitted_lab;
        record->charge_tphi = tphi_target;
        record->hyper_rate = hyper_rate;
        record->target_t2 = target_t2;
        record->reference_theta = reference_dir.theta();
        record->reference_phi = reference_dir.phi();
    }
    return fitted;
}

AnisotropyMap sweep(Quantity quantity, const std::vector<NoiseModel>& models,
                    const DeviceParams& dev, const Resolution& res) {
    if (models.empty()) throw std::invalid_argument("sweep: empty model list");
    if (res.n_theta < 5)
        throw std::invalid_argument("sweep: need at least 5 polar rows");
    if (res.n_phi < 8)
        throw std::invalid_argument("sweep: need at least 8 azimuthal columns");
    for (const NoiseModel& m : models)
        if (is_charge_model(m) && !is_calibrated(m))
            throw std::invalid_argument("sweep: " + model_type_name(m) +
                                        " model has no strength; calibrate it first");

    std::vector<NoiseModel> charge;
    bool have_halfspace = false;
    double hyper = 0;
    for (const NoiseModel& m : models) {
        if (is_charge_model(m))
            charge.push_back(m);
        else if (std::holds_alternative<EwjnModel>(m))
            have_halfspace = true;
        else
            hyper += hyperfine_rate(std::get<HyperfineModel>(m));
    }

    const int nt = res.n_theta;
    const int np = res.n_phi;
    AnisotropyMap map;
    map.quantity = quantity;
    map.theta_grid.resize(nt);
    map.phi_grid.resize(np);
    for (int i = 0; i < nt; ++i) map.theta_grid[i] = M_PI * i / (nt - 1);
    for (int j = 0; j < np; ++j) map.phi_grid[j] = 2.0 * M_PI * j / np;
    map.values.assign(static_cast<std::size_t>(nt) * np, 0.0);

    auto value_at = [&](double th, double ph) {
        FieldDirection dir(th, ph);
        double rate = 0;
        if (quantity == Quantity::t2) {
            rate = hyper;
            if (!charge.empty()) {
                double tphi = dephasing_time(dir, charge, dev);
                if (!is_no_decay(tphi)) rate += 1.0 / tphi;
            }
            if (have_halfspace) rate += ewjn_dephasing_rate(dev, dir);
        } else {
            // population decay: the bath is secular and never contributes
            if (have_halfspace) {
                double t1 = ewjn_t1(dev, dir);
                if (!is_no_decay(t1)) rate += 1.0 / t1;
            }
            for (const NoiseModel& m : charge) {
                double t1 = charge_t1(dir, m, dev);
                if (!is_no_decay(t1)) rate += 1.0 / t1;
            }
        }
        return rate > 0 ? 1.0 / rate : no_decay_value;
    };

    // poles are single physical points: evaluate once, broadcast
    double north = value_at(0.0, 0.0);
    double south = value_at(M_PI, 0.0);
    for (int j = 0; j < np; ++j) {
        map.at(0, j) = north;
        map.at(nt - 1, j) = south;
    }

    unsigned n_workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::exception_ptr> row_error(nt);
    auto run_rows = [&](unsigned w) {
        for (int i = 1 + static_cast<int>(w); i < nt - 1; i += static_cast<int>(n_workers)) {
            for (int j = 0; j < np; ++j) {
                try {
                    map.at(i, j) = value_at(map.theta_grid[i], map.phi_grid[j]);
                } catch (const std::exception& e) {
                    row_error[i] = std::make_exception_ptr(SweepPointError(i, j, e.what()));
                    break;
                }
            }
        }
    };
    if (n_workers == 1 || nt <= 3) {
        run_rows(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(run_rows, w);
        for (std::thread& t : pool) t.join();
    }
    for (int i = 0; i < nt; ++i)
        if (row_error[i]) std::rethrow_exception(row_error[i]);

    map.metadata.device = device_to_json(dev);
    map.metadata.device_hash = device_hash(map.metadata.device);
    map.metadata.models = noise_models_to_json(models);
    double tau = 0;
    bool tau_uniform = true;
    for (const NoiseModel& m : charge) {
        double t = model_tau(m);
        if (tau == 0)
            tau = t;
        else if (t != tau)
            tau_uniform = false;
    }
    map.metadata.tau = tau_uniform ? tau : 0.0;
    return map;
}

// --- critical points ------------------------------------------------------

namespace {

enum class CellKind { regular, plateau, max, min, saddle };

struct CritCell {
    int i;
    int j;  // -1 marks a pole
    CellKind kind;
};

int neighbor_sign(double v, double x, double flat_tol) {
    if (std::isnan(v) || std::isnan(x)) return 0;
    if (x == v) return 0;
    if (std::isinf(v) || std::isinf(x)) return x > v ? 1 : -1;
    double scale = std::max(std::abs(v), std::abs(x));
    if (std::abs(x - v) <= flat_tol * scale) return 0;
    return x > v ? 1 : -1;
}

CellKind classify_ring(double v, const std::vector<double>& ring, double flat_tol) {
    std::vector<int> nz;
    nz.reserve(ring.size());
    for (double x : ring) {
        int s = neighbor_sign(v, x, flat_tol);
        if (s != 0) nz.push_back(s);
    }
    if (nz.empty()) return CellKind::plateau;
    if (std::all_of(nz.begin(), nz.end(), [](int s) { return s < 0; })) return CellKind::max;
    if (std::all_of(nz.begin(), nz.end(), [](int s) { return s > 0; })) return CellKind::min;
    int changes = 0;
    for (std::size_t a = 0; a < nz.size(); ++a)
        if (nz[a] != nz[(a + 1) % nz.size()]) ++changes;
    return changes >= 4 ? CellKind::saddle : CellKind::regular;
}

// square ring of chess radius r around (i, j), clockwise from the top-left
// corner; phi wraps, theta does not (empty when the ring leaves the grid)
std::vector<double> ring_at(const AnisotropyMap& m, int i, int j, int r) {
    int nt = m.n_theta();
    int np = m.n_phi();
    if (i - r < 0 || i + r > nt - 1) return {};
    auto wrap = [np](int j2) { return ((j2 % np) + np) % np; };
    std::vector<double> cells;
    cells.reserve(static_cast<std::size_t>(8) * r);
    for (int dj = -r; dj <= r; ++dj) cells.push_back(m.at(i - r, wrap(j + dj)));
    for (int di = -r + 1; di <= r - 1; ++di) cells.push_back(m.at(i + di, wrap(j + r)));
    for (int dj = r; dj >= -r; --dj) cells.push_back(m.at(i + r, wrap(j + dj)));
    for (int di = r - 1; di >= -r + 1; --di) cells.push_back(m.at(i + di, wrap(j - r)));
    return cells;
}

// group cells whose chess distance (phi periodic; pole rows by row
// distance alone) is at most radius; groups keep first-seen order
std::vector<std::vector<CritCell>> link_cells(const std::vector<CritCell>& cells, int np,
                                              int radius) {
    std::vector<int> parent(cells.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t a = 0; a < cells.size(); ++a)
        for (std::size_t b = a + 1; b < cells.size(); ++b) {
            int di = std::abs(cells[a].i - cells[b].i);
            bool near;
            if (cells[a].j < 0 || cells[b].j < 0) {
                near = di <= radius;
            } else {
                int dj = std::abs(cells[a].j - cells[b].j);
                dj = std::min(dj, np - dj);
                near = std::max(di, dj) <= radius;
            }
            if (near) {
                int ra = find(static_cast<int>(a));
                int rb = find(static_cast<int>(b));
                if (ra != rb) parent[ra] = rb;
            }
        }
    std::vector<std::vector<CritCell>> groups;
    std::vector<int> slot(cells.size(), -1);
    for (std::size_t a = 0; a < cells.size(); ++a) {
        int r = find(static_cast<int>(a));
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[slot[r]].push_back(cells[a]);
    }
    return groups;
}

constexpr int chain_cells = 8;

}  // namespace

CriticalPointCensus census(const AnisotropyMap& map, double flat_tolerance) {
    const int nt = map.n_theta();
    const int np = map.n_phi();
    CriticalPointCensus out;
    if (nt < 3 || np < 1) {
        out.degenerate = true;
        return out;
    }
    const int r_max = std::max(2, static_cast<int>(std::ceil((nt - 1) / 45.0)));

    std::vector<CritCell> crit;
    for (int i = 1; i < nt - 1; ++i)
        for (int j = 0; j < np; ++j) {
            double v = map.at(i, j);
            CellKind k = std::isfinite(v) ? classify_ring(v, ring_at(map, i, j, 1), flat_tolerance)
                                          : CellKind::plateau;
            if (k == CellKind::plateau)
                out.flagged_cells.emplace_back(i, j);
            else if (k != CellKind::regular)
                crit.push_back({i, j, k});
        }
    // each pole is one point; its ring is the whole adjacent row, so only
    // extrema are meaningful there
    for (auto [i, ri] : {std::pair<int, int>{0, 1}, std::pair<int, int>{nt - 1, nt - 2}}) {
        double v = map.at(i, 0);
        std::vector<double> row(np);
        for (int j = 0; j < np; ++j) row[j] = map.at(ri, j);
        CellKind k =
            std::isfinite(v) ? classify_ring(v, row, flat_tolerance) : CellKind::plateau;
        if (k == CellKind::plateau)
            out.flagged_cells.emplace_back(i, -1);
        else if (k == CellKind::max || k == CellKind::min)
            crit.push_back({i, -1, k});
    }
    out.degenerate = !out.flagged_cells.empty();

    auto cell_value = [&](const CritCell& c) { return map.at(c.i, c.j < 0 ? 0 : c.j); };

    for (const std::vector<CritCell>& group : link_cells(crit, np, 2)) {
        if (static_cast<int>(group.size()) >= chain_cells) {
            // an extended chain of critical cells is a ridge or trough, not
            // a point feature
            out.degenerate = true;
            for (const CritCell& c : group) out.flagged_cells.emplace_back(c.i, c.j);
            continue;
        }
        // discard sub-cell artifacts: a genuine critical point keeps its
        // character on wider rings too
        std::vector<CritCell> kept;
        for (const CritCell& c : group) {
            bool ok = true;
            if (c.j >= 0) {
                for (int r = 2; r <= r_max; ++r) {
                    std::vector<double> ring = ring_at(map, c.i, c.j, r);
                    if (ring.empty()) break;
                    if (classify_ring(map.at(c.i, c.j), ring, flat_tolerance) != c.kind) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) kept.push_back(c);
        }
        // adjacent survivors straddle one critical point of the underlying
        // surface; count each connected patch once
        for (const std::vector<CritCell>& patch : link_cells(kept, np, 1)) {
            bool uniform = std::all_of(patch.begin(), patch.end(),
                                       [&](const CritCell& c) { return c.kind == patch[0].kind; });
            if (!uniform) {
                out.degenerate = true;
                for (const CritCell& c : patch) out.flagged_cells.emplace_back(c.i, c.j);
                continue;
            }
            const CritCell* rep = &patch[0];
            if (patch[0].kind == CellKind::max) {
                for (const CritCell& c : patch)
                    if (cell_value(c) > cell_value(*rep)) rep = &c;
                ++out.n_max;
                out.maxima_cells.emplace_back(rep->i, rep->j);
            } else if (patch[0].kind == CellKind::min) {
                for (const CritCell& c : patch)
                    if (cell_value(c) < cell_value(*rep)) rep = &c;
                ++out.n_min;
                out.minima_cells.emplace_back(rep->i, rep->j);
            } else {
                ++out.n_saddle;
                out.saddle_cells.emplace_back(rep->i, rep->j);
            }
        }
    }
    return out;
}

bool euler_check(const CriticalPointCensus& c) {
    return c.degenerate || c.n_max + c.n_min == c.n_saddle + 2;
}

double extremal_ratio(const AnisotropyMap& map) {
    double lo = 0, hi = 0;
    bool any = false;
    int skipped = 0;
    for (double v : map.values) {
        if (!std::isfinite(v)) {
            ++skipped;
            continue;
        }
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (skipped > 0)
        std::fprintf(stderr,
                     "warning: extremal ratio skipped %d non-decaying grid point%s\n", skipped,
                     skipped == 1 ? "" : "s");
    if (!any || lo <= 0) return std::numeric_limits<double>::quiet_NaN();
    return hi / lo;
}

std::vector<std::pair<double, double>> argmin_locations(const AnisotropyMap& map) {
    std::vector<std::pair<double, double>> out;
    for (auto [i, j] : census(map).minima_cells)
        out.emplace_back(map.theta_grid[i], j < 0 ? 0.0 : map.phi_grid[j]);
    return out;
}

}  // namespace spinaniso
