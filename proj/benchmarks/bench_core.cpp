#include <benchmark/benchmark.h>

#include <cmath>

#include <spinaniso/anisotropy_map.hpp>

using namespace spinaniso;

namespace {

const DeviceParams& bench_device() {
    static DeviceParams dev = device_from_json(nlohmann::json::parse(R"json({
      "d_nm": 137.0, "l_nm": 100.0, "eps_d": 13.05, "sigma_S_per_m": 2.0e8,
      "m_eff_me": 0.19, "omega_orb_rad_s": 6.84e11, "f_op_GHz": 12.9,
      "temperature_mK": 150.0, "g_factor": 2.0,
      "gradients_mT_per_nm": {
        "dBx_dx": -0.20, "dBy_dx": -0.05, "dBz_dx": -0.27,
        "dBx_dy": -0.03, "dBy_dy": 0.18, "dBz_dy": -0.02
      }
    })json"));
    return dev;
}

NoiseModel calibrated_ud(double tau) {
    nlohmann::json j{{"type", "UD"}, {"tau_s", tau}};
    return calibrate(noise_model_from_json(j), bench_device(), FieldDirection(M_PI / 2.0, 0.0),
                     840e-9, 1.0 / 2.01e-6);
}

void BM_TemporalFactor(benchmark::State& state) {
    double t = 1e-6 * std::pow(10.0, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(temporal_factor(1e-6, t));
}
BENCHMARK(BM_TemporalFactor)->Arg(-2)->Arg(0)->Arg(2);

void BM_DephasingSolve(benchmark::State& state) {
    const DeviceParams& dev = bench_device();
    std::vector<NoiseModel> models{calibrated_ud(1e-6)};
    FieldDirection dir(1.1, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(dephasing_time(dir, models, dev));
}
BENCHMARK(BM_DephasingSolve);

void BM_RelaxationPoint(benchmark::State& state) {
    const DeviceParams& dev = bench_device();
    FieldDirection dir(1.1, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(ewjn_t1(dev, dir));
}
BENCHMARK(BM_RelaxationPoint);

void BM_SweepT2(benchmark::State& state) {
    const DeviceParams& dev = bench_device();
    int n = static_cast<int>(state.range(0));
    std::vector<NoiseModel> models{calibrated_ud(1e-6),
                                   noise_model_from_json({{"type", "hyperfine"}})};
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep(Quantity::t2, models, dev, Resolution{n, 2 * n}));
    state.SetItemsProcessed(state.iterations() * n * 2 * n);
}
BENCHMARK(BM_SweepT2)->Arg(11)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_Census(benchmark::State& state) {
    AnisotropyMap m;
    int nt = 91, np = 180;
    for (int i = 0; i < nt; ++i) m.theta_grid.push_back(M_PI * i / (nt - 1));
    for (int j = 0; j < np; ++j) m.phi_grid.push_back(2.0 * M_PI * j / np);
    m.values.resize(static_cast<std::size_t>(nt) * np);
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < np; ++j) {
            double x = std::sin(m.theta_grid[i]) * std::cos(m.phi_grid[j]);
            double z = std::cos(m.theta_grid[i]);
            m.at(i, j) = 2.0 + x * x + 3.0 * z * z;
        }
    for (auto _ : state) benchmark::DoNotOptimize(census(m));
    state.SetItemsProcessed(state.iterations() * nt * np);
}
BENCHMARK(BM_Census)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
