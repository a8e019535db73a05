#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <spinaniso/constants.hpp>
#include <spinaniso/device.hpp>

#include "support.hpp"

using namespace spinaniso;
namespace K = spinaniso::constants;

TEST_CASE("device parsing converts lab units to internal ones") {
    DeviceParams dev = testsup::case_device();
    CHECK(dev.d == doctest::Approx(137.0e-7).epsilon(1e-15));
    CHECK(dev.l == doctest::Approx(100.0e-7).epsilon(1e-15));
    CHECK(dev.eps_d == doctest::Approx(13.05).epsilon(1e-15));
    CHECK(dev.sigma == doctest::Approx(2.0e8 * K::sigma_si_to_gaussian).epsilon(1e-15));
    CHECK(dev.m_eff == doctest::Approx(0.19 * K::m_electron).epsilon(1e-15));
    CHECK(dev.omega_orb == doctest::Approx(6.84e11).epsilon(1e-15));
    CHECK(dev.omega_op == doctest::Approx(12.9 * K::rad_s_per_GHz).epsilon(1e-14));
    CHECK(dev.temperature == doctest::Approx(0.150).epsilon(1e-15));
    CHECK(dev.g_factor == 2.0);
    // gradients in G/cm, signs preserved
    CHECK(dev.gradients.g[0][0] == doctest::Approx(-0.20e8).epsilon(1e-15));
    CHECK(dev.gradients.g[1][0] == doctest::Approx(-0.05e8).epsilon(1e-15));
    CHECK(dev.gradients.g[2][0] == doctest::Approx(-0.27e8).epsilon(1e-15));
    CHECK(dev.gradients.g[0][1] == doctest::Approx(-0.03e8).epsilon(1e-15));
    CHECK(dev.gradients.g[1][1] == doctest::Approx(0.18e8).epsilon(1e-15));
    CHECK(dev.gradients.g[2][1] == doctest::Approx(-0.02e8).epsilon(1e-15));
}

TEST_CASE("derived device quantities") {
    DeviceParams dev = testsup::case_device();
    double k = 0.19 * K::m_electron * 6.84e11 * 6.84e11;
    CHECK(dev.spring_constant() == doctest::Approx(k).epsilon(1e-14));
    CHECK(dev.displacement_response() == doctest::Approx(K::q_elem / (2.0 * k)).epsilon(1e-14));
    // frozen values for the case-study device
    CHECK(testsup::rel(dev.gyromagnetic(), 1.758820010772e+07) < 1e-11);
    CHECK(testsup::rel(dev.displacement_response(), 2.965830321886e-06) < 1e-10);
    CHECK(testsup::rel(dev.coth_factor(dev.omega_op), 1.032779732778) < 1e-11);
    // coth limits: large argument -> 1, small argument -> 2kT / hbar omega
    CHECK(dev.coth_factor(1e15) == doctest::Approx(1.0).epsilon(1e-12));
    double w_small = 1e6;
    CHECK(testsup::rel(dev.coth_factor(w_small),
                       2.0 * K::k_boltzmann * 0.150 / (K::hbar * w_small)) < 1e-6);
}

TEST_CASE("skin depth and near-field regime") {
    DeviceParams dev = testsup::case_device();
    double delta = skin_depth(dev.sigma, dev.omega_op);
    CHECK(testsup::rel(delta, 313.33598822e-7) < 1e-9);

    RegimeReport rep = check_near_field_regime(dev);
    CHECK(rep.d == doctest::Approx(dev.d).epsilon(1e-15));
    CHECK(rep.delta == doctest::Approx(delta).epsilon(1e-15));
    CHECK(rep.ratio == doctest::Approx(dev.d / delta).epsilon(1e-14));
    CHECK_FALSE(rep.warn);  // 137 nm against 313 nm is ratio 0.437

    // a hundredfold conductivity shrinks delta tenfold and breaks the regime
    DeviceParams hot = dev;
    hot.sigma *= 100.0;
    CHECK(check_near_field_regime(hot).warn);
}

TEST_CASE("config file loads to the same device") {
    DeviceParams fromfile = load_config(testsup::cases_dir() + "/kawakami2014.json");
    DeviceParams incode = testsup::case_device();
    CHECK(fromfile.d == doctest::Approx(incode.d).epsilon(1e-15));
    CHECK(fromfile.sigma == doctest::Approx(incode.sigma).epsilon(1e-15));
    CHECK(fromfile.omega_op == doctest::Approx(incode.omega_op).epsilon(1e-15));
    CHECK(fromfile.gradients.g[2][0] == doctest::Approx(incode.gradients.g[2][0]).epsilon(1e-15));

    // lab-unit round trip
    nlohmann::json doc = device_to_json(fromfile);
    DeviceParams again = device_from_json(doc);
    CHECK(again.sigma == doctest::Approx(fromfile.sigma).epsilon(1e-14));
    CHECK(again.gradients.g[1][1] == doctest::Approx(fromfile.gradients.g[1][1]).epsilon(1e-14));
    CHECK(doc.at("d_nm").get<double>() == doctest::Approx(137.0).epsilon(1e-14));
}

TEST_CASE("device parsing rejects bad documents") {
    nlohmann::json good = device_to_json(testsup::case_device());

    nlohmann::json missing = good;
    missing.erase("d_nm");
    CHECK_THROWS_AS(device_from_json(missing), std::invalid_argument);

    nlohmann::json negative = good;
    negative["d_nm"] = -5.0;
    CHECK_THROWS_AS(device_from_json(negative), std::invalid_argument);

    nlohmann::json zero_temp = good;
    zero_temp["temperature_mK"] = 0.0;
    CHECK_THROWS_AS(device_from_json(zero_temp), std::invalid_argument);

    nlohmann::json no_grad = good;
    no_grad["gradients_mT_per_nm"].erase("dBz_dy");
    CHECK_THROWS_AS(device_from_json(no_grad), std::invalid_argument);

    CHECK_THROWS_AS(load_config("/nonexistent/file.json"), std::runtime_error);
}
