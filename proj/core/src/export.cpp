#include "spinaniso/export.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace spinaniso {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw std::runtime_error("cannot write " + path);
    return out;
}

std::string format_value(double v) {
    if (std::isinf(v) && v > 0) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json record_to_json(const CalibrationRecord& r) {
    return {{"model_type", r.model_type},
            {"parameter", r.parameter},
            {"fitted_value", r.fitted_value},
            {"charge_tphi_s", r.charge_tphi},
            {"hyper_rate_per_s", r.hyper_rate},
            {"target_t2_s", r.target_t2},
            {"reference_theta_rad", r.reference_theta},
            {"reference_phi_rad", r.reference_phi}};
}

CalibrationRecord record_from_json(const nlohmann::json& j) {
    CalibrationRecord r;
    r.model_type = j.at("model_type").get<std::string>();
    r.parameter = j.at("parameter").get<std::string>();
    r.fitted_value = j.at("fitted_value").get<double>();
    r.charge_tphi = j.at("charge_tphi_s").get<double>();
    r.hyper_rate = j.at("hyper_rate_per_s").get<double>();
    r.target_t2 = j.at("target_t2_s").get<double>();
    r.reference_theta = j.at("reference_theta_rad").get<double>();
    r.reference_phi = j.at("reference_phi_rad").get<double>();
    return r;
}

}  // namespace

std::uint64_t device_hash(const nlohmann::json& device_doc) {
    std::string text = device_doc.dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char byte : text) {
        h ^= byte;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_csv(const AnisotropyMap& map, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "theta_rad,phi_rad,value_s\n";
    for (int i = 0; i < map.n_theta(); ++i)
        for (int j = 0; j < map.n_phi(); ++j)
            out << format_value(map.theta_grid[i]) << ',' << format_value(map.phi_grid[j]) << ','
                << format_value(map.at(i, j)) << '\n';
    if (!out.good()) throw std::runtime_error("short write to " + path);
}

void write_json(const AnisotropyMap& map, const CriticalPointCensus& census,
                const std::string& path) {
    nlohmann::json values = nlohmann::json::array();
    for (int i = 0; i < map.n_theta(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < map.n_phi(); ++j) {
            double v = map.at(i, j);
            if (std::isfinite(v))
                row.push_back(v);
            else
                row.push_back(nullptr);
        }
        values.push_back(std::move(row));
    }
    nlohmann::json cals = nlohmann::json::array();
    for (const CalibrationRecord& r : map.metadata.calibrations) cals.push_back(record_to_json(r));
    nlohmann::json doc{
        {"quantity", quantity_name(map.quantity)},
        {"theta_rad", map.theta_grid},
        {"phi_rad", map.phi_grid},
        {"values_s", std::move(values)},
        {"metadata",
         {{"device_hash", map.metadata.device_hash},
          {"device", map.metadata.device},
          {"models", map.metadata.models},
          {"tau_s", map.metadata.tau},
          {"calibrations", std::move(cals)}}},
        {"census",
         {{"n_max", census.n_max},
          {"n_min", census.n_min},
          {"n_saddle", census.n_saddle},
          {"degenerate", census.degenerate},
          {"euler_ok", euler_check(census)}}}};
    std::ofstream out = open_out(path);
    out << doc.dump(2) << '\n';
    if (!out.good()) throw std::runtime_error("short write to " + path);
}

void write_ppm(const AnisotropyMap& map, const std::string& path) {
    double lo = 0, hi = 0;
    bool any = false;
    for (double v : map.values) {
        if (!std::isfinite(v)) continue;
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::ofstream out = open_out(path);
    out << "P5\n" << map.n_phi() << ' ' << map.n_theta() << "\n255\n";
    for (double v : map.values) {
        unsigned char px;
        if (!std::isfinite(v))
            px = 255;
        else if (hi > lo)
            px = static_cast<unsigned char>(std::lround(255.0 * (v - lo) / (hi - lo)));
        else
            px = 0;
        out.put(static_cast<char>(px));
    }
    if (!out.good()) throw std::runtime_error("short write to " + path);
}

AnisotropyMap read_map_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": not a map document (" + e.what() + ")");
    }
    try {
        AnisotropyMap m;
        m.quantity = quantity_from_name(doc.at("quantity").get<std::string>());
        m.theta_grid = doc.at("theta_rad").get<std::vector<double>>();
        m.phi_grid = doc.at("phi_rad").get<std::vector<double>>();
        const nlohmann::json& values = doc.at("values_s");
        m.values.reserve(m.theta_grid.size() * m.phi_grid.size());
        for (const nlohmann::json& row : values) {
            if (row.size() != m.phi_grid.size())
                throw std::runtime_error("ragged value rows");
            for (const nlohmann::json& v : row)
                m.values.push_back(v.is_null() ? no_decay_value : v.get<double>());
        }
        if (m.values.size() != m.theta_grid.size() * m.phi_grid.size())
            throw std::runtime_error("value grid does not match the coordinate grids");
        const nlohmann::json& meta = doc.at("metadata");
        m.metadata.device_hash = meta.at("device_hash").get<std::uint64_t>();
        m.metadata.device = meta.at("device");
        m.metadata.models = meta.at("models");
        m.metadata.tau = meta.at("tau_s").get<double>();
        for (const nlohmann::json& r : meta.at("calibrations"))
            m.metadata.calibrations.push_back(record_from_json(r));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": not a map document (" + e.what() + ")");
    }
}

AnisotropyMap read_map_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("theta_rad,phi_rad,value_s", 0) != 0)
        throw std::runtime_error(path + ": missing map CSV header");
    std::vector<double> th, ph, vals;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        double cols[3];
        for (int c = 0; c < 3; ++c) {
            cols[c] = std::strtod(p, &end);
            if (end == p)
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad row");
            p = end;
            if (c < 2) {
                if (*p != ',')
                    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad row");
                ++p;
            }
        }
        th.push_back(cols[0]);
        ph.push_back(cols[1]);
        vals.push_back(cols[2]);
    }
    if (vals.empty()) throw std::runtime_error(path + ": no data rows");

    // theta-major layout: the first theta block enumerates the phi grid
    std::size_t n_phi = 0;
    while (n_phi < th.size() && th[n_phi] == th[0]) ++n_phi;
    if (n_phi == 0 || vals.size() % n_phi != 0)
        throw std::runtime_error(path + ": rows do not form a theta-major grid");
    std::size_t n_theta = vals.size() / n_phi;

    AnisotropyMap m;
    for (std::size_t i = 0; i < n_theta; ++i) m.theta_grid.push_back(th[i * n_phi]);
    for (std::size_t j = 0; j < n_phi; ++j) m.phi_grid.push_back(ph[j]);
    m.values = std::move(vals);
    return m;
}

}  // namespace spinaniso
