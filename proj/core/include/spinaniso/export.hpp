#ifndef SPINANISO_EXPORT_HPP_INCLUDED
#define SPINANISO_EXPORT_HPP_INCLUDED

#include <cstdint>
#include <string>

#include <json.hpp>

#include "spinaniso/anisotropy_map.hpp"

// Map serialization: CSV (theta-major rows, full precision), JSON
// (grids + values + run metadata), and 8-bit binary PGM previews.
// Outputs are bit-reproducible for identical inputs.

namespace spinaniso {

// FNV-1a over the canonical device JSON text.
std::uint64_t device_hash(const nlohmann::json& device_doc);

// Header "theta_rad,phi_rad,value_s", one row per grid point, theta-major,
// %.17g. "No decay" entries serialize as inf.
void write_csv(const AnisotropyMap& map, const std::string& path);

// Full document: quantity, grids, theta-major value rows, metadata
// (device hash + document, models, tau, calibration records), census.
void write_json(const AnisotropyMap& map, const CriticalPointCensus& census,
                const std::string& path);

// P5 grayscale, linear min -> max over finite values, n_phi x n_theta.
void write_ppm(const AnisotropyMap& map, const std::string& path);

// Re-load a map written by write_json (for the critical-points command).
AnisotropyMap read_map_json(const std::string& path);

// Re-load from CSV; grids are reconstructed from the coordinate columns.
AnisotropyMap read_map_csv(const std::string& path);

}  // namespace spinaniso

#endif
