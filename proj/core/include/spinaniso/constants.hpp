#ifndef SPINANISO_CONSTANTS_HPP_INCLUDED
#define SPINANISO_CONSTANTS_HPP_INCLUDED

// Physical constants and unit conversions. Internal unit system is
// Gaussian-CGS throughout the library: lengths in cm, fields in G,
// charge in statC, conductivity in 1/s, energies in erg.

namespace spinaniso::constants {

inline constexpr double c_light = 2.99792458e10;        // cm/s
inline constexpr double q_elem = 4.803204712570e-10;    // statC (1.602176634e-19 C)
inline constexpr double m_electron = 9.1093837015e-28;  // g (bare mass, magneton prefactors)
inline constexpr double hbar = 1.054571817e-27;         // erg s
inline constexpr double k_boltzmann = 1.380649e-16;     // erg/K

// sigma[1/s] = sigma[S/m] / (4 pi eps0)
inline constexpr double sigma_si_to_gaussian = 8.9875517873681764e9;
inline constexpr double cm_per_nm = 1.0e-7;
inline constexpr double gauss_cm_per_mT_nm = 1.0e8;     // 1 mT/nm = 1e8 G/cm
inline constexpr double statC_cm_per_C_m = 2.99792458e11;
inline constexpr double rad_s_per_GHz = 6.283185307179586476925287e9;  // 2 pi * 1e9
inline constexpr double kelvin_per_mK = 1.0e-3;

}  // namespace spinaniso::constants

#endif
