#pragma once

// Physical constants and the conversion layer between SI-ish inputs
// (micrometres, kelvin, millipascal) and the hbar = c = 1 quantities used by
// the Lifshitz sum.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace casimir {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// CODATA 2018 values. Everything that restores units goes through here.
struct PhysicalConstants {
    static constexpr double hbar_c_eV_nm = 197.3269804;
    static constexpr double k_B_eV_per_K = 8.617333262e-5;
    static constexpr double hbar_eV_s = 6.582119569e-16;
    static constexpr double elementary_charge_C = 1.602176634e-19;

    /// Angular frequency in rad/s carried by one eV of hbar*omega.
    static constexpr double rad_per_s_per_eV = 1.0 / hbar_eV_s;
    static constexpr double joule_per_eV = elementary_charge_C;
};

inline constexpr double eV_to_rad_s(double energy_eV) {
    return energy_eV * PhysicalConstants::rad_per_s_per_eV;
}

inline constexpr double rad_s_to_eV(double omega_rad_s) {
    return omega_rad_s * PhysicalConstants::hbar_eV_s;
}

/// Gap width and temperature of one parallel-plate configuration.
///
/// T = 0 is not representable; the low-temperature reference is T = 1 K.
class Geometry {
public:
    Geometry(double gap_um, double temperature_K) : gap_um_(gap_um), temperature_K_(temperature_K) {
        if (!(gap_um > 0.0) || !std::isfinite(gap_um)) {
            throw DomainError("gap width must be positive, got " + std::to_string(gap_um) + " um");
        }
        if (!(temperature_K > 0.0) || !std::isfinite(temperature_K)) {
            throw DomainError("temperature must be positive, got " + std::to_string(temperature_K) + " K");
        }
    }

    [[nodiscard]] double gap_um() const noexcept { return gap_um_; }
    [[nodiscard]] double gap_nm() const noexcept { return gap_um_ * 1e3; }
    [[nodiscard]] double gap_m() const noexcept { return gap_um_ * 1e-6; }
    [[nodiscard]] double temperature_K() const noexcept { return temperature_K_; }

    /// k_B T in eV.
    [[nodiscard]] double thermal_energy_eV() const noexcept {
        return PhysicalConstants::k_B_eV_per_K * temperature_K_;
    }

    /// beta = 1/(k_B T), in 1/eV.
    [[nodiscard]] double beta_per_eV() const noexcept { return 1.0 / thermal_energy_eV(); }

    [[nodiscard]] Geometry with_gap(double gap_um) const { return {gap_um, temperature_K_}; }
    [[nodiscard]] Geometry with_temperature(double temperature_K) const { return {gap_um_, temperature_K}; }

private:
    double gap_um_;
    double temperature_K_;
};

/// gamma = 2 pi a k_B T / (hbar c): spacing of the Matsubara lower limits in y.
struct ReducedTemperature {
    double value;
};

/// zeta_m = 2 pi m k_B T, in eV. m = 0 gives exactly 0.
inline double matsubara_frequency(unsigned long m, double temperature_K) {
    if (m == 0) {
        return 0.0;
    }
    return static_cast<double>(m) * (2.0 * std::numbers::pi * PhysicalConstants::k_B_eV_per_K * temperature_K);
}

inline double matsubara_frequency_rad_s(unsigned long m, double temperature_K) {
    return eV_to_rad_s(matsubara_frequency(m, temperature_K));
}

inline ReducedTemperature reduced_temperature(const Geometry& geom) {
    return {geom.gap_nm() * matsubara_frequency(1, geom.temperature_K()) / PhysicalConstants::hbar_c_eV_nm};
}

/// k_B T / (pi a^3) in mPa: the prefactor of the dimensionless Matsubara sum.
inline double pressure_prefactor_mPa(const Geometry& geom) {
    const double kT_J = geom.thermal_energy_eV() * PhysicalConstants::joule_per_eV;
    const double a = geom.gap_m();
    return kT_J / (std::numbers::pi * a * a * a) * 1e3;
}

/// Maps a dimensionless coefficient c to the SI pressure (k_B T/(pi a^3)) c in mPa.
/// The sign convention is the caller's: the Lifshitz pressure passes -sum'.
inline double pressure_to_si(double coefficient, const Geometry& geom) {
    return pressure_prefactor_mPa(geom) * coefficient;
}

/// k_B T / (2 pi a^2) in J/m^2: the prefactor of the dimensionless free-energy sum.
inline double free_energy_prefactor_J_m2(const Geometry& geom) {
    const double kT_J = geom.thermal_energy_eV() * PhysicalConstants::joule_per_eV;
    const double a = geom.gap_m();
    return kT_J / (2.0 * std::numbers::pi * a * a);
}

/// -pi^2 hbar c / (240 a^4) in mPa: the T = 0 perfect-conductor pressure.
inline double ideal_metal_pressure_mPa(double gap_um) {
    const double hbar_c_J_m = PhysicalConstants::hbar_c_eV_nm * 1e-9 * PhysicalConstants::joule_per_eV;
    const double a = gap_um * 1e-6;
    return -std::numbers::pi * std::numbers::pi * hbar_c_J_m / (240.0 * a * a * a * a) * 1e3;
}

}  // namespace casimir
