#pragma once

// Free energy per unit area, entropy, the Nernst check and the separation at
// which the pressure starts to grow with temperature.
//
//   F = (k_B T / 2 pi a^2) sum'_m int_{m gamma}^inf y dy [ln(1 - r_TM e^{-2y}) + ln(1 - r_TE e^{-2y})]
//
// P = -dF/da reproduces the pressure sum in lifshitz.hpp.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/quantities.hpp"

namespace casimir {

struct FreeEnergyResult {
    /// J/m^2, negative for attraction.
    double free_energy_J_m2 = 0.0;
    double zero_mode_J_m2 = 0.0;
    std::vector<double> terms_J_m2;
    std::size_t n_terms_used = 0;
    bool converged = false;
    SumDiagnostics diagnostics;
};

class FreeEnergyError : public std::runtime_error {
public:
    FreeEnergyError(const std::string& what, FreeEnergyResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}

    [[nodiscard]] const FreeEnergyResult& partial() const noexcept { return partial_; }

private:
    FreeEnergyResult partial_;
};

namespace detail {

inline FreeEnergyResult to_free_energy(const MatsubaraSum& sum, const Geometry& geom) {
    FreeEnergyResult out;
    const double scale = free_energy_prefactor_J_m2(geom);
    out.zero_mode_J_m2 = scale * sum.static_coefficient;
    out.terms_J_m2.reserve(sum.terms.size());
    for (double t : sum.terms) {
        out.terms_J_m2.push_back(scale * t);
    }
    out.free_energy_J_m2 = scale * sum.total;
    out.n_terms_used = sum.terms.size();
    out.converged = sum.converged;
    out.diagnostics = sum.diagnostics;
    return out;
}

}  // namespace detail

inline FreeEnergyResult free_energy(const Geometry& geom, const DielectricModel& model1,
                                    const DielectricModel& model3, const QuadratureSpec& spec = {}) {
    auto on_failure = [&](const MatsubaraSum& partial, const std::string& why) {
        throw FreeEnergyError(why, detail::to_free_energy(partial, geom));
    };
    const auto sum = matsubara_sum(geom, model1, model3, spec, Kernel::free_energy, on_failure);
    auto out = detail::to_free_energy(sum, geom);
    if (!sum.converged) {
        throw FreeEnergyError("free-energy sum not converged after " + std::to_string(spec.max_terms) + " terms",
                              std::move(out));
    }
    return out;
}

/// -dF/da by a central difference with step h_um, in mPa.
inline double pressure_from_free_energy(const Geometry& geom, const DielectricModel& model1,
                                        const DielectricModel& model3, double h_um, const QuadratureSpec& spec = {}) {
    const double f_plus = free_energy(geom.with_gap(geom.gap_um() + h_um), model1, model3, spec).free_energy_J_m2;
    const double f_minus = free_energy(geom.with_gap(geom.gap_um() - h_um), model1, model3, spec).free_energy_J_m2;
    return -(f_plus - f_minus) / (2.0 * h_um * 1e-6) * 1e3;
}

// ---------------------------------------------------------------------------
// Entropy

struct EntropyResult {
    /// Richardson-extrapolated S = -dF/dT, J/(m^2 K).
    double entropy_J_m2K = 0.0;
    double temperature_K = 0.0;
    double fd_step_K = 0.0;
    /// Central differences with steps fd_step and fd_step/2.
    double central_full_step = 0.0;
    double central_half_step = 0.0;
};

/// S(T) from four free energies at T +- h and T +- h/2. The relaxation
/// option decides whether nu moves with T inside the derivative.
inline EntropyResult entropy(const Geometry& geom, const DielectricModel& model1, const DielectricModel& model3,
                             const QuadratureSpec& spec = {}, double fd_step_K = 0.5,
                             const RelaxationOptions& relaxation = {}) {
    const double t = geom.temperature_K();
    if (!(fd_step_K > 0.0) || !(t - fd_step_K > 0.0)) {
        throw DomainError("entropy needs 0 < fd_step < T");
    }
    auto f_at = [&](double temperature) {
        const auto g = geom.with_temperature(temperature);
        return free_energy(g, model_at_temperature(model1, temperature, relaxation),
                           model_at_temperature(model3, temperature, relaxation), spec)
            .free_energy_J_m2;
    };
    auto central = [&](double h) { return -(f_at(t + h) - f_at(t - h)) / (2.0 * h); };

    EntropyResult out;
    out.temperature_K = t;
    out.fd_step_K = fd_step_K;
    out.central_full_step = central(fd_step_K);
    out.central_half_step = central(0.5 * fd_step_K);
    out.entropy_J_m2K = (4.0 * out.central_half_step - out.central_full_step) / 3.0;
    return out;
}

// ---------------------------------------------------------------------------
// Nernst check

struct NernstReport {
    double gap_um = 0.0;
    /// S at 1, 2, 4 and 8 K, in that order.
    std::vector<EntropyResult> low_temperature;
    EntropyResult room_temperature;
    double threshold = 0.0;
    bool monotone = false;
    bool below_threshold = false;

    [[nodiscard]] bool passed() const { return monotone && below_threshold; }
};

inline constexpr std::array<double, 4> nernst_temperatures_K = {1.0, 2.0, 4.0, 8.0};
inline constexpr double nernst_reference_K = 300.0;
inline constexpr double nernst_ratio = 1e-3;

/// Passes when |S| shrinks monotonically from 8 K down to 1 K and
/// |S(1 K)| <= 1e-3 |S(300 K)| at the same gap.
inline NernstReport nernst_check(double gap_um, const DielectricModel& model1, const DielectricModel& model3,
                                 const QuadratureSpec& spec = {}, double fd_step_K = 0.5,
                                 const RelaxationOptions& relaxation = {}) {
    NernstReport report;
    report.gap_um = gap_um;
    for (double t : nernst_temperatures_K) {
        report.low_temperature.push_back(entropy(Geometry(gap_um, t), model1, model3, spec, fd_step_K, relaxation));
    }
    report.room_temperature =
        entropy(Geometry(gap_um, nernst_reference_K), model1, model3, spec, fd_step_K, relaxation);
    report.threshold = nernst_ratio * std::abs(report.room_temperature.entropy_J_m2K);

    report.monotone = true;
    for (std::size_t i = 1; i < report.low_temperature.size(); ++i) {
        if (std::abs(report.low_temperature[i - 1].entropy_J_m2K) > std::abs(report.low_temperature[i].entropy_J_m2K)) {
            report.monotone = false;
        }
    }
    report.below_threshold = std::abs(report.low_temperature.front().entropy_J_m2K) <= report.threshold;
    return report;
}

// ---------------------------------------------------------------------------
// Crossover separation

struct CrossoverResult {
    double gap_um = 0.0;
    /// g(a) = |P(a, T_high)| - |P(a, T_low)| at the final bracket ends, mPa.
    double g_low_end = 0.0;
    double g_high_end = 0.0;
    double bracket_low_um = 0.0;
    double bracket_high_um = 0.0;
    std::size_t iterations = 0;
};

class CrossoverError : public std::runtime_error {
public:
    CrossoverError(const std::string& what, double g_low, double g_high)
        : std::runtime_error(what), g_low_(g_low), g_high_(g_high) {}

    [[nodiscard]] double g_low() const noexcept { return g_low_; }
    [[nodiscard]] double g_high() const noexcept { return g_high_; }

private:
    double g_low_;
    double g_high_;
};

/// |P(a, T_high)| - |P(a, T_low)| in mPa.
inline double temperature_difference(double gap_um, const DielectricModel& model1, const DielectricModel& model3,
                                     double t_low_K, double t_high_K, const QuadratureSpec& spec = {}) {
    const double high = casimir_pressure(Geometry(gap_um, t_high_K), model1, model3, spec).pressure_mPa;
    const double low = casimir_pressure(Geometry(gap_um, t_low_K), model1, model3, spec).pressure_mPa;
    return std::abs(high) - std::abs(low);
}

/// Bisects g(a) = |P(a, T_high)| - |P(a, T_low)| on [lo, hi] down to
/// `resolution_um`; returns the bracket midpoint.
inline CrossoverResult crossover_separation(const DielectricModel& model1, const DielectricModel& model3,
                                            double t_low_K, double t_high_K, const QuadratureSpec& spec = {},
                                            double lo_um = 1.0, double hi_um = 6.0, double resolution_um = 0.01) {
    if (!(t_low_K < t_high_K)) {
        throw DomainError("crossover needs T_low < T_high");
    }
    if (!(lo_um > 0.0) || !(lo_um < hi_um) || !(resolution_um > 0.0)) {
        throw DomainError("crossover needs 0 < lo < hi and a positive resolution");
    }
    auto g = [&](double a) { return temperature_difference(a, model1, model3, t_low_K, t_high_K, spec); };
    double g_lo = g(lo_um);
    double g_hi = g(hi_um);
    if (!((g_lo < 0.0 && g_hi > 0.0) || (g_lo > 0.0 && g_hi < 0.0))) {
        throw CrossoverError("no sign change of |P(T_high)| - |P(T_low)| on [" + std::to_string(lo_um) + ", " +
                                 std::to_string(hi_um) + "] um: g(lo)=" + std::to_string(g_lo) +
                                 " mPa, g(hi)=" + std::to_string(g_hi) + " mPa",
                             g_lo, g_hi);
    }
    CrossoverResult out;
    while (hi_um - lo_um > resolution_um) {
        const double mid = 0.5 * (lo_um + hi_um);
        const double g_mid = g(mid);
        ++out.iterations;
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
            lo_um = mid;
            g_lo = g_mid;
        } else {
            hi_um = mid;
            g_hi = g_mid;
        }
    }
    out.gap_um = 0.5 * (lo_um + hi_um);
    out.g_low_end = g_lo;
    out.g_high_end = g_hi;
    out.bracket_low_um = lo_um;
    out.bracket_high_um = hi_um;
    return out;
}

}  // namespace casimir
