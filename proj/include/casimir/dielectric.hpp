#pragma once

// Permittivity on the imaginary frequency axis, eps(i zeta).
//
// Frequencies handed to the models are in eV (hbar * zeta). Tabulated data and
// raw optical data are stored in rad/s, matching the CSV interchange formats.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "casimir/quadrature.hpp"
#include "casimir/quantities.hpp"

namespace casimir {

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Drude model

class DrudeParams {
public:
    DrudeParams(std::string label, double omega_p_eV, double nu_eV)
        : label_(std::move(label)), omega_p_eV_(omega_p_eV), nu_eV_(nu_eV) {
        if (!(omega_p_eV > 0.0) || !std::isfinite(omega_p_eV)) {
            throw DomainError("Drude plasma frequency must be positive (" + label_ + ")");
        }
        // nu = 0 leaves the zero-frequency TE mode undetermined; refuse it.
        if (!(nu_eV > 0.0) || !std::isfinite(nu_eV)) {
            throw DomainError("Drude relaxation frequency must be positive (" + label_ + ")");
        }
    }

    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] double omega_p_eV() const noexcept { return omega_p_eV_; }
    [[nodiscard]] double nu_eV() const noexcept { return nu_eV_; }

    [[nodiscard]] DrudeParams with_nu(double nu_eV) const { return {label_, omega_p_eV_, nu_eV}; }

    bool operator==(const DrudeParams&) const = default;

private:
    std::string label_;
    double omega_p_eV_;
    double nu_eV_;
};

/// eps(i zeta) - 1 = omega_p^2 / (zeta (zeta + nu)).
inline double drude_susceptibility(const DrudeParams& params, double zeta_eV) {
    if (!(zeta_eV > 0.0)) {
        throw DomainError("Drude permittivity is evaluated only for zeta > 0; the static mode is analytic");
    }
    if (std::isinf(zeta_eV)) {
        return 0.0;
    }
    const double wp = params.omega_p_eV();
    return wp * wp / (zeta_eV * (zeta_eV + params.nu_eV()));
}

inline double drude_epsilon(const DrudeParams& params, double zeta_eV) {
    return 1.0 + drude_susceptibility(params, zeta_eV);
}

/// Imaginary part of the Drude permittivity on the real axis, eps''(omega).
inline double drude_loss(const DrudeParams& params, double omega_eV) {
    const double wp = params.omega_p_eV();
    const double nu = params.nu_eV();
    return wp * wp * nu / (omega_eV * (omega_eV * omega_eV + nu * nu));
}

/// lambda_p = 2 pi c / omega_p, in nm.
inline double plasma_wavelength(const DrudeParams& params) {
    return 2.0 * std::numbers::pi * PhysicalConstants::hbar_c_eV_nm / params.omega_p_eV();
}

// ---------------------------------------------------------------------------
// Material database

class MaterialDatabase {
public:
    static MaterialDatabase builtin() {
        MaterialDatabase db;
        db.insert(DrudeParams("Au", 9.03, 0.0345));
        db.insert(DrudeParams("Cu", 8.97, 0.0295));
        db.insert(DrudeParams("Al", 11.5, 0.0506));
        return db;
    }

    /// Parses a JSON array of {label, omega_p_eV, nu_eV}. Entries override
    /// built-ins of the same label when `with_builtins` is set.
    static MaterialDatabase from_json(std::string_view text, bool with_builtins = true) {
        MaterialDatabase db = with_builtins ? builtin() : MaterialDatabase{};
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(std::string("material database: ") + e.what());
        }
        if (!doc.is_array()) {
            throw InputError("material database: expected a JSON array");
        }
        for (const auto& entry : doc) {
            try {
                db.insert(DrudeParams(entry.at("label").get<std::string>(), entry.at("omega_p_eV").get<double>(),
                                      entry.at("nu_eV").get<double>()));
            } catch (const nlohmann::json::exception& e) {
                throw InputError(std::string("material database entry: ") + e.what());
            }
        }
        return db;
    }

    static MaterialDatabase from_file(const std::string& path, bool with_builtins = true) {
        std::ifstream in(path);
        if (!in) {
            throw InputError("cannot open material database " + path);
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        return from_json(buffer.str(), with_builtins);
    }

    [[nodiscard]] bool contains(const std::string& label) const { return entries_.contains(label); }

    [[nodiscard]] const DrudeParams& at(const std::string& label) const {
        auto it = entries_.find(label);
        if (it == entries_.end()) {
            throw InputError("unknown material '" + label + "'");
        }
        return it->second;
    }

    [[nodiscard]] std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto& [label, _] : entries_) {
            out.push_back(label);
        }
        return out;
    }

private:
    void insert(DrudeParams params) { entries_.insert_or_assign(params.label(), std::move(params)); }

    std::map<std::string, DrudeParams> entries_;
};

// ---------------------------------------------------------------------------
// Bloch-Gruneisen relaxation frequency

struct BlochGruneisenParams {
    double theta_K = 175.0;
    /// Units are not given with the original formula; eV reproduces the
    /// room-temperature Drude nu of gold.
    double prefactor_eV = 0.0847;
};

/// x^5 e^x / (e^x - 1)^2, written with e^{-x} so that large x does not
/// overflow and small x keeps full precision (limit x^3).
inline double bloch_gruneisen_integrand(double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    const double denom = -std::expm1(-x);
    const double x2 = x * x;
    return x2 * x2 * x * std::exp(-x) / (denom * denom);
}

inline double bloch_gruneisen_nu(const BlochGruneisenParams& params, double temperature_K) {
    if (!(temperature_K > 0.0)) {
        throw DomainError("Bloch-Gruneisen relaxation needs T > 0");
    }
    if (!(params.theta_K > 0.0)) {
        throw DomainError("Bloch-Gruneisen temperature must be positive");
    }
    const double ratio = temperature_K / params.theta_K;
    // The integrand is below 1e-300 past x = 750; the integral has saturated.
    const double upper = std::min(1.0 / ratio, 750.0);
    const std::vector<double> splits{5.0, 20.0, 60.0};
    const auto integral = integrate(bloch_gruneisen_integrand, 0.0, upper, {.rel_tol = 1e-12}, splits);
    const double r2 = ratio * ratio;
    return params.prefactor_eV * r2 * r2 * ratio * integral.value;
}

// ---------------------------------------------------------------------------
// Tabulated eps(i zeta)

struct PermittivitySample {
    double zeta_rad_s;
    double eps;
};

class PermittivityTable {
public:
    explicit PermittivityTable(std::vector<PermittivitySample> samples) : samples_(std::move(samples)) {
        if (samples_.size() < 2) {
            throw InputError("permittivity table needs at least two samples");
        }
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const auto& s = samples_[i];
            if (!(s.zeta_rad_s > 0.0) || !std::isfinite(s.zeta_rad_s)) {
                throw InputError("permittivity table: frequencies must be positive and finite");
            }
            if (!(s.eps >= 1.0) || !std::isfinite(s.eps)) {
                throw InputError("permittivity table: eps(i zeta) must be >= 1");
            }
            if (i > 0) {
                if (!(s.zeta_rad_s > samples_[i - 1].zeta_rad_s)) {
                    throw InputError("permittivity table: frequencies must be strictly increasing");
                }
                if (s.eps > samples_[i - 1].eps) {
                    throw InputError("permittivity table: eps(i zeta) must be non-increasing in zeta");
                }
            }
        }
    }

    [[nodiscard]] const std::vector<PermittivitySample>& samples() const noexcept { return samples_; }
    [[nodiscard]] double lowest_rad_s() const noexcept { return samples_.front().zeta_rad_s; }
    [[nodiscard]] double highest_rad_s() const noexcept { return samples_.back().zeta_rad_s; }

    /// eps - 1 for zeta inside [lowest, highest]: log-log linear in (zeta, eps - 1).
    [[nodiscard]] double interpolate_susceptibility(double zeta_rad_s) const {
        auto it = std::upper_bound(samples_.begin(), samples_.end(), zeta_rad_s,
                                   [](double z, const PermittivitySample& s) { return z < s.zeta_rad_s; });
        if (it == samples_.begin()) {
            return samples_.front().eps - 1.0;
        }
        if (it == samples_.end()) {
            return samples_.back().eps - 1.0;
        }
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double chi_lo = lo.eps - 1.0;
        const double chi_hi = hi.eps - 1.0;
        const double t = std::log(zeta_rad_s / lo.zeta_rad_s) / std::log(hi.zeta_rad_s / lo.zeta_rad_s);
        if (chi_lo > 0.0 && chi_hi > 0.0) {
            return chi_lo * std::pow(chi_hi / chi_lo, t);
        }
        return chi_lo + t * (chi_hi - chi_lo);
    }

private:
    std::vector<PermittivitySample> samples_;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

/// Reads a two-column CSV with the exact header `expected_header`.
inline std::vector<std::pair<double, double>> read_two_column_csv(std::istream& in, std::string_view expected_header,
                                                                  std::string_view what) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty() || row.front() == '#') {
            continue;
        }
        if (!header_seen) {
            std::string header;
            for (char c : row) {
                if (c != ' ' && c != '\t') {
                    header.push_back(c);
                }
            }
            if (header != expected_header) {
                throw InputError(std::string(what) + ": expected header '" + std::string(expected_header) +
                                 "', got '" + row + "'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string::npos) {
            throw InputError(std::string(what) + ": line " + std::to_string(line_no) + " has no comma");
        }
        try {
            std::size_t used0 = 0;
            std::size_t used1 = 0;
            const std::string c0 = trim(std::string_view(row).substr(0, comma));
            const std::string c1 = trim(std::string_view(row).substr(comma + 1));
            const double v0 = std::stod(c0, &used0);
            const double v1 = std::stod(c1, &used1);
            if (used0 != c0.size() || used1 != c1.size()) {
                throw std::invalid_argument("trailing characters");
            }
            rows.emplace_back(v0, v1);
        } catch (const std::logic_error&) {
            throw InputError(std::string(what) + ": cannot parse line " + std::to_string(line_no) + ": '" + row +
                             "'");
        }
    }
    if (!header_seen) {
        throw InputError(std::string(what) + ": missing header '" + std::string(expected_header) + "'");
    }
    return rows;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return in;
}

}  // namespace detail

inline PermittivityTable read_permittivity_csv(std::istream& in) {
    std::vector<PermittivitySample> samples;
    for (const auto& [zeta, eps] : detail::read_two_column_csv(in, "zeta_rad_s,eps_izeta", "permittivity table")) {
        samples.push_back({zeta, eps});
    }
    return PermittivityTable(std::move(samples));
}

inline PermittivityTable read_permittivity_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_permittivity_csv(in);
}

inline void write_permittivity_csv(std::ostream& out, const std::vector<PermittivitySample>& samples) {
    out << "zeta_rad_s,eps_izeta\n";
    char buf[64];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", s.zeta_rad_s, s.eps);
        out << buf;
    }
}

// ---------------------------------------------------------------------------
// Kramers-Kronig transform of absorption data to the imaginary axis

struct OpticalSample {
    double omega_rad_s;
    double eps_imag;
};

inline std::vector<OpticalSample> read_optical_csv(std::istream& in) {
    std::vector<OpticalSample> samples;
    for (const auto& [omega, loss] : detail::read_two_column_csv(in, "omega_rad_s,eps_imag", "optical data")) {
        samples.push_back({omega, loss});
    }
    return samples;
}

inline std::vector<OpticalSample> read_optical_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return read_optical_csv(in);
}

namespace detail {

inline void validate_optical(const std::vector<OpticalSample>& samples) {
    if (samples.empty()) {
        throw InputError("Kramers-Kronig transform needs at least one optical sample");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].omega_rad_s > 0.0) || !std::isfinite(samples[i].omega_rad_s)) {
            throw InputError("optical data: frequencies must be positive and finite");
        }
        if (!(samples[i].eps_imag >= 0.0) || !std::isfinite(samples[i].eps_imag)) {
            throw InputError("optical data: eps'' must be non-negative");
        }
        if (i > 0 && !(samples[i].omega_rad_s > samples[i - 1].omega_rad_s)) {
            throw InputError("optical data: frequencies must be strictly increasing");
        }
    }
}

// 1 - atan(x)/x without cancellation at small x.
inline double one_minus_atan_ratio(double x) {
    if (x < 1e-2) {
        const double x2 = x * x;
        return x2 * (1.0 / 3.0 - x2 * (1.0 / 5.0 - x2 / 7.0));
    }
    return 1.0 - std::atan(x) / x;
}

}  // namespace detail

/// eps(i zeta) = 1 + (2/pi) int_0^inf omega eps''(omega) / (omega^2 + zeta^2) d omega.
///
/// Between samples eps'' is interpolated log-log. Below the first sample it
/// is continued as A/omega (the low-frequency Drude form), above the last as
/// B/omega^3 (the high-frequency Drude form); both pieces are integrated in
/// closed form.
inline double kramers_kronig_transform(const std::vector<OpticalSample>& samples, double zeta_rad_s,
                                       double rel_tol = 1e-10) {
    detail::validate_optical(samples);
    if (!(zeta_rad_s > 0.0) || !std::isfinite(zeta_rad_s)) {
        throw DomainError("Kramers-Kronig transform needs zeta > 0");
    }

    const auto& first = samples.front();
    const auto& last = samples.back();

    // Below: int_0^w0 A / (w^2 + z^2) dw = (A/z) atan(w0/z), A = w0 eps''(w0).
    const double low = first.omega_rad_s * first.eps_imag / zeta_rad_s * std::atan(first.omega_rad_s / zeta_rad_s);

    // Above: int_wN^inf B / (w^2 (w^2 + z^2)) dw with B = wN^3 eps''(wN).
    const double x = zeta_rad_s / last.omega_rad_s;
    const double high = last.eps_imag * last.omega_rad_s * last.omega_rad_s / (zeta_rad_s * zeta_rad_s) *
                        detail::one_minus_atan_ratio(x);

    // Middle, in u = ln(omega): integrand r^2/(1+r^2) eps''(omega), r = omega/zeta.
    CompensatedSum<double> middle;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const auto& lo = samples[i];
        const auto& hi = samples[i + 1];
        const double u_lo = std::log(lo.omega_rad_s);
        const double u_hi = std::log(hi.omega_rad_s);
        const bool log_interp = lo.eps_imag > 0.0 && hi.eps_imag > 0.0;
        if (lo.eps_imag == 0.0 && hi.eps_imag == 0.0) {
            continue;
        }
        const double slope = log_interp ? std::log(hi.eps_imag / lo.eps_imag) / (u_hi - u_lo) : 0.0;
        auto loss = [&](double u) {
            if (log_interp) {
                return lo.eps_imag * std::exp(slope * (u - u_lo));
            }
            const double t = (std::exp(u) - lo.omega_rad_s) / (hi.omega_rad_s - lo.omega_rad_s);
            return lo.eps_imag + t * (hi.eps_imag - lo.eps_imag);
        };
        auto integrand = [&](double u) {
            const double r = std::exp(u) / zeta_rad_s;
            const double r2 = r * r;
            return r2 / (1.0 + r2) * loss(u);
        };
        middle += integrate(integrand, u_lo, u_hi, {.rel_tol = rel_tol}, {std::log(zeta_rad_s)}).value;
    }

    return 1.0 + 2.0 / std::numbers::pi * (low + middle.value() + high);
}

// ---------------------------------------------------------------------------
// Dielectric model variants

struct Vacuum {};

/// Limit eps -> infinity at every frequency: both reflection amplitudes are 1.
struct PerfectConductor {};

struct DrudeModel {
    DrudeParams params;
};

/// Tabulated eps(i zeta) with the Drude form below the lowest sample.
struct TabulatedModel {
    PermittivityTable table;
    DrudeParams low_frequency_tail;
};

using DielectricModel = std::variant<Vacuum, DrudeModel, TabulatedModel, PerfectConductor>;

enum class EvaluationRegion { analytic, table, below_table, above_table };

struct Susceptibility {
    /// eps(i zeta) - 1; +inf for a perfect conductor.
    double value;
    EvaluationRegion region;
};

inline Susceptibility evaluate_susceptibility(const DielectricModel& model, double zeta_eV) {
    if (!(zeta_eV > 0.0)) {
        throw DomainError("permittivity is evaluated only for zeta > 0");
    }
    return std::visit(
        [&](const auto& m) -> Susceptibility {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Vacuum>) {
                return {0.0, EvaluationRegion::analytic};
            } else if constexpr (std::is_same_v<M, PerfectConductor>) {
                return {std::numeric_limits<double>::infinity(), EvaluationRegion::analytic};
            } else if constexpr (std::is_same_v<M, DrudeModel>) {
                return {drude_susceptibility(m.params, zeta_eV), EvaluationRegion::analytic};
            } else {
                const double zeta = eV_to_rad_s(zeta_eV);
                if (zeta < m.table.lowest_rad_s()) {
                    return {drude_susceptibility(m.low_frequency_tail, zeta_eV), EvaluationRegion::below_table};
                }
                if (zeta > m.table.highest_rad_s()) {
                    const double top = m.table.highest_rad_s();
                    const double chi_top = m.table.samples().back().eps - 1.0;
                    return {chi_top * (top / zeta) * (top / zeta), EvaluationRegion::above_table};
                }
                return {m.table.interpolate_susceptibility(zeta), EvaluationRegion::table};
            }
        },
        model);
}

inline double epsilon_at(const DielectricModel& model, double zeta_eV) {
    return 1.0 + evaluate_susceptibility(model, zeta_eV).value;
}

/// Reflection-amplitude products at zeta = 0 contributed by one medium.
///
/// Metals reflect TM perfectly at zero frequency. With a finite relaxation
/// frequency zeta^2 (eps - 1) -> 0, so the static TE amplitude vanishes.
struct StaticReflection {
    double tm;
    double te;
};

inline StaticReflection static_reflection(const DielectricModel& model) {
    return std::visit(
        [](const auto& m) -> StaticReflection {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Vacuum>) {
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<M, PerfectConductor>) {
                return {1.0, 1.0};
            } else {
                return {1.0, 0.0};
            }
        },
        model);
}

/// Replaces the relaxation frequency wherever the model carries Drude parameters.
inline DielectricModel with_relaxation(const DielectricModel& model, double nu_eV) {
    return std::visit(
        [&](const auto& m) -> DielectricModel {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DrudeModel>) {
                return DrudeModel{m.params.with_nu(nu_eV)};
            } else if constexpr (std::is_same_v<M, TabulatedModel>) {
                return TabulatedModel{m.table, m.low_frequency_tail.with_nu(nu_eV)};
            } else {
                return m;
            }
        },
        model);
}

inline std::string model_label(const DielectricModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Vacuum>) {
                return "vacuum";
            } else if constexpr (std::is_same_v<M, PerfectConductor>) {
                return "perfect";
            } else if constexpr (std::is_same_v<M, DrudeModel>) {
                return m.params.label();
            } else {
                return m.low_frequency_tail.label() + "(tabulated)";
            }
        },
        model);
}

/// How the relaxation frequency follows temperature.
enum class RelaxationModel { fixed, bloch_gruneisen };

struct RelaxationOptions {
    RelaxationModel model = RelaxationModel::fixed;
    BlochGruneisenParams bloch_gruneisen{};
};

/// The model as seen at temperature T: unchanged for a fixed nu, otherwise
/// with nu replaced by the Bloch-Gruneisen value.
inline DielectricModel model_at_temperature(const DielectricModel& model, double temperature_K,
                                            const RelaxationOptions& relaxation) {
    if (relaxation.model == RelaxationModel::fixed) {
        return model;
    }
    return with_relaxation(model, bloch_gruneisen_nu(relaxation.bloch_gruneisen, temperature_K));
}

/// Resolves a material label: "vacuum", "perfect", or a database entry.
inline DielectricModel model_from_label(const std::string& label, const MaterialDatabase& db) {
    if (label == "vacuum") {
        return Vacuum{};
    }
    if (label == "perfect" || label == "ideal") {
        return PerfectConductor{};
    }
    return DrudeModel{db.at(label)};
}

}  // namespace casimir
