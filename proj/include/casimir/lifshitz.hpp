#pragma once

// Finite-temperature Lifshitz pressure between two half-spaces.
//
//   P = -(k_B T / pi a^3) sum'_m int_{m gamma}^inf y^2 dy
//         [ r_TM e^{-2y} / (1 - r_TM e^{-2y}) + r_TE e^{-2y} / (1 - r_TE e^{-2y}) ]
//
// with r = Delta_1 Delta_2 for each polarization and p = y / (m gamma). The
// m = 0 term carries half weight and is evaluated in closed form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/compensated_sum.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/quantities.hpp"

namespace casimir {

/// Integral and sum tolerances plus the term budget.
struct QuadratureSpec {
    double integral_rel_tol = 1e-12;
    double sum_rel_tol = 1e-8;
    std::size_t max_terms = 2'000'000;
    std::size_t min_terms = 5;
    std::size_t max_intervals = 4000;

    void validate() const {
        if (!(integral_rel_tol > 0.0) || !(sum_rel_tol > 0.0)) {
            throw DomainError("quadrature tolerances must be positive");
        }
        if (max_terms < 1) {
            throw DomainError("max_terms must be at least 1");
        }
    }
};

enum class Polarization { TE, TM };

// ---------------------------------------------------------------------------
// Lifshitz variables and reflection amplitudes

struct LifshitzVariables {
    double s1;
    double s3;
};

namespace detail {

inline void check_eps_p(double eps, double p) {
    if (!(eps >= 1.0)) {
        throw DomainError("Lifshitz variables need eps >= 1");
    }
    if (!(p >= 1.0)) {
        throw DomainError("Lifshitz variables need p >= 1");
    }
}

// Amplitudes written in chi = eps - 1 so that nothing cancels as eps -> 1;
// chi = inf is the perfect reflector.
inline double te_amplitude(double chi, double p) {
    if (std::isinf(chi)) {
        return 1.0;
    }
    const double s = std::sqrt(chi + p * p);
    const double sum = s + p;
    return chi / (sum * sum);
}

inline double tm_amplitude(double chi, double p) {
    if (std::isinf(chi)) {
        return 1.0;
    }
    const double eps = 1.0 + chi;
    const double s = std::sqrt(chi + p * p);
    const double sum = eps * p + s;
    // (eps p)^2 - s^2 = (eps - 1)(p^2 (eps + 1) - 1)
    return chi * (p * p * (chi + 2.0) - 1.0) / (sum * sum);
}

}  // namespace detail

/// s_i = sqrt(eps_i - 1 + p^2).
inline LifshitzVariables lifshitz_variables(double eps1, double eps3, double p) {
    detail::check_eps_p(eps1, p);
    detail::check_eps_p(eps3, p);
    return {std::sqrt((eps1 - 1.0) + p * p), std::sqrt((eps3 - 1.0) + p * p)};
}

/// Delta_TE = (s - p) / (s + p).
inline double reflection_te(double s, double p) {
    if (!(p > 0.0) || !(s >= p)) {
        throw DomainError("TE reflection needs s >= p > 0");
    }
    if (std::isinf(s)) {
        return 1.0;
    }
    return (s - p) / (s + p);
}

/// Delta_TM = (eps p - s) / (eps p + s).
inline double reflection_tm(double eps, double s, double p) {
    detail::check_eps_p(eps, p);
    if (std::isinf(eps)) {
        return 1.0;
    }
    return (eps * p - s) / (eps * p + s);
}

struct ReflectionPair {
    double delta1;
    double delta2;
    Polarization polarization;

    [[nodiscard]] double product() const { return delta1 * delta2; }
};

/// Amplitudes of both media for one polarization, from eps_i - 1.
inline ReflectionPair reflection_pair(Polarization polarization, double chi1, double chi3, double p) {
    if (polarization == Polarization::TE) {
        return {detail::te_amplitude(chi1, p), detail::te_amplitude(chi3, p), polarization};
    }
    return {detail::tm_amplitude(chi1, p), detail::tm_amplitude(chi3, p), polarization};
}

/// One (m, y) evaluation point.
struct ModePoint {
    unsigned long m;
    double y;
    ReducedTemperature gamma;
    double p;
    double s1;
    double s3;
};

inline ModePoint mode_point(unsigned long m, double y, ReducedTemperature gamma, double eps1, double eps3) {
    if (m == 0) {
        throw DomainError("mode points exist only for m >= 1; the static mode is analytic");
    }
    const double lower = static_cast<double>(m) * gamma.value;
    if (!(y >= lower)) {
        throw DomainError("mode point below the lower integration limit m*gamma");
    }
    const double p = y / lower;
    const auto s = lifshitz_variables(eps1, eps3, p);
    return {m, y, gamma, p, s.s1, s.s3};
}

// ---------------------------------------------------------------------------
// Integrands

namespace detail {

inline double check_loop_gain(double x) {
    if (!(x < 1.0) || !(x >= 0.0)) {
        throw DomainError("reflection product times e^{-2y} must lie in [0, 1)");
    }
    return x;
}

}  // namespace detail

/// y^2 [x_TM / (1 - x_TM) + x_TE / (1 - x_TE)], x = Delta_1 Delta_2 e^{-2y}.
inline double mode_integrand(const ReflectionPair& tm, const ReflectionPair& te, double y) {
    if (!(y > 0.0)) {
        throw DomainError("mode integrand needs y > 0");
    }
    const double decay = std::exp(-2.0 * y);
    const double x_tm = detail::check_loop_gain(tm.product() * decay);
    const double x_te = detail::check_loop_gain(te.product() * decay);
    return y * y * (x_tm / (1.0 - x_tm) + x_te / (1.0 - x_te));
}

/// y [ln(1 - x_TM) + ln(1 - x_TE)]: the free-energy counterpart.
inline double mode_log_integrand(const ReflectionPair& tm, const ReflectionPair& te, double y) {
    if (!(y > 0.0)) {
        throw DomainError("mode integrand needs y > 0");
    }
    const double decay = std::exp(-2.0 * y);
    const double x_tm = detail::check_loop_gain(tm.product() * decay);
    const double x_te = detail::check_loop_gain(te.product() * decay);
    return y * (std::log1p(-x_tm) + std::log1p(-x_te));
}

enum class Kernel { pressure, free_energy };

// ---------------------------------------------------------------------------
// zeta(3) and the static mode

/// zeta(3) = polylog(3, 1) by direct summation with an Euler-Maclaurin tail.
inline double zeta3() {
    static const double value = [] {
        constexpr int n_max = 2000;
        CompensatedSum<double> sum;
        for (int n = n_max; n >= 1; --n) {
            const double x = static_cast<double>(n);
            sum += 1.0 / (x * x * x);
        }
        const double big_n = n_max;
        const double n2 = big_n * big_n;
        // sum_{n > N} n^-3 = 1/(2N^2) - 1/(2N^3) + 1/(4N^4) + O(N^-6)
        sum += 1.0 / (2.0 * n2) - 1.0 / (2.0 * n2 * big_n) + 1.0 / (4.0 * n2 * n2);
        return sum.value();
    }();
    return value;
}

/// Static-mode coefficient of the pressure sum, half weight included:
/// (1/2) int_0^inf y^2 r e^{-2y}/(1 - r e^{-2y}) dy = Li3(r)/8 for r in {0, 1}.
inline double static_pressure_coefficient(const DielectricModel& model1, const DielectricModel& model3) {
    const auto r1 = static_reflection(model1);
    const auto r3 = static_reflection(model3);
    const double modes = r1.tm * r3.tm + r1.te * r3.te;
    return modes * zeta3() / 8.0;
}

/// Static-mode coefficient of the free-energy sum:
/// (1/2) int_0^inf y ln(1 - r e^{-2y}) dy = -Li3(r)/8 for r in {0, 1}.
inline double static_free_energy_coefficient(const DielectricModel& model1, const DielectricModel& model3) {
    return -static_pressure_coefficient(model1, model3);
}

/// m = 0 pressure between two metals with finite relaxation:
/// TM reflects perfectly, TE does not contribute. Equals -zeta(3) k_B T / (8 pi a^3).
inline double zero_mode_pressure(const Geometry& geom) {
    return pressure_to_si(-zeta3() / 8.0, geom);
}

// ---------------------------------------------------------------------------
// Matsubara terms

struct MatsubaraTerm {
    unsigned long m = 0;
    /// Dimensionless integral; positive for the pressure kernel, negative
    /// for the free-energy kernel.
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    EvaluationRegion region1 = EvaluationRegion::analytic;
    EvaluationRegion region3 = EvaluationRegion::analytic;
};

/// Semi-infinite range cut-off. The perfect-reflector majorant y^2 e^{-2y}
/// makes the discarded tail smaller than tol relative to the integral.
inline double integration_cutoff(double lower, double rel_tol) {
    return std::max(lower, 1.0) + 0.5 * std::log(1.0 / rel_tol) + 5.0;
}

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, MatsubaraTerm partial)
        : std::runtime_error(what), partial_(partial) {}

    [[nodiscard]] const MatsubaraTerm& partial() const noexcept { return partial_; }

private:
    MatsubaraTerm partial_;
};

/// int_{m gamma}^{y_max} of the chosen kernel with eps_i taken at zeta_m.
inline MatsubaraTerm matsubara_term(unsigned long m, const Geometry& geom, const DielectricModel& model1,
                                    const DielectricModel& model3, const QuadratureSpec& spec = {},
                                    Kernel kernel = Kernel::pressure) {
    if (m == 0) {
        throw DomainError("matsubara_term covers m >= 1; the static mode is analytic");
    }
    const double zeta = matsubara_frequency(m, geom.temperature_K());
    const auto chi1 = evaluate_susceptibility(model1, zeta);
    const auto chi3 = evaluate_susceptibility(model3, zeta);

    MatsubaraTerm term;
    term.m = m;
    term.region1 = chi1.region;
    term.region3 = chi3.region;
    if (chi1.value == 0.0 || chi3.value == 0.0) {
        return term;
    }

    const double lower = static_cast<double>(m) * reduced_temperature(geom).value;
    const double upper = integration_cutoff(lower, spec.integral_rel_tol);
    auto integrand = [&](double y) {
        const double p = y / lower;
        const auto tm = reflection_pair(Polarization::TM, chi1.value, chi3.value, p);
        const auto te = reflection_pair(Polarization::TE, chi1.value, chi3.value, p);
        return kernel == Kernel::pressure ? mode_integrand(tm, te, y) : mode_log_integrand(tm, te, y);
    };

    try {
        const auto q = integrate(integrand, lower, upper,
                                 {.rel_tol = spec.integral_rel_tol, .max_intervals = spec.max_intervals});
        term.value = q.value;
        term.error = q.error;
        term.evaluations = q.evaluations;
    } catch (const QuadratureError& e) {
        term.value = e.partial().value;
        term.error = e.partial().error;
        term.evaluations = e.partial().evaluations;
        throw IntegrationError("Matsubara term m=" + std::to_string(m) + ": " + e.what(), term);
    }
    return term;
}

// ---------------------------------------------------------------------------
// Matsubara sum

struct SumDiagnostics {
    double max_integral_error = 0.0;
    std::size_t evaluations = 0;
    /// Terms that needed eps above the highest tabulated frequency.
    std::size_t above_table_terms = 0;
    /// Estimated remainder of the discarded terms, dimensionless.
    double tail_estimate = 0.0;
};

struct MatsubaraSum {
    double static_coefficient = 0.0;
    std::vector<double> terms;
    double total = 0.0;
    bool converged = false;
    SumDiagnostics diagnostics;
};

namespace detail {

// Stops once the geometric estimate of the remaining terms and the latest
// term are both below sum_rel_tol times the running total. With small gamma
// the terms decay by ~e^{-2 gamma} per step, so the last term alone would
// understate the truncation error by ~1/(2 gamma).
inline bool sum_has_converged(double previous, double current, double total, const QuadratureSpec& spec,
                              double& tail) {
    const double bound = spec.sum_rel_tol * std::abs(total);
    if (current == 0.0) {
        tail = 0.0;
        return true;
    }
    if (std::abs(current) > bound) {
        return false;
    }
    const double ratio = current / previous;
    if (!(ratio > 0.0) || !(ratio < 1.0)) {
        return false;
    }
    tail = current * ratio / (1.0 - ratio);
    return std::abs(tail) <= bound;
}

}  // namespace detail

template <typename OnFailure>
MatsubaraSum matsubara_sum(const Geometry& geom, const DielectricModel& model1, const DielectricModel& model3,
                           const QuadratureSpec& spec, Kernel kernel, OnFailure&& on_failure) {
    spec.validate();
    MatsubaraSum out;
    out.static_coefficient = kernel == Kernel::pressure ? static_pressure_coefficient(model1, model3)
                                                        : static_free_energy_coefficient(model1, model3);
    CompensatedSum<double> total(out.static_coefficient);
    double previous = 0.0;
    for (unsigned long m = 1; m <= spec.max_terms; ++m) {
        MatsubaraTerm term;
        try {
            term = matsubara_term(m, geom, model1, model3, spec, kernel);
        } catch (const IntegrationError& e) {
            out.terms.push_back(e.partial().value);
            total += e.partial().value;
            out.total = total.value();
            on_failure(out, std::string(e.what()));
            throw;
        }
        out.terms.push_back(term.value);
        total += term.value;
        out.diagnostics.max_integral_error = std::max(out.diagnostics.max_integral_error, term.error);
        out.diagnostics.evaluations += term.evaluations;
        if (term.region1 == EvaluationRegion::above_table || term.region3 == EvaluationRegion::above_table) {
            ++out.diagnostics.above_table_terms;
        }
        if (m >= spec.min_terms &&
            detail::sum_has_converged(previous, term.value, total.value(), spec, out.diagnostics.tail_estimate)) {
            out.converged = true;
            break;
        }
        previous = term.value;
    }
    out.total = total.value();
    return out;
}

// ---------------------------------------------------------------------------
// Pressure

struct PressureResult {
    double pressure_mPa = 0.0;
    double zero_mode_mPa = 0.0;
    /// Contribution of each m >= 1 in mPa; terms[0] is m = 1.
    std::vector<double> terms_mPa;
    std::size_t n_terms_used = 0;
    bool converged = false;
    SumDiagnostics diagnostics;
};

class SummationError : public std::runtime_error {
public:
    SummationError(const std::string& what, PressureResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}

    [[nodiscard]] const PressureResult& partial() const noexcept { return partial_; }

private:
    PressureResult partial_;
};

namespace detail {

inline PressureResult to_pressure(const MatsubaraSum& sum, const Geometry& geom) {
    PressureResult out;
    const double scale = -pressure_prefactor_mPa(geom);
    out.zero_mode_mPa = scale * sum.static_coefficient;
    out.terms_mPa.reserve(sum.terms.size());
    for (double t : sum.terms) {
        out.terms_mPa.push_back(scale * t);
    }
    out.pressure_mPa = scale * sum.total;
    out.n_terms_used = sum.terms.size();
    out.converged = sum.converged;
    out.diagnostics = sum.diagnostics;
    return out;
}

}  // namespace detail

/// Signed Casimir pressure in mPa (negative = attraction).
///
/// Throws SummationError, carrying the partial result, when the sum has not
/// met spec.sum_rel_tol within spec.max_terms terms or a term fails to
/// integrate.
inline PressureResult casimir_pressure(const Geometry& geom, const DielectricModel& model1,
                                       const DielectricModel& model3, const QuadratureSpec& spec = {}) {
    auto on_failure = [&](const MatsubaraSum& partial, const std::string& why) {
        throw SummationError(why, detail::to_pressure(partial, geom));
    };
    const auto sum = matsubara_sum(geom, model1, model3, spec, Kernel::pressure, on_failure);
    auto out = detail::to_pressure(sum, geom);
    if (!sum.converged) {
        throw SummationError("Matsubara sum not converged after " + std::to_string(spec.max_terms) + " terms",
                             std::move(out));
    }
    return out;
}

}  // namespace casimir
