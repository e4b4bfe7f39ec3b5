#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "casimir/fixtures.hpp"
#include "casimir/lifshitz.hpp"

using namespace casimir;

namespace {

const MaterialDatabase db = MaterialDatabase::builtin();
const DielectricModel au = DrudeModel{db.at("Au")};
const DielectricModel cu = DrudeModel{db.at("Cu")};
const DielectricModel al = DrudeModel{db.at("Al")};

// sum_{n>=1} int_L^inf y^2 e^{-2ny} dy: the perfect-reflector term with
// lower limit L = m gamma, by geometric expansion of x/(1-x).
double ideal_term_oracle(double lower) {
    double sum = 0.0;
    for (int n = 1; n < 200000; ++n) {
        const double nl = n * lower;
        const double t = std::exp(-2.0 * nl) * (2.0 * nl * nl + 2.0 * nl + 1.0) / (4.0 * n * n * static_cast<double>(n));
        sum += t;
        if (t < 1e-19 * sum) {
            break;
        }
    }
    return sum;
}

}  // namespace

TEST(LifshitzVariables, Examples) {
    EXPECT_EQ(lifshitz_variables(1.0, 1.0, 3.7).s1, 3.7);
    EXPECT_NEAR(lifshitz_variables(2.0, 1.0, 1.0).s1, std::sqrt(2.0), 1e-15);
    const double eps_au = drude_epsilon(db.at("Au"), 9.03);
    EXPECT_NEAR(lifshitz_variables(eps_au, eps_au, 1.0).s3, 1.41286727734971, 1e-13);
    EXPECT_THROW(lifshitz_variables(0.5, 1.0, 1.0), DomainError);
    EXPECT_THROW(lifshitz_variables(2.0, 2.0, 0.5), DomainError);
}

TEST(Reflection, TeExamples) {
    EXPECT_EQ(reflection_te(2.5, 2.5), 0.0);
    EXPECT_NEAR(reflection_te(std::sqrt(2.0), 1.0), 0.171572875253810, 1e-15);
    EXPECT_GT(reflection_te(1e12, 1.0), 1.0 - 1e-11);
    EXPECT_LT(reflection_te(1e12, 1.0), 1.0);
    EXPECT_EQ(reflection_te(std::numeric_limits<double>::infinity(), 1.0), 1.0);
    EXPECT_THROW(reflection_te(0.5, 1.0), DomainError);
}

TEST(Reflection, TmExamples) {
    EXPECT_EQ(reflection_tm(1.0, 1.3, 1.3), 0.0);
    EXPECT_NEAR(reflection_tm(2.0, std::sqrt(2.0), 1.0), 0.171572875253810, 1e-15);
    const double big = 1e12;
    EXPECT_GT(reflection_tm(big, std::sqrt(big), 1.0), 1.0 - 1e-5);
    EXPECT_LT(reflection_tm(big, std::sqrt(big), 1.0), 1.0);
}

TEST(Reflection, StableFormsMatchTextbookForms) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> log_chi(std::log(1e-3), std::log(1e6));
    std::uniform_real_distribution<double> log_p(0.0, std::log(1e3));
    for (int i = 0; i < 2000; ++i) {
        const double chi = std::exp(log_chi(rng));
        const double p = std::exp(log_p(rng));
        const double eps = 1.0 + chi;
        const double s = std::sqrt(chi + p * p);
        const auto te = reflection_pair(Polarization::TE, chi, chi, p);
        const auto tm = reflection_pair(Polarization::TM, chi, chi, p);
        EXPECT_NEAR(te.delta1, reflection_te(s, p), 1e-12);
        EXPECT_NEAR(tm.delta1, reflection_tm(eps, s, p), 1e-12);
    }
}

TEST(Reflection, BoundsProperty) {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> log_chi(std::log(1e-12), std::log(1e9));
    std::uniform_real_distribution<double> log_p(0.0, std::log(1e6));
    for (int i = 0; i < 100000; ++i) {
        const double chi1 = std::exp(log_chi(rng));
        const double chi3 = std::exp(log_chi(rng));
        const double p = std::exp(log_p(rng));
        for (auto pol : {Polarization::TE, Polarization::TM}) {
            const auto r = reflection_pair(pol, chi1, chi3, p);
            ASSERT_GE(r.delta1, 0.0);
            ASSERT_LT(r.delta1, 1.0);
            ASSERT_GE(r.delta2, 0.0);
            ASSERT_LT(r.delta2, 1.0);
        }
    }
    const auto vac = reflection_pair(Polarization::TM, 0.0, 0.0, 2.0);
    EXPECT_EQ(vac.delta1, 0.0);
    EXPECT_EQ(reflection_pair(Polarization::TE, 0.0, 5.0, 2.0).delta1, 0.0);
}

TEST(ModePoint, Invariants) {
    const ReducedTemperature g{0.8};
    const auto at_lower = mode_point(3, 3 * g.value, g, 5.0, 1.0);
    EXPECT_DOUBLE_EQ(at_lower.p, 1.0);
    EXPECT_EQ(at_lower.s3, at_lower.p);
    EXPECT_GT(at_lower.s1, at_lower.p);
    EXPECT_THROW(mode_point(3, 2.3, g, 5.0, 1.0), DomainError);
    EXPECT_THROW(mode_point(0, 1.0, g, 5.0, 1.0), DomainError);
}

TEST(ModeIntegrand, Examples) {
    const ReflectionPair zero_tm{0.0, 0.0, Polarization::TM};
    const ReflectionPair zero_te{0.0, 0.0, Polarization::TE};
    EXPECT_EQ(mode_integrand(zero_tm, zero_te, 1.0), 0.0);
    const ReflectionPair one_tm{1.0, 1.0, Polarization::TM};
    const ReflectionPair one_te{1.0, 1.0, Polarization::TE};
    EXPECT_NEAR(mode_integrand(one_tm, one_te, 1.0), 0.313035285499331, 1e-15);
    EXPECT_LT(mode_integrand(one_tm, one_te, 40.0), 1e-30);
    EXPECT_GE(mode_integrand(one_tm, one_te, 40.0), 0.0);
    const ReflectionPair bad{1.5, 1.0, Polarization::TM};
    EXPECT_THROW(mode_integrand(bad, one_te, 0.1), DomainError);
    EXPECT_THROW(mode_integrand(one_tm, one_te, 0.0), DomainError);
}

TEST(Zeta3, Value) {
    EXPECT_NEAR(zeta3(), 1.202056903159594, 1e-15);
    EXPECT_NEAR(zeta3() / 8.0, 0.1502571129, 5e-11);
}

TEST(Zeta3, PartialSumsIncreaseTowardTheLimit) {
    double partial = 0.0;
    for (int n = 1; n <= 5000; ++n) {
        const double next = partial + 1.0 / (static_cast<double>(n) * n * n);
        ASSERT_GT(next, partial);
        ASSERT_LT(next, zeta3());
        partial = next;
    }
}

TEST(ZeroMode, Pressure) {
    EXPECT_NEAR(zero_mode_pressure(Geometry(1.0, 300.0)), -0.198102385190602, 1e-13);
    const double at4 = zero_mode_pressure(Geometry(4.0, 300.0));
    EXPECT_NEAR(at4, -3.09534976860316e-3, 1e-15);
    // below the published full pressure 3.481e-3 mPa at the same point
    EXPECT_LT(std::abs(at4), 3.481e-3);
    EXPECT_DOUBLE_EQ(zero_mode_pressure(Geometry(1.0, 3.0)), zero_mode_pressure(Geometry(1.0, 300.0)) / 100.0);
}

TEST(ZeroMode, CoefficientsPerModel) {
    EXPECT_NEAR(static_pressure_coefficient(au, cu), zeta3() / 8.0, 0.0);
    EXPECT_EQ(static_pressure_coefficient(au, Vacuum{}), 0.0);
    EXPECT_EQ(static_pressure_coefficient(PerfectConductor{}, PerfectConductor{}), zeta3() / 4.0);
    EXPECT_EQ(static_free_energy_coefficient(au, au), -zeta3() / 8.0);
}

TEST(MatsubaraTerm, VacuumIsZero) {
    const auto t = matsubara_term(3, Geometry(1.0, 300.0), Vacuum{}, au);
    EXPECT_EQ(t.value, 0.0);
    EXPECT_THROW(matsubara_term(0, Geometry(1.0, 300.0), au, au), DomainError);
}

TEST(MatsubaraTerm, PerfectConductorMatchesGeometricSeries) {
    for (double a : {0.16, 1.0, 4.0}) {
        for (double t : {1.0, 300.0}) {
            const Geometry g(a, t);
            const double gamma = reduced_temperature(g).value;
            for (unsigned long m : {1ul, 2ul, 5ul, 17ul, 300ul}) {
                const double lower = m * gamma;
                if (lower > 60.0) {
                    continue;
                }
                const double oracle = 2.0 * ideal_term_oracle(lower);
                const auto term = matsubara_term(m, g, PerfectConductor{}, PerfectConductor{});
                EXPECT_NEAR(term.value, oracle, 1e-10 * oracle) << "a=" << a << " T=" << t << " m=" << m;
            }
        }
    }
}

TEST(MatsubaraTerm, DecaysMonotonicallyBeyondThePeak) {
    const Geometry g(0.5, 1.0);
    double previous = matsubara_term(1, g, au, au).value;
    int decreasing = 0;
    for (unsigned long m = 50; m < 20000; m += 50) {
        const double v = matsubara_term(m, g, au, au).value;
        if (m > 100) {
            EXPECT_LT(v, previous) << m;
            ++decreasing;
        }
        previous = v;
    }
    EXPECT_GT(decreasing, 100);
}

TEST(CasimirPressure, GoldAtHalfMicronRoomTemperature) {
    const auto r = casimir_pressure(Geometry(0.5, 300.0), au, au);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.pressure_mPa, 0.0);
    EXPECT_NEAR(r.pressure_mPa, -15.49, 0.02 * 15.49);
}

TEST(CasimirPressure, GoldAtOneMicronOneKelvin) {
    const auto r = casimir_pressure(Geometry(1.0, 1.0), au, au);
    EXPECT_NEAR(r.pressure_mPa, -1.143, 0.02 * 1.143);
}

TEST(CasimirPressure, PerfectConductorApproachesZeroTemperatureLimit) {
    const auto r = casimir_pressure(Geometry(1.0, 1.0), PerfectConductor{}, PerfectConductor{});
    EXPECT_NEAR(r.pressure_mPa, ideal_metal_pressure_mPa(1.0), 0.005 * std::abs(ideal_metal_pressure_mPa(1.0)));
}

TEST(CasimirPressure, VacuumIsExactlyZero) {
    for (const auto& pair : {std::pair<DielectricModel, DielectricModel>{Vacuum{}, au}, {au, Vacuum{}}, {Vacuum{}, Vacuum{}}}) {
        const auto r = casimir_pressure(Geometry(1.0, 300.0), pair.first, pair.second);
        EXPECT_EQ(r.pressure_mPa, 0.0);
        EXPECT_EQ(r.zero_mode_mPa, 0.0);
        EXPECT_TRUE(r.converged);
    }
}

TEST(CasimirPressure, BreakdownSumsToTotal) {
    const auto r = casimir_pressure(Geometry(0.7, 300.0), au, al);
    CompensatedSum<double> sum(r.zero_mode_mPa);
    for (double t : r.terms_mPa) {
        EXPECT_LT(t, 0.0);
        sum += t;
    }
    EXPECT_NEAR(sum.value(), r.pressure_mPa, 1e-14 * std::abs(r.pressure_mPa));
    EXPECT_EQ(r.terms_mPa.size(), r.n_terms_used);
    EXPECT_GE(r.n_terms_used, 5u);
}

TEST(CasimirPressure, PairSymmetryIsExact) {
    for (double a : {0.2, 1.5}) {
        for (double t : {1.0, 350.0}) {
            const Geometry g(a, t);
            EXPECT_EQ(casimir_pressure(g, au, al).pressure_mPa, casimir_pressure(g, al, au).pressure_mPa);
        }
    }
}

TEST(CasimirPressure, BoundsAndOrderingOnTableGrid) {
    for (double t : {1.0, 300.0}) {
        double previous = std::numeric_limits<double>::infinity();
        for (double a : fixtures::table_gaps_um) {
            const Geometry g(a, t);
            const auto p_au = casimir_pressure(g, au, au);
            const auto p_al = casimir_pressure(g, al, al);
            EXPECT_GE(std::abs(p_al.pressure_mPa), std::abs(p_au.pressure_mPa));
            EXPECT_GE(std::abs(p_au.pressure_mPa), std::abs(p_au.zero_mode_mPa));
            if (t == 1.0) {
                EXPECT_LE(std::abs(p_au.pressure_mPa), std::abs(ideal_metal_pressure_mPa(a)));
            }
            EXPECT_LT(std::abs(p_au.pressure_mPa), previous);
            previous = std::abs(p_au.pressure_mPa);
        }
    }
}

TEST(CasimirPressure, TermCountAtShortGapLowTemperature) {
    const auto r = casimir_pressure(Geometry(0.16, 1.0), au, au);
    EXPECT_GE(r.n_terms_used, 15000u);
    EXPECT_LE(r.n_terms_used, 40000u);
}

TEST(CasimirPressure, TermBudgetExceeded) {
    QuadratureSpec spec;
    spec.max_terms = 20;
    try {
        casimir_pressure(Geometry(0.5, 1.0), au, au, spec);
        FAIL() << "expected SummationError";
    } catch (const SummationError& e) {
        EXPECT_EQ(e.partial().n_terms_used, 20u);
        EXPECT_FALSE(e.partial().converged);
        EXPECT_LT(e.partial().pressure_mPa, 0.0);
    }
}

TEST(CasimirPressure, RejectsInvalidSpec) {
    QuadratureSpec spec;
    spec.sum_rel_tol = 0.0;
    EXPECT_THROW(casimir_pressure(Geometry(1.0, 300.0), au, au, spec), DomainError);
}

TEST(SumTermination, TailEstimate) {
    QuadratureSpec spec;
    spec.sum_rel_tol = 1e-8;
    double tail = -1.0;
    // ratio 0.5: tail = term
    EXPECT_TRUE(detail::sum_has_converged(2e-9, 1e-9, 1.0, spec, tail));
    EXPECT_DOUBLE_EQ(tail, 1e-9);
    // slow decay: last term small but tail too large
    EXPECT_FALSE(detail::sum_has_converged(1.0001e-9, 1e-9, 1.0, spec, tail));
    EXPECT_FALSE(detail::sum_has_converged(1e-9, 2e-9, 1.0, spec, tail));
    EXPECT_TRUE(detail::sum_has_converged(0.0, 0.0, 0.0, spec, tail));
}
