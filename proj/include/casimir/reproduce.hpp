#pragma once

// Recomputes the published tables with the built-in Drude parameters and
// compares cell by cell.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "casimir/dielectric.hpp"
#include "casimir/fixtures.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

struct CellComparison {
    double gap_um = 0.0;
    double temperature_K = 0.0;
    double printed_mPa = 0.0;
    double reference_mPa = 0.0;
    bool corrected = false;
    /// Signed, as computed.
    double computed_mPa = 0.0;
    double zero_mode_mPa = 0.0;
    std::size_t n_terms = 0;
    bool converged = false;
    double relative_deviation = 0.0;
    double limit = 0.0;
    std::string error;

    [[nodiscard]] bool within() const { return converged && error.empty() && relative_deviation <= limit; }
};

struct TableComparison {
    int id = 0;
    std::string material1;
    std::string material3;
    std::vector<CellComparison> cells;

    [[nodiscard]] bool all_within() const {
        for (const auto& c : cells) {
            if (!c.within()) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] const CellComparison& cell(std::size_t gap_index, std::size_t temperature_index) const {
        return cells.at(gap_index * fixtures::table_temperatures_K.size() + temperature_index);
    }
};

inline TableComparison compare_table(const fixtures::TableFixture& fixture, const MaterialDatabase& db,
                                     const QuadratureSpec& spec = {}, const fixtures::ToleranceProfile& profile = {},
                                     const RelaxationOptions& relaxation = {}) {
    const auto& gaps = fixtures::table_gaps_um;
    const auto& temps = fixtures::table_temperatures_K;
    const DielectricModel model1 = DrudeModel{db.at(fixture.material1)};
    const DielectricModel model3 = DrudeModel{db.at(fixture.material3)};

    TableComparison out;
    out.id = fixture.id;
    out.material1 = fixture.material1;
    out.material3 = fixture.material3;
    out.cells.resize(gaps.size() * temps.size());

    parallel_for(out.cells.size(), [&](std::size_t k) {
        const std::size_t i = k / temps.size();
        const std::size_t j = k % temps.size();
        auto& cell = out.cells[k];
        cell.gap_um = gaps[i];
        cell.temperature_K = temps[j];
        cell.printed_mPa = fixture.printed_mPa[i][j];
        cell.reference_mPa = fixture.reference_mPa(i, j);
        cell.corrected = fixture.is_corrected(i, j);
        cell.limit = profile.limit(gaps[i]);
        try {
            const auto r = casimir_pressure(Geometry(gaps[i], temps[j]), model_at_temperature(model1, temps[j], relaxation),
                                            model_at_temperature(model3, temps[j], relaxation), spec);
            cell.computed_mPa = r.pressure_mPa;
            cell.zero_mode_mPa = r.zero_mode_mPa;
            cell.n_terms = r.n_terms_used;
            cell.converged = r.converged;
            cell.relative_deviation = std::abs(std::abs(r.pressure_mPa) - cell.reference_mPa) / cell.reference_mPa;
        } catch (const SummationError& e) {
            cell.computed_mPa = e.partial().pressure_mPa;
            cell.n_terms = e.partial().n_terms_used;
            cell.converged = false;
            cell.error = e.what();
        }
    });
    return out;
}

}  // namespace casimir
