#pragma once

// Published pressure magnitudes (mPa) for six material pairs on a 12 x 3
// (gap, temperature) grid. Values are stored exactly as printed.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace casimir::fixtures {

inline constexpr std::array<double, 12> table_gaps_um = {0.16, 0.2, 0.4, 0.5, 0.7, 1.0,
                                                         1.5,  2.0, 2.5, 3.0, 3.5, 4.0};
inline constexpr std::array<double, 3> table_temperatures_K = {1.0, 300.0, 350.0};

/// A printed value that is known to be a misprint, with the value used in
/// comparisons instead.
struct Correction {
    std::size_t gap_index;
    std::size_t temperature_index;
    double corrected_mPa;
    const char* note;
};

struct TableFixture {
    int id;
    const char* material1;
    const char* material3;
    /// [gap][temperature], magnitudes in mPa, as printed.
    std::array<std::array<double, 3>, 12> printed_mPa;
    std::optional<Correction> correction;

    [[nodiscard]] bool is_corrected(std::size_t gap_index, std::size_t temperature_index) const {
        return correction && correction->gap_index == gap_index &&
               correction->temperature_index == temperature_index;
    }

    /// The value a computed cell is compared against.
    [[nodiscard]] double reference_mPa(std::size_t gap_index, std::size_t temperature_index) const {
        if (is_corrected(gap_index, temperature_index)) {
            return correction->corrected_mPa;
        }
        return printed_mPa.at(gap_index).at(temperature_index);
    }
};

// clang-format off
inline const std::array<TableFixture, 6> tables = {{
    {1, "Au", "Au", {{
        {1144, 1127, 1124},
        {508.2, 497.8, 495.7},
        {38.61, 36.70, 36.35},
        {16.56, 15.49, 15.30},
        {4.556, 4.127, 4.052},
        {1.143, 0.9852, 0.9590},
        {0.2342, 0.1856, 0.1787},
        {7.549e-2, 5.550e-2, 5.344e-2},
        {3.128e-2, 2.176e-2, 2.135e-2},
        {1.520e-2, 1.033e-2, 1.049e-2},
        {8.252e-3, 5.674e-3, 5.990e-3},
        {4.858e-3, 3.481e-3, 3.804e-3},
    }}, std::nullopt},
    {2, "Cu", "Cu", {{
        {1141, 1123, 1120},
        {507.4, 496.8, 49.47},
        {38.63, 36.69, 36.34},
        {16.57, 15.49, 15.30},
        {4.560, 4.127, 4.052},
        {1.145, 0.9854, 0.9592},
        {0.2345, 0.1857, 0.1787},
        {7.559e-2, 5.551e-2, 5.345e-2},
        {3.132e-2, 2.177e-2, 2.135e-2},
        {1.522e-2, 1.033e-2, 1.049e-2},
        {8.263e-3, 5.674e-3, 5.990e-3},
        {4.864e-3, 3.481e-3, 3.805e-3},
    }}, Correction{1, 2, 494.7, "printed 49.47; the row 507.4, 496.8 implies a dropped digit"}},
    {3, "Al", "Al", {{
        {1290, 1271, 1267},
        {565.3, 553.9, 551.6},
        {41.17, 39.15, 38.77},
        {17.45, 16.34, 16.13},
        {4.734, 4.290, 4.212},
        {1.175, 1.012, 0.9853},
        {0.2383, 0.1889, 0.1818},
        {7.648e-2, 5.617e-2, 5.404e-2},
        {3.160e-2, 2.195e-2, 2.150e-2},
        {1.533e-2, 1.039e-2, 1.053e-2},
        {8.311e-3, 5.693e-3, 6.003e-3},
        {4.888e-3, 3.488e-3, 3.809e-3},
    }}, std::nullopt},
    {4, "Au", "Cu", {{
        {1143, 1125, 1122},
        {507.8, 497.3, 495.2},
        {38.62, 36.70, 36.34},
        {16.56, 15.49, 15.30},
        {4.558, 4.127, 4.052},
        {1.144, 0.9853, 0.9591},
        {0.2343, 0.1857, 0.1787},
        {7.554e-2, 5.550e-2, 5.345e-2},
        {3.130e-2, 2.177e-2, 2.135e-2},
        {1.521e-2, 1.033e-2, 1.049e-2},
        {8.258e-3, 5.674e-3, 5.990e-3},
        {4.861e-3, 3.481e-3, 3.805e-3},
    }}, std::nullopt},
    {5, "Au", "Al", {{
        {1213, 1195, 1191},
        {535.4, 524.5, 522.3},
        {39.85, 37.89, 37.52},
        {16.99, 15.90, 15.70},
        {4.643, 4.207, 4.130},
        {1.159, 0.9986, 0.9720},
        {0.2362, 0.1873, 0.1802},
        {7.598e-2, 5.583e-2, 5.374e-2},
        {3.144e-2, 2.185e-2, 2.142e-2},
        {1.527e-2, 1.036e-2, 1.051e-2},
        {8.281e-3, 5.684e-3, 5.996e-3},
        {4.873e-3, 3.485e-3, 3.807e-3},
    }}, std::nullopt},
    {6, "Cu", "Al", {{
        {1211, 1193, 1189},
        {535.0, 524.0, 521.8},
        {39.86, 37.89, 37.52},
        {17.00, 15.90, 15.70},
        {4.646, 4.207, 4.130},
        {1.159, 0.9987, 0.9720},
        {0.2364, 0.1873, 0.1802},
        {7.603e-2, 5.584e-2, 5.375e-2},
        {3.146e-2, 2.186e-2, 2.143e-2},
        {1.528e-2, 1.036e-2, 1.051e-2},
        {8.287e-3, 5.684e-3, 5.997e-3},
        {4.876e-3, 3.485e-3, 3.807e-3},
    }}, std::nullopt},
}};
// clang-format on

inline const TableFixture& table(int id) {
    if (id < 1 || id > static_cast<int>(tables.size())) {
        throw std::out_of_range("no table " + std::to_string(id) + "; tables are numbered 1-6");
    }
    return tables[static_cast<std::size_t>(id - 1)];
}

/// Relative-deviation limits for comparing computed cells with the tables.
struct ToleranceProfile {
    double short_range = 0.05;
    double long_range = 0.02;
    /// Gaps strictly below this use `short_range`.
    double boundary_um = 0.5;

    [[nodiscard]] double limit(double gap_um) const { return gap_um < boundary_um ? short_range : long_range; }
};

}  // namespace casimir::fixtures
