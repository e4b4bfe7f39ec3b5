#pragma once

// Command implementations behind the `casimir` executable. Each command
// writes to a caller-supplied stream and returns the process exit code, so
// the same code paths are exercised by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "casimir/dielectric.hpp"
#include "casimir/fixtures.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/parallel.hpp"
#include "casimir/reproduce.hpp"
#include "casimir/thermo.hpp"

namespace casimir::cli {

enum ExitCode : int { success = 0, computational_failure = 1, tolerance_failure = 2, input_error = 3 };

enum class OutputFormat { csv, json, pretty };

struct RunConfig {
    std::string material1 = "Au";
    std::string material3 = "Au";
    std::vector<double> gaps_um;
    std::vector<double> temperatures_K;
    QuadratureSpec spec{};
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> materials_path;
    std::optional<std::string> eps1_path;
    std::optional<std::string> eps3_path;
    RelaxationOptions relaxation{};

    void validate() const {
        if (gaps_um.empty()) {
            throw InputError("no gap widths given (--a)");
        }
        if (temperatures_K.empty()) {
            throw InputError("no temperatures given (--T)");
        }
        for (double a : gaps_um) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw InputError("gap widths must be positive");
            }
        }
        for (double t : temperatures_K) {
            if (!(t > 0.0) || !std::isfinite(t)) {
                throw InputError("temperatures must be positive");
            }
        }
        if (!(spec.integral_rel_tol > 0.0) || !(spec.sum_rel_tol > 0.0)) {
            throw InputError("tolerances must be positive");
        }
    }
};

// ---------------------------------------------------------------------------
// Parsing helpers

inline std::vector<std::string> split(std::string_view text, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(detail::trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

inline double parse_number(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::logic_error&) {
        throw InputError("not a number: '" + text + "'");
    }
}

inline std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split(text)) {
        if (item.empty()) {
            throw InputError("empty entry in list '" + std::string(text) + "'");
        }
        out.push_back(parse_number(item));
    }
    return out;
}

inline std::pair<std::string, std::string> parse_pair(std::string_view text) {
    const auto parts = split(text);
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
        throw InputError("--pair expects two comma-separated materials, got '" + std::string(text) + "'");
    }
    return {parts[0], parts[1]};
}

inline OutputFormat parse_format(std::string_view text) {
    if (text == "csv") {
        return OutputFormat::csv;
    }
    if (text == "json") {
        return OutputFormat::json;
    }
    if (text == "pretty") {
        return OutputFormat::pretty;
    }
    throw InputError("unknown format '" + std::string(text) + "' (csv|json|pretty)");
}

inline RelaxationModel parse_nu_model(std::string_view text) {
    if (text == "fixed") {
        return RelaxationModel::fixed;
    }
    if (text == "bloch-gruneisen") {
        return RelaxationModel::bloch_gruneisen;
    }
    throw InputError("unknown nu model '" + std::string(text) + "' (fixed|bloch-gruneisen)");
}

/// Applies a JSON config document on top of `config`. Keys mirror the flags:
/// pair, a, T, int_tol, sum_tol, max_terms, format, materials, eps1, eps3,
/// nu_model, theta.
inline void apply_config_json(RunConfig& config, std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw InputError("config: expected a JSON object");
    }
    try {
        if (doc.contains("pair")) {
            std::tie(config.material1, config.material3) = parse_pair(doc["pair"].get<std::string>());
        }
        auto number_list = [](const nlohmann::json& v) {
            return v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
        };
        if (doc.contains("a")) {
            config.gaps_um = number_list(doc["a"]);
        }
        if (doc.contains("T")) {
            config.temperatures_K = number_list(doc["T"]);
        }
        if (doc.contains("int_tol")) {
            config.spec.integral_rel_tol = doc["int_tol"].get<double>();
        }
        if (doc.contains("sum_tol")) {
            config.spec.sum_rel_tol = doc["sum_tol"].get<double>();
        }
        if (doc.contains("max_terms")) {
            config.spec.max_terms = doc["max_terms"].get<std::size_t>();
        }
        if (doc.contains("format")) {
            config.format = parse_format(doc["format"].get<std::string>());
        }
        if (doc.contains("materials")) {
            config.materials_path = doc["materials"].get<std::string>();
        }
        if (doc.contains("eps1")) {
            config.eps1_path = doc["eps1"].get<std::string>();
        }
        if (doc.contains("eps3")) {
            config.eps3_path = doc["eps3"].get<std::string>();
        }
        if (doc.contains("nu_model")) {
            config.relaxation.model = parse_nu_model(doc["nu_model"].get<std::string>());
        }
        if (doc.contains("theta")) {
            config.relaxation.bloch_gruneisen.theta_K = doc["theta"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
}

inline void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    apply_config_json(config, buffer.str());
}

struct ResolvedModels {
    DielectricModel model1;
    DielectricModel model3;
};

/// Loads materials and tables. Unknown labels fail here, before any computation.
inline ResolvedModels resolve_models(const RunConfig& config) {
    const auto db = config.materials_path ? MaterialDatabase::from_file(*config.materials_path)
                                          : MaterialDatabase::builtin();
    auto resolve = [&](const std::string& label, const std::optional<std::string>& table) -> DielectricModel {
        if (!table) {
            return model_from_label(label, db);
        }
        return TabulatedModel{read_permittivity_csv(*table), db.at(label)};
    };
    return {resolve(config.material1, config.eps1_path), resolve(config.material3, config.eps3_path)};
}

// ---------------------------------------------------------------------------
// Output

inline std::string num(double v) {
    if (v == 0.0) {
        v = 0.0;  // no "-0"
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Rows of strings rendered as CSV, a JSON array of objects, or an aligned table.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& out, OutputFormat format) const {
        switch (format) {
            case OutputFormat::csv:
                write_csv_row(out, columns_);
                for (const auto& r : rows_) {
                    write_csv_row(out, r);
                }
                break;
            case OutputFormat::json: {
                auto doc = nlohmann::json::array();
                for (const auto& r : rows_) {
                    nlohmann::json obj = nlohmann::json::object();
                    for (std::size_t i = 0; i < columns_.size(); ++i) {
                        obj[columns_[i]] = json_value(r[i]);
                    }
                    doc.push_back(std::move(obj));
                }
                out << doc.dump(2) << '\n';
                break;
            }
            case OutputFormat::pretty: {
                std::vector<std::size_t> widths(columns_.size());
                for (std::size_t i = 0; i < columns_.size(); ++i) {
                    widths[i] = columns_[i].size();
                    for (const auto& r : rows_) {
                        widths[i] = std::max(widths[i], r[i].size());
                    }
                }
                auto line = [&](const std::vector<std::string>& r) {
                    for (std::size_t i = 0; i < r.size(); ++i) {
                        out << (i ? "  " : "") << std::string(widths[i] - r[i].size(), ' ') << r[i];
                    }
                    out << '\n';
                };
                line(columns_);
                std::size_t total = 0;
                for (auto w : widths) {
                    total += w + 2;
                }
                out << std::string(total - 2, '-') << '\n';
                for (const auto& r : rows_) {
                    line(r);
                }
                break;
            }
        }
    }

private:
    static void write_csv_row(std::ostream& out, const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }

    static nlohmann::json json_value(const std::string& cell) {
        if (cell == "true") {
            return true;
        }
        if (cell == "false") {
            return false;
        }
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end == cell.c_str() + cell.size()) {
            return v;
        }
        return cell;
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// pressure / sweep

struct PressureRow {
    double gap_um = 0.0;
    double temperature_K = 0.0;
    PressureResult result;
    std::string error;
};

inline const std::vector<std::string> pressure_columns = {"a_um",          "T_K",     "pressure_mPa",
                                                          "zero_mode_mPa", "n_terms", "converged"};

inline std::vector<std::string> pressure_cells(const PressureRow& row) {
    return {num(row.gap_um),
            num(row.temperature_K),
            num(row.result.pressure_mPa),
            num(row.result.zero_mode_mPa),
            std::to_string(row.result.n_terms_used),
            row.result.converged && row.error.empty() ? "true" : "false"};
}

inline PressureRow compute_row(double gap_um, double temperature_K, const ResolvedModels& models,
                               const RunConfig& config) {
    PressureRow row;
    row.gap_um = gap_um;
    row.temperature_K = temperature_K;
    try {
        row.result = casimir_pressure(Geometry(gap_um, temperature_K),
                                      model_at_temperature(models.model1, temperature_K, config.relaxation),
                                      model_at_temperature(models.model3, temperature_K, config.relaxation),
                                      config.spec);
    } catch (const SummationError& e) {
        row.result = e.partial();
        row.result.converged = false;
        row.error = e.what();
    }
    return row;
}

/// Computes every (a, T) cell concurrently; `emit` sees rows in (a, T) order
/// as soon as each prefix is complete.
template <typename Emit>
bool compute_grid(const RunConfig& config, const ResolvedModels& models, Emit&& emit) {
    const std::size_t n_t = config.temperatures_K.size();
    const std::size_t n = config.gaps_um.size() * n_t;
    std::vector<std::optional<PressureRow>> rows(n);
    std::mutex mutex;
    std::size_t next_to_emit = 0;
    bool all_ok = true;
    parallel_for(n, [&](std::size_t k) {
        auto row = compute_row(config.gaps_um[k / n_t], config.temperatures_K[k % n_t], models, config);
        std::lock_guard lock(mutex);
        rows[k] = std::move(row);
        while (next_to_emit < n && rows[next_to_emit]) {
            const auto& r = *rows[next_to_emit];
            all_ok = all_ok && r.error.empty() && r.result.converged;
            emit(r);
            ++next_to_emit;
        }
    });
    return all_ok;
}

inline int cmd_pressure(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        const auto models = resolve_models(config);
        Table table(pressure_columns);
        std::vector<std::string> failures;
        const bool ok = compute_grid(config, models, [&](const PressureRow& row) {
            table.add(pressure_cells(row));
            if (!row.error.empty()) {
                failures.push_back(row.error);
            }
        });
        table.write(out, config.format);
        for (const auto& f : failures) {
            err << "error: " << f << '\n';
        }
        return ok ? success : computational_failure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    }
}

/// Always CSV; rows are written as they complete, failures stay in-stream.
inline int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        const auto models = resolve_models(config);
        Table header(pressure_columns);
        header.write(out, OutputFormat::csv);
        const bool ok = compute_grid(config, models, [&](const PressureRow& row) {
            const auto cells = pressure_cells(row);
            for (std::size_t i = 0; i < cells.size(); ++i) {
                out << (i ? "," : "") << cells[i];
            }
            out << '\n' << std::flush;
            if (!row.error.empty()) {
                err << "error: a=" << num(row.gap_um) << " T=" << num(row.temperature_K) << ": " << row.error
                    << '\n';
            }
        });
        return ok ? success : computational_failure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    }
}

// ---------------------------------------------------------------------------
// table

struct TableOptions {
    std::vector<int> ids;
    fixtures::ToleranceProfile profile{};
    QuadratureSpec spec{};
    OutputFormat format = OutputFormat::pretty;
    std::optional<std::string> materials_path;
};

inline int cmd_table(const TableOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (options.ids.empty()) {
            throw InputError("no table ids given");
        }
        for (int id : options.ids) {
            if (id < 1 || id > 6) {
                throw InputError("table ids are 1-6, got " + std::to_string(id));
            }
        }
        const auto db = options.materials_path ? MaterialDatabase::from_file(*options.materials_path)
                                               : MaterialDatabase::builtin();
        bool all_within = true;
        bool computed = true;
        Table table({"table", "pair", "a_um", "T_K", "printed_mPa", "reference_mPa", "computed_mPa", "rel_dev", "limit",
                     "status"});
        for (int id : options.ids) {
            const auto& fixture = fixtures::table(id);
            const auto cmp = compare_table(fixture, db, options.spec, options.profile);
            for (const auto& c : cmp.cells) {
                std::string status = c.within() ? "ok" : (c.error.empty() ? "FAIL" : "ERROR");
                if (c.corrected) {
                    status += " (corrected)";
                }
                table.add({std::to_string(id), cmp.material1 + "-" + cmp.material3, num(c.gap_um),
                           num(c.temperature_K), num(c.printed_mPa), num(c.reference_mPa), num(c.computed_mPa),
                           num(c.relative_deviation), num(c.limit), status});
                if (!c.error.empty()) {
                    computed = false;
                    err << "error: table " << id << " a=" << num(c.gap_um) << " T=" << num(c.temperature_K) << ": "
                        << c.error << '\n';
                } else if (!c.within()) {
                    all_within = false;
                    err << "out of tolerance: table " << id << " (" << cmp.material1 << "-" << cmp.material3
                        << ") a=" << num(c.gap_um) << " um T=" << num(c.temperature_K)
                        << " K: computed |P|=" << num(std::abs(c.computed_mPa)) << " mPa vs " << num(c.reference_mPa)
                        << " mPa, deviation " << num(100.0 * c.relative_deviation) << "% > "
                        << num(100.0 * c.limit) << "%\n";
                }
            }
        }
        table.write(out, options.format);
        if (!computed) {
            return computational_failure;
        }
        return all_within ? success : tolerance_failure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    }
}

// ---------------------------------------------------------------------------
// entropy

struct EntropyOptions {
    double fd_step_K = 0.5;
    bool step_halving = false;
    bool nernst = true;
};

inline int cmd_entropy(const RunConfig& config, const EntropyOptions& options, std::ostream& out,
                       std::ostream& err) {
    try {
        config.validate();
        const auto models = resolve_models(config);
        std::vector<double> steps{options.fd_step_K};
        if (options.step_halving) {
            steps.push_back(0.5 * options.fd_step_K);
        }

        Table rows({"a_um", "T_K", "fd_step_K", "S_J_m2K", "central_h", "central_h2"});
        const std::size_t n_t = config.temperatures_K.size();
        for (double step : steps) {
            std::vector<EntropyResult> results(config.gaps_um.size() * n_t);
            parallel_for(results.size(), [&](std::size_t k) {
                results[k] = entropy(Geometry(config.gaps_um[k / n_t], config.temperatures_K[k % n_t]),
                                     models.model1, models.model3, config.spec, step, config.relaxation);
            });
            for (std::size_t k = 0; k < results.size(); ++k) {
                const auto& r = results[k];
                rows.add({num(config.gaps_um[k / n_t]), num(r.temperature_K), num(r.fd_step_K), num(r.entropy_J_m2K),
                          num(r.central_full_step), num(r.central_half_step)});
            }
        }
        rows.write(out, config.format);

        if (!options.nernst) {
            return success;
        }
        bool all_pass = true;
        std::vector<NernstReport> reports(config.gaps_um.size());
        parallel_for(reports.size(), [&](std::size_t i) {
            reports[i] = nernst_check(config.gaps_um[i], models.model1, models.model3, config.spec, options.fd_step_K,
                                      config.relaxation);
        });
        Table verdicts({"a_um", "S_1K", "S_2K", "S_4K", "S_8K", "S_300K", "threshold", "monotone", "below_threshold",
                        "nernst"});
        for (const auto& r : reports) {
            std::vector<std::string> cells{num(r.gap_um)};
            for (const auto& s : r.low_temperature) {
                cells.push_back(num(s.entropy_J_m2K));
            }
            cells.push_back(num(r.room_temperature.entropy_J_m2K));
            cells.push_back(num(r.threshold));
            cells.push_back(r.monotone ? "true" : "false");
            cells.push_back(r.below_threshold ? "true" : "false");
            cells.push_back(r.passed() ? "pass" : "fail");
            verdicts.add(std::move(cells));
            all_pass = all_pass && r.passed();
        }
        out << '\n';
        verdicts.write(out, config.format);
        return all_pass ? success : tolerance_failure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const FreeEnergyError& e) {
        err << "error: " << e.what() << '\n';
        return computational_failure;
    }
}

// ---------------------------------------------------------------------------
// kk

/// n log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw InputError("zeta range needs 0 < min < max and at least two points");
    }
    std::vector<double> out(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo * std::exp(step * static_cast<double>(i));
    }
    out.back() = hi;
    return out;
}

inline int cmd_kk(const std::vector<OpticalSample>& samples, const std::vector<double>& zeta_grid_rad_s,
                  std::ostream& out, std::ostream& err) {
    try {
        if (zeta_grid_rad_s.empty()) {
            throw InputError("empty zeta grid");
        }
        for (std::size_t i = 0; i < zeta_grid_rad_s.size(); ++i) {
            if (!(zeta_grid_rad_s[i] > 0.0) || (i > 0 && !(zeta_grid_rad_s[i] > zeta_grid_rad_s[i - 1]))) {
                throw InputError("zeta grid must be positive and strictly ascending");
            }
        }
        std::vector<PermittivitySample> table(zeta_grid_rad_s.size());
        parallel_for(table.size(), [&](std::size_t i) {
            table[i] = {zeta_grid_rad_s[i], kramers_kronig_transform(samples, zeta_grid_rad_s[i])};
        });
        write_permittivity_csv(out, table);
        return success;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return input_error;
    }
}

}  // namespace casimir::cli
