// casimir: Lifshitz pressure, table reproduction, entropy and
// Kramers-Kronig ingestion from the command line.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir/cli.hpp"

namespace {

using namespace casimir;
using namespace casimir::cli;

struct CommonFlags {
    std::string pair;
    std::string gaps;
    std::string temperatures;
    double int_tol = 1e-12;
    double sum_tol = 1e-8;
    std::size_t max_terms = 0;
    std::string format;
    std::string materials;
    std::string eps1;
    std::string eps3;
    std::string nu_model;
    double theta = 175.0;
    std::string config;

    CLI::Option* o_pair = nullptr;
    CLI::Option* o_gaps = nullptr;
    CLI::Option* o_temps = nullptr;
    CLI::Option* o_int_tol = nullptr;
    CLI::Option* o_sum_tol = nullptr;
    CLI::Option* o_max_terms = nullptr;
    CLI::Option* o_format = nullptr;
    CLI::Option* o_materials = nullptr;
    CLI::Option* o_eps1 = nullptr;
    CLI::Option* o_eps3 = nullptr;
    CLI::Option* o_nu_model = nullptr;
    CLI::Option* o_theta = nullptr;

    void attach(CLI::App* app) {
        o_pair = app->add_option("--pair", pair, "material pair m1,m3 (labels, 'vacuum' or 'perfect')");
        o_gaps = app->add_option("--a", gaps, "gap widths in um, comma separated");
        o_temps = app->add_option("--T", temperatures, "temperatures in K, comma separated");
        o_int_tol = app->add_option("--int-tol", int_tol, "relative tolerance of each y-integral (default 1e-12)");
        o_sum_tol = app->add_option("--sum-tol", sum_tol, "relative tolerance of the Matsubara sum (default 1e-8)");
        o_max_terms = app->add_option("--max-terms", max_terms, "cap on the number of Matsubara terms");
        o_format = app->add_option("--format", format, "csv|json|pretty");
        o_materials = app->add_option("--materials", materials, "JSON material database");
        o_eps1 = app->add_option("--eps1", eps1, "tabulated eps(i zeta) CSV for medium 1");
        o_eps3 = app->add_option("--eps3", eps3, "tabulated eps(i zeta) CSV for medium 3");
        o_nu_model = app->add_option("--nu-model", nu_model, "fixed|bloch-gruneisen");
        o_theta = app->add_option("--theta", theta, "Bloch-Gruneisen temperature in K (default 175)");
        app->add_option("--config", config, "JSON config file; flags take precedence");
    }

    // Flags > config file > built-in defaults.
    [[nodiscard]] RunConfig resolve() const {
        RunConfig cfg;
        if (!config.empty()) {
            apply_config_file(cfg, config);
        }
        if (o_pair->count()) {
            std::tie(cfg.material1, cfg.material3) = parse_pair(pair);
        }
        if (o_gaps->count()) {
            cfg.gaps_um = parse_list(gaps);
        }
        if (o_temps->count()) {
            cfg.temperatures_K = parse_list(temperatures);
        }
        if (o_int_tol->count()) {
            cfg.spec.integral_rel_tol = int_tol;
        }
        if (o_sum_tol->count()) {
            cfg.spec.sum_rel_tol = sum_tol;
        }
        if (o_max_terms->count()) {
            cfg.spec.max_terms = max_terms;
        }
        if (o_format->count()) {
            cfg.format = parse_format(format);
        }
        if (o_materials->count()) {
            cfg.materials_path = materials;
        }
        if (o_eps1->count()) {
            cfg.eps1_path = eps1;
        }
        if (o_eps3->count()) {
            cfg.eps3_path = eps3;
        }
        if (o_nu_model->count()) {
            cfg.relaxation.model = parse_nu_model(nu_model);
        }
        if (o_theta->count()) {
            cfg.relaxation.bloch_gruneisen.theta_K = theta;
        }
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-temperature Casimir pressure between parallel metal plates"};
    app.require_subcommand(1);

    CommonFlags pressure_flags;
    auto* pressure = app.add_subcommand("pressure", "pressure at each (a, T)");
    pressure_flags.attach(pressure);

    CommonFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "CSV stream over the a x T grid");
    sweep_flags.attach(sweep);

    CommonFlags entropy_flags;
    EntropyOptions entropy_options;
    auto* entropy_cmd = app.add_subcommand("entropy", "entropy S = -dF/dT and the Nernst check");
    entropy_flags.attach(entropy_cmd);
    entropy_cmd->add_option("--fd-step", entropy_options.fd_step_K, "finite-difference step in K (default 0.5)");
    entropy_cmd->add_flag("--step-halving", entropy_options.step_halving, "also report with half the step");
    bool skip_nernst = false;
    entropy_cmd->add_flag("--no-nernst", skip_nernst, "skip the Nernst verdict");

    TableOptions table_options;
    std::vector<int> table_ids;
    bool all_tables = false;
    std::string table_format = "pretty";
    std::string table_materials;
    auto* table = app.add_subcommand("table", "recompute published tables and compare");
    table->add_option("ids", table_ids, "table ids 1-6");
    table->add_flag("--all", all_tables, "all six tables");
    table->add_option("--short-tol", table_options.profile.short_range, "relative limit below 0.5 um (default 0.05)");
    table->add_option("--long-tol", table_options.profile.long_range, "relative limit from 0.5 um (default 0.02)");
    table->add_option("--int-tol", table_options.spec.integral_rel_tol, "integral tolerance");
    table->add_option("--sum-tol", table_options.spec.sum_rel_tol, "sum tolerance");
    table->add_option("--format", table_format, "csv|json|pretty");
    table->add_option("--materials", table_materials, "JSON material database");

    std::string kk_input;
    std::string kk_output;
    std::string kk_zeta;
    std::string kk_range;
    auto* kk = app.add_subcommand("kk", "Kramers-Kronig: eps''(omega) CSV -> eps(i zeta) CSV");
    kk->add_option("--input", kk_input, "optical data CSV (omega_rad_s,eps_imag)")->required();
    kk->add_option("--output", kk_output, "output CSV (zeta_rad_s,eps_izeta); stdout if omitted");
    auto* zeta_opt = kk->add_option("--zeta", kk_zeta, "zeta grid in rad/s, comma separated");
    auto* range_opt = kk->add_option("--zeta-range", kk_range, "log grid min,max,count in rad/s");
    zeta_opt->excludes(range_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? success : input_error;
    }

    try {
        if (*pressure) {
            return cmd_pressure(pressure_flags.resolve(), std::cout, std::cerr);
        }
        if (*sweep) {
            return cmd_sweep(sweep_flags.resolve(), std::cout, std::cerr);
        }
        if (*entropy_cmd) {
            entropy_options.nernst = !skip_nernst;
            return cmd_entropy(entropy_flags.resolve(), entropy_options, std::cout, std::cerr);
        }
        if (*table) {
            table_options.ids = all_tables ? std::vector<int>{1, 2, 3, 4, 5, 6} : table_ids;
            table_options.format = parse_format(table_format);
            if (!table_materials.empty()) {
                table_options.materials_path = table_materials;
            }
            return cmd_table(table_options, std::cout, std::cerr);
        }
        if (*kk) {
            const auto samples = read_optical_csv(kk_input);
            std::vector<double> grid;
            if (!kk_zeta.empty()) {
                grid = parse_list(kk_zeta);
            } else if (!kk_range.empty()) {
                const auto r = parse_list(kk_range);
                if (r.size() != 3 || r[2] < 2) {
                    throw InputError("--zeta-range expects min,max,count");
                }
                grid = log_grid(r[0], r[1], static_cast<std::size_t>(r[2]));
            } else {
                throw InputError("kk needs --zeta or --zeta-range");
            }
            if (kk_output.empty()) {
                return cmd_kk(samples, grid, std::cout, std::cerr);
            }
            std::ofstream out(kk_output);
            if (!out) {
                throw InputError("cannot write " + kk_output);
            }
            return cmd_kk(samples, grid, out, std::cerr);
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    }
    return input_error;
}
