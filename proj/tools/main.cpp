// haptosim command line: run / sweep / mms / lemma subcommands over one
// key = value config file. Any --section.key=value flag overrides the file.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haptosim/harness.hpp"
#include "haptosim/lemma.hpp"

namespace {

using namespace haptosim;

std::vector<std::string> collect_overrides(const std::vector<std::string>& extras) {
    std::vector<std::string> overrides;
    for (const std::string& e : extras) {
        if (e.rfind("--", 0) != 0 || e.find('=') == std::string::npos)
            throw ConfigError("unrecognized argument `" + e + "` (overrides look like --key=value)");
        overrides.push_back(e.substr(2));
    }
    return overrides;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides) {
    AppConfig cfg = load_config(config_path, overrides);
    ExitReport rep = run_simulation(cfg.run);
    std::cout << "status: " << to_string(rep.status) << "\n"
              << "output: " << rep.output_dir << "\n";
    return rep.exit_code;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::vector<double>& values, const std::vector<std::string>& overrides) {
    AppConfig cfg = load_config(config_path, overrides);
    SweepResult res = run_sweep(cfg.run, axis, values);
    std::printf("%-12s %-18s %-14s %s\n", "value", "status", "final_linf_u", "max_witness");
    for (const auto& r : res.rows)
        std::printf("%-12g %-18s %-14g %g\n", r.value,
                    r.error.empty() ? to_string(r.status) : "error", r.final_linf_u,
                    r.max_blowup_witness);
    std::cout << "wrote " << cfg.run.output_dir << "/sweep.csv\n";
    return 0;
}

int cmd_mms(const std::string& config_path, const std::vector<std::string>& overrides) {
    AppConfig cfg = load_config(config_path, overrides);
    MMSResult res = run_mms(cfg.mms, cfg.run.params, cfg.run.stepper, cfg.run.stencil);
    std::cout << res.table;
    return res.pass ? 0 : 1;
}

int cmd_lemma(const std::string& config_path, const std::vector<std::string>& overrides) {
    AppConfig cfg = load_config(config_path, overrides);
    const LemmaConstants& lc = cfg.lemma;
    std::printf("delta = %g\nchi = %g\nxi = %g\nc7 = %g\nc_delta_plus_1 = %g\n", lc.delta, lc.chi,
                lc.xi, lc.c7, lc.c_delta_plus_1);
    std::printf("a1 = %.17g\n", a1_coefficient(lc));
    try {
        HMinResult hm = h_min(lc);
        std::printf("y_star = %.17g\n", hm.y_star);
        std::printf("h_min = %.17g\n", hm.h_min);
        std::printf("h_min_oracle = %.17g\n", hm.h_min_oracle);
        std::printf("paper_formula_value = %.17g\n", hm.paper_formula_value);
        if (lc.xi > 0.0)
            std::printf("h_min_over_paper_formula = %.17g\n", hm.h_min / hm.paper_formula_value);
    } catch (const DegenerateDelta& e) {
        std::printf("h_min = degenerate (%s)\n", e.what());
    }
    if (lc.mu > 0.0) {
        auto p0 = feasible_p0(lc);
        if (p0) {
            std::printf("p0 = %.17g\n", p0->p0);
            std::printf("g_p0 = %.17g\n", p0->certificate);
            std::printf("g_1 = %.17g\n", feasibility_margin(lc, 1.0));
        } else {
            std::printf("p0 = none (numerical evaluation failed)\n");
        }
    } else {
        std::printf("p0 = infeasible (mu <= 0)\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemotaxis-haptotaxis invasion model simulator and verification harness"};
    app.require_subcommand(1);
    app.allow_extras();

    std::string config_path;
    std::string axis;
    std::vector<double> values;

    CLI::App* run = app.add_subcommand("run", "integrate one configured run");
    run->add_option("config", config_path, "config file")->required();
    run->allow_extras();

    CLI::App* sweep = app.add_subcommand("sweep", "independent runs along one parameter axis");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--axis", axis, "one of mu, chi, xi, eta")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->allow_extras();

    CLI::App* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    mms->add_option("config", config_path, "config file")->required();
    mms->allow_extras();

    CLI::App* lemma = app.add_subcommand("lemma", "minimization lemma and exponent feasibility report");
    lemma->add_option("config", config_path, "config file")->required();
    lemma->allow_extras();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, collect_overrides(run->remaining()));
        if (sweep->parsed())
            return cmd_sweep(config_path, axis, values, collect_overrides(sweep->remaining()));
        if (mms->parsed()) return cmd_mms(config_path, collect_overrides(mms->remaining()));
        if (lemma->parsed()) return cmd_lemma(config_path, collect_overrides(lemma->remaining()));
    } catch (const haptosim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
