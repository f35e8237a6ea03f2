#pragma once

#include <string>
#include <vector>

#include "haptosim/lemma.hpp"
#include "haptosim/model.hpp"
#include "haptosim/stepper.hpp"

namespace haptosim {

enum class InitialKind { Constant, GaussianBump, File };

struct InitialData {
    InitialKind kind = InitialKind::Constant;
    // constant
    double u = 1.0, v = 1.0, w = 0.0;
    // gaussian_bump: base + amp * exp(-r^2 / (2 width^2))
    double center_x = 0.5, center_y = 0.5, width = 0.15;
    double base_u = 0.0, base_v = 0.0, base_w = 0.0;
    double amp_u = 1.0, amp_v = 0.5, amp_w = 0.8;
    // file: snapshot prefix, reads <path>_u.f64 etc.
    std::string path;
    /// Seeded smooth cosine-series perturbation added to all three fields,
    /// nonnegative by construction.
    double perturb_amplitude = 0.0;
};

enum class DtLaw { Fixed, ProportionalToH, ProportionalToH2 };

struct MMSConfig {
    std::vector<std::pair<int, int>> grid_levels = {{32, 32}, {64, 64}, {128, 128}};
    DtLaw dt_law = DtLaw::ProportionalToH2;
    double dt_coeff = 4.0;  ///< dt = coeff * h^pow (or dt itself for Fixed)
    double t_end = 0.5;
    std::string manufactured_fields = "trig";
    double slope_min = -1.0;  ///< negative: pick 1.9 / 0.9 / 0 by dt_law
};

struct RunConfig {
    ModelParams params;
    Grid2D grid = Grid2D(64, 64, 1.0 / 64, 1.0 / 64);
    StepperConfig stepper;
    StencilConfig stencil;
    InitialData initial;
    double t_end = 1.0;
    double sample_every = 0.1;
    std::vector<double> exponents = {2.0};
    std::string output_dir = "out";
    unsigned long seed = 0;
    bool solve_transformed = false;
    std::vector<double> snapshot_times;  ///< empty: final state only
};

/// Everything a config file can define; subcommands read their section.
struct AppConfig {
    RunConfig run;
    MMSConfig mms;
    LemmaConstants lemma;
};

/// Parse line-oriented `section.key = value` text. Unknown keys, duplicate
/// keys, malformed lines, and domain violations raise ConfigError naming the
/// line or key. `overrides` are extra `key=value` entries (command-line
/// flags) that replace file values.
AppConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});

/// parse_config on the contents of a file.
AppConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

/// Materialize the configured initial data on the grid; throws
/// InvalidInitialData if any field ends up negative.
State build_initial_state(const InitialData& init, const Grid2D& g, unsigned long seed);

} // namespace haptosim
