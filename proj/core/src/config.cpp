#include "haptosim/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <type_traits>

#include "haptosim/snapshot_io.hpp"

namespace haptosim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KvStore {
    // key -> (value, consumed)
    std::map<std::string, std::pair<std::string, bool>> kv;

    void insert_line(const std::string& key, const std::string& value, int line) {
        if (kv.count(key))
            throw ConfigError("config line " + std::to_string(line) + ": duplicate key `" + key + "`");
        kv[key] = {value, false};
    }
    void override_kv(const std::string& key, const std::string& value) {
        kv[key] = {value, false};
    }
    bool has(const std::string& key) const { return kv.count(key) != 0; }
    std::string take(const std::string& key) {
        auto it = kv.find(key);
        it->second.second = true;
        return it->second.first;
    }
};

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw ConfigError("config key `" + key + "`: expected a finite number, got `" + v + "`");
    return x;
}

long parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key `" + key + "`: expected an integer, got `" + v + "`");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key `" + key + "`: expected true/false, got `" + v + "`");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

template <class T>
void read_num(KvStore& kv, const std::string& key, T& target) {
    if (!kv.has(key)) return;
    if constexpr (std::is_same_v<T, double>)
        target = parse_double(key, kv.take(key));
    else
        target = static_cast<T>(parse_int(key, kv.take(key)));
}

void require_nonneg(const std::string& key, double x) {
    if (x < 0.0) throw ConfigError("config key `" + key + "`: must be >= 0");
}
void require_pos(const std::string& key, double x) {
    if (!(x > 0.0)) throw ConfigError("config key `" + key + "`: must be > 0");
}

} // namespace

AppConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    KvStore kv;
    {
        std::stringstream ss(text);
        std::string raw;
        int line = 0;
        while (std::getline(ss, raw)) {
            ++line;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw = raw.substr(0, hash);
            raw = trim(raw);
            if (raw.empty()) continue;
            const auto eq = raw.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line) + ": expected `key = value`");
            const std::string key = trim(raw.substr(0, eq));
            const std::string value = trim(raw.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError("config line " + std::to_string(line) + ": empty key or value");
            if (key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_.") != std::string::npos)
                throw ConfigError("config line " + std::to_string(line) + ": bad key `" + key + "`");
            kv.insert_line(key, value, line);
        }
    }
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override `" + ov + "`: expected key=value");
        kv.override_kv(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }

    AppConfig cfg;
    RunConfig& rc = cfg.run;

    // params
    read_num(kv, "params.chi", rc.params.chi);
    read_num(kv, "params.xi", rc.params.xi);
    read_num(kv, "params.mu", rc.params.mu);
    read_num(kv, "params.eta", rc.params.eta);
    read_num(kv, "params.tau", rc.params.tau);
    require_nonneg("params.chi", rc.params.chi);
    require_nonneg("params.xi", rc.params.xi);
    require_nonneg("params.mu", rc.params.mu);
    require_nonneg("params.eta", rc.params.eta);
    require_pos("params.tau", rc.params.tau);

    // grid
    int nx = 64, ny = 64;
    read_num(kv, "grid.nx", nx);
    read_num(kv, "grid.ny", ny);
    double hx = kv.has("grid.hx") ? parse_double("grid.hx", kv.take("grid.hx")) : 1.0 / nx;
    double hy = kv.has("grid.hy") ? parse_double("grid.hy", kv.take("grid.hy")) : 1.0 / ny;
    double ox = 0.0, oy = 0.0;
    read_num(kv, "grid.origin_x", ox);
    read_num(kv, "grid.origin_y", oy);
    if (nx < 3 || ny < 3) throw ConfigError("config key `grid.nx`/`grid.ny`: must be >= 3");
    require_pos("grid.hx", hx);
    require_pos("grid.hy", hy);
    rc.grid = Grid2D(nx, ny, hx, hy, ox, oy);

    // stepper
    StepperConfig& st = rc.stepper;
    read_num(kv, "stepper.dt_init", st.dt_init);
    read_num(kv, "stepper.dt_min", st.dt_min);
    read_num(kv, "stepper.cfl_safety", st.cfl_safety);
    read_num(kv, "stepper.cg_rel_tol", st.cg_rel_tol);
    read_num(kv, "stepper.cg_max_iter", st.cg_max_iter);
    read_num(kv, "stepper.positivity_tol", st.positivity_tol);
    read_num(kv, "stepper.blowup_threshold", st.blowup_threshold);
    if (kv.has("stepper.positivity_mode")) {
        const std::string m = kv.take("stepper.positivity_mode");
        if (m == "clamp_report")
            st.positivity_mode = PositivityMode::ClampReport;
        else if (m == "reject")
            st.positivity_mode = PositivityMode::Reject;
        else
            throw ConfigError("config key `stepper.positivity_mode`: unknown mode `" + m + "`");
    }
    if (kv.has("stepper.w_update")) {
        const std::string m = kv.take("stepper.w_update");
        if (m == "explicit")
            st.w_update = WUpdate::Explicit;
        else if (m == "exact_logistic")
            st.w_update = WUpdate::ExactLogistic;
        else
            throw ConfigError("config key `stepper.w_update`: unknown mode `" + m + "`");
    }
    if (kv.has("stepper.v_source")) {
        const std::string m = kv.take("stepper.v_source");
        if (m == "lagged_u")
            st.v_source = VSource::LaggedU;
        else if (m == "fresh_u")
            st.v_source = VSource::FreshU;
        else
            throw ConfigError("config key `stepper.v_source`: unknown mode `" + m + "`");
    }
    st.validate();

    // stencil
    if (kv.has("stencil.face_averaging")) {
        const std::string m = kv.take("stencil.face_averaging");
        if (m == "upwind")
            rc.stencil.face_averaging = FaceAveraging::Upwind;
        else if (m == "central")
            rc.stencil.face_averaging = FaceAveraging::Central;
        else
            throw ConfigError("config key `stencil.face_averaging`: unknown mode `" + m + "`");
    }

    // initial data
    if (kv.has("initial.kind")) {
        const std::string m = kv.take("initial.kind");
        if (m == "constant")
            rc.initial.kind = InitialKind::Constant;
        else if (m == "gaussian_bump")
            rc.initial.kind = InitialKind::GaussianBump;
        else if (m == "file")
            rc.initial.kind = InitialKind::File;
        else
            throw ConfigError("config key `initial.kind`: unknown kind `" + m + "`");
    }
    read_num(kv, "initial.u", rc.initial.u);
    read_num(kv, "initial.v", rc.initial.v);
    read_num(kv, "initial.w", rc.initial.w);
    read_num(kv, "initial.center_x", rc.initial.center_x);
    read_num(kv, "initial.center_y", rc.initial.center_y);
    read_num(kv, "initial.width", rc.initial.width);
    read_num(kv, "initial.base_u", rc.initial.base_u);
    read_num(kv, "initial.base_v", rc.initial.base_v);
    read_num(kv, "initial.base_w", rc.initial.base_w);
    read_num(kv, "initial.amp_u", rc.initial.amp_u);
    read_num(kv, "initial.amp_v", rc.initial.amp_v);
    read_num(kv, "initial.amp_w", rc.initial.amp_w);
    read_num(kv, "initial.perturb_amplitude", rc.initial.perturb_amplitude);
    if (kv.has("initial.path")) rc.initial.path = kv.take("initial.path");
    require_nonneg("initial.perturb_amplitude", rc.initial.perturb_amplitude);
    if (rc.initial.kind == InitialKind::GaussianBump) require_pos("initial.width", rc.initial.width);
    if (rc.initial.kind == InitialKind::File && rc.initial.path.empty())
        throw ConfigError("config key `initial.path`: required for initial.kind = file");

    // run
    read_num(kv, "run.t_end", rc.t_end);
    read_num(kv, "run.sample_every", rc.sample_every);
    if (kv.has("run.exponents")) {
        rc.exponents = parse_double_list("run.exponents", kv.take("run.exponents"));
        for (double p : rc.exponents)
            if (!(p > 1.0))
                throw ConfigError("config key `run.exponents`: exponents must be > 1");
    }
    if (kv.has("run.output_dir")) rc.output_dir = kv.take("run.output_dir");
    if (kv.has("run.seed")) rc.seed = static_cast<unsigned long>(parse_int("run.seed", kv.take("run.seed")));
    if (kv.has("run.solve_transformed"))
        rc.solve_transformed = parse_bool("run.solve_transformed", kv.take("run.solve_transformed"));
    if (kv.has("run.snapshot_times"))
        rc.snapshot_times = parse_double_list("run.snapshot_times", kv.take("run.snapshot_times"));
    require_pos("run.t_end", rc.t_end);
    if (!(rc.sample_every > 0.0) || rc.sample_every > rc.t_end)
        throw ConfigError("config key `run.sample_every`: must be in (0, run.t_end]");
    rc.stepper.solve_transformed = rc.solve_transformed;

    // mms
    if (kv.has("mms.levels")) {
        cfg.mms.grid_levels.clear();
        for (double d : parse_double_list("mms.levels", kv.take("mms.levels"))) {
            const int n = static_cast<int>(d);
            if (n < 3 || d != n) throw ConfigError("config key `mms.levels`: expected integers >= 3");
            cfg.mms.grid_levels.push_back({n, n});
        }
    }
    if (kv.has("mms.dt_law")) {
        const std::string m = kv.take("mms.dt_law");
        if (m == "fixed")
            cfg.mms.dt_law = DtLaw::Fixed;
        else if (m == "proportional_to_h")
            cfg.mms.dt_law = DtLaw::ProportionalToH;
        else if (m == "proportional_to_h2")
            cfg.mms.dt_law = DtLaw::ProportionalToH2;
        else
            throw ConfigError("config key `mms.dt_law`: unknown law `" + m + "`");
    }
    read_num(kv, "mms.dt_coeff", cfg.mms.dt_coeff);
    read_num(kv, "mms.t_end", cfg.mms.t_end);
    read_num(kv, "mms.slope_min", cfg.mms.slope_min);
    if (kv.has("mms.fields")) {
        cfg.mms.manufactured_fields = kv.take("mms.fields");
        if (cfg.mms.manufactured_fields != "trig")
            throw ConfigError("config key `mms.fields`: unknown manufactured solution `" +
                              cfg.mms.manufactured_fields + "`");
    }
    require_pos("mms.dt_coeff", cfg.mms.dt_coeff);
    require_pos("mms.t_end", cfg.mms.t_end);
    if (cfg.mms.slope_min < 0.0) {
        switch (cfg.mms.dt_law) {
            case DtLaw::ProportionalToH2: cfg.mms.slope_min = 1.9; break;
            case DtLaw::ProportionalToH: cfg.mms.slope_min = 0.9; break;
            case DtLaw::Fixed: cfg.mms.slope_min = 0.0; break;
        }
    }
    if (cfg.mms.grid_levels.size() < 3)
        throw ConfigError("config key `mms.levels`: need at least 3 levels for a slope fit");

    // lemma
    read_num(kv, "lemma.delta", cfg.lemma.delta);
    read_num(kv, "lemma.chi", cfg.lemma.chi);
    read_num(kv, "lemma.xi", cfg.lemma.xi);
    read_num(kv, "lemma.c7", cfg.lemma.c7);
    read_num(kv, "lemma.c_delta_plus_1", cfg.lemma.c_delta_plus_1);
    read_num(kv, "lemma.eta", cfg.lemma.eta);
    read_num(kv, "lemma.mu", cfg.lemma.mu);
    read_num(kv, "lemma.rho", cfg.lemma.rho);
    cfg.lemma.validate();

    // anything not consumed is unknown
    for (const auto& [key, vc] : kv.kv)
        if (!vc.second)
            throw ConfigError("config key `" + key + "`: unknown key");

    return cfg;
}

AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file `" + path + "`");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

namespace {

struct SplitMix64 {
    std::uint64_t s;
    explicit SplitMix64(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform_pm1() { return 2.0 * ((next() >> 11) * 0x1.0p-53) - 1.0; }
};

/// Seeded truncated cosine series, shifted and normalized into [0, amp]:
/// smooth, Neumann-compatible, and nonnegative without clipping.
void add_smooth_perturbation(State& s, const Grid2D& g, double amp, unsigned long seed) {
    constexpr int kmax = 4;
    SplitMix64 rng(static_cast<std::uint64_t>(seed) * 0x9E3779B97F4A7C15ull + 1ull);
    const double lx = g.nx * g.hx, ly = g.ny * g.hy;
    constexpr double kPi = 3.14159265358979323846;

    std::vector<double> cx((kmax + 1) * g.nx), cy((kmax + 1) * g.ny);
    for (int k = 0; k <= kmax; ++k) {
        for (int i = 0; i < g.nx; ++i)
            cx[k * g.nx + i] = std::cos(k * kPi * (g.xc(i) - g.x0) / lx);
        for (int j = 0; j < g.ny; ++j)
            cy[k * g.ny + j] = std::cos(k * kPi * (g.yc(j) - g.y0) / ly);
    }

    Field* fields[3] = {&s.u, &s.v, &s.w};
    for (Field* f : fields) {
        double coef[kmax + 1][kmax + 1];
        double norm = 0.0;
        for (int kx = 0; kx <= kmax; ++kx)
            for (int ky = 0; ky <= kmax; ++ky) {
                if (kx == 0 && ky == 0) {
                    coef[kx][ky] = 0.0;
                    continue;
                }
                coef[kx][ky] = rng.uniform_pm1();
                norm += std::abs(coef[kx][ky]);
            }
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double series = 0.0;
                for (int kx = 0; kx <= kmax; ++kx)
                    for (int ky = 0; ky <= kmax; ++ky)
                        series += coef[kx][ky] * cx[kx * g.nx + i] * cy[ky * g.ny + j];
                (*f)(i, j) += 0.5 * amp * (1.0 + series / norm);
            }
    }
}

} // namespace

State build_initial_state(const InitialData& init, const Grid2D& g, unsigned long seed) {
    State s(g);
    switch (init.kind) {
        case InitialKind::Constant:
            for (std::size_t k = 0; k < g.size(); ++k) {
                s.u[k] = init.u;
                s.v[k] = init.v;
                s.w[k] = init.w;
            }
            break;
        case InitialKind::GaussianBump: {
            const double iw2 = 1.0 / (2.0 * init.width * init.width);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double dx = g.xc(i) - init.center_x;
                    const double dy = g.yc(j) - init.center_y;
                    const double bump = std::exp(-(dx * dx + dy * dy) * iw2);
                    s.u(i, j) = init.base_u + init.amp_u * bump;
                    s.v(i, j) = init.base_v + init.amp_v * bump;
                    s.w(i, j) = init.base_w + init.amp_w * bump;
                }
            break;
        }
        case InitialKind::File: {
            s.u = read_snapshot_field(init.path + "_u", g);
            s.v = read_snapshot_field(init.path + "_v", g);
            s.w = read_snapshot_field(init.path + "_w", g);
            break;
        }
    }

    if (init.perturb_amplitude > 0.0)
        add_smooth_perturbation(s, g, init.perturb_amplitude, seed);

    for (std::size_t k = 0; k < g.size(); ++k)
        if (!std::isfinite(s.u[k]) || !std::isfinite(s.v[k]) || !std::isfinite(s.w[k]) ||
            s.u[k] < 0.0 || s.v[k] < 0.0 || s.w[k] < 0.0)
            throw InvalidInitialData("initial data must be finite and nonnegative");
    return s;
}

} // namespace haptosim
