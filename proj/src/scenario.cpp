#include "dce/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "dce/constants.hpp"
#include "dce/parallel.hpp"
#include "dce/slab.hpp"

namespace dce {

using nlohmann::json;

namespace {

// ---- strict JSON reading -------------------------------------------------

// Wraps one JSON object, remembers which keys were read and rejects the
// rest in finish().
class Block {
public:
    Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_ + " must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    std::optional<double> number(const std::string& key) {
        if (!j_.contains(key)) return std::nullopt;
        seen_.insert(key);
        const auto& v = j_.at(key);
        if (!v.is_number()) fail(name(key) + " must be a number");
        return v.get<double>();
    }

    std::optional<int> integer(const std::string& key) {
        if (!j_.contains(key)) return std::nullopt;
        seen_.insert(key);
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) fail(name(key) + " must be an integer");
        return v.get<int>();
    }

    std::optional<bool> boolean(const std::string& key) {
        if (!j_.contains(key)) return std::nullopt;
        seen_.insert(key);
        const auto& v = j_.at(key);
        if (!v.is_boolean()) fail(name(key) + " must be true or false");
        return v.get<bool>();
    }

    std::optional<std::string> string(const std::string& key) {
        if (!j_.contains(key)) return std::nullopt;
        seen_.insert(key);
        const auto& v = j_.at(key);
        if (!v.is_string()) fail(name(key) + " must be a string");
        return v.get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const std::string& key) {
        if (!j_.contains(key)) return std::nullopt;
        seen_.insert(key);
        const auto& v = j_.at(key);
        if (!v.is_array()) fail(name(key) + " must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(name(key) + " must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    const json* child(const std::string& key) {
        if (!j_.contains(key)) return nullptr;
        seen_.insert(key);
        return &j_.at(key);
    }

    /// Value given either as `key` (SI) or as `key + suffix` (scaled by unit).
    std::optional<double> scaled(const std::string& key, const std::string& suffix, double unit) {
        const auto si = number(key);
        const auto rel = number(key + suffix);
        if (si && rel) fail(name(key) + " and " + name(key + suffix) + " are mutually exclusive");
        if (rel) return *rel * unit;
        return si;
    }

    std::string name(const std::string& key) const { return path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) fail("unknown key " + name(key));
        }
    }

    [[noreturn]] static void fail(const std::string& msg) { throw ConfigError(msg); }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

// Re-throws module validation errors as ConfigError with the block name.
template <class F>
void validate_block(const std::string& block, F&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(block + ": " + e.what());
    }
}

LorentzMaterial parse_material(const json& j) {
    Block b(j, "material");
    LorentzMaterial m;
    m.omega_0 = b.number("omega_0").value_or(0.0);
    const double w0 = m.omega_0;
    const bool have_wp = b.has("omega_p") || b.has("omega_p_over_omega0");
    check(have_wp, "material.omega_p required");
    check(b.has("omega_0"), "material.omega_0 required");
    check(w0 > 0.0, "material.omega_0 must be > 0");
    m.omega_p = *b.scaled("omega_p", "_over_omega0", w0);
    const auto gamma = b.scaled("gamma", "_over_omega0", w0);
    check(gamma.has_value(), "material.gamma required");
    m.gamma = *gamma;
    m.eps_inf = b.number("eps_inf").value_or(1.0);
    m.beta = b.number("beta").value_or(kSiCBeta);
    b.finish();
    validate_block("material", [&] { m.validate(); });
    return m;
}

ModulationPulse parse_pulse(const json& j, double w0) {
    Block b(j, "pulse");
    ModulationPulse p;
    p.delta_omega = b.number("delta_omega").value_or(0.01);
    const auto carrier = b.scaled("Omega", "_over_omega0", w0);
    check(carrier.has_value(), "pulse.Omega required");
    p.Omega = *carrier;
    const auto width = b.number("T");
    check(width.has_value(), "pulse.T required");
    p.T = *width;
    b.finish();
    validate_block("pulse", [&] { p.validate(); });
    return p;
}

SlabGeometry parse_geometry(const json& j) {
    Block b(j, "geometry");
    SlabGeometry g;
    g.d_s = b.number("d_s").value_or(100e-9);
    g.d = b.number("d").value_or(0.1 * g.d_s);
    b.finish();
    validate_block("geometry", [&] { g.validate(); });
    return g;
}

CutoffPolicy parse_cutoff(const json& j, const std::string& path, double k0) {
    Block b(j, path);
    const auto policy = b.string("policy");
    check(policy.has_value(), path + ".policy required (\"hard\" or \"adaptive\")");
    if (*policy == "hard") {
        const auto qc = b.scaled("q_c", "_over_omega0_c", k0);
        check(qc.has_value(), path + ".q_c required for a hard cutoff");
        check(*qc > 0.0, path + ".q_c must be > 0");
        b.finish();
        return HardCutoff{*qc};
    }
    check(*policy == "adaptive", path + ".policy must be \"hard\" or \"adaptive\"");
    AdaptiveConverged a;
    a.window_factor = b.number("window_factor").value_or(a.window_factor);
    a.rel_change = b.number("rel_change").value_or(a.rel_change);
    a.initial_window = b.scaled("initial_window", "_over_omega0_c", k0).value_or(0.0);
    check(a.window_factor > 1.0, path + ".window_factor must be > 1");
    check(a.rel_change > 0.0, path + ".rel_change must be > 0");
    check(a.initial_window >= 0.0, path + ".initial_window must be >= 0");
    b.finish();
    return a;
}

void parse_quadrature(const json& j, double k0, ScenarioConfig& cfg) {
    Block b(j, "quadrature");
    cfg.quadrature.rel_tol = b.number("rel_tol").value_or(cfg.quadrature.rel_tol);
    cfg.quadrature.abs_tol = b.number("abs_tol").value_or(cfg.quadrature.abs_tol);
    cfg.quadrature.max_subdivisions =
        b.integer("max_subdivisions").value_or(cfg.quadrature.max_subdivisions);
    if (const auto* c = b.child("local_cutoff")) {
        cfg.quadrature.cutoff_policy = parse_cutoff(*c, "quadrature.local_cutoff", k0);
    }
    if (const auto* c = b.child("nonlocal_cutoff")) {
        cfg.nonlocal_cutoff = parse_cutoff(*c, "quadrature.nonlocal_cutoff", k0);
    }
    b.finish();
    validate_block("quadrature", [&] { cfg.quadrature.validate(); });
}

WavenumberRange parse_range(const json& j, const std::string& path) {
    Block b(j, path);
    WavenumberRange r;
    r.label = b.string("label").value_or("q");
    r.q_min_over_omega0_c = b.number("q_min_over_omega0_c").value_or(r.q_min_over_omega0_c);
    r.q_max_over_omega0_c = b.number("q_max_over_omega0_c").value_or(r.q_max_over_omega0_c);
    r.points = b.integer("points").value_or(r.points);
    r.log_spaced = b.boolean("log_spaced").value_or(r.log_spaced);
    b.finish();
    check(r.q_min_over_omega0_c > 0.0 && r.q_max_over_omega0_c > r.q_min_over_omega0_c,
          path + " needs 0 < q_min_over_omega0_c < q_max_over_omega0_c");
    check(r.points >= 2, path + ".points must be >= 2");
    check(!r.label.empty() && r.label.find_first_of("/\\ ") == std::string::npos,
          path + ".label must be a non-empty file-name fragment");
    return r;
}

GridConfig parse_grids(const json& j) {
    Block b(j, "grids");
    GridConfig g;
    g.omega_min = b.number("omega_min_over_omega0").value_or(g.omega_min);
    g.omega_max = b.number("omega_max_over_omega0").value_or(g.omega_max);
    g.omega_points = b.integer("omega_points").value_or(g.omega_points);
    g.refine_peaks = b.boolean("refine_peaks").value_or(g.refine_peaks);
    if (const auto* ranges = b.child("q_ranges")) {
        check(ranges->is_array() && !ranges->empty(), "grids.q_ranges must be a non-empty array");
        g.q_ranges.clear();
        for (std::size_t i = 0; i < ranges->size(); ++i) {
            g.q_ranges.push_back(parse_range((*ranges)[i], "grids.q_ranges[" + std::to_string(i) + "]"));
        }
    }
    g.omega_fixed = b.number("omega_fixed_over_omega0").value_or(g.omega_fixed);
    g.omega_prime_min = b.number("omega_prime_min_over_omega0").value_or(g.omega_prime_min);
    g.omega_prime_max = b.number("omega_prime_max_over_omega0").value_or(g.omega_prime_max);
    g.omega_prime_points = b.integer("omega_prime_points").value_or(g.omega_prime_points);
    g.cutoffs = b.numbers("cutoffs_over_omega0_c").value_or(g.cutoffs);
    g.Omega_sweep = b.numbers("Omega_sweep_over_omega0").value_or(g.Omega_sweep);
    g.local_cutoff_multipliers =
        b.numbers("local_cutoff_multipliers").value_or(g.local_cutoff_multipliers);
    b.finish();

    check(g.omega_min > 0.0 && g.omega_max > g.omega_min,
          "grids needs 0 < omega_min_over_omega0 < omega_max_over_omega0");
    check(g.omega_points >= 8, "grids.omega_points must be >= 8");
    check(g.omega_fixed > 0.0, "grids.omega_fixed_over_omega0 must be > 0");
    check(g.omega_prime_min > 0.0 && g.omega_prime_max > g.omega_prime_min,
          "grids needs 0 < omega_prime_min_over_omega0 < omega_prime_max_over_omega0");
    check(g.omega_prime_points >= 2, "grids.omega_prime_points must be >= 2");
    check(!g.cutoffs.empty(), "grids.cutoffs_over_omega0_c must not be empty");
    for (std::size_t i = 0; i < g.cutoffs.size(); ++i) {
        check(g.cutoffs[i] > 0.0 && (i == 0 || g.cutoffs[i] > g.cutoffs[i - 1]),
              "grids.cutoffs_over_omega0_c must be positive and strictly increasing");
    }
    for (double v : g.Omega_sweep) check(v > 0.0, "grids.Omega_sweep_over_omega0 entries must be > 0");
    check(!g.local_cutoff_multipliers.empty(), "grids.local_cutoff_multipliers must not be empty");
    for (double v : g.local_cutoff_multipliers) {
        check(v > 0.0, "grids.local_cutoff_multipliers entries must be > 0");
    }
    return g;
}

json cutoff_to_json(const CutoffPolicy& policy) {
    if (const auto* hard = std::get_if<HardCutoff>(&policy)) {
        return {{"policy", "hard"}, {"q_c", hard->q_c}};
    }
    const auto& a = std::get<AdaptiveConverged>(policy);
    return {{"policy", "adaptive"},
            {"window_factor", a.window_factor},
            {"rel_change", a.rel_change},
            {"initial_window", a.initial_window}};
}

// ---- grids ---------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

std::vector<double> geomspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = lo * std::exp(ratio * i / (n - 1));
    }
    return v;
}

std::vector<double> scaled(std::vector<double> v, double unit) {
    for (double& x : v) x *= unit;
    return v;
}

std::vector<double> wavenumber_grid(const WavenumberRange& r, double k0) {
    auto v = r.log_spaced ? geomspace(r.q_min_over_omega0_c, r.q_max_over_omega0_c, r.points)
                          : linspace(r.q_min_over_omega0_c, r.q_max_over_omega0_c, r.points);
    return scaled(std::move(v), k0);
}

std::vector<double> frequency_grid(const ScenarioConfig& cfg) {
    const auto& g = cfg.grids;
    if (g.refine_peaks) {
        return default_spectrum_grid(cfg.material, g.omega_min, g.omega_max,
                                     static_cast<std::size_t>(g.omega_points));
    }
    return scaled(linspace(g.omega_min, g.omega_max, g.omega_points), cfg.material.omega_0);
}

// ---- output helpers ------------------------------------------------------

std::vector<ModelTag> selected_models(ModelSelection m) {
    switch (m) {
        case ModelSelection::local: return {ModelTag::local};
        case ModelSelection::nonlocal: return {ModelTag::nonlocal};
        case ModelSelection::both: return {ModelTag::local, ModelTag::nonlocal};
    }
    return {};
}

ModelSelection as_selection(ModelTag t) {
    return t == ModelTag::local ? ModelSelection::local : ModelSelection::nonlocal;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

class OutputDir {
public:
    explicit OutputDir(const std::filesystem::path& dir) : dir_(dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_)) {
            throw IoError("cannot create output directory " + dir_.string());
        }
    }

    // Writes name (CSV body) and the matching .json sidecar.
    std::filesystem::path write(const std::string& name, const std::string& body, const json& sidecar) {
        const auto csv = dir_ / name;
        auto side = csv;
        side.replace_extension(".json");
        put(csv, body);
        put(side, sidecar.dump(2) + "\n");
        return csv;
    }

private:
    static void put(const std::filesystem::path& file, const std::string& text) {
        std::ofstream out(file, std::ios::binary);
        out << text;
        out.flush();
        if (!out) throw IoError("cannot write " + file.string());
    }

    std::filesystem::path dir_;
};

json sidecar(const ScenarioConfig& rerun, json output) {
    return {{"config", serialize_config(rerun)}, {"output", std::move(output)}};
}

std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// ---- scenarios -----------------------------------------------------------

void run_dispersion(const ScenarioConfig& cfg, OutputDir& out, std::vector<OutputSummary>& log) {
    const double w0 = cfg.material.omega_0;
    const double k0 = w0 / kSpeedOfLight;
    const auto omega = scaled(linspace(cfg.grids.omega_min, cfg.grids.omega_max, cfg.grids.omega_points), w0);
    for (ModelTag tag : selected_models(cfg.model)) {
        const auto ec = cfg.emission_config(tag);
        for (const auto& range : cfg.grids.q_ranges) {
            const auto q = wavenumber_grid(range, k0);
            const auto map = dispersion_map(ec.material, ec.geometry, omega, q);

            std::ostringstream body;
            write_map_csv(body, map.omega_grid, map.q_grid, map.values, "omega_rad_s\\q_rad_m");
            ScenarioConfig rerun = cfg;
            rerun.model = as_selection(tag);
            rerun.grids.q_ranges = {range};
            const std::string name = "dispersion_" + std::string(to_string(tag)) + "_" + range.label + ".csv";
            const auto file = out.write(name, body.str(),
                                        sidecar(rerun, {{"kind", "dispersion_map"},
                                                        {"model", to_string(tag)},
                                                        {"q_range", range.label},
                                                        {"rows", "omega [rad/s]"},
                                                        {"columns", "q [rad/m]"},
                                                        {"values", "|R_p|"},
                                                        {"omega_0", w0}}));
            // Ridge at the largest wavenumber: frequency of max |R_p| in the last column.
            std::size_t best = 0;
            for (std::size_t i = 1; i < omega.size(); ++i) {
                if (map.at(i, q.size() - 1) > map.at(best, q.size() - 1)) best = i;
            }
            log.push_back({file, "ridge at q_max: omega/omega0=" + fixed(omega[best] / w0, 4) +
                                     ", max |R_p|=" + format_number(*std::max_element(map.values.begin(), map.values.end()))});
        }
    }
}

void run_integrand_map(const ScenarioConfig& cfg, OutputDir& out, std::vector<OutputSummary>& log) {
    const double w0 = cfg.material.omega_0;
    const double k0 = w0 / kSpeedOfLight;
    const auto& g = cfg.grids;
    const auto omega_prime = scaled(linspace(g.omega_prime_min, g.omega_prime_max, g.omega_prime_points), w0);
    const auto q = wavenumber_grid(g.q_ranges.front(), k0);
    for (ModelTag tag : selected_models(cfg.model)) {
        const auto ec = cfg.emission_config(tag);
        const auto map = integrand_map(ec, g.omega_fixed * w0, omega_prime, q);
        std::ostringstream body;
        write_map_csv(body, map.omega_prime_grid, map.q_grid, map.values, "omega_prime_rad_s\\q_rad_m");
        ScenarioConfig rerun = cfg;
        rerun.model = as_selection(tag);
        rerun.grids.q_ranges = {g.q_ranges.front()};
        const std::string name = "integrand_map_" + std::string(to_string(tag)) + ".csv";
        const auto file = out.write(name, body.str(),
                                    sidecar(rerun, {{"kind", "integrand_map"},
                                                    {"model", to_string(tag)},
                                                    {"omega_fixed", g.omega_fixed * w0},
                                                    {"rows", "omega_prime [rad/s]"},
                                                    {"columns", "q [rad/m]"},
                                                    {"values", "pair integrand [s^2/m]"},
                                                    {"omega_0", w0}}));
        const auto best = argmax(map.values);
        const auto i = best / q.size();
        const auto j = best % q.size();
        log.push_back({file, "max at omega'/omega0=" + fixed(omega_prime[i] / w0, 4) +
                                 ", qc/omega0=" + format_number(q[j] / k0) +
                                 ", value=" + format_number(map.values[best])});
    }
}

std::string spectrum_summary(const SpectrumResult& s, double w0) {
    const auto best = argmax(s.rate);
    const auto converged = std::count(s.converged_flags.begin(), s.converged_flags.end(), true);
    return "peak omega/omega0=" + fixed(s.omega_grid[best] / w0, 4) + ", max rate=" +
           format_number(s.rate[best]) + ", converged " + std::to_string(converged) + "/" +
           std::to_string(s.rate.size());
}

void run_emission(const ScenarioConfig& cfg, OutputDir& out, std::vector<OutputSummary>& log) {
    const double w0 = cfg.material.omega_0;
    const auto omega = frequency_grid(cfg);
    std::vector<double> carriers = cfg.grids.Omega_sweep;
    if (carriers.empty()) carriers.push_back(cfg.pulse.Omega / w0);

    for (double carrier : carriers) {
        const std::string tag_omega = "Omega" + fixed(carrier, 2);
        std::vector<std::pair<std::string, std::vector<double>>> columns;
        for (ModelTag tag : selected_models(cfg.model)) {
            auto ec = cfg.emission_config(tag);
            ec.pulse.Omega = carrier * w0;
            std::vector<double> multipliers{1.0};
            const auto* hard = std::get_if<HardCutoff>(&ec.quadrature.cutoff_policy);
            if (tag == ModelTag::local && hard != nullptr) multipliers = cfg.grids.local_cutoff_multipliers;

            for (double m : multipliers) {
                EmissionConfig variant = ec;
                std::string suffix;
                if (tag == ModelTag::local && hard != nullptr) {
                    variant.quadrature.cutoff_policy = HardCutoff{hard->q_c * m};
                    suffix = "_qcx" + (m == std::floor(m) ? fixed(m, 0) : fixed(m, 2));
                }
                const auto spectrum = emission_spectrum(variant, omega);
                std::ostringstream body;
                write_spectrum_csv(body, spectrum);

                ScenarioConfig rerun = cfg;
                rerun.model = as_selection(tag);
                rerun.grids.Omega_sweep = {carrier};
                rerun.grids.local_cutoff_multipliers = {m};
                const std::string column = std::string(to_string(tag)) + suffix;
                const auto file = out.write("emission_" + column + "_" + tag_omega + ".csv", body.str(),
                                            sidecar(rerun, {{"kind", "emission_spectrum"},
                                                            {"model", to_string(tag)},
                                                            {"Omega", carrier * w0},
                                                            {"local_cutoff_multiplier", m},
                                                            {"rate_units", "1/m^2 ((1/AT) dP/domega)"},
                                                            {"omega_0", w0}}));
                log.push_back({file, spectrum_summary(spectrum, w0)});
                columns.emplace_back("rate_" + column, spectrum.rate);
            }
        }
        if (cfg.model == ModelSelection::both) {
            std::ostringstream body;
            body << "omega_over_omega0";
            for (const auto& c : columns) body << ',' << c.first;
            body << '\n';
            for (std::size_t i = 0; i < omega.size(); ++i) {
                body << format_number(omega[i] / w0);
                for (const auto& c : columns) body << ',' << format_number(c.second[i]);
                body << '\n';
            }
            ScenarioConfig rerun = cfg;
            rerun.grids.Omega_sweep = {carrier};
            json names = json::array();
            for (const auto& c : columns) names.push_back(c.first);
            const auto file = out.write("emission_comparison_" + tag_omega + ".csv", body.str(),
                                        sidecar(rerun, {{"kind", "emission_comparison"},
                                                        {"Omega", carrier * w0},
                                                        {"columns", names},
                                                        {"omega_0", w0}}));
            log.push_back({file, "local/nonlocal comparison, " + std::to_string(columns.size()) + " spectra"});
        }
    }
}

void run_decay(const ScenarioConfig& cfg, OutputDir& out, std::vector<OutputSummary>& log) {
    const double w0 = cfg.material.omega_0;
    const auto omega = frequency_grid(cfg);
    for (ModelTag tag : selected_models(cfg.model)) {
        const auto ec = cfg.emission_config(tag);
        std::vector<DoubleIntegral> rows(omega.size());
        parallel_for(omega.size(), [&](std::size_t i) { rows[i] = decay_rate_factor(ec, omega[i]); });

        std::ostringstream body;
        body << "omega_a_over_omega0,factor,error_estimate,converged,effective_q_max\n";
        std::vector<double> values;
        std::size_t converged = 0;
        for (std::size_t i = 0; i < omega.size(); ++i) {
            body << format_number(omega[i] / w0) << ',' << format_number(rows[i].value) << ','
                 << format_number(rows[i].error_estimate) << ',' << (rows[i].converged ? 1 : 0) << ','
                 << format_number(rows[i].effective_q_max) << '\n';
            values.push_back(rows[i].value);
            converged += rows[i].converged ? 1 : 0;
        }
        ScenarioConfig rerun = cfg;
        rerun.model = as_selection(tag);
        const auto file = out.write("decay_" + std::string(to_string(tag)) + ".csv", body.str(),
                                    sidecar(rerun, {{"kind", "decay_rate_factor"},
                                                    {"model", to_string(tag)},
                                                    {"factor_units", "s/m^2 (multiplies gamma_0)"},
                                                    {"omega_0", w0}}));
        const auto best = argmax(values);
        log.push_back({file, "peak omega_a/omega0=" + fixed(omega[best] / w0, 4) + ", max factor=" +
                                 format_number(values[best]) + ", converged " + std::to_string(converged) +
                                 "/" + std::to_string(omega.size())});
    }
}

void run_cutoff_study(const ScenarioConfig& cfg, OutputDir& out, std::vector<OutputSummary>& log) {
    const double w0 = cfg.material.omega_0;
    const double k0 = w0 / kSpeedOfLight;
    const auto cutoffs = scaled(cfg.grids.cutoffs, k0);
    for (ModelTag tag : selected_models(cfg.model)) {
        const auto ec = cfg.emission_config(tag);
        const auto rows = cutoff_study(ec, cfg.grids.omega_fixed * w0, cutoffs);
        std::ostringstream body;
        body << "q_c_over_omega0_c,q_c,rate,error_estimate,converged,ratio_to_previous\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double ratio = i == 0 ? 0.0 : rows[i].result.rate / rows[i - 1].result.rate;
            body << format_number(rows[i].q_c / k0) << ',' << format_number(rows[i].q_c) << ','
                 << format_number(rows[i].result.rate) << ',' << format_number(rows[i].result.rate_error)
                 << ',' << (rows[i].result.per_area.converged ? 1 : 0) << ',' << format_number(ratio) << '\n';
        }
        ScenarioConfig rerun = cfg;
        rerun.model = as_selection(tag);
        const auto file = out.write("cutoff_study_" + std::string(to_string(tag)) + ".csv", body.str(),
                                    sidecar(rerun, {{"kind", "cutoff_study"},
                                                    {"model", to_string(tag)},
                                                    {"omega", cfg.grids.omega_fixed * w0},
                                                    {"omega_0", w0}}));
        const double growth = rows.size() > 1 ? rows.back().result.rate / rows.front().result.rate : 1.0;
        log.push_back({file, "rate(q_c max)/rate(q_c min)=" + format_number(growth)});
    }
}

}  // namespace

// ---- public ----------------------------------------------------------------

EmissionConfig ScenarioConfig::emission_config(ModelTag tag) const {
    EmissionConfig ec;
    ec.material = material;
    ec.pulse = pulse;
    ec.geometry = geometry;
    ec.quadrature = quadrature;
    ec.model_tag = tag;
    if (tag == ModelTag::local) {
        ec.material.beta = 0.0;
    } else {
        ec.quadrature.cutoff_policy = nonlocal_cutoff;
    }
    return ec;
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::dispersion: return "dispersion";
        case Scenario::integrand_map: return "integrand-map";
        case Scenario::emission: return "emission";
        case Scenario::decay: return "decay";
        case Scenario::cutoff_study: return "cutoff-study";
    }
    return "?";
}

std::string_view to_string(ModelSelection m) {
    switch (m) {
        case ModelSelection::local: return "local";
        case ModelSelection::nonlocal: return "nonlocal";
        case ModelSelection::both: return "both";
    }
    return "?";
}

std::string_view to_string(ModelTag m) { return m == ModelTag::local ? "local" : "nonlocal"; }

std::optional<Scenario> scenario_from_string(std::string_view s) {
    for (auto v : {Scenario::dispersion, Scenario::integrand_map, Scenario::emission, Scenario::decay,
                   Scenario::cutoff_study}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

std::optional<ModelSelection> model_from_string(std::string_view s) {
    for (auto v : {ModelSelection::local, ModelSelection::nonlocal, ModelSelection::both}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

ScenarioConfig parse_config(const json& doc) {
    Block root(doc, "config");
    ScenarioConfig cfg;

    const auto* material = root.child("material");
    check(material != nullptr, "material block required");
    cfg.material = parse_material(*material);
    const double w0 = cfg.material.omega_0;
    const double k0 = w0 / kSpeedOfLight;

    const auto* pulse = root.child("pulse");
    check(pulse != nullptr, "pulse block required");
    cfg.pulse = parse_pulse(*pulse, w0);

    if (const auto* g = root.child("geometry")) cfg.geometry = parse_geometry(*g);

    cfg.quadrature.cutoff_policy = HardCutoff{630.0 * k0};
    if (const auto* q = root.child("quadrature")) parse_quadrature(*q, k0, cfg);

    if (const auto s = root.string("scenario")) {
        const auto v = scenario_from_string(*s);
        check(v.has_value(), "config.scenario must be one of dispersion, integrand-map, emission, decay, cutoff-study");
        cfg.scenario = *v;
    }
    if (const auto m = root.string("model")) {
        const auto v = model_from_string(*m);
        check(v.has_value(), "config.model must be one of local, nonlocal, both");
        cfg.model = *v;
    }
    cfg.output_dir = root.string("output_dir").value_or(cfg.output_dir);
    check(!cfg.output_dir.empty(), "config.output_dir must not be empty");
    if (const auto* g = root.child("grids")) cfg.grids = parse_grids(*g);
    root.finish();
    return cfg;
}

ScenarioConfig parse_config_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
    }
    // output sidecars wrap the config next to an "output" record
    if (doc.is_object() && doc.size() == 2 && doc.contains("config") && doc.contains("output")) {
        return parse_config(doc["config"]);
    }
    return parse_config(doc);
}

json serialize_config(const ScenarioConfig& cfg) {
    const auto& m = cfg.material;
    const auto& g = cfg.grids;
    json ranges = json::array();
    for (const auto& r : g.q_ranges) {
        ranges.push_back({{"label", r.label},
                          {"q_min_over_omega0_c", r.q_min_over_omega0_c},
                          {"q_max_over_omega0_c", r.q_max_over_omega0_c},
                          {"points", r.points},
                          {"log_spaced", r.log_spaced}});
    }
    return {
        {"scenario", to_string(cfg.scenario)},
        {"model", to_string(cfg.model)},
        {"output_dir", cfg.output_dir},
        {"material",
         {{"eps_inf", m.eps_inf}, {"omega_p", m.omega_p}, {"omega_0", m.omega_0}, {"gamma", m.gamma}, {"beta", m.beta}}},
        {"pulse", {{"delta_omega", cfg.pulse.delta_omega}, {"Omega", cfg.pulse.Omega}, {"T", cfg.pulse.T}}},
        {"geometry", {{"d_s", cfg.geometry.d_s}, {"d", cfg.geometry.d}}},
        {"quadrature",
         {{"rel_tol", cfg.quadrature.rel_tol},
          {"abs_tol", cfg.quadrature.abs_tol},
          {"max_subdivisions", cfg.quadrature.max_subdivisions},
          {"local_cutoff", cutoff_to_json(cfg.quadrature.cutoff_policy)},
          {"nonlocal_cutoff", cutoff_to_json(cfg.nonlocal_cutoff)}}},
        {"grids",
         {{"omega_min_over_omega0", g.omega_min},
          {"omega_max_over_omega0", g.omega_max},
          {"omega_points", g.omega_points},
          {"refine_peaks", g.refine_peaks},
          {"q_ranges", ranges},
          {"omega_fixed_over_omega0", g.omega_fixed},
          {"omega_prime_min_over_omega0", g.omega_prime_min},
          {"omega_prime_max_over_omega0", g.omega_prime_max},
          {"omega_prime_points", g.omega_prime_points},
          {"cutoffs_over_omega0_c", g.cutoffs},
          {"Omega_sweep_over_omega0", g.Omega_sweep},
          {"local_cutoff_multipliers", g.local_cutoff_multipliers}}},
    };
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

void write_map_csv(std::ostream& out, std::span<const double> row_axis,
                   std::span<const double> col_axis, std::span<const double> values,
                   std::string_view corner) {
    out << corner;
    for (double c : col_axis) out << ',' << format_number(c);
    out << '\n';
    for (std::size_t i = 0; i < row_axis.size(); ++i) {
        out << format_number(row_axis[i]);
        for (std::size_t j = 0; j < col_axis.size(); ++j) {
            out << ',' << format_number(values[i * col_axis.size() + j]);
        }
        out << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& s) {
    const double w0 = s.config.material.omega_0;
    out << "omega_over_omega0,rate,error_estimate,converged,effective_q_max\n";
    for (std::size_t i = 0; i < s.omega_grid.size(); ++i) {
        out << format_number(s.omega_grid[i] / w0) << ',' << format_number(s.rate[i]) << ','
            << format_number(s.error_estimates[i]) << ',' << (s.converged_flags[i] ? 1 : 0) << ','
            << format_number(s.effective_q_max[i]) << '\n';
    }
}

std::vector<OutputSummary> run_scenario(const ScenarioConfig& cfg) {
    for (ModelTag tag : selected_models(cfg.model)) {
        validate_block("config", [&] { cfg.emission_config(tag).validate(); });
    }
    OutputDir out(cfg.output_dir);
    std::vector<OutputSummary> log;
    switch (cfg.scenario) {
        case Scenario::dispersion: run_dispersion(cfg, out, log); break;
        case Scenario::integrand_map: run_integrand_map(cfg, out, log); break;
        case Scenario::emission: run_emission(cfg, out, log); break;
        case Scenario::decay: run_decay(cfg, out, log); break;
        case Scenario::cutoff_study: run_cutoff_study(cfg, out, log); break;
    }
    return log;
}

}  // namespace dce
