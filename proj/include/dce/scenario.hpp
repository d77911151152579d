#pragma once

// Scenario configuration, bundled presets and result serialization for the
// dce command-line tool.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dce/emission.hpp"

namespace dce {

enum class Scenario { dispersion, integrand_map, emission, decay, cutoff_study };
enum class ModelSelection { local, nonlocal, both };

/// Configuration or validation failure; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output directory or file could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct WavenumberRange {
    std::string label;
    double q_min_over_omega0_c = 1.0;
    double q_max_over_omega0_c = 100.0;
    int points = 200;
    bool log_spaced = false;

    bool operator==(const WavenumberRange&) const = default;
};

/// Sampling grids. Frequencies in units of ω₀, wavenumbers in units of ω₀/c
/// (the JSON keys carry the matching _over_omega0 / _over_omega0_c suffix).
struct GridConfig {
    double omega_min = 0.8;
    double omega_max = 1.4;
    int omega_points = 400;
    /// Spectra and decay scans use the peak-refined default grid when true,
    /// a uniform grid otherwise.
    bool refine_peaks = true;
    std::vector<WavenumberRange> q_ranges = {{"small-q", 1.0, 100.0, 200, false}};
    double omega_fixed = 1.2;  ///< integrand-map and cutoff-study frequency
    double omega_prime_min = 0.8;
    double omega_prime_max = 1.4;
    int omega_prime_points = 200;
    std::vector<double> cutoffs = {630.0, 1260.0, 2520.0, 5040.0, 10080.0, 12600.0};
    /// Carrier frequencies for emission; empty means the pulse carrier.
    std::vector<double> Omega_sweep;
    /// Extra local runs at these multiples of the local hard cutoff.
    std::vector<double> local_cutoff_multipliers = {1.0};

    bool operator==(const GridConfig&) const = default;
};

struct ScenarioConfig {
    LorentzMaterial material = silicon_carbide();
    ModulationPulse pulse;
    SlabGeometry geometry;
    /// rel_tol/abs_tol/max_subdivisions; cutoff_policy is the local-model policy.
    QuadratureSpec quadrature;
    CutoffPolicy nonlocal_cutoff = AdaptiveConverged{};
    Scenario scenario = Scenario::emission;
    ModelSelection model = ModelSelection::both;
    std::string output_dir = "out";
    GridConfig grids;

    /// Emission config for one model: beta forced to 0 for local, local or
    /// nonlocal cutoff policy picked accordingly.
    EmissionConfig emission_config(ModelTag tag) const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a config document. Unknown keys are rejected.
/// Frequencies may be given in rad/s ("gamma") or in units of ω₀
/// ("gamma_over_omega0"); wavenumbers in rad/m ("q_c") or in units of ω₀/c
/// ("q_c_over_omega0_c"). Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);
/// Also accepts an output sidecar ({"config": ..., "output": ...}).
ScenarioConfig parse_config_file(const std::filesystem::path& file);

/// Canonical JSON (SI keys). parse_config(serialize_config(c)) == c.
nlohmann::json serialize_config(const ScenarioConfig& cfg);

std::string_view to_string(Scenario s);
std::string_view to_string(ModelSelection m);
std::string_view to_string(ModelTag m);
std::optional<Scenario> scenario_from_string(std::string_view s);
std::optional<ModelSelection> model_from_string(std::string_view s);

/// Bundled presets: sic-fig2, sic-fig3, sic-fig4a, sic-fig4b, sic-fig4c.
std::vector<std::string> preset_names();
/// Preset document as shipped; throws ConfigError for an unknown name.
nlohmann::json preset_document(std::string_view name);

// ---- serialization -------------------------------------------------------

/// Header row "omega_rad_s\q_rad_m,<q...>", then one row per ω: ω, |R_p|...
void write_map_csv(std::ostream& out, std::span<const double> row_axis,
                   std::span<const double> col_axis, std::span<const double> values,
                   std::string_view corner);

/// Columns omega_over_omega0,rate,error_estimate,converged,effective_q_max.
void write_spectrum_csv(std::ostream& out, const SpectrumResult& s);

/// Formats a double the way every CSV in this project does (%.12e).
std::string format_number(double v);

// ---- running -------------------------------------------------------------

struct OutputSummary {
    std::filesystem::path file;
    std::string summary;
};

/// Runs the configured scenario, writing CSVs and JSON sidecars into
/// cfg.output_dir. Throws ConfigError, IoError or NumericError.
std::vector<OutputSummary> run_scenario(const ScenarioConfig& cfg);

}  // namespace dce
