// dce: command-line front end for the dispersion, integrand, emission, decay
// and cutoff-study scenarios.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dce/quadrature.hpp"
#include "dce/scenario.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, numeric_error = 2, io_error = 3 };

struct Options {
    std::string config_file;
    std::string preset;
    std::string model;
    std::string out;
    std::optional<double> rel_tol;
    std::optional<double> q_cutoff;
};

dce::ScenarioConfig load(const Options& o, dce::Scenario scenario) {
    if (!o.config_file.empty() && !o.preset.empty())
        throw dce::ConfigError("--config and --preset are mutually exclusive");
    dce::ScenarioConfig cfg;
    if (!o.config_file.empty()) {
        cfg = dce::parse_config_file(o.config_file);
    } else {
        cfg = dce::parse_config(dce::preset_document(o.preset.empty() ? "sic-fig4b" : o.preset));
    }
    cfg.scenario = scenario;
    if (!o.model.empty()) cfg.model = *dce::model_from_string(o.model);
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.rel_tol) {
        cfg.quadrature.rel_tol = *o.rel_tol;
        cfg.quadrature.validate();
    }
    if (o.q_cutoff) {
        if (!(*o.q_cutoff > 0.0)) throw dce::ConfigError("--q-cutoff must be > 0");
        cfg.quadrature.cutoff_policy = dce::HardCutoff{*o.q_cutoff};
    }
    return cfg;
}

int run(const Options& o, dce::Scenario scenario) {
    try {
        const auto cfg = load(o, scenario);
        for (const auto& out : dce::run_scenario(cfg)) {
            std::cout << out.file.string() << ": " << out.summary << '\n';
        }
        return ok;
    } catch (const dce::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const dce::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const dce::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return numeric_error;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return numeric_error;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamical Casimir pair-generation spectra for a modulated polar slab"};
    app.require_subcommand(1);

    Options opts;
    std::optional<dce::Scenario> chosen;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"dispersion", "|R_p| maps over (omega, q)"},
        {"integrand-map", "q-integrated pair kernel over omega'"},
        {"emission", "pair-generation spectra"},
        {"decay", "three-quantum decay factor"},
        {"cutoff-study", "hard-cutoff convergence table"},
    };
    std::vector<std::string> presets;
    for (const auto& p : dce::preset_names()) presets.push_back(p);

    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config_file, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--preset", opts.preset, "bundled preset (default sic-fig4b)")
            ->check(CLI::IsMember(presets));
        sub->add_option("--model", opts.model, "local, nonlocal or both")
            ->check(CLI::IsMember({"local", "nonlocal", "both"}));
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--rel-tol", opts.rel_tol, "quadrature relative tolerance");
        sub->add_option("--q-cutoff", opts.q_cutoff, "local hard cutoff [rad/m]");
        sub->callback([&chosen, n = name] { chosen = dce::scenario_from_string(n); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }
    return run(opts, *chosen);
}
