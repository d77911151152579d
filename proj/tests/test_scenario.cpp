#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "dce/scenario.hpp"

using namespace dce;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("dce_test_" + name);
    fs::remove_all(dir);
    return dir;
}

// A fig3-style integrand map small enough to run in a test.
ScenarioConfig small_map(const fs::path& out) {
    auto cfg = parse_config(preset_document("sic-fig3"));
    cfg.grids.omega_prime_points = 12;
    cfg.grids.q_ranges = {{"t", 1.0, 1e4, 15, true}};
    cfg.output_dir = out.string();
    return cfg;
}

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("bundled presets") {
    const auto names = preset_names();
    CHECK(names == std::vector<std::string>{"sic-fig2", "sic-fig3", "sic-fig4a", "sic-fig4b", "sic-fig4c"});
    for (const auto& name : names) {
        CAPTURE(name);
        const auto cfg = parse_config(preset_document(name));
        CHECK(parse_config(serialize_config(cfg)) == cfg);
        // the shipped file and the embedded copy are the same document
        const auto file = parse_config_file(fs::path(DCE_PRESET_DIR) / (name + ".json"));
        CHECK(file == cfg);
        CHECK(json::parse(slurp(fs::path(DCE_PRESET_DIR) / (name + ".json"))) == preset_document(name));
    }
    CHECK_THROWS_AS(preset_document("sic-fig5"), ConfigError);
}

TEST_CASE("fig4b preset parameters") {
    const auto cfg = parse_config(preset_document("sic-fig4b"));
    CHECK(cfg.scenario == Scenario::emission);
    CHECK(cfg.pulse.Omega == doctest::Approx(2.2 * cfg.material.omega_0));
    CHECK(cfg.pulse.T == 80e-15);
    CHECK(cfg.material.beta == kSiCBeta);
    CHECK(cfg.emission_config(ModelTag::local).material.beta == 0.0);
    CHECK(std::holds_alternative<HardCutoff>(cfg.emission_config(ModelTag::local).quadrature.cutoff_policy));
    CHECK(std::holds_alternative<AdaptiveConverged>(
        cfg.emission_config(ModelTag::nonlocal).quadrature.cutoff_policy));
}

TEST_CASE("strict validation names the offending key") {
    const json base = preset_document("sic-fig4b");

    json doc = base;
    doc["material"] = json::object();
    CHECK(error_of(doc).find("omega_p required") != std::string::npos);

    doc = base;
    doc["pulse"]["delta_omega"] = 0.5;
    CHECK(error_of(doc).find("delta_omega") != std::string::npos);

    doc = base;
    doc["material"]["colour"] = 1;
    CHECK(error_of(doc).find("material.colour") != std::string::npos);

    doc = base;
    doc["extra"] = true;
    CHECK(error_of(doc).find("config.extra") != std::string::npos);

    doc = base;
    doc["pulse"]["Omega"] = 3e14;
    CHECK(error_of(doc).find("mutually exclusive") != std::string::npos);

    doc = base;
    doc["model"] = "hydrodynamic";
    CHECK(error_of(doc).find("config.model") != std::string::npos);

    doc = base;
    doc["geometry"]["d"] = 1e-6;
    CHECK(error_of(doc).find("geometry") != std::string::npos);

    doc = base;
    doc["quadrature"]["local_cutoff"] = {{"policy", "soft"}};
    CHECK(error_of(doc).find("local_cutoff.policy") != std::string::npos);
}

TEST_CASE("SI and scaled keys are equivalent") {
    json a = preset_document("sic-fig4b");
    json b = a;
    b["pulse"].erase("Omega_over_omega0");
    b["pulse"]["Omega"] = 2.2 * 1.49e14;
    CHECK(parse_config(a).pulse.Omega == doctest::Approx(parse_config(b).pulse.Omega).epsilon(1e-15));
}

TEST_CASE("reruns are byte-identical") {
    const auto d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
    const auto out1 = run_scenario(small_map(d1));
    const auto out2 = run_scenario(small_map(d2));
    REQUIRE(out1.size() == out2.size());
    REQUIRE_FALSE(out1.empty());
    for (std::size_t i = 0; i < out1.size(); ++i) {
        CHECK(out1[i].file.filename() == out2[i].file.filename());
        CHECK(slurp(out1[i].file) == slurp(out2[i].file));
    }
}

TEST_CASE("sidecar reproduces its output") {
    const auto d = scratch_dir("sidecar");
    auto cfg = small_map(d);
    cfg.model = ModelSelection::nonlocal;
    const auto outs = run_scenario(cfg);
    REQUIRE(outs.size() == 1);
    const auto csv = outs[0].file;
    auto sidecar = csv;
    sidecar.replace_extension(".json");
    REQUIRE(fs::exists(sidecar));
    const auto meta = json::parse(slurp(sidecar));
    REQUIRE(meta.contains("config"));
    auto again = parse_config(meta["config"]);
    const auto d2 = scratch_dir("sidecar2");
    again.output_dir = d2.string();
    const auto rerun = run_scenario(again);
    REQUIRE(rerun.size() == 1);
    CHECK(slurp(rerun[0].file) == slurp(csv));

    // the sidecar file itself is a valid config file
    auto from_file = parse_config_file(sidecar);
    from_file.output_dir = d2.string();
    CHECK(from_file == again);
}

TEST_CASE("spectrum CSV layout") {
    SpectrumResult s;
    s.omega_grid = {1.49e14};
    s.config.material = silicon_carbide();
    s.rate = {2.5};
    s.error_estimates = {1e-6};
    s.converged_flags = {true};
    s.effective_q_max = {7.7e8};
    std::ostringstream out;
    write_spectrum_csv(out, s);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "omega_over_omega0,rate,error_estimate,converged,effective_q_max");
    CHECK(row.rfind(format_number(1.0) + ",", 0) == 0);
}

TEST_CASE("unwritable output directory is an I/O error") {
    const auto blocker = scratch_dir("blocker");
    std::ofstream(blocker) << "x";
    auto cfg = small_map(blocker / "sub");
    CHECK_THROWS_AS(run_scenario(cfg), IoError);
    fs::remove(blocker);
}
