#include <map>
#include <string>

#include "dce/scenario.hpp"

namespace dce {
namespace {

// Keep in sync with presets/*.json (checked by the scenario tests).
const std::map<std::string, std::string, std::less<>>& presets() {
    static const std::map<std::string, std::string, std::less<>> table = {
        {"sic-fig2", R"json({
  "scenario": "dispersion",
  "model": "both",
  "output_dir": "out/fig2",
  "material": {
    "eps_inf": 6.7,
    "omega_p": 104900000000000.0,
    "omega_0": 149000000000000.0,
    "gamma": 897000000000.0,
    "beta": 1539000.0
  },
  "pulse": {
    "delta_omega": 0.01,
    "Omega_over_omega0": 2.2,
    "T": 8e-14
  },
  "geometry": {
    "d_s": 1e-07,
    "d": 1e-08
  },
  "quadrature": {
    "rel_tol": 0.0001,
    "abs_tol": 0,
    "max_subdivisions": 2000,
    "local_cutoff": {
      "policy": "hard",
      "q_c_over_omega0_c": 630
    },
    "nonlocal_cutoff": {
      "policy": "adaptive",
      "window_factor": 2,
      "rel_change": 0.001
    }
  },
  "grids": {
    "omega_min_over_omega0": 0.8,
    "omega_max_over_omega0": 1.3,
    "omega_points": 300,
    "refine_peaks": false,
    "q_ranges": [
      {
        "label": "small-q",
        "q_min_over_omega0_c": 0.5,
        "q_max_over_omega0_c": 100,
        "points": 300,
        "log_spaced": false
      },
      {
        "label": "large-q",
        "q_min_over_omega0_c": 1,
        "q_max_over_omega0_c": 300000,
        "points": 300,
        "log_spaced": true
      }
    ]
  }
})json"},
        {"sic-fig3", R"json({
  "scenario": "integrand-map",
  "model": "both",
  "output_dir": "out/fig3",
  "material": {
    "eps_inf": 6.7,
    "omega_p": 104900000000000.0,
    "omega_0": 149000000000000.0,
    "gamma": 897000000000.0,
    "beta": 1539000.0
  },
  "pulse": {
    "delta_omega": 0.01,
    "Omega_over_omega0": 2.2,
    "T": 8e-14
  },
  "geometry": {
    "d_s": 1e-07,
    "d": 1e-08
  },
  "quadrature": {
    "rel_tol": 0.0001,
    "abs_tol": 0,
    "max_subdivisions": 2000,
    "local_cutoff": {
      "policy": "hard",
      "q_c_over_omega0_c": 630
    },
    "nonlocal_cutoff": {
      "policy": "adaptive",
      "window_factor": 2,
      "rel_change": 0.001
    }
  },
  "grids": {
    "omega_fixed_over_omega0": 1.2,
    "omega_prime_min_over_omega0": 0.8,
    "omega_prime_max_over_omega0": 1.4,
    "omega_prime_points": 300,
    "q_ranges": [
      {
        "label": "fig3",
        "q_min_over_omega0_c": 1,
        "q_max_over_omega0_c": 100000,
        "points": 300,
        "log_spaced": true
      }
    ]
  }
})json"},
        {"sic-fig4a", R"json({
  "scenario": "emission",
  "model": "both",
  "output_dir": "out/fig4a",
  "material": {
    "eps_inf": 6.7,
    "omega_p": 104900000000000.0,
    "omega_0": 149000000000000.0,
    "gamma": 897000000000.0,
    "beta": 1539000.0
  },
  "pulse": {
    "delta_omega": 0.01,
    "Omega_over_omega0": 2.01,
    "T": 8e-14
  },
  "geometry": {
    "d_s": 1e-07,
    "d": 1e-08
  },
  "quadrature": {
    "rel_tol": 0.0001,
    "abs_tol": 0,
    "max_subdivisions": 2000,
    "local_cutoff": {
      "policy": "hard",
      "q_c_over_omega0_c": 630
    },
    "nonlocal_cutoff": {
      "policy": "adaptive",
      "window_factor": 2,
      "rel_change": 0.001
    }
  },
  "grids": {
    "omega_min_over_omega0": 0.8,
    "omega_max_over_omega0": 1.4,
    "omega_points": 400,
    "refine_peaks": true,
    "local_cutoff_multipliers": [
      1,
      20
    ]
  }
})json"},
        {"sic-fig4b", R"json({
  "scenario": "emission",
  "model": "both",
  "output_dir": "out/fig4b",
  "material": {
    "eps_inf": 6.7,
    "omega_p": 104900000000000.0,
    "omega_0": 149000000000000.0,
    "gamma": 897000000000.0,
    "beta": 1539000.0
  },
  "pulse": {
    "delta_omega": 0.01,
    "Omega_over_omega0": 2.2,
    "T": 8e-14
  },
  "geometry": {
    "d_s": 1e-07,
    "d": 1e-08
  },
  "quadrature": {
    "rel_tol": 0.0001,
    "abs_tol": 0,
    "max_subdivisions": 2000,
    "local_cutoff": {
      "policy": "hard",
      "q_c_over_omega0_c": 630
    },
    "nonlocal_cutoff": {
      "policy": "adaptive",
      "window_factor": 2,
      "rel_change": 0.001
    }
  },
  "grids": {
    "omega_min_over_omega0": 0.8,
    "omega_max_over_omega0": 1.4,
    "omega_points": 400,
    "refine_peaks": true,
    "local_cutoff_multipliers": [
      1,
      20
    ]
  }
})json"},
        {"sic-fig4c", R"json({
  "scenario": "emission",
  "model": "both",
  "output_dir": "out/fig4c",
  "material": {
    "eps_inf": 6.7,
    "omega_p": 104900000000000.0,
    "omega_0": 149000000000000.0,
    "gamma": 897000000000.0,
    "beta": 1539000.0
  },
  "pulse": {
    "delta_omega": 0.01,
    "Omega_over_omega0": 2.4,
    "T": 8e-14
  },
  "geometry": {
    "d_s": 1e-07,
    "d": 1e-08
  },
  "quadrature": {
    "rel_tol": 0.0001,
    "abs_tol": 0,
    "max_subdivisions": 2000,
    "local_cutoff": {
      "policy": "hard",
      "q_c_over_omega0_c": 630
    },
    "nonlocal_cutoff": {
      "policy": "adaptive",
      "window_factor": 2,
      "rel_change": 0.001
    }
  },
  "grids": {
    "omega_min_over_omega0": 0.8,
    "omega_max_over_omega0": 1.4,
    "omega_points": 400,
    "refine_peaks": true,
    "local_cutoff_multipliers": [
      1,
      20
    ]
  }
})json"},
    };
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : presets()) names.push_back(name);
    return names;
}

nlohmann::json preset_document(std::string_view name) {
    const auto it = presets().find(name);
    if (it == presets().end()) throw ConfigError("unknown preset " + std::string(name));
    return nlohmann::json::parse(it->second);
}

}  // namespace dce
