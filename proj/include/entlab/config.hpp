#pragma once

#include <string>
#include <utility>
#include <vector>

#include "entlab/lattice.hpp"

namespace entlab {

// Experiment description loaded from a JSON file.  Parsing is fail-closed:
// unknown keys, missing required keys and out-of-range values all raise
// ConfigError with a message naming the offending field, so a typo can never
// silently fall back to a default.
struct ExperimentConfig {
  // geometry block
  int spatial_dim = 1;
  int sites_per_dim = 0;       // N
  double spacing = 1.0;        // a
  double mass = 0.0;           // m
  bool curvature_is_constant = true;
  double curvature_value = 0.0;         // used when constant
  std::vector<double> curvature_profile;  // used otherwise, length N^p

  // regions block: A is a contiguous interval anchored at site 0, B an
  // interval of the same shape displaced along the first axis so that the
  // nearest-site distance equals each requested separation in turn.
  int size_a = 0;
  int size_b = 0;
  std::vector<double> separations;  // strictly ascending, lattice aligned
  std::string placement = "interval";

  // run block
  std::string backend = "wilson";  // or "spectral"
  int dimension = 0;               // spacetime dimension; 0 = spatial_dim + 1
  double wilson_r = 1.0;
  bool want_cut_norm = false;
  bool want_mutual_info = false;
  bool want_appendix_norm = false;
  std::vector<std::pair<double, double>> appendix_exponents;
  double epsilon = 0.0;  // cutoff collar width, required for appendix_norm
  int size_cap = 8192;

  // output block
  std::string out_directory = ".";
  bool write_csv = true;
  bool write_json = true;
  int precision = 17;  // significant digits in the CSV

  int effective_dimension() const {
    return dimension > 0 ? dimension : spatial_dim + 1;
  }
};

// Parse / serialize.  serialize_config(parse_config_text(t)) is a fixed
// point: parsing its own output reproduces the same configuration.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// Cheap derived quantities plus every feasibility check that does not need
// a Hamiltonian: geometry invariants, representation compatibility, region
// placement (fits on the torus, requested separation is the minimum-image
// distance), cutoff margins and the size cap.
struct PreflightReport {
  TorusGeometry geometry;
  int spinor_size = 0;
  long matrix_size = 0;  // spinor_size * N^p
  double mass_gap = 0.0;         // M = sqrt(inf m^2 + R/4)
  double predicted_rate = 0.0;   // M / 2
};

PreflightReport validate_experiment(const ExperimentConfig& cfg);

// Site placement used by scans: A anchored at the origin, B displaced along
// the first axis by the requested nearest-site distance d.
std::vector<int> scan_region_a(const ExperimentConfig& cfg);
std::vector<int> scan_region_b(const ExperimentConfig& cfg, double d);

}  // namespace entlab
