#pragma once

#include <string>
#include <vector>

#include "entlab/bounds.hpp"
#include "entlab/config.hpp"

namespace entlab {

// One separation value; columns not requested by the config stay NaN.
struct ScanRow {
  double d = 0.0;
  double trace_norm = 0.0;
  double log_trace_norm = 0.0;
  double mutual_info = 0.0;
  std::vector<double> appendix;  // one value per configured exponent pair
};

struct FittedRate {
  std::string observable;  // column name the fit was taken over
  DecayFit fit;
  // (-slope) / predicted_rate - 1: positive when the observable decays
  // faster than exp(-M d / 2), which the bound permits
  double relative_deviation = 0.0;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  std::vector<FittedRate> fitted;
  double mass_gap = 0.0;
  double predicted_rate = 0.0;
  std::vector<double> seconds_per_point;
  double total_seconds = 0.0;
};

// Builds the ground symbol once, then sweeps the separation list with A
// anchored at the origin and B displaced along the first axis. Numerical
// failures are rethrown with the failing separation named in the message.
// Fits use the window 3/M <= d <= N a / 2 - 2 a; an observable whose fit is
// impossible (all zeros, too few usable points) is omitted from `fitted`.
ScanReport run_scan(const ExperimentConfig& cfg);

// Deterministic text renderings. The CSV depends only on the configuration
// and the scan values, never on timings, so repeated runs agree byte for
// byte. Floating point values use cfg.precision significant digits.
std::string render_csv(const ScanReport& rep, const ExperimentConfig& cfg);
std::string render_summary_json(const ScanReport& rep,
                                const ExperimentConfig& cfg);

// Column header for an appendix exponent pair, e.g. appnorm_-0.5_0.
std::string appendix_column_name(double a, double b);

// Write via a temporary file in the same directory plus rename, creating
// parent directories as needed.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace entlab
