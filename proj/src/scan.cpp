#include "entlab/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "entlab/errors.hpp"
#include "entlab/gaussian.hpp"
#include "entlab/quasifree.hpp"

namespace entlab {
namespace {

using njson = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// message body without the leading "CodeName: " that Error::what prepends
std::string message_of(const Error& e) {
  const std::string w = e.what();
  const auto pos = w.find(": ");
  return pos == std::string::npos ? w : w.substr(pos + 2);
}

std::string fmt_sig(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

struct NamedColumn {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (d, value)
};

std::vector<NamedColumn> fit_columns(const ScanReport& rep,
                                     const ExperimentConfig& cfg) {
  std::vector<NamedColumn> cols;
  auto gather = [&](const std::string& name, auto getter) {
    NamedColumn c;
    c.name = name;
    for (const ScanRow& row : rep.rows) c.points.emplace_back(row.d, getter(row));
    cols.push_back(std::move(c));
  };
  if (cfg.want_cut_norm)
    gather("trace_norm", [](const ScanRow& r) { return r.trace_norm; });
  if (cfg.want_mutual_info)
    gather("mutual_info", [](const ScanRow& r) { return r.mutual_info; });
  if (cfg.want_appendix_norm)
    for (size_t k = 0; k < cfg.appendix_exponents.size(); ++k)
      gather(appendix_column_name(cfg.appendix_exponents[k].first,
                                  cfg.appendix_exponents[k].second),
             [k](const ScanRow& r) { return r.appendix[k]; });
  return cols;
}

}  // namespace

std::string appendix_column_name(double a, double b) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "appnorm_%g_%g", a, b);
  return buf;
}

ScanReport run_scan(const ExperimentConfig& cfg) {
  const PreflightReport pre = validate_experiment(cfg);
  const TorusGeometry& geom = pre.geometry;
  const auto t_start = clock_type::now();

  const GammaRep rep = build_gamma_rep(cfg.effective_dimension());
  const DiracOperator dirac =
      cfg.backend == "wilson"
          ? build_dirac_wilson(geom, rep, cfg.wilson_r, cfg.size_cap)
          : build_dirac_spectral(geom, rep, cfg.size_cap);
  const QuasifreeSymbol sym = ground_symbol(dirac);

  RMat ell;
  if (cfg.want_appendix_norm) ell = build_scalar_lichnerowicz(geom);

  const RegionProjector a_proj =
      region_projector(geom, scan_region_a(cfg), rep.spinor_size);

  ScanReport report;
  report.mass_gap = pre.mass_gap;
  report.predicted_rate = pre.predicted_rate;

  for (double d : cfg.separations) {
    const auto t_point = clock_type::now();
    ScanRow row;
    row.d = d;
    row.trace_norm = row.log_trace_norm = row.mutual_info = kNaN;
    try {
      const RegionProjector b_proj =
          region_projector(geom, scan_region_b(cfg, d), rep.spinor_size);
      if (!b_proj.sites.empty()) {
        const double actual = region_distance(geom, a_proj.sites, b_proj.sites);
        if (std::abs(actual - d) > 1e-9)
          fail(ErrorCode::Internal,
               "placed regions have distance " + std::to_string(actual) +
                   ", expected " + std::to_string(d));
      }
      if (cfg.want_cut_norm) {
        const BoundReport bound =
            ree_bound_report(cut_operator(sym, geom, a_proj, b_proj));
        row.trace_norm = bound.trace_norm;
        row.log_trace_norm = bound.log_trace_norm;
      }
      if (cfg.want_mutual_info)
        row.mutual_info =
            mutual_information(sym, geom, a_proj, b_proj).mutual_information;
      if (cfg.want_appendix_norm) {
        const CutoffFamily cut =
            build_cutoffs(geom, a_proj.sites, b_proj.sites, cfg.epsilon);
        for (const auto& [ea, eb] : cfg.appendix_exponents)
          row.appendix.push_back(appendix_decay_norm(ell, cut, ea, eb));
      }
    } catch (const Error& e) {
      fail(e.code(),
           "at separation d = " + fmt_sig(d, 12) + ": " + message_of(e));
    }
    report.rows.push_back(std::move(row));
    report.seconds_per_point.push_back(seconds_since(t_point));
  }

  const double d_min = 3.0 / report.mass_gap;
  const double d_max =
      0.5 * geom.sites_per_dim * geom.spacing - 2.0 * geom.spacing;
  for (const NamedColumn& col : fit_columns(report, cfg)) {
    try {
      FittedRate fr;
      fr.observable = col.name;
      fr.fit = fit_decay_rate(col.points, d_min, d_max);
      fr.relative_deviation = -fr.fit.slope / report.predicted_rate - 1.0;
      report.fitted.push_back(std::move(fr));
    } catch (const Error&) {
      // a flat or identically zero column has no decay rate to report
    }
  }

  report.total_seconds = seconds_since(t_start);
  return report;
}

std::string render_csv(const ScanReport& rep, const ExperimentConfig& cfg) {
  std::string out = "d,trace_norm,log_trace_norm,mutual_info";
  if (cfg.want_appendix_norm)
    for (const auto& [a, b] : cfg.appendix_exponents)
      out += "," + appendix_column_name(a, b);
  out += "\n";
  for (const ScanRow& row : rep.rows) {
    out += fmt_sig(row.d, cfg.precision);
    out += "," + fmt_sig(row.trace_norm, cfg.precision);
    out += "," + fmt_sig(row.log_trace_norm, cfg.precision);
    out += "," + fmt_sig(row.mutual_info, cfg.precision);
    for (double v : row.appendix) out += "," + fmt_sig(v, cfg.precision);
    out += "\n";
  }
  return out;
}

std::string render_summary_json(const ScanReport& rep,
                                const ExperimentConfig& cfg) {
  njson root;
  root["config_echo"] = njson::parse(serialize_config(cfg));
  root["M"] = rep.mass_gap;
  root["predicted_rate"] = rep.predicted_rate;
  njson fitted;
  for (const FittedRate& fr : rep.fitted) {
    njson f;
    f["slope"] = fr.fit.slope;
    f["intercept"] = fr.fit.intercept;
    f["r2"] = fr.fit.r_squared;
    f["window"] = njson::array({fr.fit.window_first, fr.fit.window_last});
    f["relative_deviation"] = fr.relative_deviation;
    fitted[fr.observable] = f;
  }
  root["fitted"] = fitted;
  njson timings;
  timings["per_point_seconds"] = rep.seconds_per_point;
  timings["total_seconds"] = rep.total_seconds;
  root["timings"] = timings;
  return root.dump(2) + "\n";
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoFailure, "cannot open " + tmp.string());
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) fail(ErrorCode::IoFailure, "short write to " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec)
    fail(ErrorCode::IoFailure,
         "cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace entlab
