#include "entlab/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "entlab/errors.hpp"

namespace entlab {

namespace {

std::vector<int> region_indices(const RegionProjector& pv, int spinor) {
  std::vector<int> idx;
  idx.reserve(pv.sites.size() * spinor);
  for (int site : pv.sites)
    for (int a = 0; a < spinor; ++a) idx.push_back(site * spinor + a);
  return idx;
}

}  // namespace

CutSpectrum cut_operator(const QuasifreeSymbol& sym, const TorusGeometry& geom,
                         const RegionProjector& a_region,
                         const RegionProjector& b_region) {
  if (sym.source != SymbolSource::ground)
    fail(ErrorCode::ConfigError, "cut operator needs a ground state symbol");
  const int full = int(sym.Sigma.rows());
  const int sites = geom.total_sites();
  if (full % sites != 0 || a_region.P.rows() != full ||
      b_region.P.rows() != full)
    fail(ErrorCode::DimensionMismatch,
         "regions and symbol live on different spaces");
  const int spinor = full / sites;
  if (a_region.sites.empty())
    fail(ErrorCode::EmptyRegion, "region A is empty");
  for (int site : a_region.sites)
    if (std::binary_search(b_region.sites.begin(), b_region.sites.end(),
                           site))
      fail(ErrorCode::RegionOverlap, "regions A and B intersect");

  std::vector<int> complement;
  for (int site = 0; site < sites; ++site)
    if (!std::binary_search(b_region.sites.begin(), b_region.sites.end(),
                            site))
      complement.push_back(site);
  RegionProjector bprime = region_projector(geom, complement, spinor);

  // all the operators involved are supported on blocks picked out by the
  // diagonal projectors, so everything below works on those blocks directly
  const std::vector<int> aidx = region_indices(a_region, spinor);
  const std::vector<int> bidx = region_indices(b_region, spinor);
  const std::vector<int> bpidx = region_indices(bprime, spinor);
  const int na = int(aidx.size());
  const int nb = int(bidx.size());
  const int nbp = int(bpidx.size());

  Mat sigc(nbp, nbp);  // Sigma on B' x B'
  for (int r = 0; r < nbp; ++r)
    for (int c = 0; c < nbp; ++c) sigc(r, c) = sym.Sigma(bpidx[r], bpidx[c]);
  Mat zc(nb, nbp);  // nonzero block of Z = P_B Sigma P_{B'}
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < nbp; ++c) zc(r, c) = sym.Sigma(bidx[r], bpidx[c]);

  // definitional form P_{B'} - Sigma_{B'}^2 equals Z^+ Z and stays positive
  const Mat defn = Mat::Identity(nbp, nbp) - sigc * sigc;
  if (operator_norm(Mat(defn - zc.adjoint() * zc)) > 1e-10)
    fail(ErrorCode::Internal, "cut operator deviates from its definition");
  HermEig de = herm_eig(defn);
  if (de.values(0) < -1e-9)
    fail(ErrorCode::NegativeEigenvalue,
         "cut operator lost positive semidefiniteness");

  // quadratic form identity against the independently computed cross term
  std::vector<int> apos;  // positions of A's modes inside B' (A, B disjoint)
  apos.reserve(na);
  for (int j : aidx)
    apos.push_back(int(std::lower_bound(bpidx.begin(), bpidx.end(), j) -
                       bpidx.begin()));
  Mat compressed_a(na, na), yc(nb, na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) compressed_a(i, j) = defn(apos[i], apos[j]);
  for (int r = 0; r < nb; ++r)
    for (int j = 0; j < na; ++j) yc(r, j) = sym.Sigma(bidx[r], aidx[j]);
  if (operator_norm(Mat(compressed_a - yc.adjoint() * yc)) > 1e-10)
    fail(ErrorCode::Internal, "cross term identity violated");

  // quarter power through the singular values of Z
  CutSpectrum cut;
  cut.singular_values = RVec::Zero(na);
  if (nb > 0) {
    Eigen::JacobiSVD<Mat> zsvd(zc, Eigen::ComputeThinV);
    Mat va(zsvd.matrixV().cols(), na);
    for (int j = 0; j < na; ++j)
      va.col(j) = zsvd.matrixV().row(apos[j]).adjoint();
    for (Eigen::Index i = 0; i < va.rows(); ++i)
      va.row(i) *= std::sqrt(zsvd.singularValues()(i));
    Eigen::JacobiSVD<Mat> gsvd(va);
    cut.singular_values.head(gsvd.singularValues().size()) =
        gsvd.singularValues();
  }
  cut.trace_norm = cut.singular_values.sum();
  cut.d = b_region.sites.empty()
              ? std::numeric_limits<double>::infinity()
              : region_distance(geom, a_region.sites, b_region.sites);
  cut.M = effective_mass(geom);
  return cut;
}

BoundReport ree_bound_report(const CutSpectrum& cut) {
  BoundReport rep;
  rep.trace_norm = cut.trace_norm;
  rep.exact_zero = cut.trace_norm == 0.0;
  rep.log_trace_norm = rep.exact_zero
                           ? -std::numeric_limits<double>::infinity()
                           : std::log(cut.trace_norm);
  rep.d = cut.d;
  rep.M = cut.M;
  rep.predicted_rate = 0.5 * cut.M;
  return rep;
}

double appendix_decay_norm(const RMat& lichnerowicz,
                           const CutoffFamily& cutoffs, double a, double b) {
  const Eigen::Index t = lichnerowicz.rows();
  if (lichnerowicz.cols() != t || cutoffs.chi.size() != t ||
      cutoffs.chi_hat.size() != t)
    fail(ErrorCode::DimensionMismatch,
         "cutoffs and operator have different sizes");
  if (max_abs(RMat(lichnerowicz - lichnerowicz.transpose())) > 1e-12)
    fail(ErrorCode::ConfigError, "scalar operator must be symmetric");

  Eigen::SelfAdjointEigenSolver<RMat> es(lichnerowicz);
  if (es.eigenvalues()(0) <= 0.0)
    fail(ErrorCode::PositivityViolation,
         "scalar operator is not positive definite");
  auto power = [&](double e) -> RMat {
    if (e == 0.0) return RMat::Identity(t, t);
    RVec w = es.eigenvalues().array().pow(e);
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  };

  const RVec one_minus_hat = RVec::Ones(t) - cutoffs.chi_hat;
  RMat m = one_minus_hat.asDiagonal() * power(a) *
           RMat(cutoffs.chi.asDiagonal()) * power(b);
  return operator_norm(m);
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& points,
                        double d_min, double d_max) {
  for (size_t i = 1; i < points.size(); ++i)
    if (!(points[i].first > points[i - 1].first))
      fail(ErrorCode::ConfigError, "separations must be strictly increasing");
  bool any_positive = false;
  for (const auto& p : points) any_positive = any_positive || p.second > 0.0;
  if (!points.empty() && !any_positive)
    fail(ErrorCode::AllZeroValues, "no positive values to fit");

  DecayFit fit;
  fit.window_first = -1;
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].first < d_min || points[i].first > d_max) continue;
    if (fit.window_first < 0) fit.window_first = int(i);
    fit.window_last = int(i);
    if (points[i].second > 0.0) fit.points.push_back(points[i]);
  }
  if (fit.points.size() < 4)
    fail(ErrorCode::InsufficientPoints,
         "need at least four positive points in the fit window");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(fit.points.size());
  for (const auto& [d, v] : fit.points) {
    const double y = std::log(v);
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (const auto& [d, v] : fit.points) {
    const double y = std::log(v);
    ss_res += (y - fit.slope * d - fit.intercept) * (y - fit.slope * d - fit.intercept);
    ss_tot += (y - mean) * (y - mean);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace entlab
