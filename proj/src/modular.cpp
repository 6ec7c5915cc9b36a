#include "entlab/modular.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "entlab/errors.hpp"

namespace entlab {

namespace {

int spinor_of(const RegionProjector& pv) {
  const int sites = int(pv.site_mask.size());
  if (sites == 0 || pv.P.rows() % sites != 0)
    fail(ErrorCode::Internal, "region projector has no site structure");
  return int(pv.P.rows()) / sites;
}

std::vector<int> dirac_indices(const RegionProjector& pv) {
  const int n = spinor_of(pv);
  std::vector<int> idx;
  idx.reserve(pv.sites.size() * n);
  for (int site : pv.sites)
    for (int a = 0; a < n; ++a) idx.push_back(site * n + a);
  return idx;
}

Mat compress(const Mat& m, const std::vector<int>& idx) {
  Mat out(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

// spectral weights of (P + Sigma_V)^{1-e} (P - Sigma_V)^e on the retained part
double power_weight(double s, double e) {
  return std::pow(1.0 + s, 1.0 - e) * std::pow(1.0 - s, e);
}

}  // namespace

ModularData modular_data(const RestrictedSymbol& rsym) {
  const std::vector<int> idx = dirac_indices(rsym.P_V);
  ModularData md;
  md.range_dim = int(idx.size());
  if (idx.empty()) return md;

  HermEig es = herm_eig(compress(rsym.Sigma_V, idx));
  std::vector<int> keep;
  for (int i = 0; i < md.range_dim; ++i)
    if (1.0 + es.values(i) > kKernelTol)
      keep.push_back(i);
    else
      ++md.excluded;

  md.s = RVec(keep.size());
  md.mu = RVec(keep.size());
  md.vectors = Mat::Zero(rsym.Sigma_V.rows(), keep.size());
  for (size_t j = 0; j < keep.size(); ++j) {
    double s = std::clamp(es.values(keep[j]), -1.0, 1.0);
    // eigenvalues are only trusted to solver accuracy; resolve the ones at
    // the pure point to exactly 1 so fractional powers of 1 - s stay clean
    if (1.0 - s <= kKernelTol) s = 1.0;
    md.s(j) = s;
    md.mu(j) = (1.0 - s) / (1.0 + s);
    for (size_t i = 0; i < idx.size(); ++i)
      md.vectors(idx[i], j) = es.vectors(i, keep[j]);
  }
  return md;
}

Mat gamma_real_basis(const RegionProjector& pv, const Antiunitary& gamma) {
  const std::vector<int> idx = dirac_indices(pv);
  const int full = int(pv.P.rows());
  const int r = int(idx.size());
  if (r == 0) return Mat(full, 0);

  // candidate spanning set of the real subspace: e + Ge and i(e - Ge), both
  // fixed by the conjugation
  Mat cand(full, 2 * r);
  const double inv = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < r; ++j) {
    Vec e = Vec::Zero(full);
    e(idx[j]) = 1.0;
    Vec ge = gamma.apply(e);
    cand.col(2 * j) = inv * (e + ge);
    cand.col(2 * j + 1) = inv * cplx(0.0, 1.0) * (e - ge);
  }

  // orthonormalize through the real part of the Gram matrix
  RMat gram = (cand.adjoint() * cand).real();
  Eigen::SelfAdjointEigenSolver<RMat> es(gram);
  std::vector<int> keep;
  for (int i = 0; i < 2 * r; ++i)
    if (es.eigenvalues()(i) > 1e-10) keep.push_back(i);
  Mat basis(full, keep.size());
  for (size_t k = 0; k < keep.size(); ++k)
    basis.col(k) = cand * es.eigenvectors().col(keep[k]).cast<cplx>() /
                   std::sqrt(es.eigenvalues()(keep[k]));

  if (int(keep.size()) != r)
    fail(ErrorCode::Internal, "conjugation-invariant subspace has wrong size");
  for (int k = 0; k < r; ++k)
    if ((gamma.apply(basis.col(k)) - basis.col(k)).cwiseAbs().maxCoeff() >
        1e-10)
      fail(ErrorCode::Internal, "basis vector is not conjugation invariant");
  return basis;
}

double verify_prop52_quadratic_form(const QuasifreeSymbol& sym,
                                    const RegionProjector& v, const Vec& k,
                                    double a) {
  if (!(a > 0.0 && a <= 0.5))
    fail(ErrorCode::ConfigError, "exponent must lie in (0, 1/2]");
  if ((sym.gamma.apply(k) - k).cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorCode::NotGammaReal,
         "vector is not invariant under the Majorana conjugation");

  ModularData md = modular_data(restrict_symbol(sym, v));
  double lhs = 0.0, rhs = 0.0;
  for (Eigen::Index i = 0; i < md.s.size(); ++i) {
    const double w = std::norm(cplx(md.vectors.col(i).dot(k)));
    lhs += w * power_weight(md.s(i), 2.0 * a);
    rhs += w * power_weight(md.s(i), 1.0 - 2.0 * a);
  }
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

NormComparison prop53_norm_comparison(const QuasifreeSymbol& sym,
                                      const RegionProjector& v_check,
                                      const RegionProjector& v_hat, double a) {
  if (!(a > 0.0 && a <= 0.25))
    fail(ErrorCode::ConfigError, "exponent must lie in (0, 1/4]");
  for (int site : v_check.sites)
    if (!std::binary_search(v_hat.sites.begin(), v_hat.sites.end(), site))
      fail(ErrorCode::RegionNotNested,
           "inner region leaves the outer region");

  NormComparison out;
  out.c_a = std::pow(2.0, 2.0 * a);
  if (v_check.sites.empty()) return out;

  ModularData md = modular_data(restrict_symbol(sym, v_hat));
  const std::vector<int> inner = dirac_indices(v_check);
  const int full = int(v_hat.P.rows());

  // coefficients of the retained eigenvectors on the inner coordinate basis
  Mat overlap(md.s.size(), inner.size());
  for (Eigen::Index i = 0; i < md.s.size(); ++i)
    for (size_t j = 0; j < inner.size(); ++j)
      overlap(i, j) = std::conj(md.vectors(inner[j], i));

  // rhs: complex trace norm of (P - Sigma_V^2)^a on the inner region
  Mat xi2(full, inner.size());
  {
    Vec w2(md.s.size());
    for (Eigen::Index i = 0; i < md.s.size(); ++i)
      w2(i) = std::pow(std::max(0.0, 1.0 - md.s(i) * md.s(i)), a);
    xi2 = md.vectors * w2.asDiagonal() * overlap;
  }
  out.rhs = trace_norm_of(xi2);

  // lhs: real-linear trace norm of (P + Sigma_V)^{1/2} M^a over an
  // orthonormal basis of the conjugation-invariant subspace
  Mat kbasis = gamma_real_basis(v_check, sym.gamma);
  Vec w3(md.s.size());
  for (Eigen::Index i = 0; i < md.s.size(); ++i)
    w3(i) = std::pow(1.0 + md.s(i), 0.5 - a) * std::pow(1.0 - md.s(i), a);
  Mat image = md.vectors * w3.asDiagonal() * (md.vectors.adjoint() * kbasis);
  Mat stacked(2 * full, kbasis.cols());
  stacked.topRows(full) = image.real().cast<cplx>();
  stacked.bottomRows(full) = image.imag().cast<cplx>();
  out.lhs = trace_norm_of(stacked);

  const double cst = std::pow(2.0, 1.5 - 2.0 * a);
  if (out.lhs > cst * out.rhs + 1e-9)
    fail(ErrorCode::Internal, "norm comparison bound violated");
  return out;
}

}  // namespace entlab
