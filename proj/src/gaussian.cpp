#include "entlab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "entlab/errors.hpp"

namespace entlab {

namespace {

long double binary_entropy(long double lam) {
  long double s = 0.0L;
  if (lam > 0.0L) s -= lam * std::log(lam);
  if (lam < 1.0L) s -= (1.0L - lam) * std::log(1.0L - lam);
  return s;
}

}  // namespace

double region_entropy(const QuasifreeSymbol& sym, const RegionProjector& v) {
  if (v.sites.empty()) fail(ErrorCode::EmptyRegion, "entropy of empty region");
  const int full = int(sym.Sigma.rows());
  if (v.P.rows() != full)
    fail(ErrorCode::DimensionMismatch, "region and symbol sizes differ");
  const int spinor = full / int(v.site_mask.size());

  std::vector<int> idx;
  for (int site : v.sites)
    for (int a = 0; a < spinor; ++a) idx.push_back(site * spinor + a);
  Mat sub(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j)
      sub(i, j) = 0.5 * (sym.Sigma(idx[i], idx[j]) +
                         (idx[i] == idx[j] ? 1.0 : 0.0));

  HermEig es = herm_eig(sub);
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double lam = es.values(i);
    if (lam < -1e-10 || lam > 1.0 + 1e-10)
      fail(ErrorCode::EigenvalueOutOfRange,
           "occupation eigenvalue outside [0, 1]");
    total += binary_entropy(std::clamp((long double)lam, 0.0L, 1.0L));
  }
  return double(total);
}

EntropyReport mutual_information(const QuasifreeSymbol& sym,
                                 const TorusGeometry& geom,
                                 const RegionProjector& a_region,
                                 const RegionProjector& b_region) {
  for (int site : a_region.sites)
    if (std::binary_search(b_region.sites.begin(), b_region.sites.end(),
                           site))
      fail(ErrorCode::RegionOverlap, "regions A and B intersect");

  EntropyReport rep;
  if (a_region.sites.empty() || b_region.sites.empty()) {
    if (!a_region.sites.empty())
      rep.s_a = rep.s_ab = region_entropy(sym, a_region);
    if (!b_region.sites.empty())
      rep.s_b = rep.s_ab = region_entropy(sym, b_region);
    rep.mutual_information = 0.0;
    return rep;
  }

  const int spinor =
      int(sym.Sigma.rows()) / int(a_region.site_mask.size());
  std::vector<int> joint = a_region.sites;
  joint.insert(joint.end(), b_region.sites.begin(), b_region.sites.end());
  std::sort(joint.begin(), joint.end());

  rep.s_a = region_entropy(sym, a_region);
  rep.s_b = region_entropy(sym, b_region);
  rep.s_ab = region_entropy(sym, region_projector(geom, joint, spinor));
  rep.mutual_information = rep.s_a + rep.s_b - rep.s_ab;
  return rep;
}

}  // namespace entlab
