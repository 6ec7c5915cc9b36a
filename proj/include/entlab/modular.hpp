#pragma once

#include "entlab/linalg.hpp"
#include "entlab/quasifree.hpp"

namespace entlab {

// eigenvectors of Sigma_V with 1 + s at or below this are treated as the
// kernel of P + Sigma_V and dropped from all functional calculus (0^a = 0)
inline constexpr double kKernelTol = 1e-10;

// Spectral data of Sigma_V on ran(P_V) together with the eigenvalues
// mu = (1 - s) / (1 + s) of the restricted modular operator
// M = (P_V - Sigma_V) / (P_V + Sigma_V).
struct ModularData {
  RVec s;         // retained eigenvalues, ascending, clamped to [-1, 1];
                  // values within kKernelTol of 1 are snapped to 1
  Mat vectors;    // matching eigenvectors as full-size columns
  RVec mu;        // (1 - s) / (1 + s) elementwise
  int excluded = 0;   // count of kernel vectors dropped
  int range_dim = 0;  // complex dimension of ran(P_V)
};

ModularData modular_data(const RestrictedSymbol& rsym);

// Orthonormal basis of the real subspace {k in ran(P_V) : Gamma k = k},
// returned as complex columns. Built from the coordinate basis via
// (e + Gamma e)/sqrt(2), (ie + Gamma(ie))/sqrt(2), then orthonormalized
// through the real Gram matrix with null vectors dropped (tol 1e-10).
Mat gamma_real_basis(const RegionProjector& pv, const Antiunitary& gamma);

// Residual of the quadratic form identity
//   <k, (P + Sigma_V) M^{2a} k> = <k, (P + Sigma_V) M^{1-2a} k>
// for conjugation-invariant k, relative to max(1, |lhs|). Both sides are
// evaluated through the spectral weights (1+s)^{1-e} (1-s)^e, e = 2a and
// 1 - 2a, so a = 1/4 gives an identical computation and exact zero.
// Throws NotGammaReal when Gamma k differs from k beyond 1e-10.
double verify_prop52_quadratic_form(const QuasifreeSymbol& sym,
                                    const RegionProjector& v, const Vec& k,
                                    double a);

struct NormComparison {
  double lhs = 0.0;  // real-linear trace norm of (P+Sigma)^{1/2} M^a on the
                     // conjugation-invariant subspace of the inner region
  double rhs = 0.0;  // trace norm of (P - Sigma^2)^a on the inner region
  double c_a = 0.0;  // 2^{2a}
};

// Compares the decay-carrying norms over nested regions; asserts the bound
// lhs <= 2^{3/2 - 2a} rhs, the provable chain constant once the real-linear
// trace norm is charged the factor 2 of the real-vs-complex convention.
// Throws RegionNotNested if the inner region leaves the outer one.
NormComparison prop53_norm_comparison(const QuasifreeSymbol& sym,
                                      const RegionProjector& v_check,
                                      const RegionProjector& v_hat, double a);

}  // namespace entlab
