#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "entlab/lattice.hpp"
#include "entlab/quasifree.hpp"

namespace entlab {

// Spectrum of the cut operator (P_{B'} - Sigma_{B'}^2)^{1/4} restricted to
// the region A, whose trace norm bounds the relative entanglement entropy.
struct CutSpectrum {
  RVec singular_values;   // descending, one per mode supported in A
  double trace_norm = 0.0;
  double d = 0.0;  // separation of A and B, infinite when B is empty
  double M = 0.0;  // effective mass of the geometry
};

// For a pure symbol P_{B'} - Sigma_{B'}^2 = Z^+ Z with Z = P_B Sigma P_{B'},
// so the quarter power is taken through the singular values of Z, which keeps
// relative accuracy at large separations and makes B = {} exactly zero. The
// definitional form, its positivity, and the quadratic form identity
// P_A (P_{B'} - Sigma_{B'}^2) P_A = |P_B Sigma P_A|^2 are asserted on every
// call. Throws RegionOverlap when A and B share sites, EmptyRegion when A is
// empty, NegativeEigenvalue when positivity fails beyond -1e-9.
CutSpectrum cut_operator(const QuasifreeSymbol& sym, const TorusGeometry& geom,
                         const RegionProjector& a_region,
                         const RegionProjector& b_region);

struct BoundReport {
  double trace_norm = 0.0;
  double log_trace_norm = 0.0;  // -infinity when the trace norm vanishes
  bool exact_zero = false;
  double d = 0.0;
  double M = 0.0;
  double predicted_rate = 0.0;  // M / 2
  // Only the rate is a sharp claim; the multiplicative constant in front of
  // exp(-M d / 2) is never estimated. Values refer to the doubled (Dirac)
  // system, which carries twice the entropy of the Majorana description.
  bool dirac_doubling = true;
};

BoundReport ree_bound_report(const CutSpectrum& cut);

// Operator norm of (1 - chi_hat) L^a chi L^b, the cutoffs acting as
// multiplication operators and the powers through the eigenbasis of L.
// Exponent zero short-circuits to the identity, so a = b = 0 returns an
// exact zero whenever the supports of 1 - chi_hat and chi are disjoint.
double appendix_decay_norm(const RMat& lichnerowicz,
                           const CutoffFamily& cutoffs, double a, double b);

struct DecayFit {
  std::vector<std::pair<double, double>> points;  // the (d, value) pairs used
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  int window_first = 0;  // inclusive index range into the input list
  int window_last = 0;
};

// Deterministic least squares of log(value) against d over the window
// d_min <= d <= d_max; points with value <= 0 are dropped. Requires strictly
// increasing d, at least one positive value (AllZeroValues otherwise) and at
// least four usable points (InsufficientPoints otherwise).
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& points,
                        double d_min = -std::numeric_limits<double>::infinity(),
                        double d_max = std::numeric_limits<double>::infinity());

}  // namespace entlab
