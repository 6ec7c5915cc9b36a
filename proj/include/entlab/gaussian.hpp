#pragma once

#include "entlab/lattice.hpp"
#include "entlab/quasifree.hpp"

namespace entlab {

struct EntropyReport {
  double s_a = 0.0;
  double s_b = 0.0;
  double s_ab = 0.0;
  double mutual_information = 0.0;  // s_a + s_b - s_ab
};

// Von Neumann entropy (nats) of the state restricted to the region: binary
// entropy summed over the eigenvalues of P_V (1 + Sigma)/2 P_V on ran(P_V),
// accumulated in extended precision. Eigenvalues are clamped into [0, 1];
// values outside [-1e-10, 1 + 1e-10] raise EigenvalueOutOfRange. The region
// must be nonempty (EmptyRegion).
double region_entropy(const QuasifreeSymbol& sym, const RegionProjector& v);

// I(A:B) = S(A) + S(B) - S(A u B) for disjoint regions (RegionOverlap
// otherwise); an empty region on either side gives exactly zero.
EntropyReport mutual_information(const QuasifreeSymbol& sym,
                                 const TorusGeometry& geom,
                                 const RegionProjector& a_region,
                                 const RegionProjector& b_region);

}  // namespace entlab
