#pragma once

#include <vector>

#include "entlab/clifford.hpp"
#include "entlab/linalg.hpp"

namespace entlab {

// Flat spatial torus, p dimensions of N sites each, with a site-dependent
// curvature potential used only by the scalar operator.
struct TorusGeometry {
  int spatial_dim = 1;    // p in {1, 2, 3}
  int sites_per_dim = 4;  // N, even, at least 4
  double spacing = 1.0;   // a
  double mass = 1.0;      // m > 0
  RVec curvature;         // R(x) per site; empty means identically zero

  int total_sites() const {
    int t = 1;
    for (int j = 0; j < spatial_dim; ++j) t *= sites_per_dim;
    return t;
  }
  double curvature_at(int site) const {
    return curvature.size() > 0 ? curvature(site) : 0.0;
  }
};

// Validates all geometry invariants, including inf(m^2 + R/4) > 0.
TorusGeometry make_torus(int spatial_dim, int sites_per_dim, double spacing,
                         double mass, RVec curvature = RVec());

// sqrt(inf over sites of m^2 + R(x)/4), the mass scale governing decay rates.
double effective_mass(const TorusGeometry& geom);

int site_coordinate(const TorusGeometry& geom, int site, int axis);

// Minimum-image Euclidean distance between two sites, in physical units.
double torus_distance(const TorusGeometry& geom, int x, int y);

double region_distance(const TorusGeometry& geom, const std::vector<int>& A,
                       const std::vector<int>& B);

// Axis-aligned block of sites: corner coordinates and per-axis extents,
// wrapping around the torus where needed.
std::vector<int> block_sites(const TorusGeometry& geom,
                             const std::vector<int>& corner,
                             const std::vector<int>& extent);

// Diagonal 0/1 projector onto a site set, identity on spinor indices.
struct RegionProjector {
  std::vector<int> sites;  // sorted, unique
  RVec site_mask;          // length N^p
  Mat P;                   // size spinor_size * N^p
};

RegionProjector region_projector(const TorusGeometry& geom,
                                 std::vector<int> sites, int spinor_size);

enum class DiracBackend { spectral, wilson };

struct DiracOperator {
  Mat H;  // self-adjoint, size spinor_size * N^p, site-major (spinor fastest)
  Mat L;  // associated Lichnerowicz operator, same size
  DiracBackend backend = DiracBackend::spectral;
  TorusGeometry geometry;
  int spinor_size = 0;
  int dimension = 0;  // spacetime dimension of the representation used
};

// Momentum-space Dirac Hamiltonian gamma^0 (gamma^j k_j + m) on the discrete
// Fourier grid, with the unpaired half-sampling frequency removed from the
// derivative symbol so that the Majorana conjugation anticommutes with H.
// L carries the matching symbol |k|^2 + m^2, making H^2 = L exact.
DiracOperator build_dirac_spectral(const TorusGeometry& geom,
                                   const GammaRep& rep, int size_cap = 8192);

// Local backend: central differences plus the momentum-dependent mass term
// r/a * sum_j (1 - cos k_j a) that lifts the doubler branches.  L carries the
// local scalar operator -laplacian + m^2; H^2 = L only up to discretization.
DiracOperator build_dirac_wilson(const TorusGeometry& geom, const GammaRep& rep,
                                 double r, int size_cap = 8192);

// Scalar operator -laplacian + m^2 + R(x)/4 on the site space (no spinor
// factor); positive definite under the geometry invariant.
RMat build_scalar_lichnerowicz(const TorusGeometry& geom);

// Smooth cutoff profiles built from the quintic smoothstep: chi_check is 1
// on A and supported in its epsilon/2 neighborhood; 1 - chi_hat is 1 on B and
// supported in B's epsilon/2 neighborhood; chi is 1 out to epsilon/2 from A
// and supported within 3 epsilon/2, so the support distances come out as
// d - epsilon and d - 2 epsilon and (1 - chi_hat) * chi = 0 pointwise
// whenever dist(A, B) > 4 epsilon.
struct CutoffFamily {
  RVec chi_check;
  RVec chi_hat;
  RVec chi;
  double epsilon = 0.0;
};

CutoffFamily build_cutoffs(const TorusGeometry& geom, const std::vector<int>& A,
                           const std::vector<int>& B, double epsilon);

}  // namespace entlab
