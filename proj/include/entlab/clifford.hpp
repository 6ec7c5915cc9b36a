#pragma once

#include <optional>
#include <vector>

#include "entlab/linalg.hpp"

namespace entlab {

// Antiunitary operator stored through its linear part: v -> linear * conj(v).
struct Antiunitary {
  Mat linear;

  Vec apply(const Vec& v) const { return linear * v.conjugate(); }
  // Linear part of the composition this . other.
  Mat compose(const Antiunitary& other) const {
    return linear * other.linear.conjugate();
  }
  // The square of an antiunitary is a linear operator.
  Mat squared() const { return linear * linear.conjugate(); }
  // For unitary linear part: X -> T X T^{-1} (a linear operator again).
  Mat conjugate_op(const Mat& x) const {
    return linear * x.conjugate() * linear.adjoint();
  }
};

// Irreducible gamma matrices for signature (+, -, ..., -):
// gamma^0 Hermitian with square +1, gamma^i anti-Hermitian with square -1,
// pairwise anticommuting, acting on C^(2^floor(D/2)).
struct GammaRep {
  int dimension = 0;    // spacetime dimension D
  int spinor_size = 0;  // 2^floor(D/2)
  std::vector<Mat> gammas;
};

// Charge-conjugation data: C solves C^{-1} conj(gamma^a) C = epsilon * gamma^a
// for every a, normalized so that conj(C) C = 1 and the first nonzero entry
// of C (row-major) is real positive.  For even D the chirality element is
// included (Hermitian, squares to 1, anticommutes with every gamma^a).
// A and B realize the invariant pairing: A = conj(B) C with conj(A)^T = A and
// largest singular value of B equal to 1.
struct IntertwinerSet {
  Mat C;
  int epsilon = 0;
  Mat chirality;  // empty for odd D
  Mat B_matrix;
  Mat A_matrix;

  bool has_chirality() const { return chirality.size() > 0; }
};

// Sitewise Majorana conjugation k -> C^{-1} conj(k); involutive and
// antiunitary once conj(C) C = 1.
Antiunitary majorana_conjugation(const IntertwinerSet& iset);

// Time reversal T = U . Gamma with the properties
//   T gamma^0 T^{-1} = gamma^0,  T gamma^i T^{-1} = -gamma^i,  [T, Gamma] = 0.
// t_squared records the sign of T^2 (plus or minus identity).
struct TimeReversal {
  Mat U;             // unitary factor (2n x 2n in the doubled case)
  Antiunitary op;    // the full antiunitary map
  Antiunitary gamma; // the Majorana conjugation it is built over (same size)
  int t_squared = 0;
  bool doubled = false;
  int dimension = 0;
};

// Certificate that the constraint system gamma^a U gamma^a = -U (all a) has a
// solution space of the stated dimension inside the full n^2 matrix space.
struct NoGoCertificate {
  int dimension = 0;        // spacetime dimension D
  int solution_dim = 0;     // number of independent solutions found
  double smallest_retained = 0.0;  // smallest singular value counted nonzero
  std::vector<double> candidate_residuals;
};

GammaRep build_gamma_rep(int D);

// Sign of the charge-conjugation relation expected for D mod 8 in
// {0, 1, 2, 3, 4}; throws DimensionUnsupported otherwise.
int predicted_conjugation_sign(int D);

IntertwinerSet solve_charge_conjugation(const GammaRep& rep);

// Defined for D mod 8 in {0, 1, 2, 4}; throws DimensionUnsupported otherwise
// (D = 3 mod 8 is certified impossible by certify_no_time_reversal).
TimeReversal build_time_reversal(const GammaRep& rep, const IntertwinerSet& iset);

// Time reversal on the doubled space K + K.  For t_squared = -1 inputs uses
// the off-diagonal form (k, k') -> (T k', -T k), which squares to +1; for
// t_squared = +1 inputs uses the block-diagonal form.
TimeReversal doubled_time_reversal(const TimeReversal& t);

NoGoCertificate certify_no_time_reversal(const GammaRep& rep);

struct GammaTableRow {
  int dimension = 0;
  int spinor_size = 0;
  int epsilon = 0;
  bool t_exists = false;
  std::optional<int> t_squared;
};

std::vector<GammaTableRow> gamma_table(const std::vector<int>& dims);

}  // namespace entlab
