#include "entlab/clifford.hpp"

#include <array>
#include <cmath>

#include "entlab/errors.hpp"

namespace entlab {

namespace {

Mat pauli(int which) {
  Mat m(2, 2);
  const cplx I(0.0, 1.0);
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Mat pauli_string(const std::vector<int>& slots) {
  Mat out = pauli(slots[0]);
  for (std::size_t t = 1; t < slots.size(); ++t) out = kron(out, pauli(slots[t])).eval();
  return out;
}

// i^p for integer p.
cplx ipow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

Mat chirality_of(const GammaRep& rep) {
  const int k = rep.dimension / 2;
  Mat prod = rep.gammas[0];
  for (int a = 1; a < rep.dimension; ++a) prod = (prod * rep.gammas[a]).eval();
  return ipow(k - 1) * prod;
}

// Orthogonal (Frobenius) projector onto { X : conj(g^a) X = eps X g^a, all a },
// realized as the product of the commuting single-generator averages.  The
// output of a nonzero projection is an exact solution of the stacked linear
// system; residuals are re-verified by the caller.
Mat intertwiner_project(const std::vector<Mat>& g, int eps, Mat x) {
  for (const Mat& ga : g) {
    x = 0.5 * (x + double(eps) * ga.conjugate() * x * ga.adjoint());
  }
  return x;
}

double intertwiner_residual(const std::vector<Mat>& g, int eps, const Mat& c) {
  double r = 0.0;
  for (const Mat& ga : g) {
    r = std::max(r, max_abs(Mat(ga.conjugate() * c - double(eps) * c * ga)));
  }
  return r;
}

// Dimension of the solution space for one sign, from the trace of the
// averaging projector: products of distinct generators are traceless except
// the empty product and, in odd D, the central volume element, so the trace
// of prod_a (1 + eps S_a)/2 collapses to (n^2 + eps^D (conj tr vol)^2)/2^D.
// In even D that is 1 for both signs; in odd D it is 0 or 1.
int solution_space_dim(const GammaRep& rep, int eps) {
  if (rep.dimension % 2 == 0) return 1;
  Mat vol = rep.gammas[0];
  for (int a = 1; a < rep.dimension; ++a) vol = (vol * rep.gammas[a]).eval();
  const cplx phase = vol(0, 0);
  if (max_abs(Mat(vol - phase * Mat::Identity(vol.rows(), vol.cols()))) > 1e-12)
    fail(ErrorCode::Internal, "volume element is not central");
  const double re = (std::conj(phase) * std::conj(phase)).real();
  return int(std::lround(0.5 * (1.0 + eps * re)));
}

// Finds a unit-Frobenius solution for the given sign, or returns false.
bool find_intertwiner(const GammaRep& rep, int eps, Mat& out) {
  if (solution_space_dim(rep, eps) == 0) return false;
  const int n = rep.spinor_size;
  auto consider = [&](const Mat& seed) -> bool {
    Mat c = intertwiner_project(rep.gammas, eps, seed);
    double nrm = c.norm();
    if (nrm < 1e-6) return false;
    c /= nrm;
    if (intertwiner_residual(rep.gammas, eps, c) > 1e-10) return false;
    out = c;
    return true;
  };
  if (consider(Mat::Identity(n, n))) return true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat seed = Mat::Zero(n, n);
      seed(i, j) = 1.0;
      if (consider(seed)) return true;
    }
  return false;
}

// Scalar lambda with conj(C) C = lambda * 1; returns false if not scalar.
bool conjugation_scalar(const Mat& c, double& lambda) {
  const int n = static_cast<int>(c.rows());
  Mat w = c.conjugate() * c;
  cplx t = w.trace() / double(n);
  if (max_abs(Mat(w - t * Mat::Identity(n, n))) > 1e-9 * std::max(1.0, std::abs(t)))
    return false;
  if (std::abs(t.imag()) > 1e-10 * std::max(1.0, std::abs(t))) return false;
  lambda = t.real();
  return true;
}

void fix_phase(Mat& c) {
  const double cutoff = 1e-10 * max_abs(c);
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if (std::abs(c(i, j)) > cutoff) {
        c *= std::conj(c(i, j)) / std::abs(c(i, j));
        return;
      }
}

}  // namespace

GammaRep build_gamma_rep(int D) {
  if (D < 2) fail(ErrorCode::DimensionUnsupported, "spacetime dimension must be at least 2");
  const int k = D / 2;
  if (k > 10)
    fail(ErrorCode::SizeOverflow, "spinor dimension 2^floor(D/2) too large for dense storage");
  GammaRep rep;
  rep.dimension = D;
  rep.spinor_size = 1 << k;

  // Euclidean anticommuting ladder on k tensor slots:
  //   E_{2t}   = sz^t (x) sx (x) 1...,   E_{2t+1} = sz^t (x) sy (x) 1...
  // and for odd D the closing element sz^k.
  std::vector<Mat> eucl;
  for (int t = 0; t < k; ++t) {
    std::vector<int> sx_slots(k, 0), sy_slots(k, 0);
    for (int u = 0; u < t; ++u) { sx_slots[u] = 3; sy_slots[u] = 3; }
    sx_slots[t] = 1;
    sy_slots[t] = 2;
    eucl.push_back(pauli_string(sx_slots));
    eucl.push_back(pauli_string(sy_slots));
  }
  if (D % 2 == 1) eucl.push_back(pauli_string(std::vector<int>(k, 3)));

  rep.gammas.push_back(eucl[0]);  // gamma^0, Hermitian, squares to +1
  const cplx I(0.0, 1.0);
  for (int a = 1; a < D; ++a) rep.gammas.push_back(I * eucl[a]);
  return rep;
}

int predicted_conjugation_sign(int D) {
  switch (((D % 8) + 8) % 8) {
    case 0:
    case 1: return +1;
    case 2:
    case 3:
    case 4: return -1;
    default:
      fail(ErrorCode::DimensionUnsupported,
           "charge conjugation with conj(C)C = 1 requires D mod 8 in {0,1,2,3,4}");
  }
}

IntertwinerSet solve_charge_conjugation(const GammaRep& rep) {
  const int n = rep.spinor_size;
  const int m8 = ((rep.dimension % 8) + 8) % 8;
  // Try the sign established for this dimension class first when there is
  // one; outside the supported classes still attempt both signs so that the
  // failure mode (no solution vs. negative normalization) is reported
  // truthfully.
  const std::array<int, 2> order =
      m8 <= 4 ? std::array<int, 2>{predicted_conjugation_sign(rep.dimension),
                                   -predicted_conjugation_sign(rep.dimension)}
              : std::array<int, 2>{-1, +1};

  IntertwinerSet iset;
  bool found = false;
  bool saw_solution = false;
  for (int eps : order) {
    Mat c;
    if (!find_intertwiner(rep, eps, c)) continue;
    saw_solution = true;
    double lambda = 0.0;
    if (!conjugation_scalar(c, lambda) || lambda <= 1e-12) continue;
    c /= std::sqrt(lambda);
    fix_phase(c);
    iset.C = c;
    iset.epsilon = eps;
    found = true;
    break;
  }
  if (!found) {
    if (saw_solution)
      fail(ErrorCode::NormalizationFailure,
           "conj(C)C is not a positive multiple of the identity for any sign");
    fail(ErrorCode::NoSolution, "intertwining system has no solution for either sign");
  }

  if (max_abs(Mat(iset.C.conjugate() * iset.C - Mat::Identity(n, n))) > 1e-12)
    fail(ErrorCode::NormalizationFailure, "conj(C)C = 1 not reached after rescaling");

  if (rep.dimension % 2 == 0) iset.chirality = chirality_of(rep);
  iset.B_matrix = rep.gammas[0].conjugate() * iset.C;
  iset.A_matrix = iset.B_matrix.conjugate() * iset.C;
  return iset;
}

Antiunitary majorana_conjugation(const IntertwinerSet& iset) {
  // Gamma k = C^{-1} conj(k) and conj(C) = C^{-1} by normalization.
  return Antiunitary{iset.C.conjugate()};
}

TimeReversal build_time_reversal(const GammaRep& rep, const IntertwinerSet& iset) {
  const int m8 = ((rep.dimension % 8) + 8) % 8;
  TimeReversal t;
  t.dimension = rep.dimension;
  switch (m8) {
    case 2:
      // the factor i makes T commute with the Majorana conjugation; it drops
      // out of T^2 and of every conjugation relation
      t.U = cplx(0.0, 1.0) * rep.gammas[0] * iset.chirality;
      break;
    case 4:
      t.U = rep.gammas[0] * iset.chirality;
      break;
    case 0:
    case 1:
      t.U = rep.gammas[0];
      break;
    default:
      fail(ErrorCode::DimensionUnsupported,
           "time reversal requires D mod 8 in {0, 1, 2, 4}");
  }
  t.gamma = majorana_conjugation(iset);
  t.op = Antiunitary{t.U * t.gamma.linear};

  const int n = rep.spinor_size;
  if (max_abs(Mat(t.op.conjugate_op(rep.gammas[0]) - rep.gammas[0])) > 1e-12)
    fail(ErrorCode::Internal, "T gamma^0 T^{-1} = gamma^0 violated");
  for (int a = 1; a < rep.dimension; ++a)
    if (max_abs(Mat(t.op.conjugate_op(rep.gammas[a]) + rep.gammas[a])) > 1e-12)
      fail(ErrorCode::Internal, "T gamma^i T^{-1} = -gamma^i violated");
  if (max_abs(Mat(t.op.compose(t.gamma) - t.gamma.compose(t.op))) > 1e-12)
    fail(ErrorCode::Internal, "T does not commute with the Majorana conjugation");

  Mat sq = t.op.squared();
  cplx s = sq.trace() / double(n);
  if (max_abs(Mat(sq - s * Mat::Identity(n, n))) > 1e-12 ||
      std::abs(std::abs(s) - 1.0) > 1e-12)
    fail(ErrorCode::Internal, "T^2 is not plus or minus identity");
  t.t_squared = s.real() > 0 ? 1 : -1;
  return t;
}

TimeReversal doubled_time_reversal(const TimeReversal& t) {
  const Eigen::Index n = t.U.rows();
  TimeReversal d;
  d.dimension = t.dimension;
  d.doubled = true;
  d.U = Mat::Zero(2 * n, 2 * n);
  if (t.t_squared == -1) {
    // (k, k') -> (T k', -T k)
    d.U.block(0, n, n, n) = t.U;
    d.U.block(n, 0, n, n) = -t.U;
  } else {
    d.U.block(0, 0, n, n) = t.U;
    d.U.block(n, n, n, n) = t.U;
  }
  Mat gl = Mat::Zero(2 * n, 2 * n);
  gl.block(0, 0, n, n) = t.gamma.linear;
  gl.block(n, n, n, n) = t.gamma.linear;
  d.gamma = Antiunitary{gl};
  d.op = Antiunitary{d.U * gl};

  if (max_abs(Mat(d.op.compose(d.gamma) - d.gamma.compose(d.op))) > 1e-12)
    fail(ErrorCode::Internal, "doubled T does not commute with Majorana conjugation");
  Mat sq = d.op.squared();
  cplx s = sq.trace() / double(2 * n);
  if (max_abs(Mat(sq - s * Mat::Identity(2 * n, 2 * n))) > 1e-12 ||
      std::abs(std::abs(s) - 1.0) > 1e-12)
    fail(ErrorCode::Internal, "doubled T^2 is not scalar");
  d.t_squared = s.real() > 0 ? 1 : -1;
  return d;
}

NoGoCertificate certify_no_time_reversal(const GammaRep& rep) {
  const int n = rep.spinor_size;
  const int nn = n * n;

  // Normal matrix of the stacked system U -> gamma^a U gamma^a + U over all a,
  // acting on column-major vec(U).  Each summand is 2 + K + K^dagger with a
  // unitary K = transpose(gamma^a) (x) gamma^a.
  Mat g = Mat::Zero(nn, nn);
  for (const Mat& ga : rep.gammas) {
    Mat k = kron(ga.transpose(), ga);
    g += 2.0 * Mat::Identity(nn, nn) + k + k.adjoint();
  }

  // In a representation whose generators are real or purely imaginary the
  // normal matrix is real symmetric; the real eigensolve is much cheaper.
  RVec values;
  Mat vectors;
  if (max_abs(RMat(g.imag())) < 1e-14) {
    Eigen::SelfAdjointEigenSolver<RMat> es(g.real());
    values = es.eigenvalues();
    vectors = es.eigenvectors().cast<cplx>();
  } else {
    HermEig es = herm_eig(g);
    values = es.values;
    vectors = es.vectors;
  }
  const double lmax = std::max(1.0, values.cwiseAbs().maxCoeff());

  NoGoCertificate cert;
  cert.dimension = rep.dimension;
  cert.smallest_retained = std::sqrt(std::max(0.0, values.maxCoeff()));
  for (int i = 0; i < nn; ++i) {
    if (values(i) > 1e-6 * lmax) {
      cert.smallest_retained =
          std::min(cert.smallest_retained, std::sqrt(std::max(0.0, values(i))));
      continue;
    }
    // Candidate kernel direction; verify the singular value along it with
    // fresh arithmetic against the 1e-10 rank threshold.
    Eigen::Map<const Mat> u(vectors.col(i).data(), n, n);
    double sq = 0.0;
    for (const Mat& ga : rep.gammas) sq += Mat(ga * u * ga + u).squaredNorm();
    double sigma = std::sqrt(sq);
    cert.candidate_residuals.push_back(sigma);
    if (sigma < 1e-10) ++cert.solution_dim;
  }
  return cert;
}

std::vector<GammaTableRow> gamma_table(const std::vector<int>& dims) {
  std::vector<GammaTableRow> rows;
  for (int D : dims) {
    GammaRep rep = build_gamma_rep(D);
    IntertwinerSet iset = solve_charge_conjugation(rep);
    GammaTableRow row;
    row.dimension = D;
    row.spinor_size = rep.spinor_size;
    row.epsilon = iset.epsilon;
    const int m8 = ((D % 8) + 8) % 8;
    if (m8 == 0 || m8 == 1 || m8 == 2 || m8 == 4) {
      TimeReversal t = build_time_reversal(rep, iset);
      row.t_exists = true;
      row.t_squared = t.t_squared;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace entlab
