#include "entlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "entlab/errors.hpp"

namespace entlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate(const TorusGeometry& geom) {
  if (geom.spatial_dim < 1 || geom.spatial_dim > 3)
    fail(ErrorCode::ConfigError, "spatial dimension must be 1, 2, or 3");
  if (geom.sites_per_dim < 4 || geom.sites_per_dim % 2 != 0)
    fail(ErrorCode::ConfigError, "sites per dimension must be even and at least 4");
  if (!(geom.spacing > 0.0) || !std::isfinite(geom.spacing))
    fail(ErrorCode::ConfigError, "lattice spacing must be positive and finite");
  if (!(geom.mass > 0.0) || !std::isfinite(geom.mass))
    fail(ErrorCode::ConfigError, "mass must be positive and finite");
  if (geom.curvature.size() > 0) {
    if (geom.curvature.size() != geom.total_sites())
      fail(ErrorCode::ConfigError, "curvature profile length must equal the site count");
    if (!geom.curvature.allFinite())
      fail(ErrorCode::ConfigError, "curvature profile must be finite");
  }
  double inf = std::numeric_limits<double>::infinity();
  for (int s = 0; s < geom.total_sites(); ++s)
    inf = std::min(inf, geom.mass * geom.mass + geom.curvature_at(s) / 4.0);
  if (!(inf > 0.0))
    fail(ErrorCode::PositivityViolation, "inf of m^2 + R(x)/4 must be positive");
}

void require_flat(const TorusGeometry& geom) {
  for (int s = 0; s < geom.total_sites(); ++s)
    if (geom.curvature_at(s) != 0.0)
      fail(ErrorCode::ConfigError,
           "curvature profiles enter only the scalar operator; Dirac backends need R = 0");
}

// Spinor representation usable on the torus: needs one generator per spatial
// axis and a conjugation sign that makes the mass term odd under the
// sitewise Majorana conjugation.
void check_rep(const TorusGeometry& geom, const GammaRep& rep) {
  if (rep.dimension < geom.spatial_dim + 1)
    fail(ErrorCode::DimensionMismatch,
         "representation must provide at least one generator per spatial axis");
  if (rep.spinor_size != (1 << (rep.dimension / 2)))
    fail(ErrorCode::DimensionMismatch, "inconsistent spinor size in representation");
  const int m8 = ((rep.dimension % 8) + 8) % 8;
  if (m8 != 2 && m8 != 3 && m8 != 4)
    fail(ErrorCode::DimensionUnsupported,
         "mass term anticommutes with the Majorana conjugation only for "
         "conjugation sign -1 (D mod 8 in {2, 3, 4})");
}

void check_size(const TorusGeometry& geom, int spinor, int cap) {
  const long total = long(spinor) * geom.total_sites();
  if (total > cap) fail(ErrorCode::SizeOverflow, "operator size exceeds the configured cap");
}

// Embed a one-dimensional site operator on the given axis; coordinate 0 is
// the fastest index.
Mat site_op(const TorusGeometry& geom, const Mat& one_dim, int axis) {
  const int N = geom.sites_per_dim;
  Mat out = (axis == geom.spatial_dim - 1) ? one_dim : Mat(Mat::Identity(N, N));
  for (int j = geom.spatial_dim - 2; j >= 0; --j)
    out = kron(out, j == axis ? one_dim : Mat(Mat::Identity(N, N))).eval();
  return out;
}

// Antisymmetric spectral derivative: circulant with the half-sampling
// frequency dropped, making the kernel purely imaginary and odd.
Mat spectral_derivative_1d(int N, double a) {
  RVec c = RVec::Zero(N);
  for (int z = 0; z < N; ++z)
    for (int w = 1; w < N / 2; ++w)
      c(z) += (2.0 / N) * (2.0 * kPi * w / (N * a)) * std::sin(2.0 * kPi * w * z / N);
  Mat k(N, N);
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) k(x, y) = cplx(0.0, c(((x - y) % N + N) % N));
  return k;
}

Mat central_derivative_1d(int N, double a) {
  Mat k = Mat::Zero(N, N);
  for (int x = 0; x < N; ++x) {
    k(x, (x + 1) % N) = cplx(0.0, -1.0 / (2.0 * a));
    k(x, (x - 1 + N) % N) = cplx(0.0, +1.0 / (2.0 * a));
  }
  return k;
}

// Negative-semidefinite nearest-neighbor Laplacian in one dimension.
Mat laplacian_1d(int N, double a) {
  Mat k = Mat::Zero(N, N);
  const double w = 1.0 / (a * a);
  for (int x = 0; x < N; ++x) {
    k(x, x) = -2.0 * w;
    k(x, (x + 1) % N) += w;
    k(x, (x - 1 + N) % N) += w;
  }
  return k;
}

DiracOperator assemble(const TorusGeometry& geom, const GammaRep& rep,
                       const std::vector<Mat>& kinetic, const Mat& site_mass,
                       const Mat& site_l, DiracBackend backend) {
  const int n = rep.spinor_size;
  const int T = geom.total_sites();
  DiracOperator op;
  op.backend = backend;
  op.geometry = geom;
  op.spinor_size = n;
  op.dimension = rep.dimension;
  op.H = Mat::Zero(long(n) * T, long(n) * T);
  for (int j = 0; j < geom.spatial_dim; ++j)
    op.H += kron(kinetic[j], Mat(rep.gammas[0] * rep.gammas[j + 1]));
  op.H += kron(site_mass, rep.gammas[0]);
  op.L = kron(site_l, Mat(Mat::Identity(n, n)));
  if (max_abs(Mat(op.H - op.H.adjoint())) > 1e-12)
    fail(ErrorCode::Internal, "assembled Hamiltonian is not self-adjoint");
  return op;
}

}  // namespace

TorusGeometry make_torus(int spatial_dim, int sites_per_dim, double spacing,
                         double mass, RVec curvature) {
  TorusGeometry geom;
  geom.spatial_dim = spatial_dim;
  geom.sites_per_dim = sites_per_dim;
  geom.spacing = spacing;
  geom.mass = mass;
  geom.curvature = std::move(curvature);
  validate(geom);
  return geom;
}

double effective_mass(const TorusGeometry& geom) {
  double inf = std::numeric_limits<double>::infinity();
  for (int s = 0; s < geom.total_sites(); ++s)
    inf = std::min(inf, geom.mass * geom.mass + geom.curvature_at(s) / 4.0);
  return std::sqrt(inf);
}

int site_coordinate(const TorusGeometry& geom, int site, int axis) {
  int c = site;
  for (int j = 0; j < axis; ++j) c /= geom.sites_per_dim;
  return c % geom.sites_per_dim;
}

double torus_distance(const TorusGeometry& geom, int x, int y) {
  const int N = geom.sites_per_dim;
  double sq = 0.0;
  for (int j = 0; j < geom.spatial_dim; ++j) {
    int d = std::abs(site_coordinate(geom, x, j) - site_coordinate(geom, y, j));
    d = std::min(d, N - d);
    sq += double(d) * d;
  }
  return geom.spacing * std::sqrt(sq);
}

double region_distance(const TorusGeometry& geom, const std::vector<int>& A,
                       const std::vector<int>& B) {
  if (A.empty() || B.empty())
    fail(ErrorCode::EmptyRegion, "region distance needs two nonempty site sets");
  std::set<int> a_set(A.begin(), A.end());
  for (int b : B)
    if (a_set.count(b)) fail(ErrorCode::RegionOverlap, "regions share a site");
  double best = std::numeric_limits<double>::infinity();
  for (int x : A)
    for (int y : B) best = std::min(best, torus_distance(geom, x, y));
  return best;
}

std::vector<int> block_sites(const TorusGeometry& geom,
                             const std::vector<int>& corner,
                             const std::vector<int>& extent) {
  const int p = geom.spatial_dim;
  const int N = geom.sites_per_dim;
  if (int(corner.size()) != p || int(extent.size()) != p)
    fail(ErrorCode::DimensionMismatch, "block needs one corner and extent per axis");
  for (int j = 0; j < p; ++j)
    if (extent[j] < 1 || extent[j] > N)
      fail(ErrorCode::ConfigError, "block extent must lie in [1, N]");
  std::vector<int> sites;
  std::vector<int> idx(p, 0);
  while (true) {
    int s = 0;
    for (int j = p - 1; j >= 0; --j)
      s = s * N + (((corner[j] + idx[j]) % N + N) % N);
    sites.push_back(s);
    int j = 0;
    for (; j < p; ++j) {
      if (++idx[j] < extent[j]) break;
      idx[j] = 0;
    }
    if (j == p) break;
  }
  std::sort(sites.begin(), sites.end());
  return sites;
}

RegionProjector region_projector(const TorusGeometry& geom,
                                 std::vector<int> sites, int spinor_size) {
  validate(geom);
  if (spinor_size < 1) fail(ErrorCode::ConfigError, "spinor size must be positive");
  const int T = geom.total_sites();
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  for (int s : sites)
    if (s < 0 || s >= T) fail(ErrorCode::ConfigError, "site index out of range");
  RegionProjector proj;
  proj.sites = std::move(sites);
  proj.site_mask = RVec::Zero(T);
  for (int s : proj.sites) proj.site_mask(s) = 1.0;
  proj.P = Mat::Zero(long(spinor_size) * T, long(spinor_size) * T);
  for (int s : proj.sites)
    for (int alpha = 0; alpha < spinor_size; ++alpha)
      proj.P(long(s) * spinor_size + alpha, long(s) * spinor_size + alpha) = 1.0;
  return proj;
}

DiracOperator build_dirac_spectral(const TorusGeometry& geom,
                                   const GammaRep& rep, int size_cap) {
  validate(geom);
  require_flat(geom);
  check_rep(geom, rep);
  check_size(geom, rep.spinor_size, size_cap);
  const int N = geom.sites_per_dim;
  const Mat k1 = spectral_derivative_1d(N, geom.spacing);
  std::vector<Mat> kinetic;
  for (int j = 0; j < geom.spatial_dim; ++j) kinetic.push_back(site_op(geom, k1, j));
  const int T = geom.total_sites();
  Mat site_l = geom.mass * geom.mass * Mat::Identity(T, T);
  for (const Mat& k : kinetic) site_l += k * k;
  Mat site_mass = geom.mass * Mat::Identity(T, T);
  return assemble(geom, rep, kinetic, site_mass, site_l, DiracBackend::spectral);
}

DiracOperator build_dirac_wilson(const TorusGeometry& geom, const GammaRep& rep,
                                 double r, int size_cap) {
  validate(geom);
  require_flat(geom);
  check_rep(geom, rep);
  check_size(geom, rep.spinor_size, size_cap);
  if (!(r >= 0.0 && r <= 1.0))
    fail(ErrorCode::ConfigError, "Wilson parameter must lie in [0, 1]");
  const int N = geom.sites_per_dim;
  const Mat d1 = central_derivative_1d(N, geom.spacing);
  const Mat l1 = laplacian_1d(N, geom.spacing);
  std::vector<Mat> kinetic;
  const int T = geom.total_sites();
  Mat lap = Mat::Zero(T, T);
  for (int j = 0; j < geom.spatial_dim; ++j) {
    kinetic.push_back(site_op(geom, d1, j));
    lap += site_op(geom, l1, j);
  }
  Mat site_mass = geom.mass * Mat::Identity(T, T) - (r * geom.spacing / 2.0) * lap;
  Mat site_l = geom.mass * geom.mass * Mat::Identity(T, T) - lap;
  return assemble(geom, rep, kinetic, site_mass, site_l, DiracBackend::wilson);
}

RMat build_scalar_lichnerowicz(const TorusGeometry& geom) {
  validate(geom);
  const int T = geom.total_sites();
  const int N = geom.sites_per_dim;
  const double w = 1.0 / (geom.spacing * geom.spacing);
  RMat l = RMat::Zero(T, T);
  for (int s = 0; s < T; ++s) {
    for (int j = 0; j < geom.spatial_dim; ++j) {
      int stride = 1;
      for (int u = 0; u < j; ++u) stride *= N;
      const int c = site_coordinate(geom, s, j);
      const int up = s + ((c + 1) % N - c) * stride;
      const int dn = s + ((c - 1 + N) % N - c) * stride;
      l(s, s) += 2.0 * w;
      l(s, up) -= w;
      l(s, dn) -= w;
    }
    l(s, s) += geom.mass * geom.mass + geom.curvature_at(s) / 4.0;
  }
  return l;
}

CutoffFamily build_cutoffs(const TorusGeometry& geom, const std::vector<int>& A,
                           const std::vector<int>& B, double epsilon) {
  validate(geom);
  if (A.empty() || B.empty())
    fail(ErrorCode::EmptyRegion, "cutoff construction needs nonempty regions");
  if (!(epsilon > 0.0)) fail(ErrorCode::ConfigError, "cutoff margin must be positive");
  const double d = region_distance(geom, A, B);
  if (!(d > 4.0 * epsilon))
    fail(ErrorCode::MarginTooLarge, "cutoff margin requires dist(A, B) > 4 epsilon");

  const int T = geom.total_sites();
  auto dist_to = [&](const std::vector<int>& region, int site) {
    double best = std::numeric_limits<double>::infinity();
    for (int y : region) best = std::min(best, torus_distance(geom, site, y));
    return best;
  };
  auto smoothstep = [](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  };

  CutoffFamily fam;
  fam.epsilon = epsilon;
  fam.chi_check = RVec::Zero(T);
  fam.chi_hat = RVec::Zero(T);
  fam.chi = RVec::Zero(T);
  for (int s = 0; s < T; ++s) {
    const double da = dist_to(A, s);
    const double db = dist_to(B, s);
    fam.chi_check(s) = smoothstep(1.0 - 2.0 * da / epsilon);
    fam.chi(s) = smoothstep(1.5 - da / epsilon);
    fam.chi_hat(s) = smoothstep(2.0 * db / epsilon);
  }
  return fam;
}

}  // namespace entlab
