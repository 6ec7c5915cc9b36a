#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "entlab/errors.hpp"
#include "entlab/lattice.hpp"

using namespace entlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

RVec sorted_eigs(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  return es.eigenvalues();
}

// All momentum vectors on the integer grid {-N/2+1, ..., N/2}^p.
std::vector<std::vector<int>> momentum_grid(int N, int p) {
  std::vector<std::vector<int>> grid{{}};
  for (int j = 0; j < p; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& v : grid)
      for (int w = -N / 2 + 1; w <= N / 2; ++w) {
        auto u = v;
        u.push_back(w);
        next.push_back(u);
      }
    grid = next;
  }
  return grid;
}

RVec spectral_oracle(const TorusGeometry& g, int spinor) {
  std::vector<double> vals;
  for (const auto& w : momentum_grid(g.sites_per_dim, g.spatial_dim)) {
    double ksq = 0.0;
    for (int wj : w)
      if (wj != g.sites_per_dim / 2) {
        const double k = 2.0 * kPi * wj / (g.sites_per_dim * g.spacing);
        ksq += k * k;
      }
    const double lam = std::sqrt(ksq + g.mass * g.mass);
    for (int c = 0; c < spinor / 2; ++c) {
      vals.push_back(-lam);
      vals.push_back(+lam);
    }
  }
  std::sort(vals.begin(), vals.end());
  return Eigen::Map<RVec>(vals.data(), vals.size());
}

RVec wilson_oracle(const TorusGeometry& g, int spinor, double r) {
  std::vector<double> vals;
  for (const auto& w : momentum_grid(g.sites_per_dim, g.spatial_dim)) {
    double sinsq = 0.0, mass = g.mass;
    for (int wj : w) {
      const double ka = 2.0 * kPi * wj / g.sites_per_dim;
      const double s = std::sin(ka) / g.spacing;
      sinsq += s * s;
      mass += (r / g.spacing) * (1.0 - std::cos(ka));
    }
    const double lam = std::sqrt(sinsq + mass * mass);
    for (int c = 0; c < spinor / 2; ++c) {
      vals.push_back(-lam);
      vals.push_back(+lam);
    }
  }
  std::sort(vals.begin(), vals.end());
  return Eigen::Map<RVec>(vals.data(), vals.size());
}

// Linear part of the sitewise Majorana conjugation on the full Dirac space.
Mat sitewise_conjugation(const TorusGeometry& g, const GammaRep& rep) {
  IntertwinerSet iset = solve_charge_conjugation(rep);
  return kron(Mat(Mat::Identity(g.total_sites(), g.total_sites())),
              Mat(iset.C.conjugate()));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("geometry validation, distances, effective mass") {
  CHECK(code_of([] { make_torus(1, 9, 1.0, 1.0); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { make_torus(1, 2, 1.0, 1.0); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { make_torus(4, 8, 1.0, 1.0); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { make_torus(1, 8, 1.0, 0.0); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { make_torus(1, 8, 1.0, 1.0, RVec::Zero(3)); }) ==
        ErrorCode::ConfigError);
  CHECK(code_of([] { make_torus(1, 8, 1.0, 1.0, RVec::Constant(8, -5.0)); }) ==
        ErrorCode::PositivityViolation);

  TorusGeometry g1 = make_torus(1, 10, 1.0, 1.0);
  CHECK(torus_distance(g1, 3, 3) == 0.0);
  CHECK(torus_distance(g1, 0, 7) == doctest::Approx(3.0));
  CHECK(torus_distance(g1, 7, 0) == doctest::Approx(3.0));

  TorusGeometry g2 = make_torus(2, 6, 0.5, 1.0);
  const int diag = 1 + 6;  // coordinates (1, 1)
  CHECK(torus_distance(g2, 0, diag) == doctest::Approx(0.5 * std::sqrt(2.0)));

  CHECK(effective_mass(g1) == doctest::Approx(1.0));
  TorusGeometry gc = make_torus(1, 8, 1.0, 0.5, RVec::Constant(8, 4.0 * 0.25));
  CHECK(effective_mass(gc) == doctest::Approx(0.5 * std::sqrt(2.0)));
}

TEST_CASE("blocks, region distance, projectors") {
  TorusGeometry g = make_torus(1, 12, 1.0, 1.0);
  auto a = block_sites(g, {0}, {4});
  CHECK(a == std::vector<int>{0, 1, 2, 3});
  auto wrap = block_sites(g, {10}, {4});
  CHECK(wrap == std::vector<int>{0, 1, 10, 11});

  auto b = block_sites(g, {7}, {3});
  // two empty sites on the wrap-around side, three on the direct side
  CHECK(region_distance(g, a, b) == doctest::Approx(3.0));
  CHECK(code_of([&] { region_distance(g, a, a); }) == ErrorCode::RegionOverlap);
  CHECK(code_of([&] { region_distance(g, {}, b); }) == ErrorCode::EmptyRegion);

  TorusGeometry g2 = make_torus(2, 6, 1.0, 1.0);
  auto blk = block_sites(g2, {4, 5}, {3, 2});
  CHECK(blk.size() == 6);

  GammaRep rep = build_gamma_rep(4);
  RegionProjector pa = region_projector(g, a, rep.spinor_size);
  CHECK(max_abs(Mat(pa.P * pa.P - pa.P)) == 0.0);
  CHECK(max_abs(Mat(pa.P - pa.P.adjoint())) == 0.0);
  Mat gam = sitewise_conjugation(g, rep);
  CHECK(max_abs(Mat(pa.P * gam - gam * pa.P)) == 0.0);

  RegionProjector pb = region_projector(g, b, rep.spinor_size);
  CHECK(max_abs(Mat(pa.P * pb.P)) == 0.0);

  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[i] = i;
  RegionProjector pall = region_projector(g, all, rep.spinor_size);
  CHECK(max_abs(Mat(pall.P - Mat::Identity(48, 48))) == 0.0);

  RegionProjector pempty = region_projector(g, {}, rep.spinor_size);
  CHECK(max_abs(pempty.P) == 0.0);
}

TEST_CASE("spectral backend: dispersion, square identity, conjugation parity") {
  GammaRep rep = build_gamma_rep(4);

  TorusGeometry tiny = make_torus(1, 4, 1.0, 1.0);
  DiracOperator d0 = build_dirac_spectral(tiny, rep);
  RVec expect = spectral_oracle(tiny, rep.spinor_size);
  RVec got = sorted_eigs(d0.H);
  REQUIRE(got.size() == expect.size());
  CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);

  TorusGeometry g = make_torus(1, 16, 1.0, 0.5);
  DiracOperator d = build_dirac_spectral(g, rep);
  CHECK(max_abs(Mat(d.H - d.H.adjoint())) < 1e-13);
  CHECK(operator_norm(Mat(d.H * d.H - d.L)) < 1e-10);
  CHECK((sorted_eigs(d.H) - spectral_oracle(g, rep.spinor_size)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(sorted_eigs(d.H).cwiseAbs().minCoeff() == doctest::Approx(0.5).epsilon(1e-12));

  Mat gam = sitewise_conjugation(g, rep);
  CHECK(max_abs(Mat(gam * d.H.conjugate() * gam.inverse() + d.H)) < 1e-12);

  TorusGeometry g2 = make_torus(2, 8, 0.75, 0.6);
  DiracOperator dd = build_dirac_spectral(g2, rep);
  CHECK(operator_norm(Mat(dd.H * dd.H - dd.L)) < 1e-10);
  CHECK((sorted_eigs(dd.H) - spectral_oracle(g2, rep.spinor_size)).cwiseAbs().maxCoeff() <
        1e-11);

  // three-spinor-component rep also works as long as one generator per axis exists
  GammaRep rep3 = build_gamma_rep(3);
  DiracOperator d3 = build_dirac_spectral(tiny, rep3);
  CHECK((sorted_eigs(d3.H) - spectral_oracle(tiny, rep3.spinor_size)).cwiseAbs().maxCoeff() <
        1e-12);

  CHECK(code_of([&] { build_dirac_spectral(g, build_gamma_rep(9)); }) ==
        ErrorCode::DimensionUnsupported);
  CHECK(code_of([&] { build_dirac_spectral(g2, build_gamma_rep(2)); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { build_dirac_spectral(g, rep, 32); }) == ErrorCode::SizeOverflow);
  TorusGeometry curved = make_torus(1, 8, 1.0, 1.0, RVec::Constant(8, 1.0));
  CHECK(code_of([&] { build_dirac_spectral(curved, rep); }) == ErrorCode::ConfigError);
}

TEST_CASE("wilson backend: doublers at r=0, lifted at r=1, strict locality") {
  GammaRep rep = build_gamma_rep(4);
  TorusGeometry g = make_torus(1, 8, 1.0, 0.7);

  DiracOperator naive = build_dirac_wilson(g, rep, 0.0);
  RVec ev0 = sorted_eigs(naive.H);
  CHECK((ev0 - wilson_oracle(g, rep.spinor_size, 0.0)).cwiseAbs().maxCoeff() < 1e-12);
  // doubler: +m occurs for w=0 and w=N/2, each n/2-fold
  int near_m = 0;
  for (int i = 0; i < ev0.size(); ++i)
    if (std::abs(ev0(i) - 0.7) < 1e-10) ++near_m;
  CHECK(near_m == 4);

  DiracOperator wil = build_dirac_wilson(g, rep, 1.0);
  RVec ev1 = sorted_eigs(wil.H);
  CHECK((ev1 - wilson_oracle(g, rep.spinor_size, 1.0)).cwiseAbs().maxCoeff() < 1e-12);
  near_m = 0;
  for (int i = 0; i < ev1.size(); ++i)
    if (std::abs(ev1(i) - 0.7) < 1e-10) ++near_m;
  CHECK(near_m == 2);  // only the physical branch at k=0
  CHECK(ev1.cwiseAbs().minCoeff() == doctest::Approx(0.7).epsilon(1e-12));
  bool lifted = false;
  for (int i = 0; i < ev1.size(); ++i)
    if (std::abs(ev1(i) - 2.7) < 1e-10) lifted = true;
  CHECK(lifted);  // doubler branch at m + 2r/a

  const int n = rep.spinor_size;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      if (torus_distance(g, x, y) > 1.0)
        CHECK(max_abs(Mat(wil.H.block(x * n, y * n, n, n))) == 0.0);

  Mat gam = sitewise_conjugation(g, rep);
  CHECK(max_abs(Mat(gam * wil.H.conjugate() * gam.inverse() + wil.H)) < 1e-12);

  // stored scalar operator is the local -laplacian + m^2
  RVec lev = sorted_eigs(wil.L);
  std::vector<double> lex;
  for (int w = 0; w < 8; ++w)
    for (int c = 0; c < n; ++c)
      lex.push_back(2.0 - 2.0 * std::cos(2.0 * kPi * w / 8.0) + 0.49);
  std::sort(lex.begin(), lex.end());
  CHECK((lev - Eigen::Map<RVec>(lex.data(), lex.size())).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(code_of([&] { build_dirac_wilson(g, rep, 1.5); }) == ErrorCode::ConfigError);
}

TEST_CASE("scalar operator: circulant oracle, curvature shift, positivity") {
  TorusGeometry g = make_torus(1, 8, 1.0, 1.0);
  RMat l = build_scalar_lichnerowicz(g);
  Eigen::SelfAdjointEigenSolver<RMat> es(l);
  std::vector<double> expect;
  for (int w = 0; w < 8; ++w)
    expect.push_back(2.0 - 2.0 * std::cos(2.0 * kPi * w / 8.0) + 1.0);
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 8; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expect[i]));

  TorusGeometry gs = make_torus(1, 8, 1.0, 1.0, RVec::Constant(8, 4.0));
  Eigen::SelfAdjointEigenSolver<RMat> es2(build_scalar_lichnerowicz(gs));
  for (int i = 0; i < 8; ++i)
    CHECK(es2.eigenvalues()(i) - es.eigenvalues()(i) == doctest::Approx(1.0));

  TorusGeometry g2 = make_torus(2, 6, 1.0, 0.8);
  Eigen::SelfAdjointEigenSolver<RMat> es3(build_scalar_lichnerowicz(g2));
  CHECK(es3.eigenvalues()(0) == doctest::Approx(0.64));

  TorusGeometry bad;  // bypasses make_torus validation on purpose
  bad.spatial_dim = 1;
  bad.sites_per_dim = 8;
  bad.spacing = 1.0;
  bad.mass = 1.0;
  bad.curvature = RVec::Constant(8, -4.1);
  CHECK(code_of([&] { build_scalar_lichnerowicz(bad); }) ==
        ErrorCode::PositivityViolation);
}

TEST_CASE("cutoff family: exact plateaus, support separation, margins") {
  TorusGeometry g = make_torus(1, 64, 1.0, 1.0);
  auto A = block_sites(g, {0}, {8});
  auto B = block_sites(g, {24}, {8});
  const double d = region_distance(g, A, B);
  CHECK(d == doctest::Approx(17.0));
  const double eps = 4.0;
  CutoffFamily fam = build_cutoffs(g, A, B, eps);

  for (int s = 0; s < 64; ++s) {
    CHECK(fam.chi_check(s) >= 0.0);
    CHECK(fam.chi_check(s) <= 1.0);
    CHECK(fam.chi_hat(s) >= 0.0);
    CHECK(fam.chi_hat(s) <= 1.0);
    CHECK(fam.chi(s) >= 0.0);
    CHECK(fam.chi(s) <= 1.0);
    CHECK((1.0 - fam.chi_hat(s)) * fam.chi(s) == 0.0);
    if (fam.chi_check(s) > 0.0) CHECK(fam.chi(s) == 1.0);
  }
  for (int s : A) CHECK(fam.chi_check(s) == 1.0);
  for (int s : B) CHECK(fam.chi_hat(s) == 0.0);

  std::vector<int> supp_check, supp_not_hat, supp_chi;
  for (int s = 0; s < 64; ++s) {
    if (fam.chi_check(s) > 0.0) supp_check.push_back(s);
    if (fam.chi_hat(s) < 1.0) supp_not_hat.push_back(s);
    if (fam.chi(s) > 0.0) supp_chi.push_back(s);
  }
  const double d1 = region_distance(g, supp_check, supp_not_hat);
  CHECK(d1 >= d - eps);
  CHECK(d1 <= d - eps + 2.0 * g.spacing);
  const double d2 = region_distance(g, supp_chi, supp_not_hat);
  CHECK(d2 >= d - 2.0 * eps);
  CHECK(d2 <= d - 2.0 * eps + 2.0 * g.spacing);

  CHECK(code_of([&] { build_cutoffs(g, A, B, 4.3); }) == ErrorCode::MarginTooLarge);
  CHECK(code_of([&] { build_cutoffs(g, {}, B, 1.0); }) == ErrorCode::EmptyRegion);
  CHECK(code_of([&] { build_cutoffs(g, A, B, 0.0); }) == ErrorCode::ConfigError);

  TorusGeometry g2 = make_torus(2, 16, 1.0, 1.0);
  auto A2 = block_sites(g2, {0, 0}, {2, 2});
  auto B2 = block_sites(g2, {8, 8}, {2, 2});
  CutoffFamily fam2 = build_cutoffs(g2, A2, B2, 1.5);
  for (int s = 0; s < g2.total_sites(); ++s)
    CHECK((1.0 - fam2.chi_hat(s)) * fam2.chi(s) == 0.0);
  for (int s : A2) CHECK(fam2.chi_check(s) == 1.0);
  for (int s : B2) CHECK(fam2.chi_hat(s) == 0.0);
}
