#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "entlab/errors.hpp"
#include "entlab/gaussian.hpp"

using namespace entlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

std::vector<int> range_sites(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i < hi; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("region entropy: purity, maximal mixing, complement symmetry") {
  GammaRep rep = build_gamma_rep(2);
  TorusGeometry g = make_torus(1, 16, 1.0, 0.5);
  QuasifreeSymbol sym = ground_symbol(build_dirac_spectral(g, rep));

  // pure state: the full region carries no entropy
  RegionProjector all = region_projector(g, range_sites(0, 16), 2);
  CHECK(region_entropy(sym, all) < 1e-10);

  // tracial symbol: every mode at occupation 1/2 contributes ln 2
  QuasifreeSymbol tracial =
      custom_symbol(Mat::Zero(32, 32), sym.gamma);
  RegionProjector three = region_projector(g, {2, 5, 9}, 2);
  CHECK(region_entropy(tracial, three) ==
        doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-14));

  // purity forces S(A) = S(A') for complementary regions
  RegionProjector left = region_projector(g, range_sites(0, 5), 2);
  RegionProjector right = region_projector(g, range_sites(5, 16), 2);
  const double sa = region_entropy(sym, left);
  CHECK(sa > 0.01);
  CHECK(std::abs(sa - region_entropy(sym, right)) < 1e-8);

  CHECK(code_of([&] { region_entropy(sym, region_projector(g, {}, 2)); }) ==
        ErrorCode::EmptyRegion);
  QuasifreeSymbol bad = custom_symbol(3.0 * Mat::Identity(32, 32), sym.gamma);
  CHECK(code_of([&] { region_entropy(bad, three); }) ==
        ErrorCode::EigenvalueOutOfRange);
}

TEST_CASE("mutual information: halves, vanishing, symmetry, decay") {
  GammaRep rep = build_gamma_rep(2);
  TorusGeometry g = make_torus(1, 16, 1.0, 0.5);
  QuasifreeSymbol sym = ground_symbol(build_dirac_spectral(g, rep));

  // adjacent halves of a pure chain: S(A u B) = 0, so I = 2 S(A)
  RegionProjector left = region_projector(g, range_sites(0, 8), 2);
  RegionProjector right = region_projector(g, range_sites(8, 16), 2);
  EntropyReport halves = mutual_information(sym, g, left, right);
  CHECK(halves.s_ab < 1e-8);
  CHECK(std::abs(halves.mutual_information - 2.0 * halves.s_a) < 1e-8);
  CHECK(std::abs(halves.s_a - halves.s_b) < 1e-8);

  // empty on either side gives exactly zero
  RegionProjector none = region_projector(g, {}, 2);
  CHECK(mutual_information(sym, g, left, none).mutual_information == 0.0);
  CHECK(mutual_information(sym, g, none, right).mutual_information == 0.0);

  // symmetric in the arguments
  RegionProjector a_reg = region_projector(g, range_sites(0, 3), 2);
  RegionProjector b_reg = region_projector(g, range_sites(8, 11), 2);
  EntropyReport ab = mutual_information(sym, g, a_reg, b_reg);
  EntropyReport ba = mutual_information(sym, g, b_reg, a_reg);
  CHECK(ab.mutual_information == ba.mutual_information);
  CHECK(ab.mutual_information >= -1e-9);

  CHECK(code_of([&] {
          mutual_information(sym, g, a_reg,
                             region_projector(g, range_sites(2, 5), 2));
        }) == ErrorCode::RegionOverlap);

  // local backend at larger N: I decreases with separation, stays >= -1e-9
  TorusGeometry g2 = make_torus(1, 64, 1.0, 0.5);
  QuasifreeSymbol sym2 = ground_symbol(build_dirac_wilson(g2, rep, 1.0));
  RegionProjector a2 = region_projector(g2, range_sites(0, 4), 2);
  double prev = std::numeric_limits<double>::infinity();
  for (int start : {8, 14, 20, 26}) {
    RegionProjector b2 =
        region_projector(g2, range_sites(start, start + 4), 2);
    const double mi =
        mutual_information(sym2, g2, a2, b2).mutual_information;
    CHECK(mi >= -1e-9);
    CHECK(mi < prev + 1e-12);
    prev = mi;
  }
}
