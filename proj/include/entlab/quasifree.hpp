#pragma once

#include <cstdint>
#include <string>

#include "entlab/clifford.hpp"
#include "entlab/lattice.hpp"
#include "entlab/linalg.hpp"

namespace entlab {

enum class SymbolSource { ground, custom };

// One-particle symbol of a quasifree state: self-adjoint, -1 <= Sigma <= 1,
// odd under the sitewise Majorana conjugation; Sigma^2 = 1 for ground states.
struct QuasifreeSymbol {
  Mat Sigma;
  SymbolSource source = SymbolSource::custom;
  Antiunitary gamma;      // sitewise Majorana conjugation on the full space
  int dimension = 0;      // spacetime dimension of the generating operator
  int sites_per_dim = 0;  // N (0 for custom symbols)
  int spatial_dim = 0;    // p
  int backend_tag = 0;    // 0 custom, 1 spectral, 2 wilson
};

// Sign of the Hamiltonian, Sigma = H/|H|, from a full eigendecomposition.
// Throws GaplessSpectrum if any |eigenvalue| <= gap_tol.
QuasifreeSymbol ground_symbol(const DiracOperator& dirac, double gap_tol = 1e-8);

// Wraps a caller-supplied symbol; no invariants are enforced here, so that
// verify_majorana_relations can act as the detector.
QuasifreeSymbol custom_symbol(Mat sigma, Antiunitary gamma);

struct RestrictedSymbol {
  Mat Sigma_V;  // full size, supported on ran(P_V)
  RegionProjector P_V;
};

RestrictedSymbol restrict_symbol(const QuasifreeSymbol& sym,
                                 const RegionProjector& v);

struct MajoranaReport {
  double self_adjointness = 0.0;   // max |Sigma - Sigma^dagger|
  double spectrum_excess = 0.0;    // max(0, max|eig(Sigma)| - 1)
  double conjugation_parity = 0.0; // max |Gamma Sigma Gamma^{-1} + Sigma|
  double max_residual() const {
    return std::max(self_adjointness, std::max(spectrum_excess, conjugation_parity));
  }
};

MajoranaReport verify_majorana_relations(const QuasifreeSymbol& sym);

// Binary cache format: eight little-endian u64 header fields
// (magic, version, rows, cols, backend, dimension, sites_per_dim,
// spatial_dim) followed by the matrix row-major as complex128 pairs.
inline constexpr std::uint64_t kSymbolMagic = 0x314d59534c544e45ull;  // "ENTLSYM1"
inline constexpr std::uint64_t kSymbolVersion = 1;

struct SymbolDumpInfo {
  std::uint64_t magic = kSymbolMagic;
  std::uint64_t version = kSymbolVersion;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t backend = 0;
  std::uint64_t dimension = 0;
  std::uint64_t sites_per_dim = 0;
  std::uint64_t spatial_dim = 0;
};

void save_symbol(const QuasifreeSymbol& sym, const std::string& path);

struct LoadedSymbol {
  SymbolDumpInfo info;
  Mat Sigma;
};

LoadedSymbol load_symbol(const std::string& path);

}  // namespace entlab
