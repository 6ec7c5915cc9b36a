#include "entlab/quasifree.hpp"

#include <cstdio>
#include <cstring>
#include <vector>

#include "entlab/errors.hpp"

namespace entlab {

namespace {

void put_u64(std::FILE* f, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  if (std::fwrite(b, 1, 8, f) != 8) fail(ErrorCode::IoFailure, "short write");
}

std::uint64_t get_u64(std::FILE* f) {
  unsigned char b[8];
  if (std::fread(b, 1, 8, f) != 8) fail(ErrorCode::IoFailure, "short read");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void put_f64(std::FILE* f, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, 8);
  put_u64(f, v);
}

double get_f64(std::FILE* f) {
  std::uint64_t v = get_u64(f);
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}

}  // namespace

QuasifreeSymbol ground_symbol(const DiracOperator& dirac, double gap_tol) {
  HermEig es = herm_eig(dirac.H);
  const double gap = es.values.cwiseAbs().minCoeff();
  if (gap <= gap_tol)
    fail(ErrorCode::GaplessSpectrum,
         "Hamiltonian has an eigenvalue within gap_tol of zero");

  RVec signs(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    signs(i) = es.values(i) > 0.0 ? 1.0 : -1.0;
  Mat sigma = es.vectors * signs.asDiagonal() * es.vectors.adjoint();
  sigma = 0.5 * (sigma + sigma.adjoint()).eval();

  QuasifreeSymbol sym;
  sym.Sigma = std::move(sigma);
  sym.source = SymbolSource::ground;
  sym.dimension = dirac.dimension;
  sym.sites_per_dim = dirac.geometry.sites_per_dim;
  sym.spatial_dim = dirac.geometry.spatial_dim;
  sym.backend_tag = dirac.backend == DiracBackend::spectral ? 1 : 2;

  GammaRep rep = build_gamma_rep(dirac.dimension);
  IntertwinerSet iset = solve_charge_conjugation(rep);
  const int T = dirac.geometry.total_sites();
  sym.gamma = Antiunitary{
      kron(Mat(Mat::Identity(T, T)), Mat(iset.C.conjugate()))};

  const Eigen::Index s = sym.Sigma.rows();
  if (operator_norm(Mat(sym.Sigma * sym.Sigma - Mat::Identity(s, s))) > 1e-10)
    fail(ErrorCode::Internal, "ground symbol does not square to one");
  if (operator_norm(Mat(sym.gamma.conjugate_op(sym.Sigma) + sym.Sigma)) > 1e-10)
    fail(ErrorCode::Internal, "ground symbol is not odd under the conjugation");
  return sym;
}

QuasifreeSymbol custom_symbol(Mat sigma, Antiunitary gamma) {
  if (sigma.rows() != sigma.cols() || gamma.linear.rows() != sigma.rows() ||
      gamma.linear.cols() != sigma.cols())
    fail(ErrorCode::DimensionMismatch, "symbol and conjugation sizes differ");
  QuasifreeSymbol sym;
  sym.Sigma = std::move(sigma);
  sym.source = SymbolSource::custom;
  sym.gamma = std::move(gamma);
  return sym;
}

RestrictedSymbol restrict_symbol(const QuasifreeSymbol& sym,
                                 const RegionProjector& v) {
  if (v.P.rows() != sym.Sigma.rows())
    fail(ErrorCode::DimensionMismatch, "projector size does not match symbol");
  RestrictedSymbol r;
  r.Sigma_V = v.P * sym.Sigma * v.P;
  r.P_V = v;
  return r;
}

MajoranaReport verify_majorana_relations(const QuasifreeSymbol& sym) {
  MajoranaReport rep;
  rep.self_adjointness = max_abs(Mat(sym.Sigma - sym.Sigma.adjoint()));
  Mat herm = 0.5 * (sym.Sigma + sym.Sigma.adjoint());
  HermEig es = herm_eig(herm);
  rep.spectrum_excess = std::max(0.0, es.values.cwiseAbs().maxCoeff() - 1.0);
  rep.conjugation_parity =
      max_abs(Mat(sym.gamma.conjugate_op(sym.Sigma) + sym.Sigma));
  return rep;
}

void save_symbol(const QuasifreeSymbol& sym, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(ErrorCode::IoFailure, "cannot open symbol dump for writing: " + path);
  try {
    put_u64(f, kSymbolMagic);
    put_u64(f, kSymbolVersion);
    put_u64(f, std::uint64_t(sym.Sigma.rows()));
    put_u64(f, std::uint64_t(sym.Sigma.cols()));
    put_u64(f, std::uint64_t(sym.backend_tag));
    put_u64(f, std::uint64_t(sym.dimension));
    put_u64(f, std::uint64_t(sym.sites_per_dim));
    put_u64(f, std::uint64_t(sym.spatial_dim));
    for (Eigen::Index i = 0; i < sym.Sigma.rows(); ++i)
      for (Eigen::Index j = 0; j < sym.Sigma.cols(); ++j) {
        put_f64(f, sym.Sigma(i, j).real());
        put_f64(f, sym.Sigma(i, j).imag());
      }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  if (std::fclose(f) != 0) fail(ErrorCode::IoFailure, "cannot finish writing: " + path);
}

LoadedSymbol load_symbol(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) fail(ErrorCode::IoFailure, "cannot open symbol dump: " + path);
  LoadedSymbol out;
  try {
    out.info.magic = get_u64(f);
    out.info.version = get_u64(f);
    if (out.info.magic != kSymbolMagic)
      fail(ErrorCode::IoFailure, "bad magic in symbol dump: " + path);
    if (out.info.version != kSymbolVersion)
      fail(ErrorCode::IoFailure, "unsupported symbol dump version");
    out.info.rows = get_u64(f);
    out.info.cols = get_u64(f);
    out.info.backend = get_u64(f);
    out.info.dimension = get_u64(f);
    out.info.sites_per_dim = get_u64(f);
    out.info.spatial_dim = get_u64(f);
    if (out.info.rows > (1u << 20) || out.info.cols > (1u << 20))
      fail(ErrorCode::IoFailure, "symbol dump header sizes implausible");
    out.Sigma.resize(Eigen::Index(out.info.rows), Eigen::Index(out.info.cols));
    for (Eigen::Index i = 0; i < out.Sigma.rows(); ++i)
      for (Eigen::Index j = 0; j < out.Sigma.cols(); ++j) {
        const double re = get_f64(f);
        const double im = get_f64(f);
        out.Sigma(i, j) = cplx(re, im);
      }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  return out;
}

}  // namespace entlab
