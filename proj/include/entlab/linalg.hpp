#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace entlab {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using cplx = std::complex<double>;

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}
inline double max_abs(const RMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Kronecker product, row-major block convention:
// (A (x) B)(i*rB+k, j*cB+l) = A(i,j) * B(k,l).
template <typename MA, typename MB>
auto kron(const MA& a, const MB& b) {
  using Scalar = decltype(typename MA::Scalar{} * typename MB::Scalar{});
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat identity(int n) { return Mat::Identity(n, n); }

// Eigenvalues ascending plus unitary V with A = V diag(w) V^dagger.
struct HermEig {
  RVec values;
  Mat vectors;
};

inline HermEig herm_eig(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Eigen::SelfAdjointEigenSolver<RMat> herm_eig_real(const RMat& a) {
  return Eigen::SelfAdjointEigenSolver<RMat>(a);
}

// Sum of singular values.
inline double trace_norm_of(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

// Largest singular value as sqrt(lambda_max(m^dagger m)). The top eigenvalue
// of the Gram matrix carries relative error ~eps, so the square root is as
// accurate as a direct SVD while staying fast at dimensions in the thousands.
inline double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}
inline double operator_norm(const RMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RMat> es(m.transpose() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace entlab
