// Copyright 2026 The relent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relent/spectra.hpp"

#include <cmath>
#include <sstream>

#include "relent/error.hpp"

namespace relent {

HermiticityDefect hermiticity_defect(const Matrix& m) {
  HermiticityDefect worst;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (dev > worst.deviation) {
        worst = {dev, i, j};
      }
    }
  }
  return worst;
}

namespace {

void require_hermitian(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "operator must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw PreconditionError(os.str());
  }
  const auto defect = hermiticity_defect(m);
  if (defect.deviation > kHermiticityTolerance) {
    std::ostringstream os;
    os << "operator is not Hermitian: |M(" << defect.row << "," << defect.col << ") - conj(M("
       << defect.col << "," << defect.row << "))| = " << defect.deviation;
    throw PreconditionError(os.str());
  }
}

}  // namespace

HermitianOperator::HermitianOperator(const Matrix& entries) {
  require_hermitian(entries);
  entries_ = (entries + entries.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  Matrix m = Matrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    m(static_cast<Index>(i), static_cast<Index>(i)) = values[i];
  }
  return HermitianOperator(m);
}

Matrix Eigensystem::reconstruct() const {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

Eigensystem eigh(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigensystem eigh(const Matrix& h) { return eigh(HermitianOperator(h)); }

Matrix apply_spectral(const Eigensystem& eig, const std::function<double(double)>& f) {
  RVector fv(eig.dim());
  for (Index i = 0; i < eig.dim(); ++i) {
    fv(i) = f(eig.values(i));
    if (!std::isfinite(fv(i))) {
      std::ostringstream os;
      os.precision(17);
      os << "spectral function is not finite at eigenvalue " << eig.values(i);
      throw PreconditionError(os.str());
    }
  }
  return eig.vectors * fv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

HermitianOperator matrix_fn(const HermitianOperator& h, const std::function<double(double)>& f) {
  return HermitianOperator(apply_spectral(eigh(h), f));
}

double trace_norm(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double commutator_norm(const Matrix& a, const Matrix& b) { return (a * b - b * a).norm(); }

}  // namespace relent
