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

#include "relent/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "relent/error.hpp"
#include "relent/json_util.hpp"

namespace relent {

namespace {

Index product(std::span<const Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

}  // namespace

DensityMatrix::DensityMatrix(const Matrix& entries, std::vector<Index> factor_dims)
    : factor_dims_(std::move(factor_dims)) {
  HermitianOperator h(entries);
  if (!factor_dims_.empty()) {
    if (std::any_of(factor_dims_.begin(), factor_dims_.end(), [](Index d) { return d <= 0; }) ||
        product(factor_dims_) != h.dim()) {
      throw PreconditionError("factor_dims must be positive with product equal to dim");
    }
  }
  const double tr = h.matrix().trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix trace is " << tr << ", expected 1";
    throw PreconditionError(os.str());
  }
  Eigensystem eig = eigh(h);
  const double min_eig = eig.values.minCoeff();
  if (min_eig < -kClampTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix is not positive semi-definite: minimum eigenvalue " << min_eig;
    throw PreconditionError(os.str());
  }
  eig.values = eig.values.cwiseMax(0.0);
  if (min_eig < -kEigenvalueCutoff) {
    // Round-off level negatives (above -kEigenvalueCutoff) only touch the
    // cached spectrum so serialized states reload bit-exactly.
    eig.values /= eig.values.sum();
    entries_ = eig.reconstruct();
    entries_ = (entries_ + entries_.adjoint()) * 0.5;
  } else {
    entries_ = h.matrix();
  }
  spectrum_ = std::make_shared<const Eigensystem>(std::move(eig));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(Index dim, Index k) {
  if (k < 0 || k >= dim) {
    throw PreconditionError("basis index out of range");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) {
    throw PreconditionError("cannot build a pure state from the zero vector");
  }
  const CVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  return DensityMatrix(HermitianOperator::diagonal(probabilities).matrix());
}

DensityMatrix DensityMatrix::with_factors(std::vector<Index> factor_dims) const {
  if (product(factor_dims) != dim()) {
    throw PreconditionError("factor_dims product does not match dimension");
  }
  DensityMatrix copy = *this;
  copy.factor_dims_ = std::move(factor_dims);
  return copy;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const Index da = a.dim();
  const Index db = b.dim();
  Matrix out(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  std::vector<Index> dims = a.has_factorization() ? a.factor_dims() : std::vector<Index>{da};
  if (b.has_factorization()) {
    dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
  } else {
    dims.push_back(db);
  }
  return DensityMatrix(out, std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Index> keep) {
  if (!rho.has_factorization()) {
    throw PreconditionError("partial_trace requires a tensor factorization (factor_dims)");
  }
  if (keep.empty()) {
    throw PreconditionError("partial_trace requires a non-empty keep set");
  }
  const auto& dims = rho.factor_dims();
  const auto n = static_cast<Index>(dims.size());
  std::vector<bool> kept(dims.size(), false);
  for (Index k : keep) {
    if (k < 0 || k >= n) {
      throw PreconditionError("partial_trace keep index out of range");
    }
    kept[static_cast<std::size_t>(k)] = true;
  }

  // Row-major strides: factor 0 is the most significant digit.
  std::vector<Index> stride(dims.size());
  Index s = 1;
  for (Index f = n - 1; f >= 0; --f) {
    stride[static_cast<std::size_t>(f)] = s;
    s *= dims[static_cast<std::size_t>(f)];
  }

  // Offsets into the full index for every multi-index of the kept / traced factors.
  auto offsets = [&](bool want_kept) {
    std::vector<Index> off{0};
    std::vector<Index> out_dims;
    for (Index f = 0; f < n; ++f) {
      const auto fu = static_cast<std::size_t>(f);
      if (kept[fu] != want_kept) continue;
      std::vector<Index> next;
      next.reserve(off.size() * static_cast<std::size_t>(dims[fu]));
      for (Index base : off) {
        for (Index d = 0; d < dims[fu]; ++d) next.push_back(base + d * stride[fu]);
      }
      off = std::move(next);
      out_dims.push_back(dims[fu]);
    }
    return std::pair{off, out_dims};
  };
  const auto [kept_off, kept_dims] = offsets(true);
  const auto [traced_off, traced_dims] = offsets(false);

  const auto dk = static_cast<Index>(kept_off.size());
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Index a = 0; a < dk; ++a) {
    for (Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (Index t : traced_off) {
        acc += m(kept_off[static_cast<std::size_t>(a)] + t, kept_off[static_cast<std::size_t>(b)] + t);
      }
      out(a, b) = acc;
    }
  }
  return DensityMatrix(out, kept_dims);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double p : rho.spectrum().values) {
    if (p > kEigenvalueCutoff) s -= p * std::log(p);
  }
  return s;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw PreconditionError("relative_entropy: dimension mismatch");
  }
  const auto& r = rho.spectrum();
  const auto& q = sigma.spectrum();
  // overlap(i, j) = |<r_i|q_j>|^2
  const Eigen::MatrixXd overlap = (r.vectors.adjoint() * q.vectors).cwiseAbs2();

  double value = 0.0;
  for (Index i = 0; i < r.dim(); ++i) {
    const double p = r.values(i);
    if (p <= kEigenvalueCutoff) continue;
    value += p * std::log(p);
    for (Index j = 0; j < q.dim(); ++j) {
      const double w = overlap(i, j);
      if (q.values(j) <= kEigenvalueCutoff) {
        if (p > kSupportTolerance && w > kSupportTolerance) {
          return std::numeric_limits<double>::infinity();
        }
        continue;
      }
      value -= p * w * std::log(q.values(j));
    }
  }
  return value;
}

double expectation(const DensityMatrix& rho, const Matrix& observable) {
  if (observable.rows() != rho.dim() || observable.cols() != rho.dim()) {
    throw PreconditionError("expectation: dimension mismatch");
  }
  // Tr{rho O} = sum_ij rho_ij O_ji
  return (rho.matrix().transpose().cwiseProduct(observable)).sum().real();
}

double expectation(const DensityMatrix& rho, const HermitianOperator& observable) {
  return expectation(rho, observable.matrix());
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw PreconditionError("trace_distance: dimension mismatch");
  }
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

nlohmann::json matrix_to_json(const Matrix& m) {
  std::vector<double> re;
  std::vector<double> im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

namespace {

Matrix matrix_from_parts(const nlohmann::json& re, const nlohmann::json& im, Index rows, Index cols,
                         std::string_view context) {
  const auto expected = static_cast<std::size_t>(rows * cols);
  if (!re.is_array() || re.size() != expected || (!im.is_null() && (!im.is_array() || im.size() != expected))) {
    std::ostringstream os;
    os << context << ": re/im must be arrays of " << expected << " numbers";
    throw PreconditionError(os.str());
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const auto k = static_cast<std::size_t>(i * cols + j);
      m(i, j) = Complex(re[k].get<double>(), im.is_null() ? 0.0 : im[k].get<double>());
    }
  }
  return m;
}

Index square_side(std::size_t n, std::string_view context) {
  const auto side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (static_cast<std::size_t>(side * side) != n || side == 0) {
    throw PreconditionError(std::string(context) + ": cannot infer square dimension from array length");
  }
  return side;
}

}  // namespace

Matrix matrix_from_json(const nlohmann::json& j) {
  require_keys_subset(j, {"rows", "cols", "re", "im"}, "matrix");
  const auto& re = require_key(j, "re", "matrix");
  const nlohmann::json im = j.contains("im") ? j.at("im") : nlohmann::json();
  Index rows = 0;
  Index cols = 0;
  if (j.contains("rows") || j.contains("cols")) {
    rows = require_key(j, "rows", "matrix").get<Index>();
    cols = require_key(j, "cols", "matrix").get<Index>();
  } else {
    rows = cols = square_side(re.size(), "matrix");
  }
  return matrix_from_parts(re, im, rows, cols, "matrix");
}

nlohmann::json to_json(const DensityMatrix& rho) {
  auto j = matrix_to_json(rho.matrix());
  j.erase("rows");
  j.erase("cols");
  j["dim"] = rho.dim();
  j["factor_dims"] = rho.factor_dims();
  return j;
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
  require_keys_subset(j, {"dim", "factor_dims", "re", "im"}, "density matrix");
  const auto dim = require_key(j, "dim", "density matrix").get<Index>();
  if (dim <= 0) {
    throw PreconditionError("density matrix: dim must be positive");
  }
  const nlohmann::json im = j.contains("im") ? j.at("im") : nlohmann::json();
  Matrix m = matrix_from_parts(require_key(j, "re", "density matrix"), im, dim, dim, "density matrix");
  std::vector<Index> factors;
  if (j.contains("factor_dims")) {
    factors = j.at("factor_dims").get<std::vector<Index>>();
  }
  return DensityMatrix(m, std::move(factors));
}

}  // namespace relent
