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

#include "relent/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "relent/error.hpp"
#include "relent/json_util.hpp"

namespace relent {

namespace {

constexpr double kUnitaryTolerance = 1e-10;
constexpr double kDegeneracyTolerance = 1e-10;
constexpr double kNegligibleKraus = 1e-15;

std::string format_residual(const char* what, double value) {
  std::ostringstream os;
  os.precision(6);
  os << what << " " << value;
  return os.str();
}

Matrix sum_kraus_dagger_kraus(const KrausSet& kraus) {
  Matrix s = Matrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& a : kraus) s += a.adjoint() * a;
  return s;
}

Matrix apply_kraus(const KrausSet& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& a : kraus) out.noalias() += a * rho * a.adjoint();
  return out;
}

void check_shapes(const KrausSet& kraus) {
  if (kraus.empty()) throw PreconditionError("channel requires at least one Kraus operator");
  for (const auto& a : kraus) {
    if (a.rows() != kraus.front().rows() || a.cols() != kraus.front().cols() || a.size() == 0) {
      throw PreconditionError("Kraus operators must be non-empty and share one shape");
    }
  }
}

KrausSet prune(KrausSet kraus) {
  KrausSet kept;
  for (auto& a : kraus) {
    if (a.norm() > kNegligibleKraus) kept.push_back(std::move(a));
  }
  if (kept.empty()) kept.push_back(std::move(kraus.front()));
  return kept;
}

DensityMatrix hermitian_output(const Matrix& m, const std::vector<Index>& factors) {
  return DensityMatrix((m + m.adjoint()) * 0.5, factors);
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw PreconditionError(std::string(name) + " must lie in [0, 1]");
  }
}

void check_steady_state(const QuantumChannel& channel, const DensityMatrix& sigma) {
  const double r = fixed_point_residual(channel, sigma);
  if (r > kSteadyStateTolerance) {
    throw PreconditionError(channel.label() + ": promised steady state not fixed, " +
                            format_residual("residual", r));
  }
}

/// (1 (x) K (x) 1) rho for K acting on the middle block of a left x local x right split.
Matrix left_local(const Matrix& k, const Matrix& rho, Index left, Index right) {
  const Index d = k.rows();
  const Index block = d * right;
  const Index cols = rho.cols();
  Matrix out = Matrix::Zero(rho.rows(), cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index l = 0; l < left; ++l) {
      const Index base = l * block;
      for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) {
          const Complex kab = k(a, b);
          if (kab == Complex(0.0)) continue;
          for (Index s = 0; s < right; ++s) {
            out(base + a * right + s, c) += kab * rho(base + b * right + s, c);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

bool ChannelReport::passes(double tol) const {
  return trace_preserving_ok(tol) && completely_positive_ok(tol) && (!fixed_point || fixed_point_ok(tol));
}

Matrix choi_matrix(const KrausSet& kraus) {
  check_shapes(kraus);
  const Index din = kraus.front().cols();
  const Index dout = kraus.front().rows();
  Matrix choi = Matrix::Zero(din * dout, din * dout);
  CVector v(din * dout);
  for (const auto& a : kraus) {
    for (Index i = 0; i < din; ++i) {
      for (Index o = 0; o < dout; ++o) v(i * dout + o) = a(o, i);
    }
    choi.noalias() += v * v.adjoint();
  }
  return choi;
}

ChannelReport verify(const KrausSet& kraus, const DensityMatrix* fixed_point) {
  check_shapes(kraus);
  const Index din = kraus.front().cols();
  const Index dout = kraus.front().rows();
  ChannelReport report;
  report.trace_preserving = (sum_kraus_dagger_kraus(kraus) - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();

  const Matrix choi = choi_matrix(kraus);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(choi, Eigen::EigenvaluesOnly);
  report.completely_positive = solver.eigenvalues().minCoeff();

  const Matrix mixed_in = Matrix::Identity(din, din) / static_cast<double>(din);
  const Matrix mixed_out = Matrix::Identity(dout, dout) / static_cast<double>(dout);
  const Matrix image = apply_kraus(kraus, mixed_in);
  report.unital = trace_norm((image + image.adjoint()) * 0.5 - mixed_out);

  if (fixed_point != nullptr) {
    if (fixed_point->dim() != din || din != dout) {
      throw PreconditionError("verify: fixed-point candidate dimension does not match the channel");
    }
    const Matrix out = apply_kraus(kraus, fixed_point->matrix());
    report.fixed_point = trace_norm((out + out.adjoint()) * 0.5 - fixed_point->matrix());
  }
  return report;
}

QuantumChannel::QuantumChannel(KrausSet kraus, std::string label) : kraus_(std::move(kraus)), label_(std::move(label)) {
  check_shapes(kraus_);
  // Kraus form is completely positive by construction; only trace
  // preservation needs checking here. verify() reports the Choi spectrum.
  const Index din = kraus_.front().cols();
  const double tp = (sum_kraus_dagger_kraus(kraus_) - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (tp > kChannelTolerance) {
    throw PreconditionError(label_ + ": Kraus operators are not trace preserving, " +
                            format_residual("max |sum A^dagger A - 1| =", tp));
  }
}

Matrix QuantumChannel::apply_raw(const Matrix& rho) const {
  if (rho.rows() != dim_in() || rho.cols() != dim_in()) {
    throw PreconditionError(label_ + ": input dimension mismatch");
  }
  return apply_kraus(kraus_, rho);
}

ChannelReport QuantumChannel::verify(const DensityMatrix* fixed_point) const {
  return relent::verify(kraus_, fixed_point);
}

DensityMatrix apply(const QuantumChannel& channel, const DensityMatrix& rho) {
  const Matrix out = channel.apply_raw(rho.matrix());
  const bool keep_factors = channel.dim_in() == channel.dim_out();
  return hermitian_output(out, keep_factors ? rho.factor_dims() : std::vector<Index>{});
}

Matrix apply_local_raw(const QuantumChannel& channel, const Matrix& rho, std::span<const Index> factor_dims,
                       Index first_factor) {
  if (channel.dim_in() != channel.dim_out()) {
    throw PreconditionError("apply_local: channel must be square");
  }
  const auto n = static_cast<Index>(factor_dims.size());
  if (first_factor < 0 || first_factor >= n) {
    throw PreconditionError("apply_local: first factor out of range");
  }
  Index left = 1;
  for (Index f = 0; f < first_factor; ++f) left *= factor_dims[static_cast<std::size_t>(f)];
  Index local = 1;
  Index f = first_factor;
  while (f < n && local < channel.dim_in()) local *= factor_dims[static_cast<std::size_t>(f++)];
  if (local != channel.dim_in()) {
    throw PreconditionError("apply_local: channel dimension does not match a block of factors");
  }
  Index right = 1;
  for (; f < n; ++f) right *= factor_dims[static_cast<std::size_t>(f)];
  if (left * local * right != rho.rows()) {
    throw PreconditionError("apply_local: factorization does not match state dimension");
  }

  // K rho K^dagger = K (K rho)^dagger for Hermitian rho.
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : channel.kraus()) {
    const Matrix half = left_local(k, rho, left, right);
    out += left_local(k, half.adjoint(), left, right);
  }
  return (out + out.adjoint()) * 0.5;
}

DensityMatrix apply_local(const QuantumChannel& channel, const DensityMatrix& rho, Index first_factor) {
  if (!rho.has_factorization()) throw PreconditionError("apply_local requires factor_dims on the state");
  return DensityMatrix(apply_local_raw(channel, rho.matrix(), rho.factor_dims(), first_factor), rho.factor_dims());
}

double fixed_point_residual(const QuantumChannel& channel, const DensityMatrix& sigma) {
  const Matrix out = channel.apply_raw(sigma.matrix());
  return trace_norm((out + out.adjoint()) * 0.5 - sigma.matrix());
}

QuantumChannel identity_channel(Index dim) { return QuantumChannel({Matrix::Identity(dim, dim)}, "identity"); }

QuantumChannel unitary_channel(const Matrix& u, std::string label) {
  if (u.rows() != u.cols()) throw PreconditionError("unitary must be square");
  const double defect = (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > kUnitaryTolerance) {
    throw PreconditionError(format_residual("matrix is not unitary, max |U^dagger U - 1| =", defect));
  }
  return QuantumChannel({u}, std::move(label));
}

QuantumChannel hamiltonian_evolution(const HermitianOperator& h, double t) {
  const Eigensystem eig = eigh(h);
  CVector phases(eig.dim());
  for (Index i = 0; i < eig.dim(); ++i) phases(i) = std::polar(1.0, -eig.values(i) * t);
  const Matrix u = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  return unitary_channel(u, "hamiltonian_evolution");
}

QuantumChannel dephasing(const HermitianOperator& h) {
  const Eigensystem eig = eigh(h);
  KrausSet projectors;
  Index start = 0;
  while (start < eig.dim()) {
    Index end = start + 1;
    while (end < eig.dim() && eig.values(end) - eig.values(end - 1) <= kDegeneracyTolerance) ++end;
    const auto block = eig.vectors.middleCols(start, end - start);
    projectors.push_back(block * block.adjoint());
    start = end;
  }
  return QuantumChannel(std::move(projectors), "dephasing");
}

QuantumChannel depolarizing(Index dim, double p) {
  check_probability(p, "depolarizing probability");
  QuantumChannel ch = partial_replacement(DensityMatrix::maximally_mixed(dim), p);
  return QuantumChannel(ch.kraus(), "depolarizing");
}

QuantumChannel partial_replacement(const DensityMatrix& sigma, double p) {
  check_probability(p, "replacement probability");
  const Index d = sigma.dim();
  const Eigensystem& eig = sigma.spectrum();
  KrausSet kraus;
  if (p < 1.0) kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
  for (Index i = 0; i < d; ++i) {
    const double w = p * eig.values(i);
    if (w <= 0.0) continue;
    for (Index j = 0; j < d; ++j) {
      kraus.push_back(std::sqrt(w) * eig.vectors.col(i) * eig.vectors.col(j).adjoint());
    }
  }
  if (kraus.empty()) kraus.push_back(Matrix::Identity(d, d));
  QuantumChannel ch(std::move(kraus), "partial_replacement");
  check_steady_state(ch, sigma);
  return ch;
}

QuantumChannel thermal_qubit(double beta, double gap, double lambda) {
  if (!(beta >= 0.0) || !std::isfinite(beta) || !std::isfinite(gap)) {
    throw PreconditionError("thermal_qubit requires finite beta >= 0 and finite gap");
  }
  check_probability(lambda, "thermal_qubit coupling lambda");
  // Ground / excited Gibbs populations of gap |1><1|.
  const double x = beta * gap;
  const double p0 = 1.0 / (1.0 + std::exp(-x));
  const double p1 = 1.0 / (1.0 + std::exp(x));
  const double keep = std::sqrt(1.0 - lambda);
  const double jump = std::sqrt(lambda);

  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = keep;
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = jump;
  Matrix k2 = Matrix::Zero(2, 2);
  k2(0, 0) = keep;
  k2(1, 1) = 1.0;
  Matrix k3 = Matrix::Zero(2, 2);
  k3(1, 0) = jump;
  KrausSet kraus{std::sqrt(p0) * k0, std::sqrt(p0) * k1, std::sqrt(p1) * k2, std::sqrt(p1) * k3};
  QuantumChannel ch(prune(std::move(kraus)), "thermal_qubit");
  const std::array<double, 2> gibbs{p0, p1};
  check_steady_state(ch, DensityMatrix::diagonal(gibbs));
  return ch;
}

QuantumChannel embed(const QuantumChannel& channel, Index site, std::span<const Index> factor_dims) {
  const auto n = static_cast<Index>(factor_dims.size());
  if (site < 0 || site >= n) throw PreconditionError("embed: site out of range");
  if (channel.dim_in() != channel.dim_out() || channel.dim_in() != factor_dims[static_cast<std::size_t>(site)]) {
    throw PreconditionError("embed: channel dimension must match the factor at `site`");
  }
  Index left = 1;
  for (Index f = 0; f < site; ++f) left *= factor_dims[static_cast<std::size_t>(f)];
  Index right = 1;
  for (Index f = site + 1; f < n; ++f) right *= factor_dims[static_cast<std::size_t>(f)];
  const Matrix il = Matrix::Identity(left, left);
  const Matrix ir = Matrix::Identity(right, right);
  KrausSet kraus;
  for (const auto& k : channel.kraus()) {
    Matrix lk(left * k.rows(), left * k.cols());
    for (Index i = 0; i < left; ++i) {
      for (Index j = 0; j < left; ++j) lk.block(i * k.rows(), j * k.cols(), k.rows(), k.cols()) = il(i, j) * k;
    }
    Matrix full(lk.rows() * right, lk.cols() * right);
    for (Index i = 0; i < lk.rows(); ++i) {
      for (Index j = 0; j < lk.cols(); ++j) full.block(i * right, j * right, right, right) = lk(i, j) * ir;
    }
    kraus.push_back(std::move(full));
  }
  return QuantumChannel(std::move(kraus), "embed(" + channel.label() + ")");
}

QuantumChannel compose(std::span<const QuantumChannel> channels) {
  if (channels.empty()) throw PreconditionError("compose requires at least one channel");
  KrausSet acc = channels.front().kraus();
  std::string label = channels.front().label();
  for (std::size_t c = 1; c < channels.size(); ++c) {
    const auto& next = channels[c];
    if (next.dim_in() != acc.front().rows()) throw PreconditionError("compose: dimension mismatch");
    KrausSet product;
    product.reserve(acc.size() * next.kraus().size());
    for (const auto& b : next.kraus()) {
      for (const auto& a : acc) product.push_back(b * a);
    }
    acc = prune(std::move(product));
    label += ";" + next.label();
  }
  return QuantumChannel(std::move(acc), "compose(" + label + ")");
}

QuantumChannel mix(std::span<const double> weights, std::span<const QuantumChannel> channels) {
  if (weights.size() != channels.size() || channels.empty()) {
    throw PreconditionError("mix requires one weight per channel");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w >= 0.0); }) ||
      std::abs(total - 1.0) > kChannelTolerance) {
    throw PreconditionError("mix weights must be a probability vector");
  }
  KrausSet kraus;
  std::string label;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c].dim_in() != channels.front().dim_in() || channels[c].dim_out() != channels.front().dim_out()) {
      throw PreconditionError("mix: channels must share dimensions");
    }
    if (weights[c] == 0.0) continue;
    for (const auto& a : channels[c].kraus()) kraus.push_back(std::sqrt(weights[c]) * a);
    label += (label.empty() ? "" : ",") + channels[c].label();
  }
  return QuantumChannel(std::move(kraus), "mix(" + label + ")");
}

QuantumChannel reset_measurement() {
  Matrix m1 = Matrix::Zero(2, 2);
  m1(0, 0) = 1.0;
  Matrix m2 = Matrix::Zero(2, 2);
  m2(0, 1) = 1.0;
  return QuantumChannel({m1, m2}, "reset_measurement");
}

QuantumChannel discard_channel(std::span<const Index> factor_dims, Index keep) {
  const auto n = static_cast<Index>(factor_dims.size());
  if (keep < 0 || keep >= n) throw PreconditionError("discard_channel: keep index out of range");
  Index total = 1;
  for (Index d : factor_dims) total *= d;
  const Index dk = factor_dims[static_cast<std::size_t>(keep)];
  Index right = 1;
  for (Index f = keep + 1; f < n; ++f) right *= factor_dims[static_cast<std::size_t>(f)];
  const Index left = total / (dk * right);
  KrausSet kraus;
  for (Index l = 0; l < left; ++l) {
    for (Index r = 0; r < right; ++r) {
      Matrix a = Matrix::Zero(dk, total);
      for (Index k = 0; k < dk; ++k) a(k, (l * dk + k) * right + r) = 1.0;
      kraus.push_back(std::move(a));
    }
  }
  return QuantumChannel(std::move(kraus), "discard");
}

Matrix random_unitary(Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Index i = 0; i < dim; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    if (mag > 0.0) q.col(i) *= rii / mag;
  }
  return q;
}

QuantumChannel random_channel(Index dim, Index ancilla_dim, Rng& rng) {
  const Matrix u = random_unitary(dim * ancilla_dim, rng);
  KrausSet kraus;
  for (Index k = 0; k < ancilla_dim; ++k) {
    Matrix a(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j < dim; ++j) a(i, j) = u(i * ancilla_dim + k, j * ancilla_dim);
    }
    kraus.push_back(std::move(a));
  }
  return QuantumChannel(std::move(kraus), "stinespring");
}

QuantumChannel random_unital_channel(Index dim, Index terms, Rng& rng) {
  std::vector<QuantumChannel> unitaries;
  std::vector<double> weights;
  double total = 0.0;
  for (Index t = 0; t < terms; ++t) {
    unitaries.push_back(unitary_channel(random_unitary(dim, rng)));
    weights.push_back(rng.uniform(0.05, 1.0));
    total += weights.back();
  }
  for (auto& w : weights) w /= total;
  return mix(weights, unitaries);
}

DensityMatrix random_density_matrix(Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix((rho + rho.adjoint()) * 0.5);
}

HermitianOperator random_hermitian(Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return HermitianOperator((g + g.adjoint()) * 0.5);
}

nlohmann::json to_json(const QuantumChannel& channel) {
  auto kraus = nlohmann::json::array();
  for (const auto& a : channel.kraus()) kraus.push_back(matrix_to_json(a));
  return {{"dims", {channel.dim_in(), channel.dim_out()}}, {"label", channel.label()}, {"kraus", kraus}};
}

QuantumChannel channel_from_json(const nlohmann::json& j) {
  require_keys_subset(j, {"dims", "label", "kraus"}, "channel");
  KrausSet kraus;
  for (const auto& m : require_key(j, "kraus", "channel")) kraus.push_back(matrix_from_json(m));
  if (j.contains("dims")) {
    const auto dims = j.at("dims").get<std::vector<Index>>();
    if (dims.size() != 2 || kraus.empty() || kraus.front().cols() != dims[0] || kraus.front().rows() != dims[1]) {
      throw PreconditionError("channel: dims do not match the Kraus operators");
    }
  }
  return QuantumChannel(std::move(kraus), j.value("label", std::string("channel")));
}

}  // namespace relent
