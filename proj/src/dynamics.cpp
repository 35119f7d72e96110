// Copyright 2026 The qscramble Authors
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

#include "qscramble/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace qscramble::dynamics {

namespace {

constexpr double kTaylorTheta = 1.0;   // sub-step target for ||A dt||_1
constexpr int kTaylorMaxTerms = 64;
constexpr double kRk4EndpointTol = 1e-8;

bool is_identity(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != Complex(i == j ? 1.0 : 0.0, 0.0)) return false;
    }
  }
  return true;
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

void check_grid(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("time grid must be nonempty");
  if (std::abs(times.front()) > 1e-12) {
    throw std::invalid_argument("time grid must start at t = 0");
  }
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    if (!(times[k + 1] > times[k])) {
      throw std::invalid_argument("time grid must be strictly ascending");
    }
  }
}

bool is_uniform(const std::vector<double>& times) {
  if (times.size() < 3) return true;
  const double dt = times[1] - times[0];
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    if (std::abs(times[k + 1] - times[k] - dt) > 1e-12 * std::max(1.0, std::abs(dt))) {
      return false;
    }
  }
  return true;
}

/// e^{tau A} applied to a channel-frame matrix by sub-stepped truncated
/// Taylor. Sub-steps keep ||tau A||_1 <= theta so the series is short and
/// free of cancellation; terms are summed until they stop contributing at
/// working precision.
Matrix exp_action(const Liouvillian& l, double tau, Matrix rho, bool adjoint) {
  if (tau == 0.0) return rho;
  const double norm_bound = l.one_norm_bound() * std::abs(tau);
  const int substeps = std::max(1, static_cast<int>(std::ceil(norm_bound / kTaylorTheta)));
  const double h = tau / substeps;
  for (int s = 0; s < substeps; ++s) {
    Matrix term = rho;
    Matrix sum = rho;
    double sum_scale = qcore::max_abs(sum);
    int small_count = 0;
    int k = 1;
    for (; k <= kTaylorMaxTerms; ++k) {
      term = (adjoint ? l.apply_adjoint(term) : l.apply(term)) * (h / k);
      sum.noalias() += term;
      sum_scale = std::max(sum_scale, qcore::max_abs(sum));
      if (qcore::max_abs(term) <= 0x1.0p-53 * sum_scale) {
        if (++small_count >= 2) break;
      } else {
        small_count = 0;
      }
    }
    if (k > kTaylorMaxTerms) {
      throw std::runtime_error("exp_action: Taylor series failed to converge");
    }
    rho = std::move(sum);
  }
  return rho;
}

}  // namespace

std::string to_string(BasisKind kind) {
  return kind == BasisKind::Computational ? "computational" : "energy";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "computational") return BasisKind::Computational;
  if (name == "energy") return BasisKind::Energy;
  throw std::invalid_argument("unknown decoherence basis: " + name);
}

qcore::Basis resolve_basis(const qcore::HermitianOperator& h, BasisKind kind) {
  if (kind == BasisKind::Computational) return qcore::Basis::computational(h.dim());
  return qcore::eigh(h).eigenvectors;
}

DecoherenceChannel::DecoherenceChannel(const qcore::HermitianOperator& h, BasisKind kind,
                                       double gamma)
    : kind_(kind), gamma_(gamma), basis_(resolve_basis(h, kind)) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("DecoherenceChannel: gamma must be finite and >= 0");
  }
}

Vector vectorize(const qcore::DensityMatrix& rho) {
  const Eigen::Index n = rho.dim();
  Vector v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      v[i * n + j] = rho.matrix()(i, j);
    }
  }
  return v;
}

qcore::DensityMatrix devectorize(const Vector& v) {
  const auto len = v.size();
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
  if (n * n != len) {
    throw std::invalid_argument("devectorize: length is not a perfect square");
  }
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = v[i * n + j];
    }
  }
  qcore::DensityMatrix rho(std::move(m));
  qcore::state_eigenvalues(rho);  // positivity within the dust floor
  return rho;
}

Liouvillian::Liouvillian(const qcore::HermitianOperator& h, DecoherenceChannel channel)
    : channel_(std::move(channel)) {
  if (h.dim() != channel_.basis().dim()) {
    throw std::invalid_argument("Liouvillian: Hamiltonian and channel dimensions differ");
  }
  if (channel_.kind() == BasisKind::Energy) {
    // The channel basis diagonalizes H by construction; use the eigenvalues
    // directly so the frame Hamiltonian is exactly diagonal.
    const Matrix& b = channel_.basis().vectors();
    frame_h_ = (b.adjoint() * h.matrix() * b).diagonal().asDiagonal();
  } else {
    frame_h_ = h.matrix();
  }
}

Matrix Liouvillian::apply(const Matrix& rho_frame) const {
  const Complex mi(0.0, -1.0);
  Matrix out = mi * (frame_h_ * rho_frame - rho_frame * frame_h_);
  const double gamma = channel_.gamma();
  if (gamma != 0.0) {
    out.noalias() -= gamma * rho_frame;
    out.diagonal() += gamma * rho_frame.diagonal();
  }
  return out;
}

Matrix Liouvillian::apply_adjoint(const Matrix& op_frame) const {
  const Complex pi(0.0, 1.0);
  Matrix out = pi * (frame_h_ * op_frame - op_frame * frame_h_);
  const double gamma = channel_.gamma();
  if (gamma != 0.0) {
    out.noalias() -= gamma * op_frame;
    out.diagonal() += gamma * op_frame.diagonal();
  }
  return out;
}

double Liouvillian::one_norm_bound() const {
  const double h_norm = frame_h_.cwiseAbs().colwise().sum().maxCoeff();
  return 2.0 * h_norm + 2.0 * channel_.gamma();
}

const Matrix& Liouvillian::generator() const {
  if (!generator_) {
    const Eigen::Index n = hilbert_dim();
    Matrix a = Matrix::Zero(n * n, n * n);
    const Complex mi(0.0, -1.0);
    const double gamma = channel_.gamma();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index row = i * n + j;
        for (Eigen::Index k = 0; k < n; ++k) {
          a(row, k * n + j) += mi * frame_h_(i, k);
        }
        for (Eigen::Index l = 0; l < n; ++l) {
          a(row, i * n + l) -= mi * frame_h_(l, j);
        }
        if (i != j) a(row, row) -= gamma;
      }
    }
    // Trace preservation: the vectorized identity is a left null vector.
    Vector vec_id = Vector::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) vec_id[i * n + i] = 1.0;
    const double residual = (a.transpose() * vec_id).cwiseAbs().maxCoeff();
    if (residual > 1e-10) {
      std::ostringstream os;
      os << "Liouvillian: trace-preservation residual " << residual;
      throw InvariantViolation(os.str());
    }
    generator_ = std::move(a);
  }
  return *generator_;
}

Liouvillian build_liouvillian(const qcore::HermitianOperator& h,
                              const DecoherenceChannel& channel) {
  return Liouvillian(h, channel);
}

namespace {

/// Validate a channel-frame state, rotate it back to the original frame and
/// record diagnostics.
qcore::DensityMatrix finish_state(const Matrix& rho_frame, const Matrix& basis,
                                  bool basis_is_identity, TrajectoryDiagnostics& diag) {
  diag.max_herm_defect = std::max(diag.max_herm_defect, qcore::hermiticity_defect(rho_frame));
  diag.max_trace_dev =
      std::max(diag.max_trace_dev, std::abs(rho_frame.trace() - Complex(1.0, 0.0)));
  qcore::DensityMatrix framed(rho_frame);
  const RealVector eigenvalues = qcore::eigh(rho_frame).eigenvalues;
  diag.min_eigenvalue = std::min(diag.min_eigenvalue, eigenvalues.minCoeff());
  if (eigenvalues.minCoeff() < qcore::kEigenvalueFloor) {
    std::ostringstream os;
    os << "propagate: state eigenvalue " << eigenvalues.minCoeff()
       << " below positivity floor (generator assembly bug?)";
    throw InvariantViolation(os.str());
  }
  if (basis_is_identity) return framed;
  Matrix rotated = basis * rho_frame * basis.adjoint();
  rotated = Complex(0.5, 0.0) * (rotated + rotated.adjoint().eval());
  return qcore::DensityMatrix(std::move(rotated));
}

}  // namespace

Trajectory propagate(const qcore::DensityMatrix& rho0, const Liouvillian& liouvillian,
                     const std::vector<double>& times, std::optional<models::ModelSpec> model) {
  check_grid(times);
  if (rho0.dim() != liouvillian.hilbert_dim()) {
    throw std::invalid_argument("propagate: state and Liouvillian dimensions differ");
  }
  const Matrix& basis = liouvillian.channel().basis().vectors();
  const bool trivial_frame = is_identity(basis);

  Trajectory traj;
  traj.times = times;
  traj.channel = liouvillian.channel();
  traj.model = std::move(model);
  traj.states.reserve(times.size());

  Matrix rho_frame =
      trivial_frame ? rho0.matrix() : Matrix(basis.adjoint() * rho0.matrix() * basis);
  traj.states.push_back(finish_state(rho_frame, basis, trivial_frame, traj.diagnostics));

  if (times.size() == 1) return traj;

  if (is_uniform(times)) {
    const double dt = times[1] - times[0];
    for (std::size_t k = 1; k < times.size(); ++k) {
      rho_frame = exp_action(liouvillian, dt, std::move(rho_frame), /*adjoint=*/false);
      traj.states.push_back(finish_state(rho_frame, basis, trivial_frame, traj.diagnostics));
    }
  } else {
    const Matrix& a = liouvillian.generator();
    const Vector v0 = [&] {
      Vector v(a.rows());
      const Eigen::Index n = liouvillian.hilbert_dim();
      Matrix start = trivial_frame ? rho0.matrix() : Matrix(basis.adjoint() * rho0.matrix() * basis);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) v[i * n + j] = start(i, j);
      return v;
    }();
    const Eigen::Index n = liouvillian.hilbert_dim();
    for (std::size_t k = 1; k < times.size(); ++k) {
      const Matrix step = (a * times[k]).exp();
      const Vector v = step * v0;
      Matrix frame(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) frame(i, j) = v[i * n + j];
      traj.states.push_back(finish_state(frame, basis, trivial_frame, traj.diagnostics));
    }
  }
  return traj;
}

Trajectory rk4_oracle(const qcore::DensityMatrix& rho0, const qcore::HermitianOperator& h,
                      const DecoherenceChannel& channel, double dt,
                      const std::vector<double>& times) {
  check_grid(times);
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_oracle: dt must be positive");
  if (rho0.dim() != h.dim() || rho0.dim() != channel.basis().dim()) {
    throw std::invalid_argument("rk4_oracle: dimension mismatch");
  }
  const Matrix& hm = h.matrix();
  const Matrix& b = channel.basis().vectors();
  const bool trivial_frame = is_identity(b);
  const double gamma = channel.gamma();
  const Complex mi(0.0, -1.0);

  // drho/dt = -i[H, rho] - gamma sum_{i != j} <i|rho|j> |i><j|, original frame.
  const auto rhs = [&](const Matrix& rho) -> Matrix {
    Matrix out = mi * (hm * rho - rho * hm);
    if (gamma != 0.0) {
      if (trivial_frame) {
        Matrix damped = rho;
        damped.diagonal().setZero();
        out.noalias() -= gamma * damped;
      } else {
        const Matrix framed = b.adjoint() * rho * b;
        const Matrix diag_part = b * framed.diagonal().asDiagonal() * b.adjoint();
        out.noalias() -= gamma * (rho - diag_part);
      }
    }
    return out;
  };

  const auto integrate = [&](double step) -> std::vector<Matrix> {
    std::vector<Matrix> samples;
    samples.reserve(times.size());
    Matrix rho = rho0.matrix();
    samples.push_back(rho);
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
      const double span = times[k + 1] - times[k];
      const int n_steps = std::max(1, static_cast<int>(std::ceil(span / step - 1e-9)));
      const double hstep = span / n_steps;
      for (int s = 0; s < n_steps; ++s) {
        const Matrix k1 = rhs(rho);
        const Matrix k2 = rhs(rho + 0.5 * hstep * k1);
        const Matrix k3 = rhs(rho + 0.5 * hstep * k2);
        const Matrix k4 = rhs(rho + hstep * k3);
        rho += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      samples.push_back(rho);
    }
    return samples;
  };

  const std::vector<Matrix> coarse = integrate(dt);
  const std::vector<Matrix> fine = integrate(0.5 * dt);
  const double endpoint_shift = qcore::max_abs(coarse.back() - fine.back());
  if (endpoint_shift > kRk4EndpointTol) {
    std::ostringstream os;
    os << "rk4_oracle: endpoint shifts by " << endpoint_shift
       << " under step halving; decrease dt";
    throw std::runtime_error(os.str());
  }

  Trajectory traj;
  traj.times = times;
  traj.channel = channel;
  traj.states.reserve(times.size());
  for (const Matrix& m : fine) {
    Matrix sym = Complex(0.5, 0.0) * (m + m.adjoint().eval());
    traj.diagnostics.max_herm_defect =
        std::max(traj.diagnostics.max_herm_defect, qcore::hermiticity_defect(m));
    traj.diagnostics.max_trace_dev =
        std::max(traj.diagnostics.max_trace_dev, std::abs(sym.trace() - Complex(1.0, 0.0)));
    traj.states.emplace_back(std::move(sym));
  }
  return traj;
}

std::vector<Matrix> heisenberg_evolve(const Matrix& op, const Liouvillian& liouvillian,
                                      const std::vector<double>& times) {
  check_grid(times);
  if (op.rows() != liouvillian.hilbert_dim() || op.cols() != liouvillian.hilbert_dim()) {
    throw std::invalid_argument("heisenberg_evolve: operator dimension mismatch");
  }
  const Matrix& basis = liouvillian.channel().basis().vectors();
  const bool trivial_frame = is_identity(basis);

  std::vector<Matrix> out;
  out.reserve(times.size());
  Matrix frame = trivial_frame ? op : Matrix(basis.adjoint() * op * basis);
  out.push_back(trivial_frame ? frame : Matrix(basis * frame * basis.adjoint()));
  for (std::size_t k = 1; k < times.size(); ++k) {
    frame = exp_action(liouvillian, times[k] - times[k - 1], std::move(frame), /*adjoint=*/true);
    out.push_back(trivial_frame ? frame : Matrix(basis * frame * basis.adjoint()));
  }
  return out;
}

Matrix step_matrix(const Liouvillian& liouvillian, double dt) {
  const Matrix& a = liouvillian.generator();
  if (is_diagonal(a)) {
    Matrix e = Matrix::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) e(i, i) = std::exp(a(i, i) * dt);
    return e;
  }
  return (a * dt).exp();
}

std::vector<double> uniform_grid(double t_end, int n_points) {
  if (n_points < 1 || !(t_end >= 0.0)) {
    throw std::invalid_argument("uniform_grid: need n_points >= 1 and t_end >= 0");
  }
  std::vector<double> times(n_points);
  if (n_points == 1) {
    times[0] = 0.0;
    return times;
  }
  for (int k = 0; k < n_points; ++k) {
    times[k] = t_end * static_cast<double>(k) / (n_points - 1);
  }
  return times;
}

}  // namespace qscramble::dynamics
