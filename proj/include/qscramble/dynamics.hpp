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

#pragma once

#include <optional>
#include <vector>

#include "qscramble/models.hpp"
#include "qscramble/qcore.hpp"

namespace qscramble::dynamics {

enum class BasisKind { Computational, Energy };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// Computational -> standard basis; energy -> eigh(h) with the qcore
/// determinism conventions.
qcore::Basis resolve_basis(const qcore::HermitianOperator& h, BasisKind kind);

/// Decoherence basis plus a uniform suppression rate gamma >= 0.
class DecoherenceChannel {
 public:
  DecoherenceChannel(const qcore::HermitianOperator& h, BasisKind kind, double gamma);

  BasisKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  const qcore::Basis& basis() const { return basis_; }

 private:
  BasisKind kind_;
  double gamma_;
  qcore::Basis basis_;
};

/// Row-major stacking of a density matrix into Fock-Liouville space.
Vector vectorize(const qcore::DensityMatrix& rho);

/// Inverse of vectorize; re-validates all DensityMatrix invariants,
/// including positivity within the -1e-9 dust floor.
qcore::DensityMatrix devectorize(const Vector& v);

/// Worst-case deviations observed across a trajectory's states.
struct TrajectoryDiagnostics {
  double max_herm_defect = 0.0;
  double max_trace_dev = 0.0;
  double min_eigenvalue = 0.0;
};

/// The master-equation generator A = W - gamma I + gamma V assembled in the
/// channel basis. The dense N^2 x N^2 matrix is materialized on demand; the
/// action of A is also available in matrix form, which is what propagation
/// uses (two N x N products per application instead of an N^2 matvec).
class Liouvillian {
 public:
  Liouvillian(const qcore::HermitianOperator& h, DecoherenceChannel channel);

  Eigen::Index hilbert_dim() const { return frame_h_.rows(); }
  Eigen::Index dim() const { return frame_h_.rows() * frame_h_.rows(); }
  const DecoherenceChannel& channel() const { return channel_; }

  /// The Hamiltonian rotated into the channel basis. For the energy channel
  /// this is exactly diagonal (the eigenvalues), by construction.
  const Matrix& frame_hamiltonian() const { return frame_h_; }

  /// Action of A on a channel-frame matrix: -i[H, rho] - gamma offdiag(rho).
  Matrix apply(const Matrix& rho_frame) const;

  /// Action of the adjoint generator: +i[H, op] - gamma offdiag(op). Drives
  /// Heisenberg-picture evolution.
  Matrix apply_adjoint(const Matrix& op_frame) const;

  /// Upper bound on the induced 1-norm of A, used for step control.
  double one_norm_bound() const;

  /// Dense generator in Fock-Liouville coordinates. Materialized once and
  /// cached; trace preservation (left null vector = vectorized identity)
  /// is verified at materialization.
  const Matrix& generator() const;

 private:
  Matrix frame_h_;
  DecoherenceChannel channel_;
  mutable std::optional<Matrix> generator_;
};

Liouvillian build_liouvillian(const qcore::HermitianOperator& h, const DecoherenceChannel& channel);

struct Trajectory {
  std::vector<double> times;
  std::vector<qcore::DensityMatrix> states;  // original frame
  std::optional<DecoherenceChannel> channel;
  std::optional<models::ModelSpec> model;
  TrajectoryDiagnostics diagnostics;
};

/// States devectorize(e^{A t_k} |rho0>) on the given grid (times[0] = 0,
/// strictly ascending). Uniform grids advance step by step through the
/// exponential action of A dt; arbitrary grids fall back to per-time dense
/// exponentials (small dimensions only, in practice).
Trajectory propagate(const qcore::DensityMatrix& rho0, const Liouvillian& liouvillian,
                     const std::vector<double>& times,
                     std::optional<models::ModelSpec> model = std::nullopt);

/// Independent fixed-step RK4 integration of the master equation in the
/// original frame, without vectorization. Integrates at dt and dt/2 and
/// requires the endpoints to agree within 1e-8 (else throws); the returned
/// trajectory is the finer run sampled on the grid.
Trajectory rk4_oracle(const qcore::DensityMatrix& rho0, const qcore::HermitianOperator& h,
                      const DecoherenceChannel& channel, double dt,
                      const std::vector<double>& times);

/// Heisenberg evolution of an operator under the adjoint of the dynamical
/// map, sampled on the grid (original frame).
std::vector<Matrix> heisenberg_evolve(const Matrix& op, const Liouvillian& liouvillian,
                                      const std::vector<double>& times);

/// Materialized e^{A dt} (Pade scaling-and-squaring). Exponentials of an
/// exactly diagonal generator reduce to elementwise exp.
Matrix step_matrix(const Liouvillian& liouvillian, double dt);

/// Uniform grid helper: n_points values from 0 to t_end inclusive.
std::vector<double> uniform_grid(double t_end, int n_points);

}  // namespace qscramble::dynamics
