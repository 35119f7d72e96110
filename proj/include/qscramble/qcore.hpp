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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qscramble {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thrown when a physical invariant (positivity, trace, Hermiticity,
/// CPTP structure, ledger balance) is violated at runtime. Maps to
/// exit code 2 in the CLI.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

namespace qcore {

// Shared numerical tolerances. Energies are in units of J with hbar = 1;
// entropies are in nats throughout.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kOrthoTol = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;  // below this, positivity error
inline constexpr double kDegenerateGap = 1e-9;
inline constexpr double kPhaseFloor = 1e-12;
inline constexpr double kSupportEigen = 1e-14;  // sigma eigenvalues below are out of support
inline constexpr double kSupportLeak = 1e-9;    // max rho weight allowed outside support

double max_abs(const Matrix& m);
double hermiticity_defect(const Matrix& m);

/// Trace-one positive-semidefinite complex matrix; the state of S, E or
/// the joint system. Immutable after construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// Complex Hermitian matrix; Hamiltonians and observables.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// Ordered orthonormal frame, stored as the columns of a unitary matrix.
class Basis {
 public:
  explicit Basis(Matrix vectors);

  static Basis computational(Eigen::Index dim);

  Eigen::Index dim() const { return vectors_.rows(); }
  /// Column k is the k-th basis vector.
  const Matrix& vectors() const { return vectors_; }

 private:
  Matrix vectors_;
};

/// Bipartition of a qubit register into subset A and its complement B.
/// Qubit 0 is the leftmost (most significant) tensor factor.
class Partition {
 public:
  Partition(int total_qubits, std::vector<int> subset_a);

  int total_qubits() const { return total_qubits_; }
  const std::vector<int>& subset_a() const { return subset_a_; }
  std::vector<int> subset_b() const;

 private:
  int total_qubits_;
  std::vector<int> subset_a_;  // sorted, nonempty, proper
};

enum class Keep { A, B };

struct EighResult {
  RealVector eigenvalues;  // ascending
  Basis eigenvectors;      // column k pairs with eigenvalues[k]
};

// --- elementary operators ---------------------------------------------------

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity(Eigen::Index dim);

/// Kronecker product, row-major index convention: the left factor is the
/// most significant tensor slot.
Matrix kron(const Matrix& a, const Matrix& b);

/// op acting on one qubit of an n-qubit register, identity elsewhere.
Matrix single_site(const Matrix& op, int qubit, int n_qubits);

/// op (on 2^|subset| dimensions) embedded on the given qubits of an
/// n-qubit register, identity on the rest. subset must be sorted.
Matrix embed_on_subset(const Matrix& op, const std::vector<int>& subset, int n_qubits);

// --- spectral operations ----------------------------------------------------

/// Hermitian eigendecomposition with deterministic conventions: ascending
/// eigenvalues, degenerate clusters (gap < 1e-9) re-orthonormalized by
/// Gram-Schmidt in stored order, and each vector's first component of
/// magnitude > 1e-12 made real positive.
EighResult eigh(const Matrix& h);
EighResult eigh(const HermitianOperator& h);

/// Eigenvalues of a state, validated against the positivity floor and with
/// negative dust clipped to zero. Throws InvariantViolation below -1e-9.
RealVector state_eigenvalues(const DensityMatrix& rho);

/// Reduced state on the kept subset of the partition.
DensityMatrix partial_trace(const DensityMatrix& rho, const Partition& part, Keep keep);

/// -tr(rho ln rho) in nats, with 0 ln 0 := 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Projection onto the diagonal of the given basis: sum_i |i><i| rho |i><i|.
DensityMatrix dephase(const DensityMatrix& rho, const Basis& basis);

/// D(rho || sigma) = tr rho ln rho - tr rho ln sigma, in nats. Throws if
/// rho carries weight > 1e-9 outside sigma's support.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// exp(-beta H)/Z, computed in the eigenbasis of H.
DensityMatrix gibbs_state(const HermitianOperator& h, double beta);

}  // namespace qcore
}  // namespace qscramble
