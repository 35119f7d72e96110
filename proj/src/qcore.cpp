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

#include "qscramble/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qscramble::qcore {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and nonempty");
  }
}

// Bit position of a qubit inside a basis-state index (qubit 0 = MSB).
inline int qubit_bit(int qubit, int n_qubits) { return n_qubits - 1 - qubit; }

}  // namespace

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "DensityMatrix");
  const double herm = hermiticity_defect(entries_);
  if (herm > kHermTol) {
    std::ostringstream os;
    os << "DensityMatrix: Hermiticity defect " << herm << " exceeds " << kHermTol;
    throw InvariantViolation(os.str());
  }
  const double trace_dev = std::abs(entries_.trace() - Complex(1.0, 0.0));
  if (trace_dev > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace deviates from 1 by " << trace_dev;
    throw InvariantViolation(os.str());
  }
}

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "HermitianOperator");
  const double herm = hermiticity_defect(entries_);
  if (herm > kHermTol) {
    std::ostringstream os;
    os << "HermitianOperator: Hermiticity defect " << herm << " exceeds " << kHermTol;
    throw InvariantViolation(os.str());
  }
}

Basis::Basis(Matrix vectors) : vectors_(std::move(vectors)) {
  require_square(vectors_, "Basis");
  const Matrix gram = vectors_.adjoint() * vectors_;
  const double defect = max_abs(gram - Matrix::Identity(vectors_.rows(), vectors_.cols()));
  if (defect > kOrthoTol) {
    std::ostringstream os;
    os << "Basis: orthonormality defect " << defect << " exceeds " << kOrthoTol;
    throw InvariantViolation(os.str());
  }
}

Basis Basis::computational(Eigen::Index dim) { return Basis(Matrix::Identity(dim, dim)); }

Partition::Partition(int total_qubits, std::vector<int> subset_a)
    : total_qubits_(total_qubits), subset_a_(std::move(subset_a)) {
  if (total_qubits_ < 2) {
    throw std::invalid_argument("Partition: need at least 2 qubits");
  }
  std::sort(subset_a_.begin(), subset_a_.end());
  subset_a_.erase(std::unique(subset_a_.begin(), subset_a_.end()), subset_a_.end());
  if (subset_a_.empty()) {
    throw std::invalid_argument("Partition: subset A must be nonempty");
  }
  if (subset_a_.front() < 0 || subset_a_.back() >= total_qubits_) {
    throw std::invalid_argument("Partition: qubit index out of range");
  }
  if (static_cast<int>(subset_a_.size()) >= total_qubits_) {
    throw std::invalid_argument("Partition: subset A must be a proper subset");
  }
}

std::vector<int> Partition::subset_b() const {
  std::vector<int> b;
  std::size_t pos = 0;
  for (int q = 0; q < total_qubits_; ++q) {
    if (pos < subset_a_.size() && subset_a_[pos] == q) {
      ++pos;
    } else {
      b.push_back(q);
    }
  }
  return b;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix single_site(const Matrix& op, int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw std::invalid_argument("single_site: qubit index out of range");
  }
  return embed_on_subset(op, {qubit}, n_qubits);
}

Matrix embed_on_subset(const Matrix& op, const std::vector<int>& subset, int n_qubits) {
  const int k = static_cast<int>(subset.size());
  if (op.rows() != (Eigen::Index(1) << k)) {
    throw std::invalid_argument("embed_on_subset: operator dimension does not match subset size");
  }
  if (!std::is_sorted(subset.begin(), subset.end())) {
    throw std::invalid_argument("embed_on_subset: subset must be sorted");
  }
  for (int q : subset) {
    if (q < 0 || q >= n_qubits) {
      throw std::invalid_argument("embed_on_subset: qubit index out of range");
    }
  }
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  const Eigen::Index sub_dim = Eigen::Index(1) << k;
  const Eigen::Index env_dim = Eigen::Index(1) << (n_qubits - k);

  // Bit scatter tables: sub-index bits land on the subset qubits, the
  // remaining index bits fill the complement in qubit order.
  std::vector<Eigen::Index> sub_scatter(sub_dim, 0), env_scatter(env_dim, 0);
  std::vector<int> complement;
  {
    std::size_t pos = 0;
    for (int q = 0; q < n_qubits; ++q) {
      if (pos < subset.size() && subset[pos] == q) {
        ++pos;
      } else {
        complement.push_back(q);
      }
    }
  }
  for (Eigen::Index s = 0; s < sub_dim; ++s) {
    Eigen::Index full = 0;
    for (int p = 0; p < k; ++p) {
      if ((s >> (k - 1 - p)) & 1) full |= Eigen::Index(1) << qubit_bit(subset[p], n_qubits);
    }
    sub_scatter[s] = full;
  }
  const int m = n_qubits - k;
  for (Eigen::Index e = 0; e < env_dim; ++e) {
    Eigen::Index full = 0;
    for (int p = 0; p < m; ++p) {
      if ((e >> (m - 1 - p)) & 1) full |= Eigen::Index(1) << qubit_bit(complement[p], n_qubits);
    }
    env_scatter[e] = full;
  }

  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < sub_dim; ++r) {
    for (Eigen::Index c = 0; c < sub_dim; ++c) {
      const Complex v = op(r, c);
      if (v == Complex(0.0, 0.0)) continue;
      for (Eigen::Index e = 0; e < env_dim; ++e) {
        out(sub_scatter[r] | env_scatter[e], sub_scatter[c] | env_scatter[e]) = v;
      }
    }
  }
  return out;
}

EighResult eigh(const Matrix& h) {
  require_square(h, "eigh");
  const double herm = hermiticity_defect(h);
  if (herm > kHermTol) {
    std::ostringstream os;
    os << "eigh: input is not Hermitian (defect " << herm << ")";
    throw std::invalid_argument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver failed to converge");
  }
  RealVector values = solver.eigenvalues();
  Matrix vectors = solver.eigenvectors();
  const Eigen::Index n = values.size();

  // Re-orthonormalize degenerate clusters deterministically (Gram-Schmidt in
  // stored order), then fix each vector's global phase.
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values[end] - values[end - 1] < kDegenerateGap) ++end;
    if (end - start > 1) {
      for (Eigen::Index k = start; k < end; ++k) {
        for (Eigen::Index l = start; l < k; ++l) {
          const Complex overlap = vectors.col(l).dot(vectors.col(k));
          vectors.col(k) -= overlap * vectors.col(l);
        }
        vectors.col(k).normalize();
      }
    }
    start = end;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(vectors(i, k));
      if (mag > kPhaseFloor) {
        vectors.col(k) *= std::conj(vectors(i, k)) / mag;
        break;
      }
    }
  }
  return EighResult{std::move(values), Basis(std::move(vectors))};
}

EighResult eigh(const HermitianOperator& h) { return eigh(h.matrix()); }

RealVector state_eigenvalues(const DensityMatrix& rho) {
  RealVector values = eigh(rho.matrix()).eigenvalues;
  if (values.minCoeff() < kEigenvalueFloor) {
    std::ostringstream os;
    os << "state eigenvalue " << values.minCoeff() << " below positivity floor "
       << kEigenvalueFloor;
    throw InvariantViolation(os.str());
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) values[i] = 0.0;
  }
  return values;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Partition& part, Keep keep) {
  const Eigen::Index dim = Eigen::Index(1) << part.total_qubits();
  if (rho.dim() != dim) {
    throw std::invalid_argument("partial_trace: dimension does not match partition");
  }
  const std::vector<int> kept = (keep == Keep::A) ? part.subset_a() : part.subset_b();
  std::vector<int> traced = (keep == Keep::A) ? part.subset_b() : part.subset_a();

  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  const Eigen::Index kd = Eigen::Index(1) << nk;
  const Eigen::Index td = Eigen::Index(1) << nt;
  const int n = part.total_qubits();

  std::vector<Eigen::Index> kept_scatter(kd, 0), traced_scatter(td, 0);
  for (Eigen::Index a = 0; a < kd; ++a) {
    Eigen::Index full = 0;
    for (int p = 0; p < nk; ++p) {
      if ((a >> (nk - 1 - p)) & 1) full |= Eigen::Index(1) << qubit_bit(kept[p], n);
    }
    kept_scatter[a] = full;
  }
  for (Eigen::Index b = 0; b < td; ++b) {
    Eigen::Index full = 0;
    for (int p = 0; p < nt; ++p) {
      if ((b >> (nt - 1 - p)) & 1) full |= Eigen::Index(1) << qubit_bit(traced[p], n);
    }
    traced_scatter[b] = full;
  }

  Matrix out = Matrix::Zero(kd, kd);
  const Matrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < kd; ++a) {
    for (Eigen::Index ap = 0; ap < kd; ++ap) {
      Complex sum(0.0, 0.0);
      for (Eigen::Index b = 0; b < td; ++b) {
        sum += m(kept_scatter[a] | traced_scatter[b], kept_scatter[ap] | traced_scatter[b]);
      }
      out(a, ap) = sum;
    }
  }
  return DensityMatrix(std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector values = state_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) s -= values[i] * std::log(values[i]);
  }
  return s;
}

DensityMatrix dephase(const DensityMatrix& rho, const Basis& basis) {
  if (rho.dim() != basis.dim()) {
    throw std::invalid_argument("dephase: dimension mismatch");
  }
  const Matrix& b = basis.vectors();
  const Matrix rotated = b.adjoint() * rho.matrix() * b;
  Matrix out = b * rotated.diagonal().asDiagonal() * b.adjoint();
  out = Complex(0.5, 0.0) * (out + out.adjoint().eval());  // scrub roundoff
  return DensityMatrix(std::move(out));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  }
  const EighResult es = eigh(sigma.matrix());
  const Matrix& u = es.eigenvectors.vectors();
  const RealVector populations = (u.adjoint() * rho.matrix() * u).diagonal().real();

  double leak = 0.0;
  double tr_rho_ln_sigma = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    if (es.eigenvalues[k] < kSupportEigen) {
      leak += std::max(populations[k], 0.0);
    } else {
      tr_rho_ln_sigma += populations[k] * std::log(es.eigenvalues[k]);
    }
  }
  if (leak > kSupportLeak) {
    std::ostringstream os;
    os << "relative_entropy: rho carries weight " << leak << " outside sigma's support";
    throw InvariantViolation(os.str());
  }

  const RealVector rho_values = state_eigenvalues(rho);
  double tr_rho_ln_rho = 0.0;
  for (Eigen::Index i = 0; i < rho_values.size(); ++i) {
    if (rho_values[i] > 0.0) tr_rho_ln_rho += rho_values[i] * std::log(rho_values[i]);
  }
  double d = tr_rho_ln_rho - tr_rho_ln_sigma;
  if (d < 0.0 && d > -1e-10) d = 0.0;  // roundoff at D ~ 0
  return d;
}

DensityMatrix gibbs_state(const HermitianOperator& h, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("gibbs_state: beta must be finite and >= 0");
  }
  const EighResult eh = eigh(h);
  const double e_min = eh.eigenvalues.minCoeff();
  RealVector weights(eh.eigenvalues.size());
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    weights[k] = std::exp(-beta * (eh.eigenvalues[k] - e_min));
  }
  weights /= weights.sum();
  const Matrix& v = eh.eigenvectors.vectors();
  Matrix out = v * weights.cast<Complex>().asDiagonal() * v.adjoint();
  out = Complex(0.5, 0.0) * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out));
}

}  // namespace qscramble::qcore
