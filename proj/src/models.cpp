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

#include "qscramble/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qscramble::models {

namespace {

using qcore::HermitianOperator;

double get_param(const std::map<std::string, double>& params, const std::string& name) {
  return params.at(name);
}

void check_kind(const ModelSpec& spec, ModelKind expected, const char* builder) {
  if (spec.kind != expected) {
    std::ostringstream os;
    os << builder << ": spec kind is " << to_string(spec.kind) << ", expected "
       << to_string(expected);
    throw std::invalid_argument(os.str());
  }
  if (spec.n_qubits < 1) {
    throw std::invalid_argument(std::string(builder) + ": n_qubits must be >= 1");
  }
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Sum over all ordered Majorana quadruples i1<i2<i3<i4 built from the
// given operator set, weighted by the coupling list (lexicographic order).
Matrix syk_quartic_sum(const std::vector<Matrix>& psi, const std::vector<double>& couplings) {
  const int n = static_cast<int>(psi.size());
  const Eigen::Index dim = psi.front().rows();
  Matrix h = Matrix::Zero(dim, dim);
  std::size_t c = 0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = i1 + 1; i2 < n; ++i2) {
      const Matrix p12 = psi[i1] * psi[i2];
      for (int i3 = i2 + 1; i3 < n; ++i3) {
        const Matrix p123 = p12 * psi[i3];
        for (int i4 = i3 + 1; i4 < n; ++i4) {
          h.noalias() -= couplings[c++] * (p123 * psi[i4]);
        }
      }
    }
  }
  return h;
}

HermitianOperator finalize_hamiltonian(Matrix h, const char* builder) {
  const double defect = qcore::hermiticity_defect(h);
  if (defect > qcore::kHermTol) {
    std::ostringstream os;
    os << builder << ": assembled Hamiltonian has Hermiticity defect " << defect;
    throw InvariantViolation(os.str());
  }
  h = Complex(0.5, 0.0) * (h + h.adjoint().eval());
  return HermitianOperator(std::move(h));
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SYK: return "SYK";
    case ModelKind::MQ: return "MQ";
    case ModelKind::XXX: return "XXX";
    case ModelKind::MFI: return "MFI";
    case ModelKind::LMG: return "LMG";
  }
  throw std::logic_error("unreachable model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "SYK") return ModelKind::SYK;
  if (name == "MQ") return ModelKind::MQ;
  if (name == "XXX") return ModelKind::XXX;
  if (name == "MFI") return ModelKind::MFI;
  if (name == "LMG") return ModelKind::LMG;
  throw std::invalid_argument("unknown model kind: " + name);
}

std::map<std::string, double> default_parameters(ModelKind kind) {
  switch (kind) {
    case ModelKind::SYK: return {{"J", 1.0}};
    case ModelKind::MQ: return {{"J", 1.0}, {"mu", 0.1}};
    case ModelKind::XXX: return {{"J", 1.0}, {"h", 1.0}};
    case ModelKind::MFI: return {{"J", 1.0}, {"g", 1.05}, {"W", 2.0}};
    case ModelKind::LMG: return {{"J", 0.5}};
  }
  throw std::logic_error("unreachable model kind");
}

std::map<std::string, double> resolved_parameters(const ModelSpec& spec) {
  std::map<std::string, double> resolved = default_parameters(spec.kind);
  for (const auto& [name, value] : spec.parameters) {
    auto it = resolved.find(name);
    if (it == resolved.end()) {
      throw std::invalid_argument("unknown parameter \"" + name + "\" for model " +
                                  to_string(spec.kind));
    }
    it->second = value;
  }
  return resolved;
}

std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(master_seed ^ mix64(index * 0x9E3779B97F4A7C15ULL + 0x6A09E667F3BCC909ULL));
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform01() {
  // 53-bit mantissa draw; the engine itself is portable across platforms.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

double Rng::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  return r * std::cos(angle);
}

HermitianOperator majorana(int index, int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("majorana: n_qubits must be >= 1");
  if (index < 1 || index > 2 * n_qubits) {
    std::ostringstream os;
    os << "majorana: index " << index << " out of range [1, " << 2 * n_qubits << "]";
    throw std::invalid_argument(os.str());
  }
  const int site = (index - 1) / 2;          // qubit carrying the x/y factor
  const bool is_x = (index % 2 == 1);        // odd -> sigma_x, even -> sigma_y
  Matrix op = Matrix::Ones(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    if (q < site) {
      op = qcore::kron(op, qcore::pauli_z());
    } else if (q == site) {
      op = qcore::kron(op, is_x ? qcore::pauli_x() : qcore::pauli_y());
    } else {
      op = qcore::kron(op, qcore::identity(2));
    }
  }
  return HermitianOperator(op / std::sqrt(2.0));
}

std::vector<double> syk_couplings(std::uint64_t seed, int n_majorana, double j) {
  if (n_majorana < 4) {
    throw std::invalid_argument("syk_couplings: need at least 4 Majorana operators");
  }
  const double variance = j * j * 6.0 / (static_cast<double>(n_majorana) * n_majorana * n_majorana);
  const double sigma = std::sqrt(variance);
  Rng rng(seed);
  std::vector<double> couplings;
  const std::size_t count = static_cast<std::size_t>(n_majorana) * (n_majorana - 1) *
                            (n_majorana - 2) * (n_majorana - 3) / 24;
  couplings.reserve(count);
  for (std::size_t c = 0; c < count; ++c) couplings.push_back(sigma * rng.normal());
  return couplings;
}

std::vector<double> sample_uniform_fields(std::uint64_t seed, int count, double half_width) {
  Rng rng(seed);
  std::vector<double> fields(count);
  for (int i = 0; i < count; ++i) fields[i] = rng.uniform(-half_width, half_width);
  return fields;
}

HermitianOperator build_syk(const ModelSpec& spec) {
  check_kind(spec, ModelKind::SYK, "build_syk");
  if (spec.n_qubits < 2) {
    throw std::invalid_argument("build_syk: need at least 2 qubits (4 Majorana operators)");
  }
  const auto params = resolved_parameters(spec);
  const int n_majorana = 2 * spec.n_qubits;
  std::vector<Matrix> psi;
  psi.reserve(n_majorana);
  for (int i = 1; i <= n_majorana; ++i) psi.push_back(majorana(i, spec.n_qubits).matrix());
  const std::vector<double> couplings = syk_couplings(spec.seed, n_majorana, get_param(params, "J"));
  return finalize_hamiltonian(syk_quartic_sum(psi, couplings), "build_syk");
}

HermitianOperator build_mq(const ModelSpec& spec) {
  check_kind(spec, ModelKind::MQ, "build_mq");
  if (spec.n_qubits % 2 != 0) {
    throw std::invalid_argument("build_mq: n_qubits must be even (equal left/right split)");
  }
  if (spec.n_qubits < 4) {
    throw std::invalid_argument("build_mq: need at least 4 qubits (4 Majorana operators per side)");
  }
  const auto params = resolved_parameters(spec);
  const int per_side = spec.n_qubits;  // Majorana operators per side
  std::vector<Matrix> left, right;
  left.reserve(per_side);
  right.reserve(per_side);
  for (int j = 1; j <= per_side; ++j) {
    left.push_back(majorana(j, spec.n_qubits).matrix());
    right.push_back(majorana(per_side + j, spec.n_qubits).matrix());
  }
  // Identical coupling tensor on both sides.
  const std::vector<double> couplings =
      syk_couplings(spec.seed, per_side, get_param(params, "J"));
  Matrix h = syk_quartic_sum(left, couplings) + syk_quartic_sum(right, couplings);
  const double mu = get_param(params, "mu");
  const Complex i_unit(0.0, 1.0);
  for (int j = 0; j < per_side; ++j) {
    h.noalias() += mu * (i_unit * (left[j] * right[j]));
  }
  return finalize_hamiltonian(std::move(h), "build_mq");
}

HermitianOperator build_xxx(const ModelSpec& spec) {
  check_kind(spec, ModelKind::XXX, "build_xxx");
  const auto params = resolved_parameters(spec);
  const double j = get_param(params, "J");
  const double h_width = get_param(params, "h");
  const int n = spec.n_qubits;
  const Eigen::Index dim = Eigen::Index(1) << n;
  Matrix h = Matrix::Zero(dim, dim);
  // Open chain, nearest neighbors.
  for (int i = 0; i + 1 < n; ++i) {
    h.noalias() += j * (qcore::single_site(qcore::pauli_x(), i, n) *
                        qcore::single_site(qcore::pauli_x(), i + 1, n));
    h.noalias() += j * (qcore::single_site(qcore::pauli_y(), i, n) *
                        qcore::single_site(qcore::pauli_y(), i + 1, n));
    h.noalias() += j * (qcore::single_site(qcore::pauli_z(), i, n) *
                        qcore::single_site(qcore::pauli_z(), i + 1, n));
  }
  const std::vector<double> fields = sample_uniform_fields(spec.seed, n, h_width);
  for (int i = 0; i < n; ++i) {
    h.noalias() += fields[i] * qcore::single_site(qcore::pauli_z(), i, n);
  }
  return finalize_hamiltonian(std::move(h), "build_xxx");
}

HermitianOperator build_mfi(const ModelSpec& spec) {
  check_kind(spec, ModelKind::MFI, "build_mfi");
  const auto params = resolved_parameters(spec);
  const double j = get_param(params, "J");
  const double g = get_param(params, "g");
  const double w = get_param(params, "W");
  const int n = spec.n_qubits;
  const Eigen::Index dim = Eigen::Index(1) << n;
  Matrix h = Matrix::Zero(dim, dim);
  // Open chain: the i = N boundary term of the zz sum is omitted.
  for (int i = 0; i + 1 < n; ++i) {
    h.noalias() -= j * (qcore::single_site(qcore::pauli_z(), i, n) *
                        qcore::single_site(qcore::pauli_z(), i + 1, n));
  }
  const std::vector<double> fields = sample_uniform_fields(spec.seed, n, w);
  for (int i = 0; i < n; ++i) {
    h.noalias() -= fields[i] * qcore::single_site(qcore::pauli_z(), i, n);
    h.noalias() -= g * qcore::single_site(qcore::pauli_x(), i, n);
  }
  return finalize_hamiltonian(std::move(h), "build_mfi");
}

HermitianOperator build_lmg(const ModelSpec& spec) {
  check_kind(spec, ModelKind::LMG, "build_lmg");
  const auto params = resolved_parameters(spec);
  const double j = get_param(params, "J");
  const int n = spec.n_qubits;
  const Eigen::Index dim = Eigen::Index(1) << n;
  Matrix h = Matrix::Zero(dim, dim);
  // All-to-all xy coupling, no disorder: the seed is ignored.
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      h.noalias() -= (j / n) * (qcore::single_site(qcore::pauli_x(), i, n) *
                                qcore::single_site(qcore::pauli_x(), k, n));
      h.noalias() -= (j / n) * (qcore::single_site(qcore::pauli_y(), i, n) *
                                qcore::single_site(qcore::pauli_y(), k, n));
    }
  }
  for (int i = 0; i < n; ++i) {
    h.noalias() -= qcore::single_site(qcore::pauli_z(), i, n);
  }
  return finalize_hamiltonian(std::move(h), "build_lmg");
}

HermitianOperator build_hamiltonian(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::SYK: return build_syk(spec);
    case ModelKind::MQ: return build_mq(spec);
    case ModelKind::XXX: return build_xxx(spec);
    case ModelKind::MFI: return build_mfi(spec);
    case ModelKind::LMG: return build_lmg(spec);
  }
  throw std::logic_error("unreachable model kind");
}

std::string to_string(InitialStateKind kind) {
  return kind == InitialStateKind::AllUp ? "all_up" : "neel";
}

InitialStateKind initial_state_from_string(const std::string& name) {
  if (name == "all_up") return InitialStateKind::AllUp;
  if (name == "neel") return InitialStateKind::Neel;
  throw std::invalid_argument("unknown initial state: " + name);
}

qcore::DensityMatrix initial_state(InitialStateKind kind, int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("initial_state: n_qubits must be >= 1");
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Eigen::Index index = 0;
  if (kind == InitialStateKind::Neel) {
    for (int q = 1; q < n_qubits; q += 2) {
      index |= Eigen::Index(1) << (n_qubits - 1 - q);
    }
  }
  Matrix rho = Matrix::Zero(dim, dim);
  rho(index, index) = 1.0;
  return qcore::DensityMatrix(std::move(rho));
}

ModelSpec realization_spec(const DisorderEnsemble& ensemble, int index) {
  if (index < 0 || index >= ensemble.n_realizations) {
    throw std::invalid_argument("realization_spec: index out of range");
  }
  ModelSpec spec = ensemble.base;
  spec.seed = split_seed(ensemble.master_seed, static_cast<std::uint64_t>(index));
  return spec;
}

std::vector<qcore::HermitianOperator> ensemble_realizations(const DisorderEnsemble& ensemble) {
  if (ensemble.n_realizations < 1) {
    throw std::invalid_argument("ensemble_realizations: n_realizations must be >= 1");
  }
  std::vector<qcore::HermitianOperator> out;
  out.reserve(ensemble.n_realizations);
  for (int i = 0; i < ensemble.n_realizations; ++i) {
    out.push_back(build_hamiltonian(realization_spec(ensemble, i)));
  }
  return out;
}

}  // namespace qscramble::models
