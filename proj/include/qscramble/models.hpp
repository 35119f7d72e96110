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

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qscramble/qcore.hpp"

namespace qscramble::models {

enum class ModelKind { SYK, MQ, XXX, MFI, LMG };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Model family, size, named couplings and disorder seed. Parameter names
/// are exactly those defined per kind; unknown names are rejected and
/// missing ones fall back to the defaults below.
struct ModelSpec {
  ModelKind kind = ModelKind::SYK;
  int n_qubits = 6;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
};

/// Defaults: SYK {J=1}, MQ {J=1, mu=0.1}, XXX {J=1, h=1},
/// MFI {J=1, g=1.05, W=2}, LMG {J=0.5}.
std::map<std::string, double> default_parameters(ModelKind kind);

/// Parameters with defaults applied; throws on unknown names.
std::map<std::string, double> resolved_parameters(const ModelSpec& spec);

struct DisorderEnsemble {
  ModelSpec base;
  int n_realizations = 1;
  std::uint64_t master_seed = 0;
};

/// Counter-based seed splitting: realization i depends only on
/// (master_seed, i), independent of iteration order and worker count.
std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t index);

/// Deterministic random stream with pinned transforms (the standard library
/// engine is portable; its distributions are not, so the uniform and
/// Box-Muller maps are spelled out here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform01();  // [0, 1)
  double uniform(double a, double b);
  double normal();  // mean 0, variance 1

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

// --- operator algebra ---------------------------------------------------

/// Jordan-Wigner Majorana field operator, 1-based index in [1, 2 n_qubits]:
/// psi_{2k-1} = (1/sqrt2) sz^(k-1) sx I..., psi_{2k} = (1/sqrt2) sz^(k-1) sy I...,
/// normalized so {psi_i, psi_j} = delta_ij I (psi^2 = I/2).
qcore::HermitianOperator majorana(int index, int n_qubits);

/// Gaussian couplings for all C(n_majorana, 4) quadruples in lexicographic
/// order, i.i.d. with mean 0 and variance j^2 3!/n_majorana^3.
std::vector<double> syk_couplings(std::uint64_t seed, int n_majorana, double j);

/// Uniform fields in [-half_width, half_width], drawn in site order.
std::vector<double> sample_uniform_fields(std::uint64_t seed, int count, double half_width);

// --- Hamiltonian builders ------------------------------------------------

qcore::HermitianOperator build_syk(const ModelSpec& spec);
qcore::HermitianOperator build_mq(const ModelSpec& spec);
qcore::HermitianOperator build_xxx(const ModelSpec& spec);
qcore::HermitianOperator build_mfi(const ModelSpec& spec);
qcore::HermitianOperator build_lmg(const ModelSpec& spec);

/// Dispatch on spec.kind.
qcore::HermitianOperator build_hamiltonian(const ModelSpec& spec);

enum class InitialStateKind { AllUp, Neel };

std::string to_string(InitialStateKind kind);
InitialStateKind initial_state_from_string(const std::string& name);

/// Pure projector onto |00...0> or |0101...>.
qcore::DensityMatrix initial_state(InitialStateKind kind, int n_qubits);

/// Spec of realization i (seed = split(master_seed, i)).
ModelSpec realization_spec(const DisorderEnsemble& ensemble, int index);

std::vector<qcore::HermitianOperator> ensemble_realizations(const DisorderEnsemble& ensemble);

}  // namespace qscramble::models
