#include <cmath>

#include "doctest.h"
#include "qscramble/dynamics.hpp"
#include "qscramble/models.hpp"
#include "test_helpers.hpp"

using namespace qscramble;
using namespace qscramble::qcore;
using namespace qscramble::dynamics;
using qstest::projector;
using qstest::random_hermitian;
using qstest::random_state;

namespace {

// Unitary evolution oracle via exact diagonalization.
Matrix evolve_unitary(const Matrix& h, const Matrix& rho0, double t) {
  const EighResult r = eigh(h);
  const Matrix& v = r.eigenvectors.vectors();
  Vector phases(r.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -r.eigenvalues[k] * t));
  }
  const Matrix u = v * phases.asDiagonal() * v.adjoint();
  return u * rho0 * u.adjoint();
}

models::ModelSpec syk_spec(std::uint64_t seed) {
  models::ModelSpec spec;
  spec.kind = models::ModelKind::SYK;
  spec.n_qubits = 6;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("vectorize conventions and round trip") {
  const DensityMatrix mixed(0.5 * identity(2));
  const Vector v = vectorize(mixed);
  CHECK(v.size() == 4);
  CHECK(v[0] == Complex(0.5, 0.0));
  CHECK(v[1] == Complex(0.0, 0.0));
  CHECK(v[2] == Complex(0.0, 0.0));
  CHECK(v[3] == Complex(0.5, 0.0));

  auto rng = qstest::test_rng(3);
  const DensityMatrix rho = random_state(8, rng);
  const DensityMatrix back = devectorize(vectorize(rho));
  CHECK(max_abs(back.matrix() - rho.matrix()) == 0.0);
}

TEST_CASE("devectorize error paths") {
  Vector bad_len(3);
  bad_len.setZero();
  CHECK_THROWS_AS(devectorize(bad_len), std::invalid_argument);

  // Non-Hermitian vector.
  Vector v(4);
  v << Complex(0.5, 0), Complex(0.2, 0), Complex(0.0, 0), Complex(0.5, 0);
  CHECK_THROWS_AS(devectorize(v), InvariantViolation);

  // Hermitian, trace one, but indefinite.
  Vector w(4);
  w << Complex(1.1, 0), Complex(0, 0), Complex(0, 0), Complex(-0.1, 0);
  CHECK_THROWS_AS(devectorize(w), InvariantViolation);
}

TEST_CASE("resolve_basis") {
  const HermitianOperator hx(pauli_x());
  const Basis comp = resolve_basis(hx, BasisKind::Computational);
  CHECK(max_abs(comp.vectors() - identity(2)) == 0.0);

  const Basis energy = resolve_basis(hx, BasisKind::Energy);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(energy.vectors()(0, 0) - Complex(s, 0)) < 1e-14);
  CHECK(std::abs(energy.vectors()(1, 0) - Complex(-s, 0)) < 1e-14);
  CHECK(std::abs(energy.vectors()(0, 1) - Complex(s, 0)) < 1e-14);
  CHECK(std::abs(energy.vectors()(1, 1) - Complex(s, 0)) < 1e-14);
}

TEST_CASE("gamma = 0 propagation matches unitary evolution") {
  auto rng = qstest::test_rng(5);
  const Matrix h = random_hermitian(8, rng);
  const HermitianOperator ho(h);
  const DecoherenceChannel ch(ho, BasisKind::Computational, 0.0);
  const Liouvillian l(ho, ch);
  const DensityMatrix rho0 = random_state(8, rng);
  const auto times = uniform_grid(10.0, 41);
  const Trajectory traj = propagate(rho0, l, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Matrix expected = evolve_unitary(h, rho0.matrix(), times[k]);
    CHECK(max_abs(traj.states[k].matrix() - expected) < 1e-9);
  }
}

TEST_CASE("one-qubit closed-form dephasing") {
  const double delta = 1.3;
  const double gamma = 0.37;
  const HermitianOperator h(Matrix(0.5 * delta * pauli_z()));
  const DecoherenceChannel ch(h, BasisKind::Computational, gamma);
  const Liouvillian l(h, ch);
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  const DensityMatrix rho0(plus);
  const auto times = uniform_grid(3.0, 31);
  const Trajectory traj = propagate(rho0, l, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Complex expected = 0.5 * std::exp(Complex(-gamma, -delta) * times[k]);
    CHECK(std::abs(traj.states[k].matrix()(0, 1) - expected) < 1e-10);
    CHECK(std::abs(traj.states[k].matrix()(0, 0) - Complex(0.5, 0.0)) < 1e-12);
  }
}

TEST_CASE("pure dephasing with H = 0") {
  const HermitianOperator h(Matrix(Matrix::Zero(2, 2)));
  const DecoherenceChannel ch(h, BasisKind::Computational, 0.8);
  const Liouvillian l(h, ch);
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  const Trajectory traj = propagate(DensityMatrix(plus), l, uniform_grid(4.0, 17));
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    CHECK(std::abs(traj.states[k].matrix()(0, 1) - Complex(0.5 * std::exp(-0.8 * traj.times[k]), 0)) <
          1e-12);
    CHECK(std::abs(traj.states[k].matrix()(0, 0) - Complex(0.5, 0.0)) < 1e-13);
  }
}

TEST_CASE("strong dephasing limit approaches the dephased state") {
  const HermitianOperator h(Matrix(Matrix::Zero(2, 2)));
  const DecoherenceChannel ch(h, BasisKind::Computational, 1e3);
  const Liouvillian l(h, ch);
  auto rng = qstest::test_rng(7);
  const DensityMatrix rho0 = random_state(2, rng);
  const Trajectory traj = propagate(rho0, l, {0.0, 1.0});
  const DensityMatrix dephased = dephase(rho0, Basis::computational(2));
  CHECK(max_abs(traj.states[1].matrix() - dephased.matrix()) < 1e-6);
}

TEST_CASE("trivial grid returns the initial state") {
  auto rng = qstest::test_rng(11);
  const HermitianOperator h(random_hermitian(4, rng));
  const DecoherenceChannel ch(h, BasisKind::Computational, 0.1);
  const Liouvillian l(h, ch);
  const DensityMatrix rho0 = random_state(4, rng);
  const Trajectory traj = propagate(rho0, l, {0.0});
  CHECK(traj.states.size() == 1);
  CHECK(max_abs(traj.states[0].matrix() - rho0.matrix()) < 1e-14);
}

TEST_CASE("grid validation") {
  auto rng = qstest::test_rng(13);
  const HermitianOperator h(random_hermitian(2, rng));
  const DecoherenceChannel ch(h, BasisKind::Computational, 0.0);
  const Liouvillian l(h, ch);
  const DensityMatrix rho0 = random_state(2, rng);
  CHECK_THROWS_AS(propagate(rho0, l, {0.0, 2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(rho0, l, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("action stepper agrees with the dense Pade step matrix") {
  auto rng = qstest::test_rng(17);
  const HermitianOperator h(random_hermitian(4, rng));
  for (const double gamma : {0.0, 0.3, 1.0}) {
    const DecoherenceChannel ch(h, BasisKind::Computational, gamma);
    const Liouvillian l(h, ch);
    const DensityMatrix rho0 = random_state(4, rng);
    const auto times = uniform_grid(1.2, 9);
    const Trajectory traj = propagate(rho0, l, times);
    const Matrix step = step_matrix(l, times[1] - times[0]);
    Vector v = vectorize(rho0);
    for (std::size_t k = 1; k < times.size(); ++k) {
      v = step * v;
      const DensityMatrix dense_state = devectorize(v);
      CHECK(max_abs(traj.states[k].matrix() - dense_state.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("semigroup property") {
  auto rng = qstest::test_rng(19);
  const HermitianOperator h(random_hermitian(4, rng));
  const DecoherenceChannel ch(h, BasisKind::Computational, 0.25);
  const Liouvillian l(h, ch);
  const DensityMatrix rho0 = random_state(4, rng);
  const Trajectory two_steps = propagate(rho0, l, {0.0, 0.3, 0.6});
  const Trajectory one_step = propagate(rho0, l, {0.0, 0.6});
  CHECK(max_abs(two_steps.states[2].matrix() - one_step.states[1].matrix()) < 1e-9);
}

TEST_CASE("unitality: the maximally mixed state is a fixed point") {
  const models::ModelSpec spec = syk_spec(88);
  const HermitianOperator h = models::build_hamiltonian(spec);
  const DensityMatrix mixed(Matrix(identity(64) / 64.0));
  for (const auto kind : {BasisKind::Computational, BasisKind::Energy}) {
    const DecoherenceChannel ch(h, kind, 1.0);
    const Liouvillian l(h, ch);
    const Trajectory traj = propagate(mixed, l, uniform_grid(5.0, 6));
    for (const auto& state : traj.states) {
      CHECK(max_abs(state.matrix() - mixed.matrix()) < 1e-10);
    }
  }
}

TEST_CASE("energy channel conserves populations and energy") {
  const models::ModelSpec spec = syk_spec(4321);
  const HermitianOperator h = models::build_hamiltonian(spec);
  const DecoherenceChannel ch(h, BasisKind::Energy, 0.2);
  const Liouvillian l(h, ch);
  const DensityMatrix rho0 = models::initial_state(models::InitialStateKind::AllUp, 6);
  const Trajectory traj = propagate(rho0, l, uniform_grid(5.0, 11));

  const Basis energy = resolve_basis(h, BasisKind::Energy);
  const Matrix& v = energy.vectors();
  const RealVector pop0 = (v.adjoint() * rho0.matrix() * v).diagonal().real();
  const double e0 = (h.matrix() * rho0.matrix()).trace().real();
  for (const auto& state : traj.states) {
    const RealVector pop = (v.adjoint() * state.matrix() * v).diagonal().real();
    CHECK((pop - pop0).cwiseAbs().maxCoeff() < 1e-9);
    const double e = (h.matrix() * state.matrix()).trace().real();
    CHECK(std::abs(e - e0) < 1e-9);
  }
}

TEST_CASE("trace preserved along trajectories for all gammas") {
  const models::ModelSpec spec = syk_spec(777);
  const HermitianOperator h = models::build_hamiltonian(spec);
  const DensityMatrix rho0 = models::initial_state(models::InitialStateKind::AllUp, 6);
  for (const double gamma : {0.0, 0.1, 1.0}) {
    const DecoherenceChannel ch(h, BasisKind::Computational, gamma);
    const Liouvillian l(h, ch);
    const Trajectory traj = propagate(rho0, l, uniform_grid(3.0, 7));
    CHECK(traj.diagnostics.max_trace_dev < 1e-10);
    CHECK(traj.diagnostics.max_herm_defect < 1e-10);
    CHECK(traj.diagnostics.min_eigenvalue > -1e-9);
  }
}

TEST_CASE("generator: left null vector and nonpositive spectrum") {
  auto rng = qstest::test_rng(23);
  const HermitianOperator h(random_hermitian(4, rng));
  for (const auto kind : {BasisKind::Computational, BasisKind::Energy}) {
    const DecoherenceChannel ch(h, kind, 0.5);
    const Liouvillian l(h, ch);
    const Matrix& a = l.generator();  // materialization checks the left null vector
    Eigen::ComplexEigenSolver<Matrix> solver(a);
    CHECK(solver.eigenvalues().real().maxCoeff() < 1e-9);
  }
}

TEST_CASE("rk4 oracle matches propagate on a 6-qubit SYK sample") {
  const models::ModelSpec spec = syk_spec(31415);
  const HermitianOperator h = models::build_hamiltonian(spec);
  const DecoherenceChannel ch(h, BasisKind::Computational, 0.1);
  const Liouvillian l(h, ch);
  const DensityMatrix rho0 = models::initial_state(models::InitialStateKind::AllUp, 6);
  const auto times = uniform_grid(5.0, 11);
  const Trajectory fast = propagate(rho0, l, times);
  const Trajectory oracle = rk4_oracle(rho0, h, ch, 1e-3, times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    worst = std::max(worst, max_abs(fast.states[k].matrix() - oracle.states[k].matrix()));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("rk4 oracle matches propagate on a 3-qubit energy channel") {
  auto rng = qstest::test_rng(29);
  const HermitianOperator h(random_hermitian(8, rng));
  const DecoherenceChannel ch(h, BasisKind::Energy, 0.5);
  const Liouvillian l(h, ch);
  const DensityMatrix rho0 = random_state(8, rng);
  const auto times = uniform_grid(4.0, 9);
  const Trajectory fast = propagate(rho0, l, times);
  const Trajectory oracle = rk4_oracle(rho0, h, ch, 1e-3, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(max_abs(fast.states[k].matrix() - oracle.states[k].matrix()) < 1e-6);
  }
}

TEST_CASE("rk4 oracle in the unitary limit") {
  auto rng = qstest::test_rng(31);
  const Matrix h = random_hermitian(8, rng);
  const HermitianOperator ho(h);
  const DecoherenceChannel ch(ho, BasisKind::Computational, 0.0);
  const DensityMatrix rho0 = random_state(8, rng);
  const auto times = uniform_grid(2.0, 5);
  const Trajectory oracle = rk4_oracle(rho0, ho, ch, 1e-3, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(max_abs(oracle.states[k].matrix() - evolve_unitary(h, rho0.matrix(), times[k])) < 1e-7);
  }
}

TEST_CASE("rk4 oracle rejects too-coarse steps") {
  auto rng = qstest::test_rng(37);
  const HermitianOperator h(Matrix(8.0 * random_hermitian(8, rng)));
  const DecoherenceChannel ch(h, BasisKind::Computational, 0.0);
  const DensityMatrix rho0 = random_state(8, rng);
  CHECK_THROWS_AS(rk4_oracle(rho0, h, ch, 0.25, uniform_grid(2.0, 3)), std::runtime_error);
}

TEST_CASE("heisenberg evolution is adjoint to the state evolution") {
  auto rng = qstest::test_rng(41);
  const HermitianOperator h(random_hermitian(8, rng));
  for (const auto kind : {BasisKind::Computational, BasisKind::Energy}) {
    const DecoherenceChannel ch(h, kind, 0.4);
    const Liouvillian l(h, ch);
    const DensityMatrix rho0 = random_state(8, rng);
    const Matrix op = random_hermitian(8, rng);
    const auto times = uniform_grid(1.5, 4);
    const Trajectory traj = propagate(rho0, l, times);
    const auto ops = heisenberg_evolve(op, l, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const Complex lhs = (op * traj.states[k].matrix()).trace();
      const Complex rhs = (ops[k] * rho0.matrix()).trace();
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("non-uniform grids use per-time exponentials") {
  auto rng = qstest::test_rng(43);
  const HermitianOperator h(random_hermitian(4, rng));
  const DecoherenceChannel ch(h, BasisKind::Computational, 0.3);
  const Liouvillian l(h, ch);
  const DensityMatrix rho0 = random_state(4, rng);
  const std::vector<double> awkward = {0.0, 0.1, 0.35, 1.0};
  const Trajectory traj = propagate(rho0, l, awkward);
  // Cross-check against uniform stepping to the same instants.
  for (std::size_t k = 1; k < awkward.size(); ++k) {
    const Trajectory direct = propagate(rho0, l, {0.0, awkward[k]});
    CHECK(max_abs(traj.states[k].matrix() - direct.states[1].matrix()) < 1e-11);
  }
}

TEST_SUITE_END();
