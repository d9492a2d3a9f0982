// Copyright 2026 The lindrec Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "lindrec/model.hpp"

using namespace lindrec;

namespace {

Eigen::MatrixXcd random_density(int n_sites, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Index d = Eigen::Index(1) << n_sites;
  Eigen::MatrixXcd a(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = Complex(g(rng), g(rng));
  }
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace();
  return rho;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

// Single-site amplitude-damping model: one loss channel sigma^-.
LindbladModel single_site_loss() {
  BasisPtr basis = make_nn_basis(1);
  Eigen::MatrixXcd c_d = Eigen::MatrixXcd::Zero(3, 3);
  Eigen::VectorXcd amp(3);
  amp << Complex(0.5, 0), Complex(0, -0.5), Complex(0, 0);
  c_d = amp * amp.adjoint();
  return LindbladModel(basis, Eigen::VectorXd::Zero(3), c_d);
}

double min_cd_eig(const LindbladModel& m) {
  return m.dissipation_min_eigenvalue();
}

}  // namespace

TEST_CASE("nn ensemble parameter count matches the Lambda=6 setup") {
  LindbladModel m = random_nn_model(6, 1.0 / std::sqrt(2.0), 1);
  CHECK(m.basis().num_ham() == 63);
  CHECK(m.basis().num_parameters() == 117);  // 63 Hamiltonian + 54 dissipative
  CHECK(pack(m).size() == 117);
}

TEST_CASE("alpha_d = 0 gives a purely Hamiltonian model") {
  LindbladModel m = random_nn_model(4, 0.0, 7);
  CHECK(m.c_d().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generated dissipation matrices are PSD") {
  for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    CHECK(min_cd_eig(random_nn_model(3, 0.9, seed)) >= -1e-12);
    CHECK(min_cd_eig(random_nn_jump_model(3, 1.7, seed)) >= -1e-12);
    CHECK(min_cd_eig(loss_dephasing_model(3, 0.4, seed)) >= -1e-12);
    CHECK(min_cd_eig(classical_ising_loss_model(3, seed)) >= -1e-12);
  }
}

TEST_CASE("nearest-neighbor jump basis counting") {
  LindbladModel m = random_nn_jump_model(2, 0.5, 3);
  CHECK(m.basis().num_jumps() == 8);  // 3 + 3 on-site, 2 bond operators
  LindbladModel m0 = random_nn_jump_model(2, 0.0, 3);
  CHECK(m0.c_d().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(random_nn_jump_model(1, 0.5, 3), DimensionError);
}

TEST_CASE("classical Ising model has 2L - 1 Hamiltonian unknowns") {
  LindbladModel m = classical_ising_loss_model(6, 11);
  CHECK(m.basis().num_ham() == 11);
}

TEST_CASE("loss/dephasing interpolation endpoints") {
  // alpha_l = 0: all jumps Hermitian (pure dephasing), identity is steady.
  LindbladModel deph = loss_dephasing_model(3, 0.0, 5);
  Eigen::MatrixXcd dot =
      apply(deph, DensityMatrix::fully_mixed(3));
  CHECK(dot.cwiseAbs().maxCoeff() < 1e-12);

  // alpha_l = 1: pure loss moves the fully mixed state.
  LindbladModel loss = loss_dephasing_model(3, 1.0, 5);
  CHECK(apply(loss, DensityMatrix::fully_mixed(3)).norm() > 1e-3);

  CHECK_THROWS_AS(loss_dephasing_model(3, -0.1, 5), std::invalid_argument);
  CHECK_THROWS_AS(loss_dephasing_model(3, 1.1, 5), std::invalid_argument);
}

TEST_CASE("norm of L(identity) scales exactly as alpha_l squared") {
  // Dephasing and Hamiltonian parts annihilate the identity, so only the
  // loss channel contributes.
  uint64_t seed = 77;
  double base = apply(loss_dephasing_model(4, 0.1, seed),
                      DensityMatrix::fully_mixed(4))
                    .norm() /
                (0.1 * 0.1);
  for (double al : {0.03, 0.3, 0.9}) {
    double norm = apply(loss_dephasing_model(4, al, seed),
                        DensityMatrix::fully_mixed(4))
                      .norm();
    CHECK(norm / (al * al) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("pure Hamiltonian model annihilates eigenprojectors") {
  BasisPtr basis = make_nn_basis(3);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd c_h(basis->num_ham());
  for (Eigen::Index i = 0; i < c_h.size(); ++i) c_h(i) = g(rng);
  LindbladModel m(basis, c_h,
                  Eigen::MatrixXcd::Zero(basis->num_jumps(), basis->num_jumps()));
  Eigen::MatrixXcd h = m.hamiltonian().dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd v = es.eigenvectors().col(2);
  Eigen::MatrixXcd proj = v * v.adjoint();
  CHECK(apply(m, proj).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Hermitian jumps leave the fully mixed state stationary") {
  // Dephasing-only model with a Hamiltonian: L(1) = 0 all the same.
  LindbladModel m = loss_dephasing_model(3, 0.0, 21);
  CHECK(apply(m, DensityMatrix::fully_mixed(3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply matches the vectorized superoperator") {
  for (uint64_t seed : {3ULL, 14ULL}) {
    LindbladModel m = random_nn_model(3, 0.8, seed);
    Eigen::MatrixXcd s = superoperator(m);
    Eigen::MatrixXcd rho = random_density(3, seed + 100);
    Eigen::VectorXcd lhs = vec(apply(m, rho));
    Eigen::VectorXcd rhs = s * vec(rho);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <
          1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("sparse and dense superoperators agree") {
  LindbladModel m = random_nn_jump_model(2, 0.6, 9);
  Eigen::MatrixXcd dense_s = superoperator(m);
  Eigen::MatrixXcd sparse_s = Eigen::MatrixXcd(superoperator_sparse(m));
  CHECK((dense_s - sparse_s).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("superoperator of H = Z is the column-stacking commutator form") {
  BasisPtr basis = make_nn_basis(1);
  Eigen::VectorXd c_h = Eigen::VectorXd::Zero(3);
  c_h(2) = 1.0;  // Z coefficient
  LindbladModel m(basis, c_h, Eigen::MatrixXcd::Zero(3, 3));
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
      }
    }
    return out;
  };
  // vec(H rho - rho H) = (I (x) H - H^T (x) I) vec(rho) under column stacking.
  Eigen::MatrixXcd expected =
      Complex(0, -1) * (kron(id, z) - kron(z.transpose(), id));
  CHECK((superoperator(m) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pure loss superoperator has the sigma-minus fixed point") {
  LindbladModel m = single_site_loss();
  Eigen::MatrixXcd s = superoperator(m);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(s);
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (std::abs(es.eigenvalues()(k)) < std::abs(es.eigenvalues()(best))) {
      best = k;
    }
  }
  CHECK(std::abs(es.eigenvalues()(best)) < 1e-14);
  Eigen::VectorXcd v = es.eigenvectors().col(best);
  Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(v.data(), 2, 2);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace();
  // Fixed point of loss is spin down.
  Eigen::MatrixXcd down = DensityMatrix::computational_state(1, 1).matrix();
  CHECK((rho - down).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("superoperator size budget guard") {
  LindbladModel m = random_nn_model(3, 0.5, 2);
  SuperoperatorOptions opts;
  opts.max_sites = 2;
  CHECK_THROWS_AS(superoperator_sparse(m, opts), SizeBudgetError);
  opts.max_dense_sites = 2;
  CHECK_THROWS_AS(superoperator(m, opts), SizeBudgetError);
}

TEST_CASE("trace and Hermiticity preservation") {
  LindbladModel m = random_nn_model(3, 0.9, 31);
  for (int t = 0; t < 100; ++t) {
    Eigen::MatrixXcd rho = random_density(3, 1000 + static_cast<uint64_t>(t));
    Eigen::MatrixXcd dot = apply(m, rho);
    CHECK(std::abs(dot.trace()) < 1e-10);
    CHECK((dot - dot.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("pack/unpack are mutually inverse") {
  BasisPtr basis = make_nn_basis(3);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd v(basis->num_parameters());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
    Eigen::VectorXd back = pack(unpack(basis, v));
    CHECK((back - v).cwiseAbs().maxCoeff() == 0.0);
  }
  // Zero vector gives the zero model.
  LindbladModel zero = unpack(basis, Eigen::VectorXd::Zero(basis->num_parameters()));
  CHECK(zero.c_h().cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.c_d().cwiseAbs().maxCoeff() == 0.0);
  // Round-trip through a generated model is exact.
  LindbladModel m = random_nn_model(3, 0.7, 9);
  LindbladModel m2 = unpack(basis, pack(m));
  CHECK((m2.c_h() - m.c_h()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m2.c_d() - m.c_d()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coefficient vector layout places off-diagonal parts in their blocks") {
  BasisPtr basis = make_nn_basis(2);
  // Pair (1, 0) on site 0 is the first off-diagonal allowed pair.
  Eigen::MatrixXcd c_d = Eigen::MatrixXcd::Zero(6, 6);
  c_d(1, 0) = Complex(0.3, 0.4);
  c_d(0, 1) = Complex(0.3, -0.4);
  LindbladModel m(basis, Eigen::VectorXd::Zero(basis->num_ham()), c_d);
  Eigen::VectorXd v = pack(m);
  int nh = basis->num_ham();       // 15
  int nd = static_cast<int>(basis->diagonal_pairs().size());  // 6
  CHECK(nh == 15);
  CHECK(nd == 6);
  CHECK(v(nh + nd) == 0.3);        // first entry of the Re block
  CHECK(v(nh + nd + 6) == 0.4);    // first entry of the Im block
  CHECK(v.cwiseAbs().sum() == doctest::Approx(0.7));
  CHECK(unpack(basis, v).c_d()(1, 0) == Complex(0.3, 0.4));
}

TEST_CASE("unpack rejects wrong lengths and accepts indefinite c_d") {
  BasisPtr basis = make_nn_basis(2);
  CHECK_THROWS_AS(unpack(basis, Eigen::VectorXd::Zero(5)), DimensionError);
  // Indefinite dissipation blocks are allowed for recovered vectors.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(basis->num_parameters());
  v(15) = -1.0;  // negative diagonal entry
  LindbladModel m = unpack(basis, v);
  CHECK(m.dissipation_min_eigenvalue() < 0.0);
}

TEST_CASE("non-Hermitian dissipation matrices are rejected") {
  BasisPtr basis = make_nn_basis(2);
  Eigen::MatrixXcd c_d = Eigen::MatrixXcd::Zero(6, 6);
  c_d(1, 0) = Complex(1.0, 0.0);  // missing conjugate partner
  CHECK_THROWS_AS(
      LindbladModel(basis, Eigen::VectorXd::Zero(basis->num_ham()), c_d),
      std::invalid_argument);
}

TEST_CASE("ensemble statistics of Hamiltonian coefficients") {
  // 1e4 draws; each Lambda=2 model contributes 15 N(0,1) samples.
  double sum = 0.0, sum2 = 0.0;
  std::size_t count = 0;
  for (uint64_t s = 0; s < 10000; ++s) {
    LindbladModel m = random_nn_model(2, 0.3, 90000 + s);
    for (Eigen::Index i = 0; i < m.c_h().size(); ++i) {
      sum += m.c_h()(i);
      sum2 += m.c_h()(i) * m.c_h()(i);
      ++count;
    }
  }
  double n = static_cast<double>(count);
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("model JSON round-trip is exact") {
  LindbladModel m = random_nn_jump_model(3, 0.8, 123);
  LindbladModel back = model_from_json(model_to_json(m));
  CHECK(back.n_sites() == m.n_sites());
  CHECK(back.basis().num_parameters() == m.basis().num_parameters());
  CHECK((back.c_h() - m.c_h()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.c_d() - m.c_d()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pack(back) - pack(m)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parameter labels are stable and global") {
  BasisPtr basis = make_nn_basis(2);
  auto labels = basis->parameter_labels();
  REQUIRE(static_cast<int>(labels.size()) == basis->num_parameters());
  CHECK(labels[0] == "h[XI]");
  CHECK(labels[15] == "d[XI]");  // first diagonal dissipative parameter
}
