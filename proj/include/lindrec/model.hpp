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

// Local Lindbladians as basis operators plus coefficients: the real
// parameter vector layout, the random model ensembles, and the generator
// as a map on density matrices or as a vectorized superoperator.
//
// Vectorization is column-stacking: vec(A rho B) = (B^T (x) A) vec(rho).

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lindrec/pauli.hpp"

namespace lindrec {

enum class ParamKind { Ham, DissDiag, DissRe, DissIm };

// Global identity of one real model parameter; `a`/`b` are operator labels
// (the Pauli-letter string for single-string basis operators), so identities
// survive restriction to sub-chains and patch recovery.
struct ParameterId {
  ParamKind kind;
  std::string a;
  std::string b;  // empty for Hamiltonian parameters

  std::string label() const;
  friend bool operator==(const ParameterId&, const ParameterId&) = default;
  friend auto operator<=>(const ParameterId&, const ParameterId&) = default;
};

std::string op_label(const LocalOperator& op);

// Ordered Hamiltonian basis {h_i}, jump basis {l_r} and the set of index
// pairs (r, s), r >= s, on which the dissipation matrix may be nonzero.
class OperatorBasis {
 public:
  OperatorBasis(int n_sites, std::vector<LocalOperator> hamiltonian_ops,
                std::vector<LocalOperator> jump_ops,
                std::vector<std::pair<int, int>> allowed_pairs,
                int max_support = 2);

  int n_sites() const { return n_sites_; }
  int max_support() const { return max_support_; }
  const std::vector<LocalOperator>& hamiltonian_ops() const { return ham_ops_; }
  const std::vector<LocalOperator>& jump_ops() const { return jump_ops_; }
  const std::vector<std::pair<int, int>>& allowed_pairs() const {
    return pairs_;
  }
  const std::vector<int>& diagonal_pairs() const { return diag_idx_; }
  const std::vector<int>& offdiagonal_pairs() const { return offdiag_idx_; }

  int num_ham() const { return static_cast<int>(ham_ops_.size()); }
  int num_jumps() const { return static_cast<int>(jump_ops_.size()); }
  // M = |hamiltonian_ops| + |diagonal pairs| + 2 |off-diagonal pairs|.
  int num_parameters() const;

  // Parameter identities in coefficient-vector order:
  // [c_i..., c_rr..., Re c_rs (r>s)..., Im c_rs (r>s)...].
  const std::vector<ParameterId>& parameter_ids() const { return ids_; }
  std::vector<std::string> parameter_labels() const;

 private:
  int n_sites_;
  int max_support_;
  std::vector<LocalOperator> ham_ops_;
  std::vector<LocalOperator> jump_ops_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> diag_idx_;     // indices into pairs_ with r == s
  std::vector<int> offdiag_idx_;  // indices into pairs_ with r > s
  std::vector<ParameterId> ids_;
};

using BasisPtr = std::shared_ptr<const OperatorBasis>;

class LindbladModel {
 public:
  // c_d is the full num_jumps x num_jumps dissipation matrix; it must be
  // Hermitian and vanish outside the allowed pairs.
  LindbladModel(BasisPtr basis, Eigen::VectorXd c_h, Eigen::MatrixXcd c_d);

  const OperatorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  int n_sites() const { return basis_->n_sites(); }
  const Eigen::VectorXd& c_h() const { return c_h_; }
  const Eigen::MatrixXcd& c_d() const { return c_d_; }

  // Smallest eigenvalue of c_d; diagnostic for recovered models, which are
  // not projected back to the PSD cone.
  double dissipation_min_eigenvalue() const;

  // The Hamiltonian sum c_i h_i as a LocalOperator.
  LocalOperator hamiltonian() const;

 private:
  BasisPtr basis_;
  Eigen::VectorXd c_h_;
  Eigen::MatrixXcd c_d_;
};

// rho-dot under the generator; trace-free and Hermiticity-preserving.
Eigen::MatrixXcd lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho);
Eigen::MatrixXcd lindblad_rhs(const LindbladModel& model, const Eigen::MatrixXcd& rho);

struct SuperoperatorOptions {
  int max_sites = 7;        // guard: 4^n x 4^n sparse representation
  int max_dense_sites = 5;  // guard for the dense realization
};

Eigen::SparseMatrix<Complex> superoperator_sparse(
    const LindbladModel& model, const SuperoperatorOptions& opts = {});
Eigen::MatrixXcd superoperator(const LindbladModel& model,
                               const SuperoperatorOptions& opts = {});

// Packed real coefficient vector, mutually inverse with unpack(). unpack
// does not enforce positivity of the rebuilt dissipation matrix.
Eigen::VectorXd pack(const LindbladModel& model);
LindbladModel unpack(BasisPtr basis, const Eigen::VectorXd& values);

// --- Random ensembles -----------------------------------------------------

// On-site + nearest-neighbor Hamiltonian strings; on-site jump strings with
// same-site pairs only.
BasisPtr make_nn_basis(int n_sites);
// As above plus per-bond XX and YY jump strings; pairs span each per-site
// group {x_j, y_j, z_j, xx_j, yy_j}.
BasisPtr make_nn_jump_basis(int n_sites);
// X-basis Ising Hamiltonian terms only; on-site jump strings.
BasisPtr make_ising_loss_basis(int n_sites);

// Hamiltonian coefficients ~ N(0,1); one on-site jump operator per site with
// independent N(0, alpha_d^2) real and imaginary amplitude parts. The
// dissipation matrix is assembled from the amplitude vectors and is PSD by
// construction.
LindbladModel random_nn_model(int n_sites, double alpha_d, uint64_t seed);

// Adds nearest-neighbor XX/YY jump amplitudes per bond.
LindbladModel random_nn_jump_model(int n_sites, double alpha_d, uint64_t seed);

// Per site, loss alpha_l * sigma^- and dephasing (1 - alpha_l) * sigma^z,
// both expanded in the on-site Pauli basis; random Hamiltonian as above.
LindbladModel loss_dephasing_model(int n_sites, double alpha_l, uint64_t seed);

// Random X-basis Ising Hamiltonian with loss 2 sigma^- per site.
LindbladModel classical_ising_loss_model(int n_sites, uint64_t seed);

// --- Serialization ---------------------------------------------------------

std::string model_to_json(const LindbladModel& model);
LindbladModel model_from_json(const std::string& text);
void save_model(const LindbladModel& model, const std::string& path);
LindbladModel load_model(const std::string& path);

}  // namespace lindrec
