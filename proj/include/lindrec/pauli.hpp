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

// Exact symbolic and dense-matrix algebra for multi-site Pauli operators.
//
// Conventions used throughout the project:
//   * site 0 maps to the MOST significant bit of dense-matrix indices, so
//     dense(P) = P_0 (x) P_1 (x) ... (x) P_{n-1};
//   * Pauli strings are bare (not normalized by 2^{-n/2});
//   * the basis state |0> of a site is spin-up, i.e. Z|0> = +|0>.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lindrec/common.hpp"

namespace lindrec {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

// Tensor product of single-site Pauli letters; carries no phase or
// coefficient of its own. Encoded as X/Z bitmasks so products cost O(1)
// word operations: bit (n_sites-1-j) of each mask corresponds to site j
// (i.e. masks live in dense-index bit order).
class PauliString {
 public:
  explicit PauliString(int n_sites);  // identity string
  PauliString(int n_sites, std::string_view letters);
  static PauliString single(int n_sites, int site, Pauli p);
  // Places `letters` starting at site `offset`, identity elsewhere.
  static PauliString embed(int n_sites, int offset, std::string_view letters);

  int n_sites() const { return n_sites_; }
  Pauli letter(int site) const;
  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }
  int weight() const;
  std::vector<int> support() const;
  // Smallest window [first, last] containing all non-identity letters;
  // {-1, -1} for the identity string.
  std::pair<int, int> span() const;
  bool acts_within(int first, int last) const;
  int num_y() const;
  bool commutes_with(const PauliString& other) const;

  std::string letters() const;
  uint64_t x_mask() const { return x_mask_; }
  uint64_t z_mask() const { return z_mask_; }

  friend bool operator==(const PauliString& a, const PauliString& b) = default;
  friend std::strong_ordering operator<=>(const PauliString& a,
                                          const PauliString& b) = default;

 private:
  int n_sites_;
  uint64_t x_mask_;
  uint64_t z_mask_;
};

struct PauliProduct {
  Complex phase;  // one of {+1, -1, +i, -i}
  PauliString string;
};

// Exact product: dense(a) * dense(b) == phase * dense(product).
PauliProduct multiply(const PauliString& a, const PauliString& b);

Eigen::MatrixXcd dense(const PauliString& p);

// Finite sum of Pauli strings with complex coefficients; the representation
// of Hamiltonian terms, jump operators and constraint observables. Terms
// with |coefficient| <= prune_threshold are dropped on simplification.
class LocalOperator {
 public:
  static constexpr double prune_threshold = 1e-14;

  explicit LocalOperator(int n_sites);
  LocalOperator(const PauliString& p, Complex coeff = 1.0);

  int n_sites() const { return n_sites_; }
  const std::map<PauliString, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }

  void add_term(const PauliString& p, Complex coeff);
  Complex coefficient(const PauliString& p) const;

  LocalOperator& operator+=(const LocalOperator& other);
  LocalOperator& operator-=(const LocalOperator& other);
  LocalOperator& operator*=(Complex scalar);
  friend LocalOperator operator+(LocalOperator a, const LocalOperator& b) {
    return a += b;
  }
  friend LocalOperator operator-(LocalOperator a, const LocalOperator& b) {
    return a -= b;
  }
  friend LocalOperator operator*(Complex s, LocalOperator a) { return a *= s; }
  LocalOperator operator*(const LocalOperator& other) const;

  LocalOperator adjoint() const;
  // All Pauli strings are Hermitian, so Hermiticity means real coefficients.
  bool is_hermitian(double tol = 1e-12) const;
  double max_abs_imag() const;

  std::vector<int> support() const;
  std::pair<int, int> span() const;
  // True when the support fits inside a window of at most k contiguous sites.
  bool acts_on_contiguous(int k) const;

  Eigen::MatrixXcd dense() const;

  // Text form "coeff * letters" per term, one term per line, e.g.
  // "1.5+0i * XIZ". Round-trips exactly through parse().
  std::string to_text() const;
  static LocalOperator parse(int n_sites, std::string_view text);

 private:
  int n_sites_;
  std::map<PauliString, Complex> terms_;
};

LocalOperator commutator(const LocalOperator& a, const LocalOperator& b);

// Dense complex Hermitian unit-trace matrix on n_sites qubits.
class DensityMatrix {
 public:
  static constexpr double tol_herm = 1e-10;
  static constexpr double tol_trace = 1e-10;
  static constexpr double tol_psd = 1e-8;

  DensityMatrix(int n_sites, Eigen::MatrixXcd data);

  static DensityMatrix fully_mixed(int n_sites);
  // |b><b| where bit j of `bits` (counting from site 0) selects spin-down.
  static DensityMatrix computational_state(int n_sites, uint64_t down_mask);
  // Validates Hermiticity, trace and approximate positivity.
  static DensityMatrix from_matrix(int n_sites, Eigen::MatrixXcd data);

  int n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return data_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return data_; }

  // Throws InvalidDensityMatrix when an invariant fails.
  void validate(double herm = tol_herm, double trace = tol_trace,
                double psd = tol_psd) const;

 private:
  int n_sites_;
  Eigen::MatrixXcd data_;
};

// Tr(P rho), computed in O(2^n) from the bitmask representation.
Complex pauli_expectation(const DensityMatrix& rho, const PauliString& p);
Complex expectation(const DensityMatrix& rho, const LocalOperator& op);

// Reduced density matrix on keep_sites (strictly increasing site indices).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep_sites);

}  // namespace lindrec
