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

#include "lindrec/model.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include <json.hpp>

namespace lindrec {

namespace {

constexpr Complex kI(0.0, 1.0);

// P|b> = ph(b) |b ^ x_mask> with ph(b) = i^{#Y} (-1)^{popcount(b & z_mask)}.
inline Complex pauli_entry_phase(const PauliString& p, uint64_t col) {
  static const Complex phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int e = p.num_y() % 4;
  int zs = std::popcount(col & p.z_mask());
  return (zs & 1) ? -phases[e] : phases[e];
}

// result = P * M, O(D^2).
Eigen::MatrixXcd pauli_left(const PauliString& p, const Eigen::MatrixXcd& m) {
  Eigen::Index d = m.rows();
  Eigen::MatrixXcd out(d, m.cols());
  uint64_t xm = p.x_mask();
  for (Eigen::Index r = 0; r < d; ++r) {
    uint64_t src = static_cast<uint64_t>(r) ^ xm;
    out.row(r) = pauli_entry_phase(p, src) * m.row(static_cast<Eigen::Index>(src));
  }
  return out;
}

// result = M * P.
Eigen::MatrixXcd pauli_right(const Eigen::MatrixXcd& m, const PauliString& p) {
  Eigen::Index d = m.cols();
  Eigen::MatrixXcd out(m.rows(), d);
  uint64_t xm = p.x_mask();
  for (Eigen::Index c = 0; c < d; ++c) {
    uint64_t src = static_cast<uint64_t>(c) ^ xm;
    out.col(c) = pauli_entry_phase(p, static_cast<uint64_t>(c)) *
                 m.col(static_cast<Eigen::Index>(src));
  }
  return out;
}

Eigen::MatrixXcd op_left(const LocalOperator& op, const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (const auto& [p, c] : op.terms()) out += c * pauli_left(p, m);
  return out;
}

Eigen::MatrixXcd op_right(const Eigen::MatrixXcd& m, const LocalOperator& op) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  for (const auto& [p, c] : op.terms()) out += c * pauli_right(m, p);
  return out;
}

// A rho B for Pauli strings A, B (B may be identity) in superoperator form:
// scalar * (B^T (x) A). Emits the D^2 nonzero triplets.
void emit_sandwich(std::vector<Eigen::Triplet<Complex>>& out, Eigen::Index d,
                   Complex scalar, const PauliString* a, const PauliString* b) {
  for (Eigen::Index c = 0; c < d; ++c) {
    uint64_t cp = b ? (static_cast<uint64_t>(c) ^ b->x_mask())
                    : static_cast<uint64_t>(c);
    Complex phb = b ? pauli_entry_phase(*b, static_cast<uint64_t>(c))
                    : Complex(1, 0);
    for (Eigen::Index rp = 0; rp < d; ++rp) {
      uint64_t r = a ? (static_cast<uint64_t>(rp) ^ a->x_mask())
                     : static_cast<uint64_t>(rp);
      Complex pha = a ? pauli_entry_phase(*a, static_cast<uint64_t>(rp))
                      : Complex(1, 0);
      out.emplace_back(
          static_cast<int>(c * d + static_cast<Eigen::Index>(r)),
          static_cast<int>(static_cast<Eigen::Index>(cp) * d + rp),
          scalar * pha * phb);
    }
  }
}

void emit_term(std::vector<Eigen::Triplet<Complex>>& out, Eigen::Index d,
               Complex scalar, const LocalOperator* a, const LocalOperator* b) {
  if (a && b) {
    for (const auto& [p, cp] : a->terms()) {
      for (const auto& [q, cq] : b->terms()) {
        emit_sandwich(out, d, scalar * cp * cq, &p, &q);
      }
    }
  } else if (a) {
    for (const auto& [p, cp] : a->terms()) {
      emit_sandwich(out, d, scalar * cp, &p, nullptr);
    }
  } else if (b) {
    for (const auto& [q, cq] : b->terms()) {
      emit_sandwich(out, d, scalar * cq, nullptr, &q);
    }
  }
}

std::vector<Eigen::Triplet<Complex>> superoperator_triplets(
    const LindbladModel& model) {
  const OperatorBasis& basis = model.basis();
  Eigen::Index d = Eigen::Index(1) << basis.n_sites();
  std::vector<Eigen::Triplet<Complex>> trips;

  const auto& hams = basis.hamiltonian_ops();
  for (int i = 0; i < basis.num_ham(); ++i) {
    double c = model.c_h()(i);
    if (c == 0.0) continue;
    emit_term(trips, d, -kI * c, &hams[static_cast<std::size_t>(i)], nullptr);
    emit_term(trips, d, kI * c, nullptr, &hams[static_cast<std::size_t>(i)]);
  }

  const auto& jumps = basis.jump_ops();
  // One (r, s, c_rs) contribution: c (l_r rho l_s^dag - {l_s^dag l_r, rho}/2).
  auto add_pair = [&](int r, int s, Complex c) {
    if (c == Complex(0, 0)) return;
    const LocalOperator& lr = jumps[static_cast<std::size_t>(r)];
    LocalOperator ls_dag = jumps[static_cast<std::size_t>(s)].adjoint();
    emit_term(trips, d, c, &lr, &ls_dag);
    LocalOperator m = ls_dag * lr;
    emit_term(trips, d, -0.5 * c, &m, nullptr);
    emit_term(trips, d, -0.5 * c, nullptr, &m);
  };
  for (auto [r, s] : basis.allowed_pairs()) {
    if (r == s) {
      add_pair(r, r, model.c_d()(r, r));
    } else {
      add_pair(r, s, model.c_d()(r, s));
      add_pair(s, r, model.c_d()(s, r));
    }
  }
  return trips;
}

std::string basis_op_to_json_value(const LocalOperator& op,
                                   nlohmann::json& out) {
  if (op.num_terms() == 1) {
    const auto& [p, c] = *op.terms().begin();
    if (std::abs(c - Complex(1, 0)) < 1e-15) {
      auto [first, last] = p.span();
      if (first < 0) first = 0, last = -1;
      std::string letters;
      for (int j = first; j <= last; ++j) letters += to_char(p.letter(j));
      if (letters.empty()) letters = "I", first = 0;
      out = {{"letters", letters}, {"site", first}};
      return "string";
    }
  }
  out = {{"text", op.to_text()}};
  return "text";
}

LocalOperator basis_op_from_json(int n_sites, const nlohmann::json& j) {
  if (j.contains("letters")) {
    return LocalOperator(PauliString::embed(
        n_sites, j.at("site").get<int>(), j.at("letters").get<std::string>()));
  }
  return LocalOperator::parse(n_sites, j.at("text").get<std::string>());
}

}  // namespace

std::string ParameterId::label() const {
  switch (kind) {
    case ParamKind::Ham:
      return "h[" + a + "]";
    case ParamKind::DissDiag:
      return "d[" + a + "]";
    case ParamKind::DissRe:
      return "re[" + a + "," + b + "]";
    case ParamKind::DissIm:
      return "im[" + a + "," + b + "]";
  }
  return "?";
}

std::string op_label(const LocalOperator& op) {
  if (op.num_terms() == 1) {
    const auto& [p, c] = *op.terms().begin();
    if (std::abs(c - Complex(1, 0)) < 1e-15) return p.letters();
  }
  std::string text = op.to_text();
  for (char& ch : text) {
    if (ch == '\n') ch = ';';
  }
  return "{" + text + "}";
}

OperatorBasis::OperatorBasis(int n_sites,
                             std::vector<LocalOperator> hamiltonian_ops,
                             std::vector<LocalOperator> jump_ops,
                             std::vector<std::pair<int, int>> allowed_pairs,
                             int max_support)
    : n_sites_(n_sites),
      max_support_(max_support),
      ham_ops_(std::move(hamiltonian_ops)),
      jump_ops_(std::move(jump_ops)),
      pairs_(std::move(allowed_pairs)) {
  for (const auto& h : ham_ops_) {
    if (h.n_sites() != n_sites_) throw DimensionError("basis op size mismatch");
    if (!h.is_hermitian()) {
      throw std::invalid_argument("Hamiltonian basis operator not Hermitian: " +
                                  op_label(h));
    }
    if (!h.acts_on_contiguous(max_support_)) {
      throw std::invalid_argument("basis operator exceeds locality window: " +
                                  op_label(h));
    }
  }
  for (const auto& l : jump_ops_) {
    if (l.n_sites() != n_sites_) throw DimensionError("jump op size mismatch");
    if (!l.acts_on_contiguous(max_support_)) {
      throw std::invalid_argument("jump operator exceeds locality window: " +
                                  op_label(l));
    }
  }
  std::set<std::pair<int, int>> seen;
  std::set<int> referenced;
  int nj = num_jumps();
  for (auto& [r, s] : pairs_) {
    if (r < 0 || s < 0 || r >= nj || s >= nj) {
      throw std::invalid_argument("allowed pair index out of range");
    }
    if (r < s) std::swap(r, s);  // canonical order r >= s
    if (!seen.insert({r, s}).second) {
      throw std::invalid_argument("duplicate allowed pair");
    }
    referenced.insert(r);
    referenced.insert(s);
  }
  for (int r : referenced) {
    if (!seen.count({r, r})) {
      throw std::invalid_argument(
          "allowed_pairs must contain (r,r) for every referenced r");
    }
  }
  for (int k = 0; k < static_cast<int>(pairs_.size()); ++k) {
    if (pairs_[static_cast<std::size_t>(k)].first ==
        pairs_[static_cast<std::size_t>(k)].second) {
      diag_idx_.push_back(k);
    } else {
      offdiag_idx_.push_back(k);
    }
  }
  ids_.reserve(static_cast<std::size_t>(num_parameters()));
  for (const auto& h : ham_ops_) {
    ids_.push_back({ParamKind::Ham, op_label(h), ""});
  }
  for (int k : diag_idx_) {
    const auto& [r, s] = pairs_[static_cast<std::size_t>(k)];
    ids_.push_back({ParamKind::DissDiag,
                    op_label(jump_ops_[static_cast<std::size_t>(r)]), ""});
  }
  for (int k : offdiag_idx_) {
    const auto& [r, s] = pairs_[static_cast<std::size_t>(k)];
    ids_.push_back({ParamKind::DissRe,
                    op_label(jump_ops_[static_cast<std::size_t>(r)]),
                    op_label(jump_ops_[static_cast<std::size_t>(s)])});
  }
  for (int k : offdiag_idx_) {
    const auto& [r, s] = pairs_[static_cast<std::size_t>(k)];
    ids_.push_back({ParamKind::DissIm,
                    op_label(jump_ops_[static_cast<std::size_t>(r)]),
                    op_label(jump_ops_[static_cast<std::size_t>(s)])});
  }
}

int OperatorBasis::num_parameters() const {
  return num_ham() + static_cast<int>(diag_idx_.size()) +
         2 * static_cast<int>(offdiag_idx_.size());
}

std::vector<std::string> OperatorBasis::parameter_labels() const {
  std::vector<std::string> out;
  out.reserve(ids_.size());
  for (const auto& id : ids_) out.push_back(id.label());
  return out;
}

LindbladModel::LindbladModel(BasisPtr basis, Eigen::VectorXd c_h,
                             Eigen::MatrixXcd c_d)
    : basis_(std::move(basis)), c_h_(std::move(c_h)), c_d_(std::move(c_d)) {
  if (c_h_.size() != basis_->num_ham()) {
    throw DimensionError("c_h length does not match Hamiltonian basis");
  }
  int nj = basis_->num_jumps();
  if (c_d_.rows() != nj || c_d_.cols() != nj) {
    throw DimensionError("c_d must be num_jumps x num_jumps");
  }
  double herm_err = (c_d_ - c_d_.adjoint()).cwiseAbs().maxCoeff();
  if (nj > 0 && herm_err > 1e-10) {
    throw std::invalid_argument("dissipation matrix not Hermitian, err = " +
                                std::to_string(herm_err));
  }
  // Entries outside the allowed pairs must vanish.
  Eigen::MatrixXd allowed = Eigen::MatrixXd::Zero(nj, nj);
  for (auto [r, s] : basis_->allowed_pairs()) allowed(r, s) = allowed(s, r) = 1;
  for (int r = 0; r < nj; ++r) {
    for (int s = 0; s < nj; ++s) {
      if (allowed(r, s) == 0 && std::abs(c_d_(r, s)) > 1e-12) {
        throw std::invalid_argument("c_d nonzero outside allowed pairs");
      }
    }
  }
}

double LindbladModel::dissipation_min_eigenvalue() const {
  if (basis_->num_jumps() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c_d_,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

LocalOperator LindbladModel::hamiltonian() const {
  LocalOperator h(basis_->n_sites());
  for (int i = 0; i < basis_->num_ham(); ++i) {
    LocalOperator term = basis_->hamiltonian_ops()[static_cast<std::size_t>(i)];
    term *= Complex(c_h_(i), 0.0);
    h += term;
  }
  return h;
}

Eigen::MatrixXcd apply(const LindbladModel& model, const Eigen::MatrixXcd& rho) {
  const OperatorBasis& basis = model.basis();
  Eigen::Index d = Eigen::Index(1) << basis.n_sites();
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError("apply: state dimension mismatch");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < basis.num_ham(); ++i) {
    double c = model.c_h()(i);
    if (c == 0.0) continue;
    const LocalOperator& h = basis.hamiltonian_ops()[static_cast<std::size_t>(i)];
    out -= kI * c * (op_left(h, rho) - op_right(rho, h));
  }
  const auto& jumps = basis.jump_ops();
  auto add_pair = [&](int r, int s, Complex c) {
    if (c == Complex(0, 0)) return;
    const LocalOperator& lr = jumps[static_cast<std::size_t>(r)];
    LocalOperator ls_dag = jumps[static_cast<std::size_t>(s)].adjoint();
    LocalOperator m = ls_dag * lr;
    out += c * (op_right(op_left(lr, rho), ls_dag) -
                0.5 * (op_left(m, rho) + op_right(rho, m)));
  };
  for (auto [r, s] : basis.allowed_pairs()) {
    if (r == s) {
      add_pair(r, r, model.c_d()(r, r));
    } else {
      add_pair(r, s, model.c_d()(r, s));
      add_pair(s, r, model.c_d()(s, r));
    }
  }
  return out;
}

Eigen::MatrixXcd apply(const LindbladModel& model, const DensityMatrix& rho) {
  if (rho.n_sites() != model.n_sites()) {
    throw DimensionError("apply: site count mismatch");
  }
  return apply(model, rho.matrix());
}

Eigen::SparseMatrix<Complex> superoperator_sparse(
    const LindbladModel& model, const SuperoperatorOptions& opts) {
  int n = model.n_sites();
  if (n > opts.max_sites) {
    throw SizeBudgetError("superoperator limited to " +
                          std::to_string(opts.max_sites) + " sites, got " +
                          std::to_string(n));
  }
  Eigen::Index d = Eigen::Index(1) << n;
  auto trips = superoperator_triplets(model);
  Eigen::SparseMatrix<Complex> s(d * d, d * d);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Eigen::MatrixXcd superoperator(const LindbladModel& model,
                               const SuperoperatorOptions& opts) {
  int n = model.n_sites();
  if (n > opts.max_dense_sites) {
    throw SizeBudgetError("dense superoperator limited to " +
                          std::to_string(opts.max_dense_sites) +
                          " sites, got " + std::to_string(n));
  }
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& t : superoperator_triplets(model)) {
    s(t.row(), t.col()) += t.value();
  }
  return s;
}

Eigen::VectorXd pack(const LindbladModel& model) {
  const OperatorBasis& basis = model.basis();
  Eigen::VectorXd v(basis.num_parameters());
  int pos = 0;
  for (int i = 0; i < basis.num_ham(); ++i) v(pos++) = model.c_h()(i);
  for (int k : basis.diagonal_pairs()) {
    auto [r, s] = basis.allowed_pairs()[static_cast<std::size_t>(k)];
    Complex c = model.c_d()(r, r);
    if (std::abs(c.imag()) > 1e-10) {
      throw InternalConsistencyError("diagonal dissipation entry not real");
    }
    v(pos++) = c.real();
  }
  for (int k : basis.offdiagonal_pairs()) {
    auto [r, s] = basis.allowed_pairs()[static_cast<std::size_t>(k)];
    v(pos++) = model.c_d()(r, s).real();
  }
  for (int k : basis.offdiagonal_pairs()) {
    auto [r, s] = basis.allowed_pairs()[static_cast<std::size_t>(k)];
    v(pos++) = model.c_d()(r, s).imag();
  }
  return v;
}

LindbladModel unpack(BasisPtr basis, const Eigen::VectorXd& values) {
  if (values.size() != basis->num_parameters()) {
    throw DimensionError("coefficient vector length must be M = " +
                         std::to_string(basis->num_parameters()));
  }
  int nh = basis->num_ham();
  Eigen::VectorXd c_h = values.head(nh);
  int nj = basis->num_jumps();
  Eigen::MatrixXcd c_d = Eigen::MatrixXcd::Zero(nj, nj);
  int pos = nh;
  for (int k : basis->diagonal_pairs()) {
    auto [r, s] = basis->allowed_pairs()[static_cast<std::size_t>(k)];
    c_d(r, r) = values(pos++);
  }
  int n_off = static_cast<int>(basis->offdiagonal_pairs().size());
  for (int j = 0; j < n_off; ++j) {
    auto [r, s] =
        basis->allowed_pairs()[static_cast<std::size_t>(
            basis->offdiagonal_pairs()[static_cast<std::size_t>(j)])];
    double re = values(pos + j);
    double im = values(pos + n_off + j);
    c_d(r, s) = Complex(re, im);
    c_d(s, r) = Complex(re, -im);
  }
  return LindbladModel(std::move(basis), std::move(c_h), std::move(c_d));
}

// --- Ensembles -------------------------------------------------------------

namespace {

const Pauli kXYZ[3] = {Pauli::X, Pauli::Y, Pauli::Z};

std::vector<LocalOperator> nn_hamiltonian_ops(int n) {
  std::vector<LocalOperator> ops;
  for (int j = 0; j < n; ++j) {
    for (Pauli a : kXYZ) ops.emplace_back(PauliString::single(n, j, a));
  }
  for (int j = 0; j + 1 < n; ++j) {  // open boundary: no bond past the chain
    for (Pauli a : kXYZ) {
      for (Pauli b : kXYZ) {
        PauliProduct p = multiply(PauliString::single(n, j, a),
                                  PauliString::single(n, j + 1, b));
        ops.emplace_back(p.string);
      }
    }
  }
  return ops;
}

std::vector<LocalOperator> onsite_jump_ops(int n) {
  std::vector<LocalOperator> ops;
  for (int j = 0; j < n; ++j) {
    for (Pauli a : kXYZ) ops.emplace_back(PauliString::single(n, j, a));
  }
  return ops;
}

std::vector<std::pair<int, int>> group_pairs(
    const std::vector<std::vector<int>>& groups) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& g : groups) {
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        pairs.emplace_back(g[a], g[b]);
      }
    }
  }
  return pairs;
}

// c_rs = sum_j c_r^(j) (c_s^(j))^*, PSD by construction. Each amplitude
// vector lives on one index group.
Eigen::MatrixXcd dissipation_from_amplitudes(
    int num_jumps, const std::vector<std::pair<std::vector<int>,
                                               Eigen::VectorXcd>>& channels) {
  Eigen::MatrixXcd c_d = Eigen::MatrixXcd::Zero(num_jumps, num_jumps);
  for (const auto& [idx, amp] : channels) {
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        c_d(idx[a], idx[b]) +=
            amp(static_cast<Eigen::Index>(a)) *
            std::conj(amp(static_cast<Eigen::Index>(b)));
      }
    }
  }
  return c_d;
}

}  // namespace

namespace {

// Bases are immutable; share one instance per (kind, n_sites).
BasisPtr cached(int key, const std::function<BasisPtr()>& build) {
  static std::mutex mu;
  static std::map<int, BasisPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = build();
  return slot;
}

}  // namespace

BasisPtr make_nn_basis(int n_sites) {
  return cached(3 * n_sites + 0, [n_sites] {
    std::vector<std::vector<int>> groups;
    for (int j = 0; j < n_sites; ++j) {
      groups.push_back({3 * j, 3 * j + 1, 3 * j + 2});
    }
    return std::make_shared<OperatorBasis>(
        n_sites, nn_hamiltonian_ops(n_sites), onsite_jump_ops(n_sites),
        group_pairs(groups));
  });
}

BasisPtr make_nn_jump_basis(int n_sites) {
  if (n_sites < 2) throw DimensionError("nearest-neighbor basis needs >= 2 sites");
  return cached(3 * n_sites + 1, [n_sites]() -> BasisPtr {
  std::vector<LocalOperator> jumps;
  std::vector<std::vector<int>> groups;
  for (int j = 0; j < n_sites; ++j) {
    std::vector<int> g;
    for (Pauli a : kXYZ) {
      g.push_back(static_cast<int>(jumps.size()));
      jumps.emplace_back(PauliString::single(n_sites, j, a));
    }
    if (j + 1 < n_sites) {
      for (Pauli a : {Pauli::X, Pauli::Y}) {
        PauliProduct p = multiply(PauliString::single(n_sites, j, a),
                                  PauliString::single(n_sites, j + 1, a));
        g.push_back(static_cast<int>(jumps.size()));
        jumps.emplace_back(p.string);
      }
    }
    groups.push_back(std::move(g));
  }
  return std::make_shared<OperatorBasis>(n_sites, nn_hamiltonian_ops(n_sites),
                                         std::move(jumps), group_pairs(groups));
  });
}

BasisPtr make_ising_loss_basis(int n_sites) {
  if (n_sites < 2) throw DimensionError("Ising basis needs >= 2 sites");
  return cached(3 * n_sites + 2, [n_sites]() -> BasisPtr {
    std::vector<LocalOperator> ham;
    for (int j = 0; j < n_sites; ++j) {
      ham.emplace_back(PauliString::single(n_sites, j, Pauli::X));
    }
    for (int j = 0; j + 1 < n_sites; ++j) {
      PauliProduct p = multiply(PauliString::single(n_sites, j, Pauli::X),
                                PauliString::single(n_sites, j + 1, Pauli::X));
      ham.emplace_back(p.string);
    }
    std::vector<std::vector<int>> groups;
    for (int j = 0; j < n_sites; ++j) {
      groups.push_back({3 * j, 3 * j + 1, 3 * j + 2});
    }
    return std::make_shared<OperatorBasis>(n_sites, std::move(ham),
                                           onsite_jump_ops(n_sites),
                                           group_pairs(groups));
  });
}

LindbladModel random_nn_model(int n_sites, double alpha_d, uint64_t seed) {
  if (n_sites < 2) throw DimensionError("random_nn_model needs >= 2 sites");
  if (alpha_d < 0) throw std::invalid_argument("alpha_d must be >= 0");
  BasisPtr basis = make_nn_basis(n_sites);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd c_h(basis->num_ham());
  for (Eigen::Index i = 0; i < c_h.size(); ++i) c_h(i) = gauss(rng);
  std::vector<std::pair<std::vector<int>, Eigen::VectorXcd>> channels;
  for (int j = 0; j < n_sites; ++j) {
    Eigen::VectorXcd amp(3);
    for (int a = 0; a < 3; ++a) {
      amp(a) = Complex(alpha_d * gauss(rng), alpha_d * gauss(rng));
    }
    channels.push_back({{3 * j, 3 * j + 1, 3 * j + 2}, amp});
  }
  return LindbladModel(basis, std::move(c_h),
                       dissipation_from_amplitudes(basis->num_jumps(), channels));
}

LindbladModel random_nn_jump_model(int n_sites, double alpha_d, uint64_t seed) {
  if (n_sites < 2) throw DimensionError("random_nn_jump_model needs >= 2 sites");
  if (alpha_d < 0) throw std::invalid_argument("alpha_d must be >= 0");
  BasisPtr basis = make_nn_jump_basis(n_sites);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd c_h(basis->num_ham());
  for (Eigen::Index i = 0; i < c_h.size(); ++i) c_h(i) = gauss(rng);
  std::vector<std::pair<std::vector<int>, Eigen::VectorXcd>> channels;
  int op = 0;
  for (int j = 0; j < n_sites; ++j) {
    int width = (j + 1 < n_sites) ? 5 : 3;
    std::vector<int> idx;
    for (int k = 0; k < width; ++k) idx.push_back(op + k);
    Eigen::VectorXcd amp(width);
    for (int k = 0; k < width; ++k) {
      amp(k) = Complex(alpha_d * gauss(rng), alpha_d * gauss(rng));
    }
    channels.push_back({idx, amp});
    op += width;
  }
  return LindbladModel(basis, std::move(c_h),
                       dissipation_from_amplitudes(basis->num_jumps(), channels));
}

LindbladModel loss_dephasing_model(int n_sites, double alpha_l, uint64_t seed) {
  if (alpha_l < 0.0 || alpha_l > 1.0) {
    throw std::invalid_argument("alpha_l must lie in [0, 1]");
  }
  BasisPtr basis = make_nn_basis(n_sites);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd c_h(basis->num_ham());
  for (Eigen::Index i = 0; i < c_h.size(); ++i) c_h(i) = gauss(rng);
  // sigma^- = (x - i y) / 2, so the loss channel has amplitudes
  // (alpha_l/2, -i alpha_l/2, 0); dephasing is (0, 0, 1 - alpha_l).
  std::vector<std::pair<std::vector<int>, Eigen::VectorXcd>> channels;
  for (int j = 0; j < n_sites; ++j) {
    std::vector<int> idx = {3 * j, 3 * j + 1, 3 * j + 2};
    Eigen::VectorXcd loss(3), deph(3);
    loss << Complex(alpha_l / 2, 0), Complex(0, -alpha_l / 2), Complex(0, 0);
    deph << Complex(0, 0), Complex(0, 0), Complex(1.0 - alpha_l, 0);
    channels.push_back({idx, loss});
    channels.push_back({idx, deph});
  }
  return LindbladModel(basis, std::move(c_h),
                       dissipation_from_amplitudes(basis->num_jumps(), channels));
}

LindbladModel classical_ising_loss_model(int n_sites, uint64_t seed) {
  BasisPtr basis = make_ising_loss_basis(n_sites);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd c_h(basis->num_ham());
  for (Eigen::Index i = 0; i < c_h.size(); ++i) c_h(i) = gauss(rng);
  // L_j = 2 sigma^-_j = x - i y.
  std::vector<std::pair<std::vector<int>, Eigen::VectorXcd>> channels;
  for (int j = 0; j < n_sites; ++j) {
    Eigen::VectorXcd amp(3);
    amp << Complex(1, 0), Complex(0, -1), Complex(0, 0);
    channels.push_back({{3 * j, 3 * j + 1, 3 * j + 2}, amp});
  }
  return LindbladModel(basis, std::move(c_h),
                       dissipation_from_amplitudes(basis->num_jumps(), channels));
}

// --- Serialization ----------------------------------------------------------

std::string model_to_json(const LindbladModel& model) {
  const OperatorBasis& basis = model.basis();
  nlohmann::json j;
  j["n_sites"] = basis.n_sites();
  j["max_support"] = basis.max_support();
  auto ops_to_json = [](const std::vector<LocalOperator>& ops) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& op : ops) {
      nlohmann::json v;
      basis_op_to_json_value(op, v);
      arr.push_back(v);
    }
    return arr;
  };
  j["hamiltonian_basis"] = ops_to_json(basis.hamiltonian_ops());
  j["jump_basis"] = ops_to_json(basis.jump_ops());
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [r, s] : basis.allowed_pairs()) pairs.push_back({r, s});
  j["allowed_pairs"] = pairs;
  j["c_h"] = std::vector<double>(model.c_h().data(),
                                 model.c_h().data() + model.c_h().size());
  nlohmann::json cd = nlohmann::json::array();
  for (auto [r, s] : basis.allowed_pairs()) {
    Complex c = model.c_d()(r, s);
    cd.push_back({r, s, c.real(), c.imag()});
  }
  j["c_d"] = cd;
  return j.dump(2);
}

LindbladModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int n = j.at("n_sites").get<int>();
  int max_support = j.value("max_support", 2);
  auto ops_from_json = [n](const nlohmann::json& arr) {
    std::vector<LocalOperator> ops;
    for (const auto& v : arr) ops.push_back(basis_op_from_json(n, v));
    return ops;
  };
  std::vector<std::pair<int, int>> pairs;
  for (const auto& p : j.at("allowed_pairs")) {
    pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  }
  auto basis = std::make_shared<OperatorBasis>(
      n, ops_from_json(j.at("hamiltonian_basis")),
      ops_from_json(j.at("jump_basis")), pairs, max_support);
  std::vector<double> ch = j.at("c_h").get<std::vector<double>>();
  Eigen::VectorXd c_h =
      Eigen::Map<Eigen::VectorXd>(ch.data(), static_cast<Eigen::Index>(ch.size()));
  Eigen::MatrixXcd c_d =
      Eigen::MatrixXcd::Zero(basis->num_jumps(), basis->num_jumps());
  for (const auto& e : j.at("c_d")) {
    int r = e.at(0).get<int>(), s = e.at(1).get<int>();
    Complex c(e.at(2).get<double>(), e.at(3).get<double>());
    c_d(r, s) = c;
    c_d(s, r) = std::conj(c);
  }
  return LindbladModel(std::move(basis), std::move(c_h), std::move(c_d));
}

void save_model(const LindbladModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << model_to_json(model) << "\n";
}

LindbladModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace lindrec
