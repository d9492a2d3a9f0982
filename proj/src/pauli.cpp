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

#include "lindrec/pauli.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lindrec {

namespace {

constexpr int kMaxSites = 64;
constexpr int kMaxDenseSites = 16;

// i^k for k in 0..3.
const Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_site_count(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw DimensionError("n_sites must be in [1, 64], got " +
                         std::to_string(n_sites));
  }
}

void check_same_sites(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void check_dense_budget(int n_sites) {
  if (n_sites > kMaxDenseSites) {
    throw SizeBudgetError("dense realization limited to " +
                          std::to_string(kMaxDenseSites) + " sites, got " +
                          std::to_string(n_sites));
  }
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
}

PauliString::PauliString(int n_sites)
    : n_sites_(n_sites), x_mask_(0), z_mask_(0) {
  check_site_count(n_sites);
}

PauliString::PauliString(int n_sites, std::string_view letters)
    : PauliString(n_sites) {
  if (static_cast<int>(letters.size()) != n_sites) {
    throw DimensionError("letter string length " +
                         std::to_string(letters.size()) +
                         " does not match n_sites " + std::to_string(n_sites));
  }
  for (int j = 0; j < n_sites; ++j) {
    Pauli p = pauli_from_char(letters[j]);
    uint64_t bit = 1ULL << (n_sites - 1 - j);
    if (p == Pauli::X || p == Pauli::Y) x_mask_ |= bit;
    if (p == Pauli::Z || p == Pauli::Y) z_mask_ |= bit;
  }
}

PauliString PauliString::single(int n_sites, int site, Pauli p) {
  PauliString s(n_sites);
  if (site < 0 || site >= n_sites) {
    throw DimensionError("site " + std::to_string(site) + " out of range");
  }
  uint64_t bit = 1ULL << (n_sites - 1 - site);
  if (p == Pauli::X || p == Pauli::Y) s.x_mask_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) s.z_mask_ |= bit;
  return s;
}

PauliString PauliString::embed(int n_sites, int offset,
                               std::string_view letters) {
  PauliString s(n_sites);
  if (offset < 0 || offset + static_cast<int>(letters.size()) > n_sites) {
    throw DimensionError("embedded letters do not fit the chain");
  }
  for (std::size_t k = 0; k < letters.size(); ++k) {
    Pauli p = pauli_from_char(letters[k]);
    uint64_t bit = 1ULL << (n_sites - 1 - (offset + static_cast<int>(k)));
    if (p == Pauli::X || p == Pauli::Y) s.x_mask_ |= bit;
    if (p == Pauli::Z || p == Pauli::Y) s.z_mask_ |= bit;
  }
  return s;
}

Pauli PauliString::letter(int site) const {
  uint64_t bit = 1ULL << (n_sites_ - 1 - site);
  bool x = x_mask_ & bit;
  bool z = z_mask_ & bit;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

int PauliString::weight() const {
  return std::popcount(x_mask_ | z_mask_);
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  uint64_t m = x_mask_ | z_mask_;
  for (int j = 0; j < n_sites_; ++j) {
    if (m & (1ULL << (n_sites_ - 1 - j))) out.push_back(j);
  }
  return out;
}

std::pair<int, int> PauliString::span() const {
  uint64_t m = x_mask_ | z_mask_;
  if (m == 0) return {-1, -1};
  int first = n_sites_ - 1 - (63 - std::countl_zero(m));
  int last = n_sites_ - 1 - std::countr_zero(m);
  return {first, last};
}

bool PauliString::acts_within(int first, int last) const {
  auto [a, b] = span();
  if (a < 0) return true;
  return a >= first && b <= last;
}

int PauliString::num_y() const {
  return std::popcount(x_mask_ & z_mask_);
}

bool PauliString::commutes_with(const PauliString& other) const {
  check_same_sites(n_sites_, other.n_sites_, "commutes_with");
  int anti = std::popcount(x_mask_ & other.z_mask_) +
             std::popcount(z_mask_ & other.x_mask_);
  return (anti & 1) == 0;
}

std::string PauliString::letters() const {
  std::string out(static_cast<std::size_t>(n_sites_), 'I');
  for (int j = 0; j < n_sites_; ++j) out[j] = to_char(letter(j));
  return out;
}

// Writing each string as i^{#Y} X^x Z^z, the product picks up
// (-1)^{popcount(za & xb)} from commuting Z^za past X^xb, and the Y
// bookkeeping contributes i^{ya + yb - yc}.
PauliProduct multiply(const PauliString& a, const PauliString& b) {
  check_same_sites(a.n_sites(), b.n_sites(), "multiply");
  uint64_t xc = a.x_mask() ^ b.x_mask();
  uint64_t zc = a.z_mask() ^ b.z_mask();
  int e = std::popcount(a.x_mask() & a.z_mask()) +
          std::popcount(b.x_mask() & b.z_mask()) -
          std::popcount(xc & zc) + 2 * std::popcount(a.z_mask() & b.x_mask());
  e = ((e % 4) + 4) % 4;
  std::string letters(static_cast<std::size_t>(a.n_sites()), 'I');
  for (int j = 0; j < a.n_sites(); ++j) {
    uint64_t bit = 1ULL << (a.n_sites() - 1 - j);
    bool x = xc & bit, z = zc & bit;
    letters[static_cast<std::size_t>(j)] = x && z ? 'Y' : x ? 'X' : z ? 'Z' : 'I';
  }
  return {kPhases[e], PauliString(a.n_sites(), letters)};
}

Eigen::MatrixXcd dense(const PauliString& p) {
  check_dense_budget(p.n_sites());
  Eigen::Index d = Eigen::Index(1) << p.n_sites();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  Complex y_phase = kPhases[p.num_y() % 4];
  for (Eigen::Index b = 0; b < d; ++b) {
    int zs = std::popcount(static_cast<uint64_t>(b) & p.z_mask());
    Complex val = y_phase * ((zs & 1) ? -1.0 : 1.0);
    m(static_cast<Eigen::Index>(b ^ static_cast<Eigen::Index>(p.x_mask())), b) =
        val;
  }
  return m;
}

LocalOperator::LocalOperator(int n_sites) : n_sites_(n_sites) {
  check_site_count(n_sites);
}

LocalOperator::LocalOperator(const PauliString& p, Complex coeff)
    : n_sites_(p.n_sites()) {
  add_term(p, coeff);
}

void LocalOperator::add_term(const PauliString& p, Complex coeff) {
  check_same_sites(n_sites_, p.n_sites(), "add_term");
  auto it = terms_.find(p);
  if (it == terms_.end()) {
    if (std::abs(coeff) > prune_threshold) terms_.emplace(p, coeff);
    return;
  }
  it->second += coeff;
  if (std::abs(it->second) <= prune_threshold) terms_.erase(it);
}

Complex LocalOperator::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Complex(0, 0) : it->second;
}

LocalOperator& LocalOperator::operator+=(const LocalOperator& other) {
  check_same_sites(n_sites_, other.n_sites_, "operator+=");
  for (const auto& [p, c] : other.terms_) add_term(p, c);
  return *this;
}

LocalOperator& LocalOperator::operator-=(const LocalOperator& other) {
  check_same_sites(n_sites_, other.n_sites_, "operator-=");
  for (const auto& [p, c] : other.terms_) add_term(p, -c);
  return *this;
}

LocalOperator& LocalOperator::operator*=(Complex scalar) {
  if (std::abs(scalar) <= prune_threshold) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, c] : terms_) c *= scalar;
  return *this;
}

LocalOperator LocalOperator::operator*(const LocalOperator& other) const {
  check_same_sites(n_sites_, other.n_sites_, "operator*");
  LocalOperator out(n_sites_);
  for (const auto& [p, cp] : terms_) {
    for (const auto& [q, cq] : other.terms_) {
      PauliProduct r = multiply(p, q);
      out.add_term(r.string, cp * cq * r.phase);
    }
  }
  return out;
}

LocalOperator LocalOperator::adjoint() const {
  LocalOperator out(n_sites_);
  for (const auto& [p, c] : terms_) out.add_term(p, std::conj(c));
  return out;
}

bool LocalOperator::is_hermitian(double tol) const {
  return max_abs_imag() <= tol;
}

double LocalOperator::max_abs_imag() const {
  double worst = 0.0;
  for (const auto& [p, c] : terms_) worst = std::max(worst, std::abs(c.imag()));
  return worst;
}

std::vector<int> LocalOperator::support() const {
  std::vector<bool> hit(static_cast<std::size_t>(n_sites_), false);
  for (const auto& [p, c] : terms_) {
    for (int s : p.support()) hit[static_cast<std::size_t>(s)] = true;
  }
  std::vector<int> out;
  for (int j = 0; j < n_sites_; ++j) {
    if (hit[static_cast<std::size_t>(j)]) out.push_back(j);
  }
  return out;
}

std::pair<int, int> LocalOperator::span() const {
  int first = n_sites_, last = -1;
  for (const auto& [p, c] : terms_) {
    auto [a, b] = p.span();
    if (a < 0) continue;
    first = std::min(first, a);
    last = std::max(last, b);
  }
  if (last < 0) return {-1, -1};
  return {first, last};
}

bool LocalOperator::acts_on_contiguous(int k) const {
  auto [a, b] = span();
  if (a < 0) return true;
  return b - a + 1 <= k;
}

Eigen::MatrixXcd LocalOperator::dense() const {
  check_dense_budget(n_sites_);
  Eigen::Index d = Eigen::Index(1) << n_sites_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [p, c] : terms_) m += c * lindrec::dense(p);
  return m;
}

std::string LocalOperator::to_text() const {
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& [p, c] : terms_) {
    if (!first) out << "\n";
    first = false;
    out << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i"
        << " * " << p.letters();
  }
  return out.str();
}

LocalOperator LocalOperator::parse(int n_sites, std::string_view text) {
  LocalOperator out(n_sites);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto star = line.find('*');
    if (star == std::string::npos) {
      throw std::invalid_argument("malformed operator term: " + line);
    }
    std::string coeff_part = line.substr(0, star);
    std::string letters = line.substr(star + 1);
    // Strip whitespace around the letters.
    letters.erase(0, letters.find_first_not_of(" \t"));
    letters.erase(letters.find_last_not_of(" \t") + 1);
    // coeff_part looks like "<re>[+-]<im>i".
    auto ipos = coeff_part.find_last_of('i');
    if (ipos == std::string::npos) {
      throw std::invalid_argument("malformed coefficient: " + coeff_part);
    }
    std::string body = coeff_part.substr(0, ipos);
    // Split at the sign of the imaginary part (skip a leading sign and
    // exponent signs).
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      char ch = body[k];
      if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) {
      throw std::invalid_argument("malformed coefficient: " + coeff_part);
    }
    double re = std::stod(body.substr(0, split));
    double im = std::stod(body.substr(split));
    out.add_term(PauliString(n_sites, letters), Complex(re, im));
  }
  return out;
}

LocalOperator commutator(const LocalOperator& a, const LocalOperator& b) {
  check_same_sites(a.n_sites(), b.n_sites(), "commutator");
  LocalOperator out(a.n_sites());
  for (const auto& [p, cp] : a.terms()) {
    for (const auto& [q, cq] : b.terms()) {
      if (p.commutes_with(q)) continue;  // pq - qp cancels exactly
      PauliProduct r = multiply(p, q);
      // For anticommuting strings qp = -pq, so [p, q] = 2 pq.
      out.add_term(r.string, 2.0 * cp * cq * r.phase);
    }
  }
  return out;
}

DensityMatrix::DensityMatrix(int n_sites, Eigen::MatrixXcd data)
    : n_sites_(n_sites), data_(std::move(data)) {
  check_site_count(n_sites);
  check_dense_budget(n_sites);
  Eigen::Index d = Eigen::Index(1) << n_sites;
  if (data_.rows() != d || data_.cols() != d) {
    throw DimensionError("density matrix must be 2^n x 2^n");
  }
}

DensityMatrix DensityMatrix::fully_mixed(int n_sites) {
  Eigen::Index d = Eigen::Index(1) << n_sites;
  return DensityMatrix(
      n_sites, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::computational_state(int n_sites,
                                                 uint64_t down_mask) {
  Eigen::Index d = Eigen::Index(1) << n_sites;
  Eigen::Index idx = 0;
  for (int j = 0; j < n_sites; ++j) {
    if (down_mask & (1ULL << j)) idx |= Eigen::Index(1) << (n_sites - 1 - j);
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  m(idx, idx) = 1.0;
  return DensityMatrix(n_sites, std::move(m));
}

DensityMatrix DensityMatrix::from_matrix(int n_sites, Eigen::MatrixXcd data) {
  DensityMatrix rho(n_sites, std::move(data));
  rho.validate();
  return rho;
}

void DensityMatrix::validate(double herm, double trace, double psd) const {
  double herm_err = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > herm) {
    throw InvalidDensityMatrix("not Hermitian: max |rho - rho^dag| = " +
                               std::to_string(herm_err));
  }
  double trace_err = std::abs(data_.trace() - Complex(1, 0));
  if (trace_err > trace) {
    throw InvalidDensityMatrix("trace deviates from 1 by " +
                               std::to_string(trace_err));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (data_ + data_.adjoint()), Eigen::EigenvaluesOnly);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -psd) {
    throw InvalidDensityMatrix("negative eigenvalue " + std::to_string(min_eig));
  }
}

Complex pauli_expectation(const DensityMatrix& rho, const PauliString& p) {
  check_same_sites(rho.n_sites(), p.n_sites(), "pauli_expectation");
  const Eigen::MatrixXcd& m = rho.matrix();
  Eigen::Index d = rho.dim();
  Complex acc(0, 0);
  uint64_t xm = p.x_mask(), zm = p.z_mask();
  // tr(P rho) = sum_c ph(c) rho(c, c ^ x_mask), since column c of P has its
  // single nonzero ph(c) at row c ^ x_mask.
  for (Eigen::Index b = 0; b < d; ++b) {
    int zs = std::popcount(static_cast<uint64_t>(b) & zm);
    double sign = (zs & 1) ? -1.0 : 1.0;
    acc += sign * m(b, static_cast<Eigen::Index>(static_cast<uint64_t>(b) ^ xm));
  }
  return kPhases[p.num_y() % 4] * acc;
}

Complex expectation(const DensityMatrix& rho, const LocalOperator& op) {
  check_same_sites(rho.n_sites(), op.n_sites(), "expectation");
  Complex acc(0, 0);
  for (const auto& [p, c] : op.terms()) acc += c * pauli_expectation(rho, p);
  return acc;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep_sites) {
  int n = rho.n_sites();
  for (std::size_t k = 0; k < keep_sites.size(); ++k) {
    if (keep_sites[k] < 0 || keep_sites[k] >= n) {
      throw DimensionError("keep site out of range");
    }
    if (k > 0 && keep_sites[k] <= keep_sites[k - 1]) {
      throw DimensionError("keep_sites must be strictly increasing");
    }
  }
  int nk = static_cast<int>(keep_sites.size());
  if (nk == 0) throw DimensionError("keep_sites must be non-empty");
  std::vector<int> env;
  {
    std::size_t ki = 0;
    for (int j = 0; j < n; ++j) {
      if (ki < keep_sites.size() && keep_sites[ki] == j) {
        ++ki;
      } else {
        env.push_back(j);
      }
    }
  }
  int ne = n - nk;
  Eigen::Index dk = Eigen::Index(1) << nk;
  Eigen::Index de = Eigen::Index(1) << ne;
  // Scatter the bits of a reduced (or environment) index into the full
  // index; reduced site order follows keep_sites.
  auto scatter = [n](const std::vector<int>& sites, Eigen::Index v) {
    uint64_t out = 0;
    int ns = static_cast<int>(sites.size());
    for (int k = 0; k < ns; ++k) {
      if (static_cast<uint64_t>(v) & (1ULL << (ns - 1 - k))) {
        out |= 1ULL << (n - 1 - sites[static_cast<std::size_t>(k)]);
      }
    }
    return static_cast<Eigen::Index>(out);
  };
  const Eigen::MatrixXcd& m = rho.matrix();
  Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    Eigen::Index ia = scatter(keep_sites, a);
    for (Eigen::Index b = 0; b < dk; ++b) {
      Eigen::Index ib = scatter(keep_sites, b);
      Complex acc(0, 0);
      for (Eigen::Index e = 0; e < de; ++e) {
        Eigen::Index ie = scatter(env, e);
        acc += m(ia | ie, ib | ie);
      }
      red(a, b) = acc;
    }
  }
  return DensityMatrix(nk, std::move(red));
}

}  // namespace lindrec
