#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdFloor = -1e-7;
inline constexpr double kDropProb = 1e-12;
inline constexpr std::size_t kMaxAmplitudes = 1'000'000;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// exp(2*pi*i*n/d) with n reduced mod d first, so large exponents stay exact.
inline cplx root_of_unity(long long n, int d) {
  long long r = ((n % d) + d) % d;
  double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(d);
  return {std::cos(angle), std::sin(angle)};
}

inline int mod(long long x, int d) { return static_cast<int>(((x % d) + d) % d); }

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_unitary(const Matrix& u, double tol = kUnitaryTol) {
  if (u.rows() != u.cols()) return false;
  Matrix diff = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return max_abs(diff) <= tol;
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Eigenvalues (ascending) of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Principal square root of a Hermitian PSD matrix; negative eigenvalues
/// from round-off are clipped to zero.
inline Matrix hermitian_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Mixed-radix index arithmetic with the first subsystem as most
/// significant digit.
class Radix {
 public:
  Radix() = default;
  explicit Radix(std::vector<int> dims) : dims_(std::move(dims)), strides_(dims_.size()) {
    std::size_t s = 1;
    for (std::size_t i = dims_.size(); i-- > 0;) {
      if (dims_[i] < 1) throw std::invalid_argument("subsystem dimension must be positive");
      strides_[i] = s;
      s *= static_cast<std::size_t>(dims_[i]);
      if (s > kMaxAmplitudes)
        throw std::length_error("total dimension exceeds " + std::to_string(kMaxAmplitudes) +
                                " amplitudes");
    }
    size_ = s;
  }

  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::size_t size() const { return size_; }
  std::size_t rank() const { return dims_.size(); }

  std::size_t encode(std::span<const int> digits) const {
    if (digits.size() != dims_.size()) throw std::invalid_argument("digit count mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] < 0 || digits[i] >= dims_[i]) throw std::out_of_range("digit out of range");
      idx += static_cast<std::size_t>(digits[i]) * strides_[i];
    }
    return idx;
  }

  std::vector<int> decode(std::size_t idx) const {
    if (idx >= size_) throw std::out_of_range("index out of range");
    std::vector<int> digits(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      digits[i] = static_cast<int>(idx / strides_[i]);
      idx %= strides_[i];
    }
    return digits;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Splits a flat index space into (selected subsystems, remaining subsystems).
/// Flat index = selected_offsets[a] + rest_offsets[b], where `a` enumerates
/// the selected subsystems in the listed order and `b` the remaining ones in
/// ascending subsystem order.
struct IndexSplit {
  std::vector<int> selected;
  std::vector<int> rest;
  std::vector<int> selected_dims;
  std::vector<int> rest_dims;
  std::vector<std::size_t> selected_offsets;
  std::vector<std::size_t> rest_offsets;
};

inline void check_subsystems(std::span<const int> subs, std::size_t rank) {
  std::vector<bool> seen(rank, false);
  for (int s : subs) {
    if (s < 0 || static_cast<std::size_t>(s) >= rank)
      throw std::out_of_range("subsystem index " + std::to_string(s) + " out of range");
    if (seen[s]) throw std::invalid_argument("subsystem index repeated");
    seen[s] = true;
  }
}

inline std::vector<std::size_t> offsets_for(const Radix& radix, std::span<const int> subs) {
  std::size_t count = 1;
  for (int s : subs) count *= static_cast<std::size_t>(radix.dims()[s]);
  std::vector<std::size_t> out(count, 0);
  // Last listed subsystem varies fastest.
  std::size_t block = count;
  for (int s : subs) {
    const auto d = static_cast<std::size_t>(radix.dims()[s]);
    block /= d;
    for (std::size_t i = 0; i < count; ++i) out[i] += ((i / block) % d) * radix.strides()[s];
  }
  return out;
}

inline IndexSplit split_index(const Radix& radix, std::span<const int> selected) {
  check_subsystems(selected, radix.rank());
  IndexSplit sp;
  sp.selected.assign(selected.begin(), selected.end());
  for (int i = 0; i < static_cast<int>(radix.rank()); ++i)
    if (std::find(selected.begin(), selected.end(), i) == selected.end()) sp.rest.push_back(i);
  for (int s : sp.selected) sp.selected_dims.push_back(radix.dims()[s]);
  for (int s : sp.rest) sp.rest_dims.push_back(radix.dims()[s]);
  sp.selected_offsets = offsets_for(radix, sp.selected);
  sp.rest_offsets = offsets_for(radix, sp.rest);
  return sp;
}

}  // namespace qwalk
