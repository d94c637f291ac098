#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/random.hpp"

namespace qwalk {

/// Unit-norm amplitude vector over an ordered list of qudits. Subsystem 0 is
/// the most significant digit, so |1101> reads left to right.
class PureState {
 public:
  PureState(std::vector<int> dims, Vector amps) : radix_(std::move(dims)), amps_(std::move(amps)) {
    if (static_cast<std::size_t>(amps_.size()) != radix_.size())
      throw std::invalid_argument("amplitude count " + std::to_string(amps_.size()) +
                                  " does not match product of dims " +
                                  std::to_string(radix_.size()));
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > kNormTol)
      throw std::invalid_argument("state is not normalized (norm " + std::to_string(n) + ")");
  }

  /// Rescales `amps` to unit norm; rejects the zero vector.
  static PureState normalized(std::vector<int> dims, Vector amps) {
    const double n = amps.norm();
    if (n < 1e-300) throw std::invalid_argument("cannot normalize the zero vector");
    return PureState(std::move(dims), amps / n);
  }

  static PureState basis(std::vector<int> dims, std::span<const int> digits) {
    Radix r(dims);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(r.size()));
    v(static_cast<Eigen::Index>(r.encode(digits))) = 1.0;
    return PureState(std::move(dims), std::move(v));
  }

  static PureState basis(std::vector<int> dims, std::initializer_list<int> digits) {
    return basis(std::move(dims), std::span<const int>(digits.begin(), digits.size()));
  }

  const std::vector<int>& dims() const { return radix_.dims(); }
  const Radix& radix() const { return radix_; }
  const Vector& amps() const { return amps_; }
  std::size_t size() const { return radix_.size(); }
  int num_subsystems() const { return static_cast<int>(radix_.rank()); }

  cplx amplitude(std::span<const int> digits) const {
    return amps_(static_cast<Eigen::Index>(radix_.encode(digits)));
  }
  cplx amplitude(std::initializer_list<int> digits) const {
    return amplitude(std::span<const int>(digits.begin(), digits.size()));
  }

 private:
  Radix radix_;
  Vector amps_;
};

struct GeneralizedBellLabel {
  int d = 2;
  int k = 0;
  int l = 0;

  GeneralizedBellLabel() = default;
  GeneralizedBellLabel(int d_, int k_, int l_) : d(d_), k(k_), l(l_) {
    if (d < 2) throw std::invalid_argument("generalized Bell dimension must be >= 2");
    if (k < 0 || k >= d || l < 0 || l >= d)
      throw std::invalid_argument("generalized Bell indices must lie in [0, d)");
  }

  /// Reduces k and l modulo d before validating.
  static GeneralizedBellLabel wrap(int d, long long k, long long l) {
    if (d < 2) throw std::invalid_argument("generalized Bell dimension must be >= 2");
    return {d, mod(k, d), mod(l, d)};
  }

  friend bool operator==(const GeneralizedBellLabel&, const GeneralizedBellLabel&) = default;
};

struct MeasurementRecord {
  std::vector<int> measured;
  std::vector<int> outcome;
  double prob = 0.0;
  PureState residual;  // on the unmeasured subsystems, ascending order
};

/// (1/sqrt d) sum_m exp(2 pi i m k / d) |m>|m - l mod d>
inline PureState make_generalized_bell(const GeneralizedBellLabel& label) {
  const int d = label.d;
  if (d < 2) throw std::invalid_argument("generalized Bell dimension must be >= 2");
  Vector v = Vector::Zero(d * d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m) v(m * d + mod(m - label.l, d)) = s * root_of_unity(1LL * m * label.k, d);
  return PureState({d, d}, std::move(v));
}

/// a|01> + b|10>, or a|00> + b|11> when `flipped`.
inline PureState make_pair(cplx a, cplx b, bool flipped = false) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kNormTol)
    throw std::invalid_argument("pair amplitudes must satisfy |a|^2 + |b|^2 = 1");
  Vector v = Vector::Zero(4);
  if (flipped) {
    v(0) = a;
    v(3) = b;
  } else {
    v(1) = a;
    v(2) = b;
  }
  return PureState({2, 2}, std::move(v));
}

/// (1/sqrt d) sum_m |m>^{(x) n}
inline PureState make_ghz(int d, int n) {
  if (d < 2 || n < 2) throw std::invalid_argument("GHZ state needs d >= 2 and n >= 2");
  Radix r(std::vector<int>(n, d));
  Vector v = Vector::Zero(static_cast<Eigen::Index>(r.size()));
  std::size_t diag_step = 0;
  for (int i = 0; i < n; ++i) diag_step += r.strides()[i];
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m) v(static_cast<Eigen::Index>(m * diag_step)) = s;
  return PureState(std::vector<int>(n, d), std::move(v));
}

inline PureState tensor(std::span<const PureState> states) {
  if (states.empty()) throw std::invalid_argument("tensor of an empty list");
  std::vector<int> dims;
  Vector v = Vector::Ones(1);
  for (const auto& s : states) {
    dims.insert(dims.end(), s.dims().begin(), s.dims().end());
    Radix(dims);  // enforces the amplitude cap before allocating
    Vector next(v.size() * s.amps().size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * s.amps().size(), s.amps().size()) = v(i) * s.amps();
    v = std::move(next);
  }
  return PureState(std::move(dims), std::move(v));
}

inline PureState tensor(std::initializer_list<PureState> states) {
  return tensor(std::span<const PureState>(states.begin(), states.size()));
}

/// Applies `u` to `targets` (in listed order); other subsystems untouched.
inline PureState apply_unitary(const PureState& state, const Matrix& u, std::span<const int> targets) {
  const IndexSplit sp = split_index(state.radix(), targets);
  const auto block = static_cast<Eigen::Index>(sp.selected_offsets.size());
  if (u.rows() != block || u.cols() != block)
    throw std::invalid_argument("operator side " + std::to_string(u.rows()) +
                                " does not match target dimension " + std::to_string(block));
  if (!is_unitary(u)) throw std::invalid_argument("operator is not unitary");

  const Vector& in = state.amps();
  Vector out(in.size());
  Vector local(block);
  for (std::size_t base : sp.rest_offsets) {
    for (Eigen::Index a = 0; a < block; ++a) local(a) = in(static_cast<Eigen::Index>(base + sp.selected_offsets[a]));
    Vector mapped = u * local;
    for (Eigen::Index a = 0; a < block; ++a) out(static_cast<Eigen::Index>(base + sp.selected_offsets[a])) = mapped(a);
  }
  return PureState(state.dims(), std::move(out));
}

inline PureState apply_unitary(const PureState& state, const Matrix& u, std::initializer_list<int> targets) {
  return apply_unitary(state, u, std::span<const int>(targets.begin(), targets.size()));
}

namespace detail {

inline std::vector<int> outcome_digits(const std::vector<int>& dims, std::size_t i) {
  std::vector<int> digits(dims.size());
  for (std::size_t j = dims.size(); j-- > 0;) {
    digits[j] = static_cast<int>(i % static_cast<std::size_t>(dims[j]));
    i /= static_cast<std::size_t>(dims[j]);
  }
  return digits;
}

inline Vector project(const PureState& state, const IndexSplit& sp, std::size_t outcome_index) {
  Vector out(static_cast<Eigen::Index>(sp.rest_offsets.size()));
  const std::size_t off = sp.selected_offsets[outcome_index];
  for (std::size_t r = 0; r < sp.rest_offsets.size(); ++r)
    out(static_cast<Eigen::Index>(r)) = state.amps()(static_cast<Eigen::Index>(off + sp.rest_offsets[r]));
  return out;
}

}  // namespace detail

/// Projective computational-basis measurement of `targets`, one record per
/// outcome with probability above kDropProb, ordered by outcome digits.
/// Residuals are the normalized projections and keep whatever phase the
/// projection carries.
inline std::vector<MeasurementRecord> measure_enumerate(const PureState& state, std::span<const int> targets) {
  const IndexSplit sp = split_index(state.radix(), targets);
  std::vector<MeasurementRecord> records;
  for (std::size_t o = 0; o < sp.selected_offsets.size(); ++o) {
    Vector proj = detail::project(state, sp, o);
    const double p = proj.squaredNorm();
    if (p <= kDropProb) continue;
    records.push_back({sp.selected, detail::outcome_digits(sp.selected_dims, o), p,
                       PureState::normalized(sp.rest_dims, proj)});
  }
  return records;
}

inline std::vector<MeasurementRecord> measure_enumerate(const PureState& state, std::initializer_list<int> targets) {
  return measure_enumerate(state, std::span<const int>(targets.begin(), targets.size()));
}

/// Draws a single outcome with the Born rule.
inline MeasurementRecord sample_outcome(const PureState& state, std::span<const int> targets, Rng& rng) {
  auto records = measure_enumerate(state, targets);
  double total = 0.0;
  for (const auto& r : records) total += r.prob;
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (auto& r : records) {
    acc += r.prob;
    if (u < acc) return std::move(r);
  }
  return std::move(records.back());
}

/// Post-measurement state on the full register for a given outcome.
inline PureState collapse(const PureState& state, std::span<const int> targets, std::span<const int> outcome) {
  check_subsystems(targets, state.radix().rank());
  if (outcome.size() != targets.size()) throw std::invalid_argument("outcome length mismatch");
  Vector v = state.amps();
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto digits = state.radix().decode(i);
    for (std::size_t t = 0; t < targets.size(); ++t)
      if (digits[targets[t]] != outcome[t]) {
        v(static_cast<Eigen::Index>(i)) = 0.0;
        break;
      }
  }
  if (v.squaredNorm() <= kDropProb) throw std::invalid_argument("outcome has zero probability");
  return PureState::normalized(state.dims(), std::move(v));
}

/// Digits concatenated; comma separated when any dimension exceeds 10.
inline std::string basis_string(std::span<const int> digits, std::span<const int> dims) {
  const bool wide = std::any_of(dims.begin(), dims.end(), [](int d) { return d > 10; });
  std::string s;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (wide) {
      if (i) s += ',';
      s += std::to_string(digits[i]);
    } else {
      s += static_cast<char>('0' + digits[i]);
    }
  }
  return s;
}

using Histogram = std::map<std::string, std::int64_t>;

/// Multinomial sample of full computational-basis readouts.
inline Histogram sample_shots(const PureState& state, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  std::vector<double> cdf(state.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    acc += std::norm(state.amps()(static_cast<Eigen::Index>(i)));
    cdf[i] = acc;
  }
  Rng rng = make_rng(seed);
  std::vector<std::int64_t> counts(state.size(), 0);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // upper_bound lands on the first slot whose cdf exceeds u, which always
    // has nonzero probability
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    ++counts[idx];
  }
  Histogram h;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) h[basis_string(state.radix().decode(i), state.dims())] = counts[i];
  return h;
}

inline cplx inner(const PureState& a, const PureState& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("dimension mismatch");
  return a.amps().dot(b.amps());  // conjugates the first argument
}

/// |<a|b>|^2
inline double state_fidelity(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

inline bool equal_exact(const PureState& a, const PureState& b, double tol = kNormTol) {
  return a.dims() == b.dims() && max_abs(a.amps() - b.amps()) <= tol;
}

/// Entrywise equality after removing one global phase.
inline bool equal_up_to_phase(const PureState& a, const PureState& b, double tol = kNormTol) {
  if (a.dims() != b.dims()) return false;
  const cplx ov = inner(b, a);
  const double mag = std::abs(ov);
  if (mag < 1e-300) return false;
  return max_abs(a.amps() - (ov / mag) * b.amps()) <= tol;
}

/// Hermitian, trace-one operator. Positivity is not enforced at
/// construction because linear-inversion tomography can leave small negative
/// eigenvalues; query is_psd().
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, Matrix mat) : radix_(std::move(dims)), mat_(std::move(mat)) {
    const auto n = static_cast<Eigen::Index>(radix_.size());
    if (mat_.rows() != n || mat_.cols() != n)
      throw std::invalid_argument("density matrix side does not match product of dims");
    if (!is_hermitian(mat_)) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(mat_.trace() - cplx(1.0, 0.0)) > kNormTol)
      throw std::invalid_argument("density matrix trace is not 1");
  }

  static DensityMatrix from_pure(const PureState& s) {
    return DensityMatrix(s.dims(), s.amps() * s.amps().adjoint());
  }

  static DensityMatrix maximally_mixed(std::vector<int> dims) {
    Radix r(dims);
    const auto n = static_cast<Eigen::Index>(r.size());
    return DensityMatrix(std::move(dims), Matrix::Identity(n, n) / static_cast<double>(n));
  }

  const std::vector<int>& dims() const { return radix_.dims(); }
  const Radix& radix() const { return radix_; }
  const Matrix& mat() const { return mat_; }
  std::size_t size() const { return radix_.size(); }

  double min_eigenvalue() const { return hermitian_eigenvalues(mat_).minCoeff(); }
  bool is_psd() const { return min_eigenvalue() >= kPsdFloor; }

 private:
  Radix radix_;
  Matrix mat_;
};

/// Reduced density matrix on `keep` (in listed order).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const IndexSplit sp = split_index(rho.radix(), keep);
  const auto n = static_cast<Eigen::Index>(sp.selected_offsets.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t r : sp.rest_offsets)
        acc += rho.mat()(static_cast<Eigen::Index>(sp.selected_offsets[i] + r),
                         static_cast<Eigen::Index>(sp.selected_offsets[j] + r));
      out(i, j) = acc;
    }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(sp.selected_dims, std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

/// Reduced density matrix of a pure state without forming the full outer product.
inline DensityMatrix reduced_density(const PureState& state, std::span<const int> keep) {
  const IndexSplit sp = split_index(state.radix(), keep);
  const auto rows = static_cast<Eigen::Index>(sp.selected_offsets.size());
  const auto cols = static_cast<Eigen::Index>(sp.rest_offsets.size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = state.amps()(static_cast<Eigen::Index>(sp.selected_offsets[i] + sp.rest_offsets[j]));
  Matrix rho = m * m.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(sp.selected_dims, std::move(rho));
}

inline DensityMatrix reduced_density(const PureState& state, std::initializer_list<int> keep) {
  return reduced_density(state, std::span<const int>(keep.begin(), keep.size()));
}

}  // namespace qwalk
