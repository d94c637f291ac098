#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "qwalk/linalg.hpp"
#include "qwalk/random.hpp"
#include "qwalk/statevec.hpp"

namespace qwalk {

inline constexpr double kEntropyFloor = 1e-12;

/// Wootters concurrence of a two-qubit state.
inline double concurrence(const DensityMatrix& rho) {
  if (rho.dims() != std::vector<int>{2, 2}) throw std::invalid_argument("concurrence needs dims [2, 2]");
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix flipped = yy * rho.mat().conjugate() * yy;
  const Matrix s = hermitian_sqrt(rho.mat());
  Matrix m = s * flipped * s;
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::VectorXd ev = hermitian_eigenvalues(m).cwiseMax(0.0).cwiseSqrt();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return std::max(0.0, ev(0) - ev(1) - ev(2) - ev(3));
}

/// 2|a00 a11 - a01 a10| for a pure two-qubit state.
inline double concurrence(const PureState& psi) {
  if (psi.dims() != std::vector<int>{2, 2}) throw std::invalid_argument("concurrence requires two qubits");
  const Vector& a = psi.amps();
  return 2.0 * std::abs(a(0) * a(3) - a(1) * a(2));
}

/// von Neumann entropy in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(rho.mat());
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > kEntropyFloor) s -= ev(i) * std::log2(ev(i));
  return s;
}

/// Entropy (bits) of the reduced state on `cut`, which must be a proper,
/// nonempty subset of the subsystems.
inline double entanglement_entropy(const PureState& psi, std::span<const int> cut) {
  if (cut.empty() || static_cast<int>(cut.size()) >= psi.num_subsystems())
    throw std::invalid_argument("entropy cut must be a proper nonempty subset");
  return von_neumann_entropy(reduced_density(psi, cut));
}

inline double entanglement_entropy(const PureState& psi, std::initializer_list<int> cut) {
  return entanglement_entropy(psi, std::span<const int>(cut.begin(), cut.size()));
}

/// Entropy of every single subsystem, in subsystem order.
inline std::vector<double> single_site_entropies(const PureState& psi) {
  std::vector<double> out;
  for (int i = 0; i < psi.num_subsystems(); ++i) {
    const int cut[] = {i};
    out.push_back(psi.num_subsystems() > 1 ? entanglement_entropy(psi, cut) : 0.0);
  }
  return out;
}

namespace detail {

/// Dominant eigenvector when m is a pure state (purity 1 within 1e-12).
inline std::optional<Vector> pure_vector(const Matrix& m) {
  if (std::abs((m * m).trace().real() - 1.0) > 1e-12) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return Vector(es.eigenvectors().col(es.eigenvalues().size() - 1));
}

}  // namespace detail

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; reduces to
/// <psi|sigma|psi> when either side is pure.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("fidelity: dimension mismatch");
  if (auto v = detail::pure_vector(rho.mat())) return std::max(0.0, (v->adjoint() * sigma.mat() * *v)(0).real());
  if (auto v = detail::pure_vector(sigma.mat())) return std::max(0.0, (v->adjoint() * rho.mat() * *v)(0).real());
  const Matrix s = hermitian_sqrt(rho.mat());
  Matrix m = s * sigma.mat() * s;
  m = 0.5 * (m + m.adjoint()).eval();
  const double t = hermitian_eigenvalues(m).cwiseMax(0.0).cwiseSqrt().sum();
  return t * t;
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("trace distance: dimension mismatch");
  Matrix diff = rho.mat() - sigma.mat();
  diff = 0.5 * (diff + diff.adjoint()).eval();
  return 0.5 * hermitian_eigenvalues(diff).cwiseAbs().sum();
}

/// (1 - p) rho + p I / D
inline DensityMatrix depolarize(const DensityMatrix& rho, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
  const auto n = static_cast<Eigen::Index>(rho.size());
  Matrix m = (1.0 - p) * rho.mat() + (p / static_cast<double>(n)) * Matrix::Identity(n, n);
  return DensityMatrix(rho.dims(), std::move(m));
}

// ---------------------------------------------------------------------------
// Pauli-basis state tomography for 2 or 3 qubits.

enum class TomographyMethod { linear_inversion, psd_projected };

inline std::string_view to_string(TomographyMethod m) {
  return m == TomographyMethod::linear_inversion ? "linear_inversion" : "psd_projected";
}

inline TomographyMethod tomography_method_from_string(std::string_view s) {
  if (s == "linear_inversion" || s == "linear") return TomographyMethod::linear_inversion;
  if (s == "psd_projected" || s == "psd") return TomographyMethod::psd_projected;
  throw std::invalid_argument("unknown tomography method '" + std::string(s) + "'");
}

struct TomographyResult {
  DensityMatrix rho;
  int basis_settings = 0;
  std::optional<std::int64_t> shots_per_setting;  // nullopt: exact expectations
  TomographyMethod method = TomographyMethod::linear_inversion;
  bool psd = true;
  double min_eigenvalue = 0.0;
};

namespace detail {

// 0 = I, 1 = X, 2 = Y, 3 = Z
inline Matrix pauli(int which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Rotation taking the eigenbasis of X (1), Y (2) or Z (3) to the computational basis.
inline Matrix readout_rotation(int axis) {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  if (axis == 1) return h;
  if (axis == 2) {
    Matrix sdg = Matrix::Zero(2, 2);
    sdg(0, 0) = 1.0;
    sdg(1, 1) = cplx(0, -1);
    return h * sdg;
  }
  return Matrix::Identity(2, 2);
}

inline std::vector<int> base_digits(std::size_t idx, int base, int n) {
  std::vector<int> d(n);
  for (int i = n; i-- > 0;) {
    d[i] = static_cast<int>(idx % base);
    idx /= base;
  }
  return d;
}

inline Matrix pauli_string(std::span<const int> ops) {
  Matrix m = Matrix::Identity(1, 1);
  for (int o : ops) m = kron(m, pauli(o));
  return m;
}

inline int qubit_count(const std::vector<int>& dims) {
  for (int d : dims)
    if (d != 2) throw std::invalid_argument("tomography supports qubits only");
  const int n = static_cast<int>(dims.size());
  if (n < 2 || n > 3) throw std::invalid_argument("tomography supports 2 or 3 qubits");
  return n;
}

}  // namespace detail

/// Exact expectation values <P> for all 4^n Pauli strings, indexed with
/// qubit 0 as the most significant base-4 digit.
inline std::vector<double> pauli_expectations(const DensityMatrix& rho) {
  const int n = detail::qubit_count(rho.dims());
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<double> e(count);
  for (std::size_t p = 0; p < count; ++p) {
    const auto ops = detail::base_digits(p, 4, n);
    e[p] = (detail::pauli_string(ops) * rho.mat()).trace().real();
  }
  return e;
}

/// Linear inversion rho = 2^-n sum_P <P> P.
inline Matrix reconstruct_from_pauli(std::span<const double> expectations, int n) {
  const auto dim = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t p = 0; p < expectations.size(); ++p)
    m += expectations[p] * detail::pauli_string(detail::base_digits(p, 4, n));
  m /= static_cast<double>(dim);
  return 0.5 * (m + m.adjoint());
}

/// Closest density matrix in Frobenius norm: the eigenvalues are projected
/// onto the probability simplex, i.e. shifted by a common constant and
/// clipped at zero so the trace stays one.
inline Matrix project_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd ev = es.eigenvalues();
  std::vector<double> sorted(ev.data(), ev.data() + ev.size());
  std::sort(sorted.rbegin(), sorted.rend());
  double acc = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    acc += sorted[j];
    const double t = (acc - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  const Eigen::VectorXd clipped = (ev.array() - theta).cwiseMax(0.0);
  Matrix out = es.eigenvectors() * clipped.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

/// Simulated tomography: every one of the 3^n local Pauli settings is
/// measured with `shots_per_setting` samples (or exactly when nullopt), then
/// each Pauli expectation is averaged over all settings compatible with it.
inline TomographyResult tomography(const DensityMatrix& rho, std::optional<std::int64_t> shots_per_setting,
                                   std::uint64_t seed, TomographyMethod method) {
  const int n = detail::qubit_count(rho.dims());
  if (shots_per_setting && *shots_per_setting < 1) throw std::invalid_argument("shots must be >= 1");
  const int settings = n == 2 ? 9 : 27;
  const auto dim = std::size_t{1} << n;
  Rng rng = make_rng(seed);

  // frequencies[s][outcome]
  std::vector<std::vector<double>> freq(settings, std::vector<double>(dim, 0.0));
  for (int s = 0; s < settings; ++s) {
    const auto axes = detail::base_digits(static_cast<std::size_t>(s), 3, n);
    Matrix r = Matrix::Identity(1, 1);
    for (int a : axes) r = kron(r, detail::readout_rotation(a + 1));
    const Matrix rotated = r * rho.mat() * r.adjoint();
    std::vector<double> probs(dim);
    double total = 0.0;
    for (std::size_t o = 0; o < dim; ++o) {
      probs[o] = std::max(0.0, rotated(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(o)).real());
      total += probs[o];
    }
    if (!shots_per_setting) {
      for (std::size_t o = 0; o < dim; ++o) freq[s][o] = probs[o] / total;
      continue;
    }
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t o = 0; o < dim; ++o) cdf[o] = (acc += probs[o]);
    for (std::int64_t shot = 0; shot < *shots_per_setting; ++shot) {
      const double u = uniform01(rng) * acc;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const auto o = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), dim - 1);
      freq[s][o] += 1.0;
    }
    for (auto& f : freq[s]) f /= static_cast<double>(*shots_per_setting);
  }

  const std::size_t strings = std::size_t{1} << (2 * n);
  std::vector<double> expect(strings, 0.0);
  expect[0] = 1.0;
  for (std::size_t p = 1; p < strings; ++p) {
    const auto ops = detail::base_digits(p, 4, n);
    double sum = 0.0;
    int compatible = 0;
    for (int s = 0; s < settings; ++s) {
      const auto axes = detail::base_digits(static_cast<std::size_t>(s), 3, n);
      bool ok = true;
      for (int q = 0; q < n; ++q)
        if (ops[q] != 0 && ops[q] != axes[q] + 1) ok = false;
      if (!ok) continue;
      ++compatible;
      for (std::size_t o = 0; o < dim; ++o) {
        const auto bits = detail::base_digits(o, 2, n);
        double sign = 1.0;
        for (int q = 0; q < n; ++q)
          if (ops[q] != 0 && bits[q] == 1) sign = -sign;
        sum += sign * freq[s][o];
      }
    }
    expect[p] = sum / compatible;
  }

  Matrix m = reconstruct_from_pauli(expect, n);
  if (method == TomographyMethod::psd_projected) m = project_psd(m);
  DensityMatrix out(rho.dims(), std::move(m));
  const double min_ev = out.min_eigenvalue();
  return {std::move(out), settings, shots_per_setting, method, min_ev >= kPsdFloor, min_ev};
}

inline TomographyResult tomography(const PureState& psi, std::optional<std::int64_t> shots_per_setting,
                                   std::uint64_t seed, TomographyMethod method) {
  return tomography(DensityMatrix::from_pure(psi), shots_per_setting, seed, method);
}

// ---------------------------------------------------------------------------

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness-of-fit of `counts` against `expected` probabilities.
/// Observations in a bin of zero expected probability give p = 0.
inline ChiSquareResult chi_square_gof(const Histogram& counts, const std::map<std::string, double>& expected) {
  std::int64_t shots = 0;
  for (const auto& [k, c] : counts) shots += c;
  if (shots <= 0) throw std::invalid_argument("empty histogram");
  ChiSquareResult r;
  int bins = 0;
  for (const auto& [key, p] : expected) {
    if (p <= 0.0) continue;
    ++bins;
    const double e = p * static_cast<double>(shots);
    const auto it = counts.find(key);
    const double o = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    r.statistic += (o - e) * (o - e) / e;
  }
  for (const auto& [key, c] : counts) {
    const auto it = expected.find(key);
    if (c > 0 && (it == expected.end() || it->second <= 0.0)) {
      r.statistic = std::numeric_limits<double>::infinity();
      r.dof = std::max(1, bins - 1);
      r.p_value = 0.0;
      return r;
    }
  }
  r.dof = bins - 1;
  if (r.dof < 1) return r;
  boost::math::chi_squared_distribution<double> dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

/// Exact outcome distribution of a full computational-basis readout.
inline std::map<std::string, double> basis_probabilities(const PureState& psi) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi.amps()(static_cast<Eigen::Index>(i)));
    if (p > kDropProb) out[basis_string(psi.radix().decode(i), psi.dims())] = p;
  }
  return out;
}

}  // namespace qwalk
