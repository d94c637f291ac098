#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/random.hpp"
#include "qwalk/statevec.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Closed-form state a recipe is expected to leave on its target particles.
struct RecipeTarget {
  std::string form;
  PureState state;
  bool phase_exact = false;  // state carries the exact phase, not just the ray
};

struct RecipeOutcome {
  MeasurementRecord record;
  std::vector<int> target_particles;
  std::string target_form;
  PureState target;
  double fidelity_to_target = 0.0;
  std::vector<double> entropies;       // single-particle entropies of the residual, bits
  std::optional<double> concurrence;   // two-qubit residuals only
  std::optional<bool> phase_matches;   // amplitude-wise check, when the target fixes the phase

  const PureState& achieved() const { return record.residual; }
};

/// Everything needed to run one entanglement-generation pipeline.
struct RecipePlan {
  std::string name;
  PureState initial;
  WalkSchedule schedule;
  std::vector<int> measured;
  std::vector<int> targets;
  std::function<RecipeTarget(const std::vector<int>& outcome)> target_for;
};

struct RecipeResult {
  std::string name;
  WalkSchedule schedule;
  PureState final_state;
  std::vector<RecipeOutcome> outcomes;
};

inline RecipeResult run_plan(const RecipePlan& plan) {
  PureState final_state = run_schedule(plan.initial, plan.schedule);
  RecipeResult result{plan.name, plan.schedule, final_state, {}};
  for (auto& rec : measure_enumerate(final_state, plan.measured)) {
    RecipeTarget t = plan.target_for(rec.outcome);
    RecipeOutcome o{std::move(rec), plan.targets, t.form, t.state, 0.0, {}, std::nullopt, std::nullopt};
    o.fidelity_to_target = state_fidelity(o.target, o.achieved());
    o.entropies = single_site_entropies(o.achieved());
    if (o.achieved().dims() == std::vector<int>{2, 2}) o.concurrence = concurrence(o.achieved());
    if (t.phase_exact) o.phase_matches = equal_exact(o.achieved(), o.target);
    result.outcomes.push_back(std::move(o));
  }
  return result;
}

namespace detail {

inline void check_pair_amplitudes(cplx a, cplx b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kNormTol)
    throw std::invalid_argument("amplitudes must satisfy |a|^2 + |b|^2 = 1");
}

inline PureState qubits(std::initializer_list<std::pair<const char*, cplx>> terms) {
  const int n = static_cast<int>(std::string_view(terms.begin()->first).size());
  Radix r(std::vector<int>(n, 2));
  Vector v = Vector::Zero(static_cast<Eigen::Index>(r.size()));
  for (const auto& [ket, amp] : terms) {
    std::vector<int> digits;
    for (char c : std::string_view(ket)) digits.push_back(c - '0');
    v(static_cast<Eigen::Index>(r.encode(digits))) += amp;
  }
  return PureState::normalized(std::vector<int>(n, 2), std::move(v));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Two-qubit recipes. Particles 0..3; walker 0; coins 1, 2, 3; particles 1 and
// 2 are measured and the entangled pair lands on (0, 3).

inline RecipePlan bell_2line_plan(cplx a, cplx b) {
  detail::check_pair_amplitudes(a, b);
  const PureState pair = make_pair(a, b);
  return {"bell-2line",
          tensor({pair, pair}),
          make_schedule(GraphKind(Graph::line, 2), 0, {1, 2, 3}, {CoinName::hadamard, CoinName::identity}),
          {1, 2},
          {0, 3},
          [a, b](const std::vector<int>&) {
            return RecipeTarget{"a|11>+b|00>", detail::qubits({{"11", a}, {"00", b}})};
          }};
}

inline std::vector<RecipeOutcome> bell_2line(cplx a, cplx b) { return run_plan(bell_2line_plan(a, b)).outcomes; }

enum class Bell2CompleteVariant { IHX, IXH, XXH, XHX };

inline std::string_view to_string(Bell2CompleteVariant v) {
  switch (v) {
    case Bell2CompleteVariant::IHX: return "IHX";
    case Bell2CompleteVariant::IXH: return "IXH";
    case Bell2CompleteVariant::XXH: return "XXH";
    case Bell2CompleteVariant::XHX: return "XHX";
  }
  return "?";
}

inline Bell2CompleteVariant bell_variant_from_string(std::string_view s) {
  if (s == "IHX") return Bell2CompleteVariant::IHX;
  if (s == "IXH") return Bell2CompleteVariant::IXH;
  if (s == "XXH") return Bell2CompleteVariant::XXH;
  if (s == "XHX") return Bell2CompleteVariant::XHX;
  throw std::invalid_argument("unknown coin variant '" + std::string(s) + "' (expected IHX, IXH, XXH or XHX)");
}

inline RecipePlan bell_2complete_plan(cplx a, cplx b, Bell2CompleteVariant variant = Bell2CompleteVariant::IHX) {
  detail::check_pair_amplitudes(a, b);
  using enum CoinName;
  std::vector<CoinName> coins;
  switch (variant) {
    case Bell2CompleteVariant::IHX: coins = {identity, hadamard, weyl_x}; break;
    case Bell2CompleteVariant::IXH: coins = {identity, weyl_x, hadamard}; break;
    case Bell2CompleteVariant::XXH: coins = {weyl_x, weyl_x, hadamard}; break;
    case Bell2CompleteVariant::XHX: coins = {weyl_x, hadamard, weyl_x}; break;
  }
  const PureState pair = make_pair(a, b);
  const double s = 1.0 / std::sqrt(2.0);
  // The residual on (0, 3) depends only on the digit of particle 2.
  auto target = [a, b, s, variant](const std::vector<int>& outcome) -> RecipeTarget {
    const bool one = outcome[1] == 1;
    switch (variant) {
      case Bell2CompleteVariant::IHX:
        return one ? RecipeTarget{"a|00>-b|11>", detail::qubits({{"00", a}, {"11", -b}})}
                   : RecipeTarget{"a|10>+b|01>", detail::qubits({{"10", a}, {"01", b}})};
      case Bell2CompleteVariant::IXH:
        return one ? RecipeTarget{"(|00>-|11>)/sqrt2", detail::qubits({{"00", s}, {"11", -s}})}
                   : RecipeTarget{"(|01>+|10>)/sqrt2", detail::qubits({{"01", s}, {"10", s}})};
      case Bell2CompleteVariant::XXH:
        return one ? RecipeTarget{"(|10>-|01>)/sqrt2", detail::qubits({{"10", s}, {"01", -s}})}
                   : RecipeTarget{"(|00>+|11>)/sqrt2", detail::qubits({{"00", s}, {"11", s}})};
      case Bell2CompleteVariant::XHX:
        return one ? RecipeTarget{"a|10>-b|01>", detail::qubits({{"10", a}, {"01", -b}})}
                   : RecipeTarget{"a|00>+b|11>", detail::qubits({{"00", a}, {"11", b}})};
    }
    throw std::logic_error("unhandled variant");
  };
  return {"bell-2complete",
          tensor({pair, pair}),
          make_schedule(GraphKind(Graph::complete, 2), 0, {1, 2, 3}, coins),
          {1, 2},
          {0, 3},
          target};
}

inline std::vector<RecipeOutcome> bell_2complete(cplx a, cplx b,
                                                 Bell2CompleteVariant variant = Bell2CompleteVariant::IHX) {
  return run_plan(bell_2complete_plan(a, b, variant)).outcomes;
}

// ---------------------------------------------------------------------------
// Two-qudit recipe on the d-complete graph with coins (I, F, X_d).

inline WalkSchedule qudit_swap_schedule(int d) {
  return make_schedule(GraphKind(Graph::complete, d), 0, {1, 2, 3},
                       {CoinName::identity, CoinName::fourier, CoinName::weyl_x});
}

/// Reduced state on (0, 3) for maximal input |psi_{k,l}>|psi_{k,l}> and
/// measured digits (m0 - l, p0), including its phase. The exp(2 pi i m0 k / d)
/// factor belongs to the measured ket and is carried by the normalized residual.
inline PureState qudit_pair_expected(const GeneralizedBellLabel& label, int digit1, int digit2) {
  const int d = label.d;
  const long long m0 = digit1 + label.l;
  const long long p0 = digit2;
  const cplx phase = root_of_unity(m0 * label.k, d) *
                     root_of_unity(-(2 * m0 + p0 - 2LL * label.l + 1) * (label.k + p0), d);
  const PureState bell = make_generalized_bell(GeneralizedBellLabel::wrap(d, label.k + p0, 2 * m0 + p0 - label.l));
  return PureState(bell.dims(), phase * bell.amps());
}

inline RecipePlan qudit_pair_plan(const GeneralizedBellLabel& label) {
  const PureState bell = make_generalized_bell(label);
  return {"qudit-pair",
          tensor({bell, bell}),
          qudit_swap_schedule(label.d),
          {1, 2},
          {0, 3},
          [label](const std::vector<int>& outcome) {
            const long long m0 = outcome[0] + label.l;
            const auto next = GeneralizedBellLabel::wrap(label.d, label.k + outcome[1], 2 * m0 + outcome[1] - label.l);
            return RecipeTarget{"psi(" + std::to_string(next.k) + "," + std::to_string(next.l) + ")",
                                qudit_pair_expected(label, outcome[0], outcome[1]), true};
          }};
}

/// Non-maximal input (sum_i a_i |ii>) (x) (sum_j b_j |jj>).
inline RecipePlan qudit_pair_plan(std::span<const cplx> a, std::span<const cplx> b) {
  const int d = static_cast<int>(a.size());
  if (d < 2) throw std::invalid_argument("qudit dimension must be >= 2");
  if (static_cast<int>(b.size()) != d) throw std::invalid_argument("amplitude lists must have equal length");
  auto diag_pair = [d](std::span<const cplx> c) {
    double n = 0.0;
    for (cplx x : c) n += std::norm(x);
    if (std::abs(n - 1.0) > kNormTol) throw std::invalid_argument("amplitude list is not normalized");
    Vector v = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = c[i];
    return PureState({d, d}, std::move(v));
  };
  std::vector<cplx> bs(b.begin(), b.end());
  return {"qudit-pair",
          tensor({diag_pair(a), diag_pair(b)}),
          qudit_swap_schedule(d),
          {1, 2},
          {0, 3},
          [d, bs](const std::vector<int>& outcome) {
            // sum_j b_j w^{j k0} |2 i0 + j + k0 + 1>|j + 1>
            const int i0 = outcome[0];
            const int k0 = outcome[1];
            Vector v = Vector::Zero(d * d);
            for (int j = 0; j < d; ++j)
              v(mod(2LL * i0 + j + k0 + 1, d) * d + mod(j + 1, d)) += bs[j] * root_of_unity(1LL * j * k0, d);
            return RecipeTarget{"sum_j b_j w^(j*k0)|2i0+j+k0+1,j+1>", PureState::normalized({d, d}, std::move(v))};
          }};
}

inline std::vector<RecipeOutcome> qudit_pair_dcomplete(const GeneralizedBellLabel& label) {
  return run_plan(qudit_pair_plan(label)).outcomes;
}

inline std::vector<RecipeOutcome> qudit_pair_dcomplete(std::span<const cplx> a, std::span<const cplx> b) {
  return run_plan(qudit_pair_plan(a, b)).outcomes;
}

// ---------------------------------------------------------------------------
// Three-party recipes. Particles 0..4; walker 0; coins 1..4; particles 1 and 2
// are measured and the GHZ-class state lands on (0, 3, 4).

inline RecipePlan ghz_2line_plan(cplx a, cplx b) {
  detail::check_pair_amplitudes(a, b);
  return {"ghz-2line",
          tensor({make_pair(a, b), make_ghz(2, 3)}),
          make_schedule(GraphKind(Graph::line, 2), 0, {1, 2, 3, 4}, {CoinName::hadamard, CoinName::weyl_x}),
          {1, 2},
          {0, 3, 4},
          [](const std::vector<int>&) { return RecipeTarget{"ghz", make_ghz(2, 3)}; }};
}

inline std::vector<RecipeOutcome> ghz_2line(cplx a, cplx b) { return run_plan(ghz_2line_plan(a, b)).outcomes; }

inline RecipePlan ghz_2complete_plan(cplx a, cplx b) {
  detail::check_pair_amplitudes(a, b);
  using enum CoinName;
  return {"ghz-2complete",
          tensor({make_pair(a, b), make_ghz(2, 3)}),
          make_schedule(GraphKind(Graph::complete, 2), 0, {1, 2, 3, 4}, {identity, identity, hadamard, hadamard}),
          {1, 2},
          {0, 3, 4},
          [](const std::vector<int>& outcome) {
            if (outcome[1] == 0)
              return RecipeTarget{"ghz-like(|100>+|001>+|010>+|111>)",
                                  detail::qubits({{"100", 0.5}, {"001", 0.5}, {"010", 0.5}, {"111", 0.5}})};
            return RecipeTarget{"ghz-like(|000>-|101>-|110>+|011>)",
                                detail::qubits({{"000", 0.5}, {"101", -0.5}, {"110", -0.5}, {"011", 0.5}})};
          }};
}

inline std::vector<RecipeOutcome> ghz_2complete(cplx a, cplx b) { return run_plan(ghz_2complete_plan(a, b)).outcomes; }

/// (1/d) sum_{p,q} w^{n(p+q)} |x0 + p + q, p, q>
inline PureState ghz_like_qudit(int d, int x0, int n) {
  Vector v = Vector::Zero(d * d * d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) v(mod(x0 + p + q, d) * d * d + p * d + q) += root_of_unity(1LL * n * (p + q), d) / static_cast<double>(d);
  return PureState({d, d, d}, std::move(v));
}

inline RecipePlan ghz_qudit_plan(const GeneralizedBellLabel& label) {
  const int d = label.d;
  using enum CoinName;
  return {"ghz-qudit",
          tensor({make_generalized_bell(label), make_ghz(d, 3)}),
          make_schedule(GraphKind(Graph::complete, d), 0, {1, 2, 3, 4}, {identity, identity, fourier, fourier}),
          {1, 2},
          {0, 3, 4},
          [label](const std::vector<int>& outcome) {
            const int d = label.d;
            const long long m = outcome[0] + label.l;
            const int n = outcome[1];
            const int x0 = mod(2 * m - label.l + n, d);
            return RecipeTarget{"ghz-like(x0=" + std::to_string(x0) + ",n=" + std::to_string(n) + ")",
                                ghz_like_qudit(d, x0, n)};
          }};
}

inline std::vector<RecipeOutcome> ghz_qudit_dcomplete(const GeneralizedBellLabel& label) {
  return run_plan(ghz_qudit_plan(label)).outcomes;
}

// ---------------------------------------------------------------------------
// Randomized search for entangling coins on the 2-circle. The 2-circle shift
// is X on the walker regardless of the coin, so no coin choice should help;
// this samples Haar coins and reports the best entanglement found.

enum class CircleCase { two_qubit_3coins, ghz_4coins };

inline std::string_view to_string(CircleCase c) {
  return c == CircleCase::two_qubit_3coins ? "two_qubit_3coins" : "ghz_4coins";
}

inline CircleCase circle_case_from_string(std::string_view s) {
  if (s == "two_qubit_3coins" || s == "two-qubit") return CircleCase::two_qubit_3coins;
  if (s == "ghz_4coins" || s == "ghz") return CircleCase::ghz_4coins;
  throw std::invalid_argument("unknown circle case '" + std::string(s) + "'");
}

inline int circle_coin_count(CircleCase c) { return c == CircleCase::two_qubit_3coins ? 3 : 4; }

struct CircleMetrics {
  double min_entanglement = 0.0;  // concurrence, or min single-particle entropy (bits)
  double min_entropy = 0.0;       // min over outcomes of the smallest single-particle entropy
};

/// Minimum over measurement outcomes of the target-particle entanglement for
/// one coin tuple (one coin per step, t = number of coins).
inline CircleMetrics circle_min_entanglement(CircleCase which, std::span<const Matrix> coins, cplx a, cplx b) {
  const int k = circle_coin_count(which);
  if (static_cast<int>(coins.size()) != k)
    throw std::invalid_argument("expected " + std::to_string(k) + " coins");
  detail::check_pair_amplitudes(a, b);
  WalkSchedule s;
  s.graph = GraphKind(Graph::circle, 2);
  s.walker = 0;
  for (int i = 1; i <= k; ++i) s.coins.push_back(i);
  for (const auto& c : coins) s.coin_ops.push_back(CoinOp::custom(c));
  s.steps = k;
  const PureState initial = which == CircleCase::two_qubit_3coins ? tensor({make_pair(a, b), make_pair(a, b)})
                                                                  : tensor({make_pair(a, b), make_ghz(2, 3)});
  const PureState final_state = run_schedule(initial, s);
  const int measured[] = {1, 2};
  CircleMetrics m{1e300, 1e300};
  for (const auto& rec : measure_enumerate(final_state, measured)) {
    const auto ent = single_site_entropies(rec.residual);
    const double min_s = *std::min_element(ent.begin(), ent.end());
    const double primary = which == CircleCase::two_qubit_3coins ? concurrence(rec.residual) : min_s;
    m.min_entanglement = std::min(m.min_entanglement, primary);
    m.min_entropy = std::min(m.min_entropy, min_s);
  }
  return m;
}

struct CircleSearchReport {
  CircleCase which = CircleCase::two_qubit_3coins;
  int samples = 0;
  std::uint64_t seed = 0;
  double threshold = 0.99;
  double max_min_entanglement = 0.0;
  double max_min_entropy = 0.0;
  bool witness_found = false;
};

/// Sample i draws its coins from make_rng(seed, i), so results do not depend
/// on evaluation order.
inline CircleSearchReport circle_search(CircleCase which, int samples, std::uint64_t seed, double threshold = 0.99,
                                        cplx a = std::sqrt(0.5), cplx b = std::sqrt(0.5)) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must lie in (0, 1]");
  CircleSearchReport rep{which, samples, seed, threshold, 0.0, 0.0, false};
  const int k = circle_coin_count(which);
  for (int i = 0; i < samples; ++i) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(i));
    std::vector<Matrix> coins;
    for (int c = 0; c < k; ++c) coins.push_back(haar_unitary(2, rng));
    const CircleMetrics m = circle_min_entanglement(which, coins, a, b);
    rep.max_min_entanglement = std::max(rep.max_min_entanglement, m.min_entanglement);
    rep.max_min_entropy = std::max(rep.max_min_entropy, m.min_entropy);
  }
  rep.witness_found = rep.max_min_entanglement >= threshold;
  return rep;
}

}  // namespace qwalk
