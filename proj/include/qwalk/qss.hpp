#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/random.hpp"
#include "qwalk/recipes.hpp"
#include "qwalk/statevec.hpp"
#include "qwalk/walk.hpp"

// Multiparty secret sharing over a ring of generalized Bell pairs.
//
// Parties are 0 (the sender) and agents 1..N-1. Link j joins party j and
// party j+1 mod N, with qudit order (party j, party j+1); link N-1 therefore
// joins the last agent and the sender. For N = 3 the links are the pairs
// (1,2), (3,4), (5,6) of the usual labelling: sender-Bob, Bob-Charlie and
// Charlie-sender.
//
// Message phase: the sender encodes X_d^secret on her qudit of link N-1, then
// swaps link N-1 with link 0 (walker = last agent's qudit) and announces the
// digits (a, b). Agent r = 1..N-2 swaps the running pair with link r and
// records its digits. The last agent ends up holding both qudits of the final
// pair and identifies it in the generalized Bell basis.

namespace qwalk {

struct QssConfig {
  int d = 3;
  int k = 0;
  int l = 0;
  double q = 0.0;
  int parties = 3;
  std::uint64_t seed = 0;

  void validate() const {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("d must be odd and >= 3");
    if (k < 0 || k >= d || l < 0 || l >= d) throw std::invalid_argument("k and l must lie in [0, d)");
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("check probability q must lie in [0, 1)");
    if (parties < 3) throw std::invalid_argument("need at least 3 parties");
  }
};

enum class CheckBasis { computational, fourier_tilde };

inline std::string_view to_string(CheckBasis b) {
  return b == CheckBasis::computational ? "computational" : "fourier_tilde";
}

struct CheckRecord {
  int link = 0;
  CheckBasis basis = CheckBasis::computational;
  int alice_outcome = 0;  // first qudit of the link (the sender's, on links touching her)
  int agent_outcome = 0;  // second qudit
  bool pass = false;
};

enum class AdversaryStrategy { none, intercept_resend_computational };

inline std::string_view to_string(AdversaryStrategy s) {
  return s == AdversaryStrategy::none ? "none" : "intercept_resend_computational";
}

inline AdversaryStrategy adversary_from_string(std::string_view s) {
  if (s == "none") return AdversaryStrategy::none;
  if (s == "intercept_resend_computational" || s == "intercept-resend") return AdversaryStrategy::intercept_resend_computational;
  throw std::invalid_argument("unknown adversary '" + std::string(s) + "'");
}

struct Adversary {
  AdversaryStrategy strategy = AdversaryStrategy::none;
  int target_link = 0;
};

enum class QssPhase { check, message };

inline std::string_view to_string(QssPhase p) { return p == QssPhase::check ? "check" : "message"; }

using Digits2 = std::array<int, 2>;

struct QssTranscript {
  QssPhase phase = QssPhase::message;
  int d = 3;
  int parties = 3;
  std::vector<CheckRecord> check_results;
  std::optional<Digits2> alice_announcement;
  std::vector<Digits2> agent_outcomes;  // agents 1..N-2 in swap order
  std::optional<GeneralizedBellLabel> final_label;
  std::optional<int> decoded_secret;
  int true_secret = 0;
  bool aborted = false;
  bool consistent = true;  // final k agrees with the last recorded digits
  int pairs_consumed = 0;

  std::optional<Digits2> bob_outcomes() const {
    if (agent_outcomes.empty()) return std::nullopt;
    return agent_outcomes.front();
  }
};

/// (I (x) X_d^i) on a two-qudit state: |psi_{k,l}> -> |psi_{k,l-i}>.
inline PureState encode_secret(const PureState& pair, int i, int d) {
  if (i < 0 || i >= d) throw std::invalid_argument("secret index must lie in [0, d)");
  if (pair.dims() != std::vector<int>{d, d}) throw std::invalid_argument("encode_secret expects a two-qudit pair");
  Matrix x = build_coin(CoinName::weyl_x, d).mat;
  Matrix u = Matrix::Identity(d, d);
  for (int s = 0; s < i; ++s) u = x * u;
  return apply_unitary(pair, u, {1});
}

/// Computational-basis measurement of one qudit, resending the collapsed state.
inline PureState intercept_resend(const PureState& pair, int qudit, Rng& rng) {
  const int targets[] = {qudit};
  const MeasurementRecord rec = sample_outcome(pair, targets, rng);
  return collapse(pair, targets, rec.outcome);
}

/// Which qudit of `link` travels to an agent and is exposed to the adversary.
inline int exposed_qudit(int link, int parties) { return link == parties - 1 ? 0 : 1; }

/// The first holder measures in {|i~>}, the second in the conjugate basis
/// {|i~>*}; for |psi_{k,l}> the outcomes satisfy first - second = l
/// (computational) or second = first - k (Fourier).
inline bool check_passes(const GeneralizedBellLabel& expected, CheckBasis basis, int first, int second) {
  const int d = expected.d;
  if (basis == CheckBasis::computational) return mod(first - second, d) == expected.l;
  return mod(second - first + expected.k, d) == 0;
}

inline PureState rotate_for_check(const PureState& pair, CheckBasis basis) {
  if (basis == CheckBasis::computational) return pair;
  const int d = pair.dims()[0];
  const Matrix f = build_coin(CoinName::fourier, d).mat;
  const Matrix both = kron(f.adjoint(), f.transpose());
  return apply_unitary(pair, both, {0, 1});
}

inline CheckRecord channel_check(const PureState& pair, const GeneralizedBellLabel& expected, CheckBasis basis,
                                 Rng& rng, int link = 0) {
  const PureState rotated = rotate_for_check(pair, basis);
  const int both[] = {0, 1};
  const MeasurementRecord rec = sample_outcome(rotated, both, rng);
  return {link, basis, rec.outcome[0], rec.outcome[1], check_passes(expected, basis, rec.outcome[0], rec.outcome[1])};
}

/// Exact pass probability of a check on `pair`.
inline double check_pass_probability(const PureState& pair, const GeneralizedBellLabel& expected, CheckBasis basis) {
  double p = 0.0;
  for (const auto& rec : measure_enumerate(rotate_for_check(pair, basis), {0, 1}))
    if (check_passes(expected, basis, rec.outcome[0], rec.outcome[1])) p += rec.prob;
  return p;
}

struct SwapOutcome {
  Digits2 digits{};
  double prob = 0.0;
  PureState pair;  // outer qudits (walker side, far side)
};

inline WalkSchedule swap_schedule(int d) { return qudit_swap_schedule(d); }

/// All outcomes of the three-step (I, F, X_d) walk on first (x) second, with the
/// walker on the first qudit of `first` and the two middle qudits measured.
inline std::vector<SwapOutcome> swap_step_enumerate(const PureState& first, const PureState& second) {
  const int d = first.dims().at(0);
  if (first.dims() != std::vector<int>{d, d} || second.dims() != std::vector<int>{d, d})
    throw std::invalid_argument("swap_step expects two d x d pairs");
  const PureState walked = run_schedule(tensor({first, second}), swap_schedule(d));
  std::vector<SwapOutcome> out;
  for (auto& rec : measure_enumerate(walked, {1, 2}))
    out.push_back({{rec.outcome[0], rec.outcome[1]}, rec.prob, std::move(rec.residual)});
  return out;
}

inline SwapOutcome swap_step(const PureState& first, const PureState& second, Rng& rng) {
  const int d = first.dims().at(0);
  if (first.dims() != std::vector<int>{d, d} || second.dims() != std::vector<int>{d, d})
    throw std::invalid_argument("swap_step expects two d x d pairs");
  const PureState walked = run_schedule(tensor({first, second}), swap_schedule(d));
  const int middle[] = {1, 2};
  MeasurementRecord rec = sample_outcome(walked, middle, rng);
  return {{rec.outcome[0], rec.outcome[1]}, rec.prob, std::move(rec.residual)};
}

/// |psi_{x,y}> (x) |psi_{k,l}> with digits (m - y, p) leaves |psi_{k+p, 2m+p-y}>.
inline GeneralizedBellLabel predict_swap_label(const GeneralizedBellLabel& first, const GeneralizedBellLabel& second,
                                               Digits2 digits) {
  const int d = first.d;
  const long long m = digits[0] + first.l;
  return GeneralizedBellLabel::wrap(d, second.k + digits[1], 2 * m + digits[1] - first.l);
}

/// Sampled generalized-Bell identification of a pair.
inline GeneralizedBellLabel measure_bell_basis(const PureState& pair, Rng& rng) {
  const int d = pair.dims().at(0);
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(d) * d);
  double total = 0.0;
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      probs.push_back(std::norm(inner(make_generalized_bell({d, k, l}), pair)));
      total += probs.back();
    }
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return {d, static_cast<int>(i) / d, static_cast<int>(i) % d};
  }
  return {d, d - 1, d - 1};
}

/// Backtracks l through the swap chain: each round maps y to 2*o1 + o2 + y.
inline int decode_secret(const QssConfig& cfg, Digits2 announcement, const std::vector<Digits2>& agent_outcomes,
                         const GeneralizedBellLabel& final_label) {
  long long y = final_label.l;
  for (auto it = agent_outcomes.rbegin(); it != agent_outcomes.rend(); ++it) y -= 2LL * (*it)[0] + (*it)[1];
  y -= 2LL * announcement[0] + announcement[1];
  return mod(cfg.l - y, cfg.d);
}

/// Probability that one tampered link fails its check, averaged over the
/// uniformly chosen basis.
inline double detection_probability(int d, AdversaryStrategy s) {
  if (s == AdversaryStrategy::none) return 0.0;
  return 0.5 * (1.0 - 1.0 / d);
}

inline double predicted_abort_rate(const QssConfig& cfg, const Adversary& adv) {
  return cfg.q * detection_probability(cfg.d, adv.strategy);
}

namespace detail {

inline QssTranscript run_with_rng(const QssConfig& cfg, int secret, const Adversary& adv, Rng& rng) {
  cfg.validate();
  if (secret < 0 || secret >= cfg.d) throw std::invalid_argument("secret must lie in [0, d)");
  if (adv.strategy != AdversaryStrategy::none && (adv.target_link < 0 || adv.target_link >= cfg.parties))
    throw std::invalid_argument("adversary target link must lie in [0, parties)");
  const int n = cfg.parties;
  const GeneralizedBellLabel label(cfg.d, cfg.k, cfg.l);

  QssTranscript t;
  t.d = cfg.d;
  t.parties = n;
  t.true_secret = secret;
  t.pairs_consumed = n;

  std::vector<PureState> links(static_cast<std::size_t>(n), make_generalized_bell(label));
  if (adv.strategy == AdversaryStrategy::intercept_resend_computational)
    links[adv.target_link] = intercept_resend(links[adv.target_link], exposed_qudit(adv.target_link, n), rng);

  if (bernoulli(rng, cfg.q)) {
    t.phase = QssPhase::check;
    for (int j = 0; j < n; ++j) {
      const CheckBasis basis = bernoulli(rng, 0.5) ? CheckBasis::fourier_tilde : CheckBasis::computational;
      t.check_results.push_back(channel_check(links[j], label, basis, rng, j));
      if (!t.check_results.back().pass) t.aborted = true;
    }
    return t;
  }

  t.phase = QssPhase::message;
  PureState cur = encode_secret(links[n - 1], secret, cfg.d);
  SwapOutcome first = swap_step(cur, links[0], rng);
  t.alice_announcement = first.digits;
  // the running pair's k is always the last absorbed link's k plus its p digit
  int last_p = first.digits[1];
  cur = std::move(first.pair);
  for (int r = 1; r <= n - 2; ++r) {
    SwapOutcome s = swap_step(cur, links[r], rng);
    t.agent_outcomes.push_back(s.digits);
    last_p = s.digits[1];
    cur = std::move(s.pair);
  }
  const GeneralizedBellLabel fin = measure_bell_basis(cur, rng);
  t.final_label = fin;
  t.consistent = mod(cfg.k + last_p, cfg.d) == fin.k;
  t.decoded_secret = decode_secret(cfg, *t.alice_announcement, t.agent_outcomes, fin);
  return t;
}

}  // namespace detail

inline QssTranscript run_protocol_n(const QssConfig& cfg, int secret, const Adversary& adv = {}) {
  Rng rng = make_rng(cfg.seed);
  return detail::run_with_rng(cfg, secret, adv, rng);
}

inline QssTranscript run_protocol(const QssConfig& cfg, int secret, const Adversary& adv = {}) {
  if (cfg.parties != 3) throw std::invalid_argument("run_protocol is the three-party protocol; use run_protocol_n");
  return run_protocol_n(cfg, secret, adv);
}

struct QssBatchSummary {
  int runs = 0;
  int check_runs = 0;
  int message_runs = 0;
  int aborted = 0;
  int decode_failures = 0;
  int inconsistent = 0;
  double abort_rate = 0.0;
  double predicted_abort_rate = 0.0;
  double abort_sigma = 0.0;  // binomial standard deviation of abort_rate under the prediction
  long long pairs_consumed = 0;
};

struct QssBatch {
  QssBatchSummary summary;
  std::vector<QssTranscript> transcripts;
};

/// Run i draws from make_rng(seed, i + 1); a fixed secret is used when given,
/// otherwise each run draws one uniformly from its own stream.
inline QssBatch run_batch(const QssConfig& cfg, int runs, std::optional<int> secret, const Adversary& adv = {},
                          bool keep_transcripts = false) {
  cfg.validate();
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  QssBatch b;
  auto& s = b.summary;
  s.runs = runs;
  for (int i = 0; i < runs; ++i) {
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(i) + 1);
    const int sec = secret ? *secret : uniform_int(rng, cfg.d);
    QssTranscript t = detail::run_with_rng(cfg, sec, adv, rng);
    (t.phase == QssPhase::check ? s.check_runs : s.message_runs) += 1;
    if (t.aborted) ++s.aborted;
    if (t.phase == QssPhase::message && t.decoded_secret != t.true_secret) ++s.decode_failures;
    if (!t.consistent) ++s.inconsistent;
    s.pairs_consumed += t.pairs_consumed;
    if (keep_transcripts) b.transcripts.push_back(std::move(t));
  }
  s.abort_rate = static_cast<double>(s.aborted) / runs;
  s.predicted_abort_rate = predicted_abort_rate(cfg, adv);
  s.abort_sigma = std::sqrt(s.predicted_abort_rate * (1.0 - s.predicted_abort_rate) / runs);
  return b;
}

/// Bits carried by one message run: ceil(log2 d) as labelled symbols, log2 d of information.
inline int bits_per_run(int d) { return static_cast<int>(std::ceil(std::log2(static_cast<double>(d)) - 1e-12)); }
inline double information_per_run(int d) { return std::log2(static_cast<double>(d)); }

}  // namespace qwalk
