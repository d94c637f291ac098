// Walks through the main entry points: a four-qubit Bell recipe, a qutrit
// entanglement swap, and a few rounds of three-party secret sharing.
#include <cstdio>

#include "qwalk/qwalk.hpp"

using namespace qwalk;

int main() {
  const cplx a = 0.6, b = 0.8;
  std::printf("bell-2complete with a=0.6, b=0.8\n");
  for (const auto& o : bell_2complete(a, b)) {
    std::printf("  measured (%d,%d) with p=%.3f -> %-12s fidelity %.12f concurrence %.4f\n", o.record.outcome[0],
                o.record.outcome[1], o.record.prob, o.target_form.c_str(), o.fidelity_to_target, o.concurrence.value_or(0));
  }

  std::printf("\nqudit swap for |psi_{1,2}> at d=3\n");
  for (const auto& o : qudit_pair_dcomplete(GeneralizedBellLabel(3, 1, 2))) {
    std::printf("  outcome (%d,%d) -> %s, phase %s\n", o.record.outcome[0], o.record.outcome[1], o.target_form.c_str(),
                o.phase_matches.value_or(false) ? "matches" : "differs");
  }

  std::printf("\nsecret sharing, d=5, three parties\n");
  QssConfig cfg;
  cfg.d = 5;
  cfg.q = 0.0;
  for (int secret = 0; secret < 5; ++secret) {
    cfg.seed = static_cast<std::uint64_t>(secret);
    const QssTranscript t = run_protocol(cfg, secret);
    std::printf("  secret %d -> final label (%d,%d), decoded %d\n", secret, t.final_label->k, t.final_label->l,
                t.decoded_secret.value_or(-1));
  }

  cfg.q = 0.5;
  cfg.seed = 1;
  const auto s = run_batch(cfg, 2000, std::nullopt, {AdversaryStrategy::intercept_resend_computational, 0}).summary;
  std::printf("\nwith an intercept-resend eavesdropper on link 0: abort rate %.4f (predicted %.4f)\n", s.abort_rate,
              s.predicted_abort_rate);
  return 0;
}
