#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/emit.hpp"
#include "qwalk/qss.hpp"
#include "qwalk/recipes.hpp"
#include "qwalk/serialize.hpp"

namespace qwalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification or I/O failure
inline constexpr int kExitUsage = 2;    // bad arguments, bad input values

inline constexpr std::uint64_t kDefaultSeed = 0;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double parse_real(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError("cannot parse number '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

/// "re", "re+imj", "imj", or "prob@phase" (amplitude sqrt(prob) e^{i phase}).
inline cplx parse_complex(std::string_view s) {
  if (s.empty()) throw UsageError("empty complex value");
  if (const auto at = s.find('@'); at != std::string_view::npos) {
    const double p = detail::parse_real(s.substr(0, at));
    const double phase = detail::parse_real(s.substr(at + 1));
    if (p < 0.0) throw UsageError("probability must be non-negative");
    return std::polar(std::sqrt(p), phase);
  }
  if (s.back() != 'j' && s.back() != 'i') return {detail::parse_real(s), 0.0};
  s.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  auto imag = [](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return detail::parse_real(t);
  };
  if (split == std::string_view::npos) return {0.0, imag(s)};
  return {detail::parse_real(s.substr(0, split)), imag(s.substr(split))};
}

inline std::vector<cplx> parse_complex_list(std::string_view s) {
  std::vector<cplx> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    out.push_back(parse_complex(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"bell-2line", "bell-2complete", "qudit-pair",
                                              "ghz-2line",  "ghz-2complete",  "ghz-qudit"};
  return names;
}

struct RecipeArgs {
  std::string a = "0.7071067811865476";
  std::string b = "0.7071067811865476";
  std::string variant = "IHX";
  int d = 3;
  int k = 0;
  int l = 0;
  std::string a_amps;
  std::string b_amps;
};

inline RecipePlan build_plan(const std::string& name, const RecipeArgs& r) {
  const cplx a = parse_complex(r.a), b = parse_complex(r.b);
  if (name == "bell-2line") return bell_2line_plan(a, b);
  if (name == "bell-2complete") return bell_2complete_plan(a, b, bell_variant_from_string(r.variant));
  if (name == "ghz-2line") return ghz_2line_plan(a, b);
  if (name == "ghz-2complete") return ghz_2complete_plan(a, b);
  if (name == "qudit-pair") {
    if (r.a_amps.empty() != r.b_amps.empty()) throw UsageError("--a-amps and --b-amps go together");
    if (!r.a_amps.empty()) return qudit_pair_plan(parse_complex_list(r.a_amps), parse_complex_list(r.b_amps));
    return qudit_pair_plan(GeneralizedBellLabel(r.d, r.k, r.l));
  }
  if (name == "ghz-qudit") return ghz_qudit_plan(GeneralizedBellLabel(r.d, r.k, r.l));
  throw UsageError("unknown recipe '" + name + "'");
}

/// Invariant gates for --verify; returns one message per violation.
inline std::vector<std::string> verify_recipe(const RecipeResult& res) {
  std::vector<std::string> bad;
  double total = 0.0;
  for (const auto& o : res.outcomes) {
    total += o.record.prob;
    const std::string tag = "outcome " + basis_string(o.record.outcome, std::vector<int>(o.record.outcome.size(), 2));
    if (std::abs(o.achieved().amps().norm() - 1.0) > 1e-9) bad.push_back(tag + ": residual not normalized");
    if (o.fidelity_to_target < 1.0 - 1e-9) bad.push_back(tag + ": fidelity " + std::to_string(o.fidelity_to_target));
    if (o.phase_matches && !*o.phase_matches) bad.push_back(tag + ": phase mismatch");
    if (res.name == "ghz-qudit")
      for (double e : o.entropies)
        if (std::abs(e - std::log2(static_cast<double>(o.achieved().dims()[0]))) > 1e-9)
          bad.push_back(tag + ": single-particle entropy " + std::to_string(e));
  }
  if (std::abs(total - 1.0) > 1e-9) bad.push_back("probabilities sum to " + std::to_string(total));
  return bad;
}

struct Common {
  std::string format = "json";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  bool verify = false;
};

inline void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
  cmd->add_option("--seed", c.seed, "random seed (default 0)");
  cmd->add_option("--out", c.out, "write output to this file instead of stdout");
  cmd->add_flag("--verify", c.verify, "exit 1 if any invariant of the command fails");
}

inline void add_recipe_args(CLI::App* cmd, RecipeArgs& r) {
  cmd->add_option("--a", r.a, "amplitude a: re, re+imj or prob@phase");
  cmd->add_option("--b", r.b, "amplitude b");
  cmd->add_option("--variant", r.variant, "coin order for bell-2complete")->check(CLI::IsMember({"IHX", "IXH", "XXH", "XHX"}));
  cmd->add_option("--d", r.d, "qudit dimension");
  cmd->add_option("--k", r.k, "generalized Bell k");
  cmd->add_option("--l", r.l, "generalized Bell l");
  cmd->add_option("--a-amps", r.a_amps, "comma-separated a_i for a non-maximal qudit pair");
  cmd->add_option("--b-amps", r.b_amps, "comma-separated b_j for a non-maximal qudit pair");
}

inline void write_output(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw IoError("cannot open '" + c.out + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + c.out + "' failed");
}

inline int report(const std::vector<std::string>& failures, bool verify, std::ostream& err) {
  if (!verify) return kExitOk;
  for (const auto& f : failures) err << "verify: " << f << "\n";
  return failures.empty() ? kExitOk : kExitFailure;
}

struct QssArgs {
  QssConfig cfg;
  int secret = 0;
  bool secret_given = false;
  int runs = 100;
  std::string adversary = "none";
  int target = 0;
  std::string config;
  std::string transcripts;
};

/// Reads a JSON config; explicit flags win. Unknown keys are usage errors.
inline void apply_qss_config(QssArgs& q, const CLI::App& cmd) {
  if (q.config.empty()) return;
  std::ifstream f(q.config);
  if (!f) throw IoError("cannot read config '" + q.config + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "d") { if (!given("--d")) q.cfg.d = v.get<int>(); }
    else if (key == "k") { if (!given("--k")) q.cfg.k = v.get<int>(); }
    else if (key == "l") { if (!given("--l")) q.cfg.l = v.get<int>(); }
    else if (key == "q") { if (!given("--q")) q.cfg.q = v.get<double>(); }
    else if (key == "parties") { if (!given("--parties")) q.cfg.parties = v.get<int>(); }
    else if (key == "seed") { if (!given("--seed")) q.cfg.seed = v.get<std::uint64_t>(); }
    else if (key == "secret") {
      if (!given("--secret")) {
        q.secret = v.get<int>();
        q.secret_given = true;
      }
    }
    else if (key == "runs") { if (!given("--runs")) q.runs = v.get<int>(); }
    else if (key == "adversary") { if (!given("--adversary")) q.adversary = v.get<std::string>(); }
    else if (key == "target") { if (!given("--target")) q.target = v.get<int>(); }
    else throw UsageError("unknown config key '" + key + "'");
  }
}

inline void add_qss_args(CLI::App* cmd, QssArgs& q, Common& c, bool batch) {
  add_common(cmd, c);
  cmd->add_option("--d", q.cfg.d, "odd qudit dimension >= 3");
  cmd->add_option("--k", q.cfg.k, "generalized Bell k of every pair");
  cmd->add_option("--l", q.cfg.l, "generalized Bell l of every pair");
  cmd->add_option("--q", q.cfg.q, "probability of a channel-check run");
  cmd->add_option("--parties", q.cfg.parties, "sender plus agents, >= 3");
  cmd->add_option("--secret", q.secret, batch ? "fixed secret (default: drawn per run)" : "secret in [0, d)");
  cmd->add_option("--adversary", q.adversary, "none or intercept-resend")
      ->check(CLI::IsMember({"none", "intercept-resend", "intercept_resend_computational"}));
  cmd->add_option("--target", q.target, "attacked link index");
  cmd->add_option("--config", q.config, "JSON file with any of d,k,l,q,parties,seed,secret,runs,adversary,target");
  if (batch) {
    cmd->add_option("--runs", q.runs, "number of runs");
    cmd->add_option("--transcripts", q.transcripts, "write every transcript as JSON Lines to this file");
  }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-coin quantum walk entanglement toolkit", "qwalk"};
  app.require_subcommand(1);

  Common common;
  RecipeArgs rargs;

  std::string recipe_name;
  auto* recipe = app.add_subcommand("recipe", "run an entanglement recipe and list every measurement outcome");
  recipe->add_option("name", recipe_name, "recipe name")->required()->check(CLI::IsMember(recipe_names()));
  add_common(recipe, common);
  add_recipe_args(recipe, rargs);

  std::int64_t shots = 8192;
  auto* sample = app.add_subcommand("sample", "sample full computational-basis readouts of a recipe's final state");
  sample->add_option("--recipe", recipe_name, "recipe name")->required()->check(CLI::IsMember(recipe_names()));
  sample->add_option("--shots", shots, "number of shots")->check(CLI::PositiveNumber);
  add_common(sample, common);
  add_recipe_args(sample, rargs);

  std::string method = "linear_inversion";
  double depol = 0.0;
  double threshold = 0.99;
  auto* tomo = app.add_subcommand("tomo", "Pauli tomography of every post-measurement state of a qubit recipe");
  tomo->add_option("--recipe", recipe_name, "recipe name")->required()->check(CLI::IsMember(recipe_names()));
  tomo->add_option("--shots", shots, "shots per setting; 0 uses exact expectations")->check(CLI::NonNegativeNumber);
  tomo->add_option("--method", method, "linear_inversion or psd_projected")
      ->check(CLI::IsMember({"linear_inversion", "psd_projected", "linear", "psd"}));
  tomo->add_option("--p", depol, "depolarizing strength applied before tomography")->check(CLI::Range(0.0, 1.0));
  auto* tomo_threshold = tomo->add_option("--threshold", threshold, "minimum fidelity for --verify (default 0.999)");
  add_common(tomo, common);
  add_recipe_args(tomo, rargs);

  std::string circle_case = "two_qubit_3coins";
  int samples = 1000;
  std::string ca = "0.7071067811865476", cb = "0.7071067811865476";
  auto* circle = app.add_subcommand("circle-search", "Haar-random coin search for entanglement on the 2-circle");
  circle->add_option("--case", circle_case, "two_qubit_3coins or ghz_4coins")
      ->check(CLI::IsMember({"two_qubit_3coins", "ghz_4coins", "two-qubit", "ghz"}));
  circle->add_option("--samples", samples, "number of coin tuples")->check(CLI::PositiveNumber);
  circle->add_option("--threshold", threshold, "witness threshold (fraction of maximal)");
  circle->add_option("--a", ca, "amplitude a");
  circle->add_option("--b", cb, "amplitude b");
  add_common(circle, common);

  QssArgs qargs;
  auto* qss = app.add_subcommand("qss", "multiparty secret sharing simulation");
  qss->require_subcommand(1);
  auto* qss_run = qss->add_subcommand("run", "one protocol run");
  add_qss_args(qss_run, qargs, common, false);
  auto* qss_batch = qss->add_subcommand("batch", "many seeded runs with summary statistics");
  add_qss_args(qss_batch, qargs, common, true);

  std::vector<std::string> storage{"qwalk"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Format fmt = format_from_string(common.format);

    if (*recipe) {
      const RecipeResult res = run_plan(build_plan(recipe_name, rargs));
      write_output(emit(json(res.outcomes), fmt), common, out);
      return report(verify_recipe(res), common.verify, err);
    }

    if (*sample) {
      const RecipeResult res = run_plan(build_plan(recipe_name, rargs));
      const Histogram h = sample_shots(res.final_state, shots, common.seed);
      const auto expected = basis_probabilities(res.final_state);
      const ChiSquareResult chi = chi_square_gof(h, expected);
      json doc;
      if (fmt == Format::json) {
        doc = json{{"recipe", recipe_name}, {"shots", shots}, {"seed", common.seed},
                   {"counts", h}, {"expected", expected}, {"chi_square", chi}};
      } else {
        doc = json::array();
        for (const auto& [key, p] : expected) {
          const auto it = h.find(key);
          doc.push_back({{"outcome", key}, {"count", it == h.end() ? 0 : it->second}, {"expected_count", p * shots}});
        }
      }
      write_output(emit(doc, fmt), common, out);
      std::vector<std::string> bad;
      if (chi.p_value < 0.001) bad.push_back("chi-square p-value " + std::to_string(chi.p_value) + " < 0.001");
      return report(bad, common.verify, err);
    }

    if (*tomo) {
      if (!tomo_threshold->count()) threshold = 0.999;
      const TomographyMethod m = tomography_method_from_string(method);
      const RecipeResult res = run_plan(build_plan(recipe_name, rargs));
      json doc = json::array();
      std::vector<std::string> bad;
      for (std::size_t i = 0; i < res.outcomes.size(); ++i) {
        const auto& o = res.outcomes[i];
        const DensityMatrix ideal = DensityMatrix::from_pure(o.achieved());
        const auto shots_opt = shots > 0 ? std::optional<std::int64_t>(shots) : std::nullopt;
        const TomographyResult t = tomography(depolarize(ideal, depol), shots_opt, common.seed + i, m);
        const double f = fidelity(t.rho, ideal);
        json row{{"outcome", o.record.outcome}, {"prob", o.record.prob}, {"fidelity", f}, {"tomography", t}};
        if (fmt != Format::json) row.erase("tomography"), row["method"] = to_string(t.method),
                                 row["psd"] = t.psd, row["min_eigenvalue"] = t.min_eigenvalue;
        doc.push_back(std::move(row));
        if (f < threshold) bad.push_back("outcome " + std::to_string(i) + ": fidelity " + std::to_string(f));
      }
      write_output(emit(doc, fmt), common, out);
      return report(bad, common.verify, err);
    }

    if (*circle) {
      const auto rep = circle_search(circle_case_from_string(circle_case), samples, common.seed, threshold,
                                     parse_complex(ca), parse_complex(cb));
      write_output(emit(json(rep), fmt), common, out);
      std::vector<std::string> bad;
      if (rep.witness_found) bad.push_back("entangling coin tuple found");
      return report(bad, common.verify, err);
    }

    if (*qss) {
      CLI::App* sub = *qss_run ? qss_run : qss_batch;
      qargs.cfg.seed = common.seed;
      qargs.secret_given = sub->count("--secret") > 0;
      apply_qss_config(qargs, *sub);
      const Adversary adv{adversary_from_string(qargs.adversary), qargs.target};
      std::vector<std::string> bad;
      if (*qss_run) {
        const QssTranscript t = run_protocol_n(qargs.cfg, qargs.secret, adv);
        write_output(emit(json(t), fmt), common, out);
        if (adv.strategy == AdversaryStrategy::none) {
          if (t.aborted) bad.push_back("aborted without an adversary");
          if (t.phase == QssPhase::message && t.decoded_secret != t.true_secret) bad.push_back("decoded secret differs");
          if (!t.consistent) bad.push_back("final label inconsistent with announcements");
        }
        return report(bad, common.verify, err);
      }
      const bool keep = !qargs.transcripts.empty();
      const QssBatch b = run_batch(qargs.cfg, qargs.runs,
                                   qargs.secret_given ? std::optional<int>(qargs.secret) : std::nullopt, adv, keep);
      if (keep) {
        std::ostringstream lines;
        for (const auto& t : b.transcripts) lines << json(t).dump() << "\n";
        Common to_file = common;
        to_file.out = qargs.transcripts;
        write_output(lines.str(), to_file, out);
      }
      write_output(emit(json(b.summary), fmt), common, out);
      const auto& s = b.summary;
      if (adv.strategy == AdversaryStrategy::none && s.decode_failures > 0)
        bad.push_back(std::to_string(s.decode_failures) + " decode failures");
      if (std::abs(s.abort_rate - s.predicted_abort_rate) > 3.0 * s.abort_sigma + 1e-12)
        bad.push_back("abort rate outside 3 sigma of the prediction");
      return report(bad, common.verify, err);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace qwalk::cli
