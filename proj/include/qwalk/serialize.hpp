#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/qss.hpp"
#include "qwalk/recipes.hpp"
#include "qwalk/statevec.hpp"
#include "qwalk/walk.hpp"

// JSON documents use nlohmann::json, whose object type is a std::map, so keys
// always come out sorted. Complex numbers are [re, im] pairs.

namespace qwalk {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, static_cast<Eigen::Index>(j[0].size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != m.cols()) throw std::invalid_argument("ragged matrix");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = complex_from(j[r][c]);
  }
  return m;
}

inline void check_version(const json& j) {
  if (j.contains("version") && j.at("version").get<int>() != kSchemaVersion)
    throw std::invalid_argument("unsupported schema version");
}

}  // namespace detail

}  // namespace qwalk

namespace nlohmann {

template <>
struct adl_serializer<qwalk::GeneralizedBellLabel> {
  static qwalk::GeneralizedBellLabel from_json(const json& j) {
    return {j.at("d").get<int>(), j.at("k").get<int>(), j.at("l").get<int>()};
  }
  static void to_json(json& j, const qwalk::GeneralizedBellLabel& l) { j = json{{"d", l.d}, {"k", l.k}, {"l", l.l}}; }
};

template <>
struct adl_serializer<qwalk::PureState> {
  static qwalk::PureState from_json(const json& j) {
    qwalk::detail::check_version(j);
    const auto dims = j.at("dims").get<std::vector<int>>();
    const json& a = j.at("amps");
    qwalk::Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = qwalk::detail::complex_from(a[i]);
    return {dims, std::move(v)};
  }
  static void to_json(json& j, const qwalk::PureState& s) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < s.amps().size(); ++i) amps.push_back(qwalk::detail::complex_json(s.amps()(i)));
    j = json{{"version", qwalk::kSchemaVersion}, {"dims", s.dims()}, {"amps", std::move(amps)}};
  }
};

template <>
struct adl_serializer<qwalk::DensityMatrix> {
  static qwalk::DensityMatrix from_json(const json& j) {
    qwalk::detail::check_version(j);
    return {j.at("dims").get<std::vector<int>>(), qwalk::detail::matrix_from(j.at("mat"))};
  }
  static void to_json(json& j, const qwalk::DensityMatrix& r) {
    j = json{{"version", qwalk::kSchemaVersion}, {"dims", r.dims()}, {"mat", qwalk::detail::matrix_json(r.mat())}};
  }
};

}  // namespace nlohmann

namespace qwalk {

inline void to_json(json& j, const GraphKind& g) { j = json{{"kind", to_string(g.kind)}, {"n", g.n}}; }

inline void to_json(json& j, const CoinOp& c) {
  if (c.name == CoinName::custom) j = detail::matrix_json(c.mat);
  else j = to_string(c.name);
}

inline void to_json(json& j, const WalkSchedule& s) {
  j = json{{"graph", s.graph}, {"walker", s.walker}, {"coins", s.coins}, {"coin_ops", s.coin_ops}, {"steps", s.steps}};
}

inline void from_json(const json& j, WalkSchedule& s) {
  const json& g = j.at("graph");
  s.graph = GraphKind(graph_from_string(g.at("kind").get<std::string>()), g.at("n").get<int>());
  s.walker = j.at("walker").get<int>();
  s.coins = j.at("coins").get<std::vector<int>>();
  s.coin_ops.clear();
  for (const auto& c : j.at("coin_ops")) {
    if (c.is_string()) s.coin_ops.push_back(build_coin(coin_from_string(c.get<std::string>()), s.graph.coin_dim()));
    else s.coin_ops.push_back(CoinOp::custom(detail::matrix_from(c)));
  }
  s.steps = j.at("steps").get<int>();
  s.validate();
}

inline void to_json(json& j, const MeasurementRecord& r) {
  j = json{{"measured", r.measured}, {"outcome", r.outcome}, {"prob", r.prob}, {"residual", r.residual}};
}

inline void to_json(json& j, const RecipeOutcome& o) {
  j = json{{"measured", o.record.measured},
           {"outcome", o.record.outcome},
           {"prob", o.record.prob},
           {"target_particles", o.target_particles},
           {"target_form", o.target_form},
           {"fidelity_to_target", o.fidelity_to_target},
           {"entropies", o.entropies},
           {"achieved", o.achieved()},
           {"target", o.target}};
  if (o.concurrence) j["concurrence"] = *o.concurrence;
  if (o.phase_matches) j["phase_matches"] = *o.phase_matches;
}

inline void to_json(json& j, const RecipeResult& r) {
  j = json{{"recipe", r.name}, {"schedule", r.schedule}, {"final_state", r.final_state}, {"outcomes", r.outcomes}};
}

inline void to_json(json& j, const TomographyResult& t) {
  j = json{{"rho", t.rho},
           {"basis_settings", t.basis_settings},
           {"shots_per_setting", t.shots_per_setting ? json(*t.shots_per_setting) : json(nullptr)},
           {"method", to_string(t.method)},
           {"psd", t.psd},
           {"min_eigenvalue", t.min_eigenvalue}};
}

inline void to_json(json& j, const ChiSquareResult& c) {
  j = json{{"statistic", c.statistic}, {"dof", c.dof}, {"p_value", c.p_value}};
}

inline void to_json(json& j, const CircleSearchReport& r) {
  j = json{{"case", to_string(r.which)},
           {"samples", r.samples},
           {"seed", r.seed},
           {"threshold", r.threshold},
           {"max_min_entanglement", r.max_min_entanglement},
           {"max_min_entropy", r.max_min_entropy},
           {"witness_found", r.witness_found}};
}

inline void to_json(json& j, const CheckRecord& c) {
  j = json{{"link", c.link},
           {"basis", to_string(c.basis)},
           {"alice_outcome", c.alice_outcome},
           {"agent_outcome", c.agent_outcome},
           {"pass", c.pass}};
}

inline void to_json(json& j, const QssTranscript& t) {
  j = json{{"phase", to_string(t.phase)},
           {"d", t.d},
           {"parties", t.parties},
           {"check_results", t.check_results},
           {"agent_outcomes", t.agent_outcomes},
           {"true_secret", t.true_secret},
           {"aborted", t.aborted},
           {"consistent", t.consistent},
           {"pairs_consumed", t.pairs_consumed}};
  j["alice_announcement"] = t.alice_announcement ? json(*t.alice_announcement) : json(nullptr);
  j["bob_outcomes"] = t.bob_outcomes() ? json(*t.bob_outcomes()) : json(nullptr);
  j["final_label"] = t.final_label ? json(*t.final_label) : json(nullptr);
  j["decoded_secret"] = t.decoded_secret ? json(*t.decoded_secret) : json(nullptr);
}

inline void to_json(json& j, const QssBatchSummary& s) {
  j = json{{"runs", s.runs},
           {"check_runs", s.check_runs},
           {"message_runs", s.message_runs},
           {"aborted", s.aborted},
           {"decode_failures", s.decode_failures},
           {"inconsistent", s.inconsistent},
           {"abort_rate", s.abort_rate},
           {"predicted_abort_rate", s.predicted_abort_rate},
           {"abort_sigma", s.abort_sigma},
           {"pairs_consumed", s.pairs_consumed}};
}

}  // namespace qwalk
