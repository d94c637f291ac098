#pragma once

#include <algorithm>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/statevec.hpp"

namespace qwalk {

enum class Graph { line, circle, complete };

inline std::string_view to_string(Graph g) {
  switch (g) {
    case Graph::line: return "line";
    case Graph::circle: return "circle";
    case Graph::complete: return "complete";
  }
  return "?";
}

inline Graph graph_from_string(std::string_view s) {
  if (s == "line") return Graph::line;
  if (s == "circle") return Graph::circle;
  if (s == "complete") return Graph::complete;
  throw std::invalid_argument("unknown graph kind '" + std::string(s) + "'");
}

struct GraphKind {
  Graph kind = Graph::complete;
  int n = 2;

  GraphKind() = default;
  GraphKind(Graph kind_, int n_) : kind(kind_), n(n_) {
    if (n < 2) throw std::invalid_argument("graph needs at least 2 vertices");
  }

  // Complete graphs carry one coin state per vertex offset; line and circle
  // walks use a two-sided coin.
  int coin_dim() const { return kind == Graph::complete ? n : 2; }
  int position_dim() const { return n; }
};

/// Conditional shift on position (x) coin, basis index x * coin_dim + j.
inline Matrix build_shift(const GraphKind& g) {
  const int n = g.n;
  const int c = g.coin_dim();
  Matrix s = Matrix::Zero(n * c, n * c);
  auto set = [&](int x_to, int j_to, int x_from, int j_from) { s(x_to * c + j_to, x_from * c + j_from) = 1.0; };
  for (int x = 0; x < n; ++x) {
    switch (g.kind) {
      case Graph::complete:
        for (int j = 0; j < c; ++j) set(mod(x + j, n), j, x, j);
        break;
      case Graph::circle:
        set(mod(x + 1, n), 0, x, 0);
        set(mod(x - 1, n), 1, x, 1);
        break;
      case Graph::line:
        // interior hops; at the two ends the walker stays and the coin flips
        if (x <= n - 2) set(x + 1, 0, x, 0);
        else set(n - 1, 1, n - 1, 0);
        if (x >= 1) set(x - 1, 1, x, 1);
        else set(0, 0, 0, 1);
        break;
    }
  }
  return s;
}

enum class CoinName { identity, hadamard, weyl_x, fourier, custom };

inline std::string_view to_string(CoinName c) {
  switch (c) {
    case CoinName::identity: return "identity";
    case CoinName::hadamard: return "hadamard";
    case CoinName::weyl_x: return "weyl_x";
    case CoinName::fourier: return "fourier";
    case CoinName::custom: return "custom";
  }
  return "?";
}

inline CoinName coin_from_string(std::string_view s) {
  if (s == "identity" || s == "I") return CoinName::identity;
  if (s == "hadamard" || s == "H") return CoinName::hadamard;
  if (s == "weyl_x" || s == "X") return CoinName::weyl_x;
  if (s == "fourier" || s == "F") return CoinName::fourier;
  throw std::invalid_argument("unknown coin '" + std::string(s) + "'");
}

struct CoinOp {
  CoinName name = CoinName::identity;
  int d = 2;
  Matrix mat;

  static CoinOp custom(Matrix m) {
    if (m.rows() != m.cols() || m.rows() < 2) throw std::invalid_argument("coin must be square with side >= 2");
    if (!is_unitary(m)) throw std::invalid_argument("custom coin is not unitary");
    const int d = static_cast<int>(m.rows());
    return {CoinName::custom, d, std::move(m)};
  }
};

inline CoinOp build_coin(CoinName name, int d) {
  if (d < 2) throw std::invalid_argument("coin dimension must be >= 2");
  Matrix m = Matrix::Zero(d, d);
  switch (name) {
    case CoinName::identity:
      m.setIdentity();
      break;
    case CoinName::hadamard: {
      if (d != 2) throw std::invalid_argument("hadamard coin requires d = 2");
      const double s = 1.0 / std::sqrt(2.0);
      m << s, s, s, -s;
      break;
    }
    case CoinName::weyl_x:
      for (int i = 0; i < d; ++i) m(mod(i + 1, d), i) = 1.0;
      break;
    case CoinName::fourier: {
      const double s = 1.0 / std::sqrt(static_cast<double>(d));
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) m(j, k) = s * root_of_unity(1LL * j * k, d);
      break;
    }
    case CoinName::custom:
      throw std::invalid_argument("custom coins are built with CoinOp::custom");
  }
  return {name, d, std::move(m)};
}

/// A multi-coin walk: step i (1-based) flips coin subsystem
/// coins[(i - 1) mod k] with coin_ops[i - 1], then shifts (walker, that coin).
struct WalkSchedule {
  GraphKind graph;
  int walker = 0;
  std::vector<int> coins;
  std::vector<CoinOp> coin_ops;
  int steps = 1;

  int coin_for_step(int step_index) const { return coins[static_cast<std::size_t>((step_index - 1) % static_cast<int>(coins.size()))]; }

  void validate() const {
    if (steps < 1) throw std::invalid_argument("walk needs at least one step");
    if (coins.empty()) throw std::invalid_argument("walk needs at least one coin");
    if (static_cast<int>(coin_ops.size()) != steps)
      throw std::invalid_argument("expected one coin operator per step (" + std::to_string(steps) + "), got " +
                                  std::to_string(coin_ops.size()));
    std::vector<int> all = coins;
    all.push_back(walker);
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw std::invalid_argument("walker and coin subsystems must be distinct");
    for (const auto& op : coin_ops)
      if (op.d != graph.coin_dim())
        throw std::invalid_argument("coin operator dimension " + std::to_string(op.d) +
                                    " does not match graph coin dimension " + std::to_string(graph.coin_dim()));
  }

  void validate_against(const PureState& state) const {
    validate();
    const int n = state.num_subsystems();
    auto in_range = [n](int s) { return s >= 0 && s < n; };
    if (!in_range(walker)) throw std::out_of_range("walker subsystem out of range");
    if (state.dims()[walker] != graph.position_dim())
      throw std::invalid_argument("walker dimension does not match the graph's vertex count");
    for (int c : coins) {
      if (!in_range(c)) throw std::out_of_range("coin subsystem out of range");
      if (state.dims()[c] != graph.coin_dim())
        throw std::invalid_argument("coin subsystem dimension does not match the graph's coin space");
    }
  }
};

/// Convenience builder for schedules made of named coins.
inline WalkSchedule make_schedule(GraphKind graph, int walker, std::vector<int> coins,
                                  std::span<const CoinName> names) {
  WalkSchedule s;
  s.graph = graph;
  s.walker = walker;
  s.coins = std::move(coins);
  for (CoinName n : names) s.coin_ops.push_back(build_coin(n, graph.coin_dim()));
  s.steps = static_cast<int>(s.coin_ops.size());
  s.validate();
  return s;
}

inline WalkSchedule make_schedule(GraphKind graph, int walker, std::vector<int> coins,
                                  std::initializer_list<CoinName> names) {
  return make_schedule(graph, walker, std::move(coins), std::span<const CoinName>(names.begin(), names.size()));
}

namespace detail {

inline PureState step_with_shift(const PureState& state, const WalkSchedule& schedule, int step_index,
                                 const Matrix& shift) {
  const int coin = schedule.coin_for_step(step_index);
  const CoinOp& op = schedule.coin_ops[static_cast<std::size_t>(step_index - 1)];
  if (state.dims()[coin] != op.d)
    throw std::invalid_argument("coin operator dimension does not match coin subsystem");
  const int coin_target[] = {coin};
  PureState flipped = apply_unitary(state, op.mat, coin_target);
  const int shift_targets[] = {schedule.walker, coin};
  return apply_unitary(flipped, shift, shift_targets);
}

}  // namespace detail

/// One step U_i = (S (x) I)(I (x) C_i).
inline PureState walk_step(const PureState& state, const WalkSchedule& schedule, int step_index) {
  schedule.validate_against(state);
  if (step_index < 1 || step_index > schedule.steps)
    throw std::out_of_range("step index must lie in [1, steps]");
  return detail::step_with_shift(state, schedule, step_index, build_shift(schedule.graph));
}

/// U_t ... U_1 |state>, cycling through the coins. When k divides t this is
/// (U_k ... U_1)^{t/k}; for t < k only the first t coins are touched.
inline PureState run_schedule(const PureState& state, const WalkSchedule& schedule) {
  schedule.validate_against(state);
  const Matrix shift = build_shift(schedule.graph);
  PureState cur = state;
  for (int i = 1; i <= schedule.steps; ++i) cur = detail::step_with_shift(cur, schedule, i, shift);
  return cur;
}

}  // namespace qwalk
