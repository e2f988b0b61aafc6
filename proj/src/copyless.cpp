// Non-zero for copyless automata. Control values are abstracted by their
// order type; data values are tracked only as the coefficient of one chosen
// fresh input (first search) or as the concrete contribution of the initial
// control constants (second search). A fresh input with a nonzero output
// coefficient can be perturbed into a nonzero output; if no fresh input ever
// matters, the output is the constant part.

#include <algorithm>
#include <map>
#include <tuple>

#include "raq/nonzero.hpp"

namespace raq {

namespace {

struct Placement {
  bool bound;
  int index;  // class when bound, gap otherwise (gap g lies just below class g)
};

std::vector<Placement> placements(int classes) {
  std::vector<Placement> out;
  for (int c = 0; c < classes; ++c) out.push_back({true, c});
  for (int g = 0; g <= classes; ++g) out.push_back({false, g});
  return out;
}

// Doubled ranks so that gaps fit between classes.
int doubled(const Placement& p) { return p.bound ? 2 * p.index + 1 : 2 * p.index; }

bool guard_holds(const Guard& g, const std::vector<int>& rank, const Placement& p) {
  return evaluate(g, [&](const Operand& o) {
    if (o.is_constant()) throw UsageError("guard constants must be moved to registers first");
    return o.is_cur() ? doubled(p) : 2 * rank[o.index] + 1;
  });
}

std::vector<int> successor_ranks(const Transition& t, const std::vector<int>& rank, const Placement& p, int k) {
  std::vector<int> raw(k);
  for (int i = 0; i < k; ++i) {
    int src = t.update.control_source[i];
    raw[i] = src == k ? doubled(p) : 2 * rank[src] + 1;
  }
  return densify(raw).rank;
}

struct TrackState {
  int q;
  std::vector<int> rank;
  int tracked;  // class holding the tracked value, -1 when not stored
  bool started;
  QVector coef;

  auto key() const { return std::tie(q, rank, tracked, started); }
  bool operator<(const TrackState& o) const {
    if (key() != o.key()) return key() < o.key();
    return VectorLess{}(coef, o.coef);
  }
};

struct ConstState {
  int q;
  std::vector<int> rank;
  std::vector<int> tag;  // index of the initial constant held, -1 for a fresh value
  QVector yval;

  auto key() const { return std::tie(q, rank, tag); }
  bool operator<(const ConstState& o) const {
    if (key() != o.key()) return key() < o.key();
    return VectorLess{}(yval, o.yval);
  }
};

template <typename State, typename Expand, typename Accept>
bool bounded_search(State start, std::size_t depth, std::size_t cap, std::size_t& explored, Expand expand,
                    Accept accept) {
  std::set<State> seen{start};
  std::vector<State> frontier{std::move(start)};
  for (std::size_t d = 0;; ++d) {
    for (const auto& s : frontier)
      if (accept(s)) return true;
    if (d == depth || frontier.empty()) return false;
    std::vector<State> next;
    for (const auto& s : frontier)
      expand(s, [&](State n) {
        if (seen.insert(n).second) {
          if (++explored > cap) throw ResourceError("nonzero_copyless: more than " + std::to_string(cap) + " abstract states");
          next.push_back(std::move(n));
        }
      });
    frontier = std::move(next);
  }
}

}  // namespace

NonZeroVerdict nonzero_copyless(const Raq& input, const CopylessOptions& options) {
  input.validate();
  if (auto t = first_non_copyless(input)) throw UsageError(input.describe(*t) + " is not copyless");
  Raq a = constants_to_registers(input);
  int k = a.k, l = a.l;
  auto outgoing = a.outgoing();
  std::vector<const OutputFunction*> output(a.states.size(), nullptr);
  for (std::size_t q = 0; q < a.states.size(); ++q)
    if (auto it = a.outputs.find(a.states[q]); it != a.outputs.end()) output[q] = &it->second;
  std::vector<int> target(a.transitions.size());
  for (std::size_t t = 0; t < a.transitions.size(); ++t) target[t] = a.state_index(a.transitions[t].target);

  NonZeroVerdict v;
  v.method = "copyless";
  std::size_t depth = options.max_depth ? options.max_depth : small_model_bound_raq(a);
  v.bound_used = depth;
  int q0 = a.state_index(a.initial);
  Preorder start = preorder_of(QVector(a.initial_values.head(k)));

  // First search: one fresh input, its coefficient in every data variable.
  auto track_expand = [&](const TrackState& s, auto emit) {
    int classes = k == 0 ? 0 : *std::max_element(s.rank.begin(), s.rank.end()) + 1;
    for (const auto& p : placements(classes))
      for (int ti : outgoing[s.q]) {
        const Transition& t = a.transitions[ti];
        if (!guard_holds(t.guard, s.rank, p)) continue;
        std::vector<bool> choices;
        if (p.bound) choices.push_back(s.started && s.tracked == p.index);
        else if (s.started) choices.push_back(false);
        else choices = {false, true};
        for (bool cur_tracked : choices) {
          const QMatrix& b = t.update.data_matrix;
          QVector coef = QVector::Zero(l);
          if (s.started || cur_tracked) {
            coef = b.middleCols(k, l) * s.coef;
            for (int e = 0; e < k; ++e)
              if (s.started && s.rank[e] == s.tracked) coef += b.col(e);
            if (cur_tracked) coef += b.col(k + l);
          }
          std::vector<int> rank = successor_ranks(t, s.rank, p, k);
          int tracked = -1;
          for (int i = 0; i < k && tracked < 0; ++i) {
            int src = t.update.control_source[i];
            bool held = src == k ? cur_tracked : (s.started && s.rank[src] == s.tracked);
            if (held) tracked = rank[i];
          }
          emit(TrackState{target[ti], std::move(rank), tracked, s.started || cur_tracked, std::move(coef)});
        }
      }
  };
  auto track_accept = [&](const TrackState& s) {
    if (!s.started || !output[s.q]) return false;
    Rational alpha = output[s.q]->data_coeffs.dot(s.coef);
    for (int e = 0; e < k; ++e)
      if (s.rank[e] == s.tracked) alpha += output[s.q]->control_coeffs[e];
    return alpha != 0;
  };
  TrackState t0{q0, start.rank, -1, false, QVector::Zero(l)};
  if (bounded_search(t0, depth, options.cap, v.stats.explored, track_expand, track_accept)) {
    v.answer = true;
    return v;
  }

  // Second search: every fresh coefficient vanishes, so only the initial
  // control constants and the data constants contribute.
  std::vector<Rational> constants;
  for (int e = 0; e < k; ++e) constants.push_back(a.initial_values[e]);
  std::sort(constants.begin(), constants.end());
  constants.erase(std::unique(constants.begin(), constants.end()), constants.end());
  auto value_of_tag = [&](int tag) { return tag < 0 ? Rational(0) : constants[tag]; };
  auto const_expand = [&](const ConstState& s, auto emit) {
    int classes = k == 0 ? 0 : *std::max_element(s.rank.begin(), s.rank.end()) + 1;
    std::vector<int> class_tag(classes, -1);
    for (int e = 0; e < k; ++e) class_tag[s.rank[e]] = s.tag[e];
    for (const auto& p : placements(classes))
      for (int ti : outgoing[s.q]) {
        const Transition& t = a.transitions[ti];
        if (!guard_holds(t.guard, s.rank, p)) continue;
        int cur_tag = p.bound ? class_tag[p.index] : -1;
        const QMatrix& b = t.update.data_matrix;
        QVector y = b.middleCols(k, l) * s.yval + t.update.data_offset;
        for (int e = 0; e < k; ++e)
          if (s.tag[e] >= 0) y += b.col(e) * value_of_tag(s.tag[e]);
        if (cur_tag >= 0) y += b.col(k + l) * value_of_tag(cur_tag);
        std::vector<int> tag(k);
        for (int i = 0; i < k; ++i) {
          int src = t.update.control_source[i];
          tag[i] = src == k ? cur_tag : s.tag[src];
        }
        emit(ConstState{target[ti], successor_ranks(t, s.rank, p, k), std::move(tag), std::move(y)});
      }
  };
  auto const_accept = [&](const ConstState& s) {
    if (!output[s.q]) return false;
    Rational value = output[s.q]->constant + output[s.q]->data_coeffs.dot(s.yval);
    for (int e = 0; e < k; ++e) value += output[s.q]->control_coeffs[e] * value_of_tag(s.tag[e]);
    return value != 0;
  };
  std::vector<int> tags(k);
  for (int e = 0; e < k; ++e)
    tags[e] = static_cast<int>(std::lower_bound(constants.begin(), constants.end(), a.initial_values[e]) - constants.begin());
  ConstState c0{q0, start.rank, tags, a.initial_values.tail(l)};
  v.answer = bounded_search(c0, depth, options.cap, v.stats.explored, const_expand, const_accept);
  return v;
}

}  // namespace raq
