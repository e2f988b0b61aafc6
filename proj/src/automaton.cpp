#include "raq/automaton.hpp"

#include <algorithm>

namespace raq {

Reassignment Reassignment::identity(int k, int l) {
  Reassignment r;
  for (int i = 0; i < k; ++i) r.control_source.push_back(i);
  r.data_matrix = QMatrix::Zero(l, k + l + 1);
  for (int j = 0; j < l; ++j) r.data_matrix(j, k + j) = 1;
  r.data_offset = QVector::Zero(l);
  return r;
}

QMatrix Reassignment::control_matrix() const {
  int k = static_cast<int>(control_source.size());
  QMatrix m = QMatrix::Zero(k, k + 1);
  for (int i = 0; i < k; ++i) m(i, control_source[i]) = 1;
  return m;
}

bool Reassignment::operator==(const Reassignment& o) const {
  return control_source == o.control_source && same_entries(data_matrix, o.data_matrix) &&
         same_entries(data_offset, o.data_offset);
}

OutputFunction OutputFunction::zero(int k, int l) {
  return {QVector::Zero(k), QVector::Zero(l), Rational(0)};
}

Rational OutputFunction::operator()(const QVector& values) const {
  Index k = control_coeffs.size(), l = data_coeffs.size();
  if (values.size() < k + l) throw UsageError("output function: too few values");
  Rational r = constant;
  for (Index i = 0; i < k; ++i)
    if (control_coeffs[i] != 0) r += control_coeffs[i] * values[i];
  for (Index j = 0; j < l; ++j)
    if (data_coeffs[j] != 0) r += data_coeffs[j] * values[k + j];
  return r;
}

bool OutputFunction::operator==(const OutputFunction& o) const {
  return same_entries(control_coeffs, o.control_coeffs) && same_entries(data_coeffs, o.data_coeffs) &&
         constant == o.constant;
}

bool Raq::is_final(const std::string& q) const {
  return std::find(finals.begin(), finals.end(), q) != finals.end();
}

int Raq::state_index(const std::string& q) const {
  auto it = std::find(states.begin(), states.end(), q);
  if (it == states.end()) throw UsageError("unknown state '" + q + "'");
  return static_cast<int>(it - states.begin());
}

std::vector<std::vector<int>> Raq::outgoing() const {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> out(states.size());
  for (std::size_t t = 0; t < transitions.size(); ++t) {
    auto it = index.find(transitions[t].source);
    if (it == index.end()) throw UsageError("transition from unknown state '" + transitions[t].source + "'");
    out[it->second].push_back(static_cast<int>(t));
  }
  return out;
}

std::vector<std::string> Raq::control_labels() const {
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i)
    names.push_back(static_cast<std::size_t>(i) < control_names.size() && !control_names[i].empty()
                        ? control_names[i]
                        : "x" + std::to_string(i + 1));
  return names;
}

std::string Raq::describe(int t) const {
  const Transition& tr = transitions.at(t);
  return "transition #" + std::to_string(t) + " (" + tr.source + " -> " + tr.target + ")";
}

void Raq::validate() const {
  if (states.empty()) throw UsageError("automaton has no states");
  std::set<std::string> seen;
  for (const auto& s : states)
    if (!seen.insert(s).second) throw UsageError("duplicate state '" + s + "'");
  if (!seen.count(initial)) throw UsageError("initial state '" + initial + "' is not a state");
  for (const auto& f : finals)
    if (!seen.count(f)) throw UsageError("final state '" + f + "' is not a state");
  if (k < 0 || l < 0) throw UsageError("negative variable count");
  if (initial_values.size() != k + l)
    throw UsageError("initial valuation has " + std::to_string(initial_values.size()) + " entries, expected " +
                     std::to_string(k + l));
  if (!control_names.empty() && static_cast<int>(control_names.size()) != k)
    throw UsageError("control_names must name all " + std::to_string(k) + " control variables");
  if (!data_names.empty() && static_cast<int>(data_names.size()) != l)
    throw UsageError("data_names must name all " + std::to_string(l) + " data variables");
  for (std::size_t t = 0; t < transitions.size(); ++t) {
    const Transition& tr = transitions[t];
    std::string where = describe(static_cast<int>(t));
    if (!seen.count(tr.source)) throw UsageError(where + ": unknown source state");
    if (!seen.count(tr.target)) throw UsageError(where + ": unknown target state");
    if (static_cast<int>(tr.update.control_source.size()) != k)
      throw UsageError(where + ": control reassignment must have " + std::to_string(k) + " entries");
    for (int src : tr.update.control_source)
      if (src < 0 || src > k) throw UsageError(where + ": control reassignment source out of range");
    if (tr.update.data_matrix.rows() != l || tr.update.data_matrix.cols() != k + l + 1)
      throw UsageError(where + ": data matrix must be " + std::to_string(l) + "x" + std::to_string(k + l + 1));
    if (tr.update.data_offset.size() != l) throw UsageError(where + ": data offset must have " + std::to_string(l) + " entries");
    if (max_control_index(tr.guard) >= k) throw UsageError(where + ": guard mentions an undeclared control variable");
  }
  for (const auto& f : finals) {
    auto it = outputs.find(f);
    if (it == outputs.end()) throw UsageError("final state '" + f + "' has no output function");
    if (it->second.control_coeffs.size() != k || it->second.data_coeffs.size() != l)
      throw UsageError("output function of '" + f + "' has the wrong number of coefficients");
  }
  for (const auto& [q, _] : outputs)
    if (!is_final(q)) throw UsageError("output function given for non-final state '" + q + "'");
}

bool Configuration::operator<(const Configuration& o) const {
  if (state != o.state) return state < o.state;
  return VectorLess{}(values, o.values);
}

bool Configuration::operator==(const Configuration& o) const {
  return state == o.state && same_entries(values, o.values);
}

Configuration initial_configuration(const Raq& a) { return {a.initial, a.initial_values}; }

QVector apply_update(const Reassignment& update, int k, const QVector& values, const Rational& cur) {
  Index l = update.data_matrix.rows();
  QVector out(k + l);
  for (int i = 0; i < k; ++i) out[i] = update.control_source[i] == k ? cur : values[update.control_source[i]];
  for (Index j = 0; j < l; ++j) {
    Rational v = update.data_offset[j];
    for (Index c = 0; c < k + l; ++c)
      if (update.data_matrix(j, c) != 0) v += update.data_matrix(j, c) * values[c];
    if (update.data_matrix(j, k + l) != 0) v += update.data_matrix(j, k + l) * cur;
    out[k + j] = v;
  }
  return out;
}

std::vector<Configuration> step(const Raq& a, const Configuration& c, const Rational& cur) {
  std::vector<Configuration> out;
  std::span<const Rational> control(c.values.data(), static_cast<std::size_t>(a.k));
  for (const auto& t : a.transitions) {
    if (t.source != c.state || !eval_guard(t.guard, control, cur)) continue;
    out.push_back({t.target, apply_update(t.update, a.k, c.values, cur)});
  }
  return out;
}

std::set<Rational> run(const Raq& a, std::span<const Rational> word, const RunOptions& options) {
  auto outgoing = a.outgoing();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < a.states.size(); ++i) index[a.states[i]] = static_cast<int>(i);
  std::set<Configuration> frontier{initial_configuration(a)};
  for (const auto& d : word) {
    std::set<Configuration> next;
    for (const auto& c : frontier) {
      std::span<const Rational> control(c.values.data(), static_cast<std::size_t>(a.k));
      for (int ti : outgoing[index.at(c.state)]) {
        const Transition& t = a.transitions[ti];
        if (!eval_guard(t.guard, control, d)) continue;
        next.insert({t.target, apply_update(t.update, a.k, c.values, d)});
        if (next.size() > options.frontier_cap)
          throw ResourceError("run: more than " + std::to_string(options.frontier_cap) + " simultaneous configurations");
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  std::set<Rational> outputs;
  for (const auto& c : frontier)
    if (auto it = a.outputs.find(c.state); it != a.outputs.end()) outputs.insert(it->second(c.values));
  return outputs;
}

std::set<Rational> run(const Raq& a, std::initializer_list<Rational> word) {
  std::vector<Rational> w(word);
  return run(a, w);
}

std::optional<int> first_non_copyless(const Raq& a) {
  for (std::size_t t = 0; t < a.transitions.size(); ++t) {
    const QMatrix& b = a.transitions[t].update.data_matrix;
    for (int j = 0; j < a.l; ++j) {
      int ones = 0;
      for (int i = 0; i < a.l; ++i) {
        const Rational& e = b(i, a.k + j);
        if (e == 1) ++ones;
        else if (e != 0) return static_cast<int>(t);
      }
      if (ones > 1) return static_cast<int>(t);
    }
  }
  return std::nullopt;
}

std::optional<int> first_strict(const Raq& a) {
  for (std::size_t t = 0; t < a.transitions.size(); ++t)
    if (has_negation(a.transitions[t].guard) || has_strict_atom(a.transitions[t].guard)) return static_cast<int>(t);
  return std::nullopt;
}

Classification classify(const Raq& a) {
  a.validate();
  Classification c;
  auto outgoing = a.outgoing();
  c.deterministic = true;
  c.complete = true;
  for (const auto& ts : outgoing) {
    std::vector<Guard> guards;
    for (int t : ts) guards.push_back(a.transitions[t].guard);
    for (std::size_t i = 0; i < guards.size() && c.deterministic; ++i)
      for (std::size_t j = i + 1; j < guards.size(); ++j)
        if (guard_satisfiable(Guard::conj({guards[i], guards[j]}))) {
          c.deterministic = false;
          break;
        }
    if (c.complete && guard_satisfiable(Guard::negate(Guard::disj(guards)))) c.complete = false;
  }
  c.copyless = !first_non_copyless(a).has_value();
  c.non_strict = !first_strict(a).has_value();
  c.read_only.assign(a.k, true);
  for (const auto& t : a.transitions)
    for (int i = 0; i < a.k; ++i)
      if (t.update.control_source[i] != i) c.read_only[i] = false;
  return c;
}

bool has_single_output(const Raq& a) {
  if (a.finals.size() != 1 || a.l < 1) return false;
  const OutputFunction& z = a.outputs.at(a.finals.front());
  QVector e1 = QVector::Zero(a.l);
  e1[0] = 1;
  return is_zero(z.control_coeffs) && same_entries(z.data_coeffs, e1) && z.constant == 0;
}

namespace {

std::string fresh_state(const Raq& a, std::string base) {
  while (std::find(a.states.begin(), a.states.end(), base) != a.states.end()) base += "'";
  return base;
}

}  // namespace

Raq normalize_single_output(const Raq& a) {
  a.validate();
  if (has_single_output(a)) return a;
  Raq r = a;
  if (r.l == 0) {
    Rational zero(0);
    r = add_data_variables(r, std::span<const Rational>(&zero, 1));
  }
  std::string qf = fresh_state(r, "q_out");
  r.states.push_back(qf);
  for (const auto& f : a.finals) {
    const OutputFunction& z = r.outputs.at(f);
    Transition t{f, Guard::top(), qf, Reassignment::identity(r.k, r.l)};
    t.update.data_matrix.row(0).setZero();
    for (int i = 0; i < r.k; ++i) t.update.data_matrix(0, i) = z.control_coeffs[i];
    for (int j = 0; j < r.l; ++j) t.update.data_matrix(0, r.k + j) = z.data_coeffs[j];
    t.update.data_offset[0] = z.constant;
    r.transitions.push_back(std::move(t));
  }
  OutputFunction out = OutputFunction::zero(r.k, r.l);
  out.data_coeffs[0] = 1;
  r.finals = {qf};
  r.outputs.clear();
  r.outputs[qf] = out;
  return r;
}

Raq add_control_variables(const Raq& a, std::span<const Rational> initial, std::span<const std::string> names) {
  int m = static_cast<int>(initial.size());
  if (m == 0) return a;
  Raq r = a;
  int k = a.k, l = a.l, nk = a.k + m;
  r.k = nk;
  r.initial_values.resize(nk + l);
  for (int i = 0; i < k; ++i) r.initial_values[i] = a.initial_values[i];
  for (int i = 0; i < m; ++i) r.initial_values[k + i] = initial[i];
  for (int j = 0; j < l; ++j) r.initial_values[nk + j] = a.initial_values[k + j];
  for (auto& t : r.transitions) {
    for (int& src : t.update.control_source)
      if (src == k) src = nk;
    for (int i = 0; i < m; ++i) t.update.control_source.push_back(k + i);
    QMatrix b = QMatrix::Zero(l, nk + l + 1);
    b.leftCols(k) = t.update.data_matrix.leftCols(k);
    b.rightCols(l + 1) = t.update.data_matrix.rightCols(l + 1);
    t.update.data_matrix = std::move(b);
  }
  for (auto& [q, z] : r.outputs) {
    QVector c = QVector::Zero(nk);
    c.head(k) = z.control_coeffs;
    z.control_coeffs = std::move(c);
  }
  if (!a.control_names.empty() || !names.empty()) {
    r.control_names = a.control_labels();
    for (int i = 0; i < m; ++i)
      r.control_names.push_back(static_cast<std::size_t>(i) < names.size() ? names[i] : "x" + std::to_string(k + i + 1));
  }
  return r;
}

Raq add_data_variables(const Raq& a, std::span<const Rational> initial, std::span<const std::string> names) {
  int m = static_cast<int>(initial.size());
  if (m == 0) return a;
  Raq r = a;
  int k = a.k, l = a.l, nl = a.l + m;
  r.l = nl;
  r.initial_values.conservativeResize(k + nl);
  for (int i = 0; i < m; ++i) r.initial_values[k + l + i] = initial[i];
  for (auto& t : r.transitions) {
    QMatrix b = QMatrix::Zero(nl, k + nl + 1);
    b.topLeftCorner(l, k + l) = t.update.data_matrix.leftCols(k + l);
    b.block(0, k + nl, l, 1) = t.update.data_matrix.rightCols(1);
    for (int i = 0; i < m; ++i) b(l + i, k + l + i) = 1;
    t.update.data_matrix = std::move(b);
    t.update.data_offset.conservativeResize(nl);
    for (int i = 0; i < m; ++i) t.update.data_offset[l + i] = 0;
  }
  for (auto& [q, z] : r.outputs) {
    z.data_coeffs.conservativeResize(nl);
    for (int i = 0; i < m; ++i) z.data_coeffs[l + i] = 0;
  }
  if (!a.data_names.empty() || !names.empty()) {
    r.data_names = a.data_names;
    if (r.data_names.empty())
      for (int j = 0; j < l; ++j) r.data_names.push_back("y" + std::to_string(j + 1));
    for (int i = 0; i < m; ++i)
      r.data_names.push_back(static_cast<std::size_t>(i) < names.size() ? names[i] : "y" + std::to_string(l + i + 1));
  }
  return r;
}

Raq constants_to_registers(const Raq& a) {
  a.validate();
  std::set<Rational> constants;
  for (const auto& t : a.transitions) {
    collect_constants(t.guard, constants);
    for (int j = 0; j < a.l; ++j)
      if (t.update.data_offset[j] != 0) constants.insert(t.update.data_offset[j]);
  }
  if (constants.empty()) return a;
  std::vector<Rational> values(constants.begin(), constants.end());
  int k = a.k;
  Raq r = add_control_variables(a, values);
  auto slot = [&](const Rational& v) {
    return k + static_cast<int>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
  };
  for (auto& t : r.transitions) {
    t.guard = substitute(t.guard, [&](const Operand& o) { return o.is_constant() ? Operand::x(slot(o.value)) : o; });
    for (int j = 0; j < r.l; ++j) {
      if (t.update.data_offset[j] == 0) continue;
      t.update.data_matrix(j, slot(t.update.data_offset[j])) += 1;
      t.update.data_offset[j] = 0;
    }
  }
  return r;
}

Raq prefix_states(const Raq& a, const std::string& prefix) {
  Raq r = a;
  for (auto& s : r.states) s = prefix + s;
  r.initial = prefix + r.initial;
  for (auto& f : r.finals) f = prefix + f;
  for (auto& t : r.transitions) {
    t.source = prefix + t.source;
    t.target = prefix + t.target;
  }
  std::map<std::string, OutputFunction> outputs;
  for (auto& [q, z] : r.outputs) outputs[prefix + q] = z;
  r.outputs = std::move(outputs);
  return r;
}

}  // namespace raq
