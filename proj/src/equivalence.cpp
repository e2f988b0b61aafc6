#include "raq/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace raq {

namespace {

void require_deterministic(const Raq& a, const char* op) {
  if (!classify(a).deterministic) throw UsageError(std::string(op) + ": automaton is not deterministic");
}

std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "'";
  return base;
}

// Values of a source automaton's variables expressed over the layout of a
// constructed automaton with K control and L data variables: control values
// sit in a column (cur is column K + L) and data values are affine rows over
// all K + L + 1 columns.
struct Env {
  std::vector<int> x;
  std::vector<QVector> y;
  std::vector<Rational> y0;
};

struct Layout {
  int K, L;
  int cur() const { return K + L; }
  int width() const { return K + L + 1; }
  QVector unit(int col) const { return QVector::Unit(width(), col); }
};

Env embed(const Layout& lay, int k, int l, int x_at, int y_at) {
  Env e;
  for (int i = 0; i < k; ++i) e.x.push_back(x_at + i);
  for (int j = 0; j < l; ++j) {
    e.y.push_back(lay.unit(lay.K + y_at + j));
    e.y0.emplace_back(0);
  }
  return e;
}

Env apply(const Layout& lay, const Transition& t, int k, int l, const Env& env, int cur_col) {
  Env out;
  for (int i = 0; i < k; ++i) {
    int src = t.update.control_source[i];
    out.x.push_back(src == k ? cur_col : env.x[src]);
  }
  const QMatrix& b = t.update.data_matrix;
  for (int j = 0; j < l; ++j) {
    QVector row = QVector::Zero(lay.width());
    Rational c = t.update.data_offset[j];
    for (int i = 0; i < k; ++i)
      if (b(j, i) != 0) row[env.x[i]] += b(j, i);
    for (int m = 0; m < l; ++m)
      if (b(j, k + m) != 0) {
        row += b(j, k + m) * env.y[m];
        c += b(j, k + m) * env.y0[m];
      }
    if (b(j, k + l) != 0) row[cur_col] += b(j, k + l);
    out.y.push_back(std::move(row));
    out.y0.push_back(std::move(c));
  }
  return out;
}

Operand column_operand(const Layout& lay, int col) {
  return col == lay.cur() ? Operand::current() : Operand::x(col);
}

Guard rename(const Layout& lay, const Guard& g, const Env& env, int cur_col) {
  return substitute(g, [&](const Operand& o) {
    if (o.is_control()) return column_operand(lay, env.x[o.index]);
    if (o.is_cur()) return column_operand(lay, cur_col);
    return o;
  });
}

// Builds the reassignment from the new value of every control column and
// every data variable.
Reassignment assemble(const Layout& lay, const std::vector<int>& x, const std::vector<QVector>& y,
                      const std::vector<Rational>& y0) {
  Reassignment r{{}, QMatrix::Zero(lay.L, lay.width()), QVector::Zero(lay.L)};
  for (int col : x) {
    if (col != lay.cur() && col >= lay.K) throw std::logic_error("control variable assigned a data value");
    r.control_source.push_back(col == lay.cur() ? lay.K : col);
  }
  for (int j = 0; j < lay.L; ++j) {
    r.data_matrix.row(j) = y[j].transpose();
    r.data_offset[j] = y0[j];
  }
  return r;
}

Reassignment assemble_envs(const Layout& lay, std::initializer_list<const std::vector<int>*> xs,
                           std::initializer_list<const Env*> ys) {
  std::vector<int> x;
  for (const auto* part : xs) x.insert(x.end(), part->begin(), part->end());
  std::vector<QVector> y;
  std::vector<Rational> y0;
  for (const auto* e : ys) {
    y.insert(y.end(), e->y.begin(), e->y.end());
    y0.insert(y0.end(), e->y0.begin(), e->y0.end());
  }
  return assemble(lay, x, y, y0);
}

// Output ζ of the source automaton, reading its control variables at
// columns x_at.. and its data variables at data positions y_at...
OutputFunction embed_output(const Layout& lay, const OutputFunction& z, int x_at, int y_at) {
  OutputFunction out = OutputFunction::zero(lay.K, lay.L);
  out.control_coeffs.segment(x_at, z.control_coeffs.size()) = z.control_coeffs;
  out.data_coeffs.segment(y_at, z.data_coeffs.size()) = z.data_coeffs;
  out.constant = z.constant;
  return out;
}

// Drops states not reachable from the initial state through the transition graph.
Raq prune_unreachable(const Raq& a) {
  std::map<std::string, std::vector<int>> out;
  for (std::size_t t = 0; t < a.transitions.size(); ++t) out[a.transitions[t].source].push_back(static_cast<int>(t));
  std::set<std::string> seen{a.initial};
  std::deque<std::string> work{a.initial};
  while (!work.empty()) {
    std::string q = work.front();
    work.pop_front();
    for (int t : out[q])
      if (seen.insert(a.transitions[t].target).second) work.push_back(a.transitions[t].target);
  }
  Raq r = a;
  r.states.clear();
  for (const auto& q : a.states)
    if (seen.count(q)) r.states.push_back(q);
  r.finals.clear();
  for (const auto& q : a.finals)
    if (seen.count(q)) r.finals.push_back(q);
  r.transitions.clear();
  for (const auto& t : a.transitions)
    if (seen.count(t.source)) r.transitions.push_back(t);
  r.outputs.clear();
  for (const auto& [q, z] : a.outputs)
    if (seen.count(q)) r.outputs.emplace(q, z);
  return r;
}

Raq skeleton(int k, int l, QVector u0) {
  Raq r;
  r.k = k;
  r.l = l;
  r.initial_values = std::move(u0);
  return r;
}

}  // namespace

Raq complete(const Raq& a, bool sink_final_zero) {
  require_deterministic(a, "complete");
  auto outgoing = a.outgoing();
  Raq r = a;
  std::string sink = fresh_name(a.states, "sink");
  bool used = false;
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    std::vector<Guard> guards;
    for (int t : outgoing[q]) guards.push_back(a.transitions[t].guard);
    Guard rest = guards.empty() ? Guard::top() : Guard::negate(Guard::disj(guards));
    if (!guard_satisfiable(rest)) continue;
    r.transitions.push_back({a.states[q], rest, sink, Reassignment::identity(a.k, a.l)});
    used = true;
  }
  if (!used) return r;
  r.states.push_back(sink);
  r.transitions.push_back({sink, Guard::top(), sink, Reassignment::identity(a.k, a.l)});
  if (sink_final_zero) {
    r.finals.push_back(sink);
    r.outputs[sink] = OutputFunction::zero(a.k, a.l);
  }
  return r;
}

Raq product_difference(const Raq& a1, const Raq& a2) {
  for (const Raq* a : {&a1, &a2}) {
    Classification c = classify(*a);
    if (!c.deterministic || !c.complete)
      throw UsageError("product_difference: both automata must be deterministic and complete");
  }
  int k1 = a1.k, k2 = a2.k, l1 = a1.l, l2 = a2.l;
  Layout lay{k1 + k2, l1 + l2};
  Raq r = skeleton(lay.K, lay.L, QVector::Zero(lay.K + lay.L));
  r.initial_values << a1.initial_values.head(k1), a2.initial_values.head(k2), a1.initial_values.tail(l1),
      a2.initial_values.tail(l2);
  Env e1 = embed(lay, k1, l1, 0, 0), e2 = embed(lay, k2, l2, k1, l1);

  auto out1 = a1.outgoing(), out2 = a2.outgoing();
  std::map<std::pair<int, int>, std::string> names;
  std::deque<std::pair<int, int>> work;
  auto state_of = [&](int p1, int p2) {
    auto [it, inserted] = names.emplace(std::make_pair(p1, p2), "(" + a1.states[p1] + "," + a2.states[p2] + ")");
    if (inserted) {
      r.states.push_back(it->second);
      work.emplace_back(p1, p2);
    }
    return it->second;
  };
  r.initial = state_of(a1.state_index(a1.initial), a2.state_index(a2.initial));
  while (!work.empty()) {
    auto [p1, p2] = work.front();
    work.pop_front();
    const std::string& src = names.at({p1, p2});
    bool f1 = a1.is_final(a1.states[p1]), f2 = a2.is_final(a2.states[p2]);
    if (f1 || f2) {
      r.finals.push_back(src);
      OutputFunction z = OutputFunction::zero(lay.K, lay.L);
      if (f1 && f2) {
        OutputFunction z1 = embed_output(lay, a1.outputs.at(a1.states[p1]), 0, 0);
        OutputFunction z2 = embed_output(lay, a2.outputs.at(a2.states[p2]), k1, l1);
        z = {z1.control_coeffs - z2.control_coeffs, z1.data_coeffs - z2.data_coeffs, z1.constant - z2.constant};
      } else {
        z.constant = 1;
      }
      r.outputs[src] = z;
    }
    for (int t1 : out1[p1])
      for (int t2 : out2[p2]) {
        const Transition& u = a1.transitions[t1];
        const Transition& v = a2.transitions[t2];
        Guard g = Guard::conj({rename(lay, u.guard, e1, lay.cur()), rename(lay, v.guard, e2, lay.cur())});
        if (!guard_satisfiable(g)) continue;
        Env n1 = apply(lay, u, k1, l1, e1, lay.cur()), n2 = apply(lay, v, k2, l2, e2, lay.cur());
        Reassignment upd = assemble_envs(lay, {&n1.x, &n2.x}, {&n1, &n2});
        std::string tgt = state_of(a1.state_index(u.target), a2.state_index(v.target));
        r.transitions.push_back({src, std::move(g), tgt, std::move(upd)});
      }
  }
  r.validate();
  return r;
}

EquivVerdict equivalent(const Raq& a1, const Raq& a2) {
  require_deterministic(a1, "equivalent");
  require_deterministic(a2, "equivalent");
  Raq product = product_difference(complete(a1), complete(a2));
  NonZeroVerdict nz = nonzero_exptime(product);
  EquivVerdict v;
  v.equivalent = !nz.answer;
  v.stats = nz.stats;
  if (nz.witness) {
    auto o1 = run(a1, *nz.witness), o2 = run(a2, *nz.witness);
    if (o1 == o2) throw std::logic_error("equivalent: counterexample does not separate the automata");
    v.counterexample = nz.witness;
    v.outputs = std::make_pair(std::move(o1), std::move(o2));
  }
  return v;
}

Raq restrict_to_long_words(const Raq& a) {
  a.validate();
  Raq r = a;
  r.states.clear();
  r.finals.clear();
  r.transitions.clear();
  r.outputs.clear();
  auto name = [](const std::string& q, int c) { return q + "#" + std::to_string(c); };
  for (const auto& q : a.states)
    for (int c = 0; c < 3; ++c) r.states.push_back(name(q, c));
  r.initial = name(a.initial, 0);
  for (const auto& t : a.transitions)
    for (int c = 0; c < 3; ++c) {
      Transition u = t;
      u.source = name(t.source, c);
      u.target = name(t.target, std::min(c + 1, 2));
      r.transitions.push_back(std::move(u));
    }
  for (const auto& q : a.finals) {
    r.finals.push_back(name(q, 2));
    r.outputs[name(q, 2)] = a.outputs.at(q);
  }
  return prune_unreachable(r);
}

std::vector<Rational> swap_first_two(std::span<const Rational> w) {
  std::vector<Rational> out(w.begin(), w.end());
  if (out.size() >= 2) std::swap(out[0], out[1]);
  return out;
}

std::vector<Rational> rotate_first_to_end(std::span<const Rational> w) {
  std::vector<Rational> out(w.begin(), w.end());
  if (!out.empty()) std::rotate(out.begin(), out.begin() + 1, out.end());
  return out;
}

Raq permute_pi1(const Raq& a) {
  require_deterministic(a, "permute_pi1");
  int k = a.k, l = a.l;
  // Columns: x (k), the buffered first letter x_b, y (l), cur.
  Layout lay{k + 1, l};
  int xb = k;
  Raq r = skeleton(lay.K, lay.L, QVector::Zero(lay.K + lay.L));
  r.initial_values << a.initial_values.head(k), Rational(0), a.initial_values.tail(l);
  std::string start = fresh_name(a.states, "start"), buffer = fresh_name(a.states, "buffer");
  r.states = a.states;
  r.states.push_back(start);
  r.states.push_back(buffer);
  r.initial = start;
  r.finals = a.finals;
  for (const auto& [q, z] : a.outputs) r.outputs[q] = embed_output(lay, z, 0, 0);

  Env e0 = embed(lay, k, l, 0, 0);
  std::vector<int> keep_b{xb}, take_b{lay.cur()};
  r.transitions.push_back({start, Guard::top(), buffer, assemble_envs(lay, {&e0.x, &take_b}, {&e0})});
  auto outgoing = a.outgoing();
  for (int t1 : outgoing[a.state_index(a.initial)]) {
    const Transition& u = a.transitions[t1];
    Env e1 = apply(lay, u, k, l, e0, lay.cur());
    for (int t2 : outgoing[a.state_index(u.target)]) {
      const Transition& v = a.transitions[t2];
      Guard g = Guard::conj({rename(lay, u.guard, e0, lay.cur()), rename(lay, v.guard, e1, xb)});
      if (!guard_satisfiable(g)) continue;
      Env e2 = apply(lay, v, k, l, e1, xb);
      r.transitions.push_back({buffer, std::move(g), v.target, assemble_envs(lay, {&e2.x, &keep_b}, {&e2})});
    }
  }
  for (const auto& t : a.transitions) {
    Env e1 = apply(lay, t, k, l, e0, lay.cur());
    r.transitions.push_back({t.source, rename(lay, t.guard, e0, lay.cur()), t.target,
                             assemble_envs(lay, {&e1.x, &keep_b}, {&e1})});
  }
  return prune_unreachable(r);
}

Raq permute_pi2(const Raq& a) {
  require_deterministic(a, "permute_pi2");
  int k = a.k, l = a.l;
  // Columns: x (k), primed x' (k), the first letter x_t, y (l), primed y' (l), cur.
  Layout lay{2 * k + 1, 2 * l};
  int xt = 2 * k;
  Raq r = skeleton(lay.K, lay.L, QVector::Zero(lay.K + lay.L));
  r.initial_values << a.initial_values.head(k), a.initial_values.head(k), Rational(0), a.initial_values.tail(l),
      a.initial_values.tail(l);

  std::vector<std::string> taken = a.states;
  auto copy_name = [&](const std::string& q, const std::string& f) { return "[" + q + ">" + f + "]"; };
  for (const auto& q : a.states)
    for (const auto& f : a.finals) taken.push_back(copy_name(q, f));
  std::string start = fresh_name(taken, "start");
  r.states = a.states;
  r.states.push_back(start);
  r.initial = start;
  for (const auto& q : a.states)
    for (const auto& f : a.finals) {
      std::string c = copy_name(q, f);
      r.states.push_back(c);
      r.finals.push_back(c);
      r.outputs[c] = embed_output(lay, a.outputs.at(f), k, l);
    }

  Env plain = embed(lay, k, l, 0, 0), primed = embed(lay, k, l, k, l);
  std::vector<int> keep_t{xt}, take_t{lay.cur()};
  r.transitions.push_back({start, Guard::top(), a.initial, assemble_envs(lay, {&plain.x, &primed.x, &take_t}, {&plain, &primed})});

  auto outgoing = a.outgoing();
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    std::vector<std::string> sources{a.states[q]};
    for (const auto& f : a.finals) sources.push_back(copy_name(a.states[q], f));
    for (int t1 : outgoing[q]) {
      const Transition& u = a.transitions[t1];
      Guard g1 = rename(lay, u.guard, plain, lay.cur());
      Env e1 = apply(lay, u, k, l, plain, lay.cur());
      std::vector<Guard> missed{g1};
      for (int t2 : outgoing[a.state_index(u.target)]) {
        const Transition& v = a.transitions[t2];
        if (!a.is_final(v.target)) continue;
        Guard g2 = rename(lay, v.guard, e1, xt);
        missed.push_back(Guard::negate(g2));
        Guard g = Guard::conj({g1, g2});
        if (!guard_satisfiable(g)) continue;
        Env e2 = apply(lay, v, k, l, e1, xt);
        Reassignment upd = assemble_envs(lay, {&e1.x, &e2.x, &keep_t}, {&e1, &e2});
        for (const auto& s : sources) r.transitions.push_back({s, g, copy_name(u.target, v.target), upd});
      }
      Guard g = Guard::conj(std::move(missed));
      if (!guard_satisfiable(g)) continue;
      Reassignment upd = assemble_envs(lay, {&e1.x, &primed.x, &keep_t}, {&e1, &primed});
      for (const auto& s : sources) r.transitions.push_back({s, g, u.target, upd});
    }
  }
  return prune_unreachable(r);
}

CommutativityVerdict commutative(const Raq& a) {
  require_deterministic(a, "commutative");
  Raq base = restrict_to_long_words(complete(a));
  CommutativityVerdict v;
  v.commutative = true;
  using Permutation = std::vector<Rational> (*)(std::span<const Rational>);
  std::pair<Raq (*)(const Raq&), Permutation> checks[] = {{permute_pi1, swap_first_two},
                                                          {permute_pi2, rotate_first_to_end}};
  for (auto [build, permute] : checks) {
    EquivVerdict e = equivalent(base, build(base));
    v.stats.ap_states += e.stats.ap_states;
    v.stats.ap_transitions += e.stats.ap_transitions;
    v.stats.explored += e.stats.explored;
    for (const auto& [d, c] : e.stats.hull_dims) v.stats.hull_dims[d] += c;
    if (e.equivalent) continue;
    std::vector<Rational> w = *e.counterexample, pw = permute(w);
    auto o1 = run(a, w), o2 = run(a, pw);
    if (o1 == o2) throw std::logic_error("commutative: counterexample does not separate the permutations");
    v.commutative = false;
    v.counterexample = std::make_pair(std::move(w), std::move(pw));
    v.outputs = std::make_pair(std::move(o1), std::move(o2));
    break;
  }
  return v;
}

std::vector<Rational> default_letters(const Raq& a) {
  std::set<Rational> constants;
  for (int i = 0; i < a.k; ++i) constants.insert(a.initial_values[i]);
  for (const auto& t : a.transitions) collect_constants(t.guard, constants);
  std::vector<Rational> values(constants.begin(), constants.end());
  std::vector<Rational> letters = candidate_letters(values);
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  return letters;
}

CommutativityVerdict commutative_brute(const Raq& a, std::size_t max_len, std::vector<Rational> letters) {
  a.validate();
  if (letters.empty()) letters = default_letters(a);
  std::size_t layer = 1;
  for (std::size_t n = 1; n <= max_len; ++n) {
    if (layer > 10'000'000 / letters.size()) throw ResourceError("commutative_brute: more than 10^7 words to try");
    layer *= letters.size();
  }
  CommutativityVerdict v;
  v.commutative = true;
  for (std::size_t n = 2; n <= max_len; ++n) {
    std::vector<std::size_t> digits(n, 0);
    std::vector<Rational> w(n);
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) w[i] = letters[digits[i]];
      auto base = run(a, w);
      ++v.stats.explored;
      for (auto permute : {swap_first_two, rotate_first_to_end}) {
        std::vector<Rational> pw = permute(w);
        auto other = run(a, pw);
        if (other == base) continue;
        v.commutative = false;
        v.counterexample = std::make_pair(w, std::move(pw));
        v.outputs = std::make_pair(std::move(base), std::move(other));
        return v;
      }
      std::size_t i = n;
      while (i > 0 && ++digits[i - 1] == letters.size()) digits[--i] = 0;
      if (i == 0) break;
    }
  }
  return v;
}

}  // namespace raq
