// Order refinement for zero-reachability: control values are compared only
// through the classes of the state's preorder, and cur is placed either on a
// class or in a gap, with the guard replaced by the closure of that placement.

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "raq/reach.hpp"

namespace raq {

std::string to_string(const ExtendedRational& v) {
  switch (v.tag) {
    case ExtendedRational::Tag::neg_infinity: return "-inf";
    case ExtendedRational::Tag::pos_infinity: return "+inf";
    case ExtendedRational::Tag::finite: break;
  }
  return to_string(v.value);
}

Symbolic Symbolic::of(const ExtendedRational& v, const Rational& coeff) {
  Symbolic s;
  switch (v.tag) {
    case ExtendedRational::Tag::neg_infinity: s.neg = coeff; break;
    case ExtendedRational::Tag::pos_infinity: s.pos = coeff; break;
    case ExtendedRational::Tag::finite: s.finite = coeff * v.value; break;
  }
  return s;
}

Symbolic& Symbolic::operator+=(const Symbolic& o) {
  finite += o.finite;
  neg += o.neg;
  pos += o.pos;
  return *this;
}

std::string to_string(const Symbolic& s) {
  std::string out = to_string(s.finite);
  if (s.neg != 0) out += " + " + to_string(s.neg) + "*(-inf)";
  if (s.pos != 0) out += " + " + to_string(s.pos) + "*(+inf)";
  return out;
}

namespace {

struct Placement {
  bool bound;
  int index;  // class when bound, gap otherwise (gap g lies just below class g)
};

}  // namespace

ReachNormalization normalize_for_reach(const Raq& input) {
  input.validate();
  if (auto t = first_non_copyless(input)) throw UsageError("reach: " + input.describe(*t) + " is not copyless");
  if (auto t = first_strict(input))
    throw UsageError("reach: " + input.describe(*t) + " has a strict or negated guard");

  std::set<Rational> constant_set{Rational(0)};
  for (int i = 0; i < input.k; ++i) constant_set.insert(input.initial_values[i]);
  for (const auto& t : input.transitions) collect_constants(t.guard, constant_set);
  ReachNormalization out;
  out.original_k = input.k;
  out.constants.assign(constant_set.begin(), constant_set.end());
  std::vector<std::string> register_names;
  for (std::size_t i = 0; i < out.constants.size(); ++i) register_names.push_back("_c" + std::to_string(i));
  Raq a = add_control_variables(input, out.constants, register_names);
  auto slot = [&](const Rational& v) {
    return input.k + static_cast<int>(std::lower_bound(out.constants.begin(), out.constants.end(), v) -
                                      out.constants.begin());
  };
  for (auto& t : a.transitions)
    t.guard = substitute(t.guard, [&](const Operand& o) { return o.is_constant() ? Operand::x(slot(o.value)) : o; });

  int k = a.k;
  auto outgoing = a.outgoing();
  Raq& r = out.automaton;
  r.k = k;
  r.l = a.l;
  r.initial_values = a.initial_values;
  r.control_names = a.control_labels();
  r.data_names = a.data_names;

  std::map<std::pair<int, Preorder>, int> index;
  std::deque<std::pair<int, Preorder>> work;
  auto state_of = [&](int q, const Preorder& p) {
    auto [it, fresh] = index.emplace(std::make_pair(q, p), static_cast<int>(out.preorder.size()));
    if (fresh) {
      out.preorder.push_back(p);
      out.origin_state.push_back(q);
      r.states.push_back(a.states[q] + "|" + to_string(p, r.control_names));
      work.emplace_back(q, p);
    }
    return it->second;
  };
  int q0 = a.state_index(a.initial);
  r.initial = r.states[state_of(q0, preorder_of(QVector(a.initial_values.head(k))))];

  while (!work.empty()) {
    auto [q, p] = work.front();
    work.pop_front();
    int source = index.at({q, p});
    int classes = p.classes();
    std::vector<int> rep(classes);
    for (int c = 0; c < classes; ++c) rep[c] = p.members(c).front();
    std::vector<Placement> placements;
    for (int c = 0; c < classes; ++c) placements.push_back({true, c});
    for (int g = 0; g <= classes; ++g) placements.push_back({false, g});

    for (int ti : outgoing[q]) {
      const Transition& t = a.transitions[ti];
      for (const Placement& pl : placements) {
        std::vector<int> raw(k + 1);
        for (int i = 0; i < k; ++i) raw[i] = 2 * p.rank[i] + 1;
        raw[k] = pl.bound ? 2 * pl.index + 1 : 2 * pl.index;
        Preorder with_cur = densify(raw);
        if (!eval_guard_under(t.guard, with_cur, k)) continue;

        Guard g = Guard::top();
        GuardForm form;
        int form_class;
        Operand cur = Operand::current();
        if (pl.bound) {
          form = GuardForm::equal;
          form_class = pl.index;
          g = Guard::eq(cur, Operand::x(rep[pl.index]));
        } else if (pl.index == 0) {
          form = GuardForm::below;
          form_class = 0;
          g = Guard::le(cur, Operand::x(rep[0]));
        } else if (pl.index == classes) {
          form = GuardForm::above;
          form_class = classes - 1;
          g = Guard::le(Operand::x(rep[classes - 1]), cur);
        } else {
          form = GuardForm::between;
          form_class = pl.index - 1;
          g = Guard::conj({Guard::le(Operand::x(rep[pl.index - 1]), cur), Guard::le(cur, Operand::x(rep[pl.index]))});
        }

        std::vector<int> next(k);
        for (int i = 0; i < k; ++i) next[i] = with_cur.rank[t.update.control_source[i]];
        int target = state_of(a.state_index(t.target), densify(next));
        r.transitions.push_back({r.states[source], g, r.states[target], t.update});
        out.origin_transition.push_back(ti);
        out.form.push_back(form);
        out.form_class.push_back(form_class);
      }
    }
  }
  for (std::size_t s = 0; s < r.states.size(); ++s) {
    const std::string& q = a.states[out.origin_state[s]];
    if (a.is_final(q)) {
      r.finals.push_back(r.states[s]);
      r.outputs[r.states[s]] = a.outputs.at(q);
    }
  }
  r.validate();
  return out;
}

}  // namespace raq
