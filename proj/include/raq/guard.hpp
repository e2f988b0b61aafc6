#pragma once

// Guards: boolean combinations of comparisons z ≤ z' and z < z' between
// control variables, the current input and rational constants.

#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raq/exactq.hpp"
#include "raq/ordering.hpp"

namespace raq {

struct Operand {
  enum class Kind { control, cur, constant };
  Kind kind = Kind::cur;
  int index = 0;   // control variable, 0-based
  Rational value;  // constant

  static Operand x(int i) { return {Kind::control, i, Rational(0)}; }
  static Operand current() { return {Kind::cur, 0, Rational(0)}; }
  static Operand constant(Rational v) { return {Kind::constant, 0, std::move(v)}; }

  bool is_control() const { return kind == Kind::control; }
  bool is_cur() const { return kind == Kind::cur; }
  bool is_constant() const { return kind == Kind::constant; }

  bool operator==(const Operand& o) const;
  bool operator<(const Operand& o) const;
};

// left ≤ right, or left < right when strict.
struct Atom {
  Operand left;
  Operand right;
  bool strict = false;

  bool operator==(const Atom&) const = default;
};

class Guard {
 public:
  enum class Op { top, bottom, atom, conj, disj, neg };

  static Guard top() { return Guard(Op::top); }
  static Guard bottom() { return Guard(Op::bottom); }
  static Guard atom(Atom a);
  static Guard le(Operand a, Operand b) { return atom({std::move(a), std::move(b), false}); }
  static Guard lt(Operand a, Operand b) { return atom({std::move(a), std::move(b), true}); }
  static Guard eq(const Operand& a, const Operand& b) { return conj({le(a, b), le(b, a)}); }
  static Guard conj(std::vector<Guard> args);
  static Guard disj(std::vector<Guard> args);
  static Guard negate(Guard g);

  Op op() const { return op_; }
  const Atom& atom() const { return atom_; }
  const std::vector<Guard>& args() const { return args_; }

  bool operator==(const Guard&) const = default;

 private:
  explicit Guard(Op op) : op_(op) {}
  Op op_;
  Atom atom_;
  std::vector<Guard> args_;
};

// Generic evaluation; value_of maps an operand to anything totally ordered.
template <typename ValueOf>
bool evaluate(const Guard& g, const ValueOf& value_of) {
  switch (g.op()) {
    case Guard::Op::top: return true;
    case Guard::Op::bottom: return false;
    case Guard::Op::atom: {
      auto l = value_of(g.atom().left);
      auto r = value_of(g.atom().right);
      return g.atom().strict ? l < r : l <= r;
    }
    case Guard::Op::conj:
      for (const auto& a : g.args())
        if (!evaluate(a, value_of)) return false;
      return true;
    case Guard::Op::disj:
      for (const auto& a : g.args())
        if (evaluate(a, value_of)) return true;
      return false;
    case Guard::Op::neg: return !evaluate(g.args().front(), value_of);
  }
  return false;
}

bool eval_guard(const Guard& g, std::span<const Rational> control, const Rational& cur);
bool eval_guard(const Guard& g, const QVector& control, const Rational& cur);

// Evaluates a constant-free guard under a total preorder on X ∪ {cur}; the
// current input is element `cur_element` of the preorder.
bool eval_guard_under(const Guard& g, const Preorder& p, int cur_element);

// Exact satisfiability over the rationals. With `fixed`, the control
// variables and cur (element fixed->size()-1) must additionally respect it.
bool guard_satisfiable(const Guard& g, const Preorder* fixed = nullptr);

Guard to_nnf(const Guard& g);  // no negation nodes remain
Guard substitute(const Guard& g, const std::function<Operand(const Operand&)>& f);
bool has_negation(const Guard& g);
bool has_strict_atom(const Guard& g);
void collect_constants(const Guard& g, std::set<Rational>& out);
int max_control_index(const Guard& g);  // -1 when none

// control_names[i] names x_{i+1}; defaults to x1, x2, ...
std::string to_string(const Guard& g, std::span<const std::string> control_names = {});
std::string to_string(const Operand& o, std::span<const std::string> control_names = {});

// Infix syntax: comparisons (<=, <, >=, >, =, !=, chains allowed) over
// x1..xk, aliases, cur and rational literals, combined with && || ! and
// parentheses; true and false are literals.
Guard parse_guard(std::string_view text, std::span<const std::string> control_names = {});

}  // namespace raq
