#include "raq/guard.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace raq {

bool Operand::operator==(const Operand& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::control) return index == o.index;
  if (kind == Kind::constant) return value == o.value;
  return true;
}

bool Operand::operator<(const Operand& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (kind == Kind::control) return index < o.index;
  if (kind == Kind::constant) return value < o.value;
  return false;
}

Guard Guard::atom(Atom a) {
  Guard g(Op::atom);
  g.atom_ = std::move(a);
  return g;
}

Guard Guard::conj(std::vector<Guard> args) {
  if (args.empty()) return top();
  if (args.size() == 1) return std::move(args.front());
  Guard g(Op::conj);
  g.args_ = std::move(args);
  return g;
}

Guard Guard::disj(std::vector<Guard> args) {
  if (args.empty()) return bottom();
  if (args.size() == 1) return std::move(args.front());
  Guard g(Op::disj);
  g.args_ = std::move(args);
  return g;
}

Guard Guard::negate(Guard inner) {
  Guard g(Op::neg);
  g.args_.push_back(std::move(inner));
  return g;
}

bool eval_guard(const Guard& g, std::span<const Rational> control, const Rational& cur) {
  return evaluate(g, [&](const Operand& o) -> const Rational& {
    switch (o.kind) {
      case Operand::Kind::control:
        if (o.index < 0 || static_cast<std::size_t>(o.index) >= control.size())
          throw UsageError("guard refers to x" + std::to_string(o.index + 1) + " which does not exist");
        return control[o.index];
      case Operand::Kind::cur: return cur;
      case Operand::Kind::constant: return o.value;
    }
    return cur;
  });
}

bool eval_guard(const Guard& g, const QVector& control, const Rational& cur) {
  return eval_guard(g, std::span<const Rational>(control.data(), static_cast<std::size_t>(control.size())), cur);
}

bool eval_guard_under(const Guard& g, const Preorder& p, int cur_element) {
  return evaluate(g, [&](const Operand& o) {
    if (o.is_constant()) throw UsageError("rank evaluation of a guard with constants");
    int e = o.is_cur() ? cur_element : o.index;
    if (e < 0 || e >= p.size()) throw UsageError("guard variable outside the ordering");
    return p.rank[e];
  });
}

Guard to_nnf(const Guard& g) {
  switch (g.op()) {
    case Guard::Op::top:
    case Guard::Op::bottom:
    case Guard::Op::atom: return g;
    case Guard::Op::conj:
    case Guard::Op::disj: {
      std::vector<Guard> args;
      for (const auto& a : g.args()) args.push_back(to_nnf(a));
      return g.op() == Guard::Op::conj ? Guard::conj(std::move(args)) : Guard::disj(std::move(args));
    }
    case Guard::Op::neg: {
      const Guard& inner = g.args().front();
      switch (inner.op()) {
        case Guard::Op::top: return Guard::bottom();
        case Guard::Op::bottom: return Guard::top();
        case Guard::Op::atom:
          // ¬(a ≤ b) is b < a and ¬(a < b) is b ≤ a.
          return Guard::atom({inner.atom().right, inner.atom().left, !inner.atom().strict});
        case Guard::Op::neg: return to_nnf(inner.args().front());
        case Guard::Op::conj:
        case Guard::Op::disj: {
          std::vector<Guard> args;
          for (const auto& a : inner.args()) args.push_back(to_nnf(Guard::negate(a)));
          return inner.op() == Guard::Op::conj ? Guard::disj(std::move(args)) : Guard::conj(std::move(args));
        }
      }
    }
  }
  return g;
}

namespace {

// Conjunction of atoms, consistent over the rationals iff the constraint graph
// (edge a→b for a ≤ b, marked when strict) has no cycle through a marked edge.
class ConstraintSet {
 public:
  int node(const Operand& o) {
    return ids_.emplace(o, static_cast<int>(ids_.size())).first->second;
  }

  void add(const Atom& a) {
    int l = node(a.left), r = node(a.right);
    edges_.push_back({l, r, a.strict});
  }

  bool consistent() const {
    int n = static_cast<int>(ids_.size());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) reach[i][i] = 1;
    for (const auto& e : edges_) reach[e.from][e.to] = 1;
    // constants are ordered among themselves
    std::vector<std::pair<Rational, int>> constants;
    for (const auto& [o, id] : ids_)
      if (o.is_constant()) constants.emplace_back(o.value, id);
    for (const auto& [va, a] : constants)
      for (const auto& [vb, b] : constants)
        if (va <= vb) reach[a][b] = 1;
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        if (reach[i][m])
          for (int j = 0; j < n; ++j)
            if (reach[m][j]) reach[i][j] = 1;
    for (const auto& e : edges_)
      if (e.strict && reach[e.to][e.from]) return false;
    for (const auto& [va, a] : constants)
      for (const auto& [vb, b] : constants)
        if (va < vb && reach[b][a]) return false;
    return true;
  }

  std::size_t mark() const { return edges_.size(); }
  void rollback(std::size_t m) {
    edges_.resize(m);
  }

 private:
  struct Edge {
    int from, to;
    bool strict;
  };
  std::map<Operand, int> ids_;
  std::vector<Edge> edges_;
};

// Tableau over an NNF guard: branch on disjunctions, prune on inconsistency.
bool satisfiable(std::vector<const Guard*> pending, ConstraintSet& cs) {
  while (!pending.empty()) {
    const Guard* g = pending.back();
    pending.pop_back();
    switch (g->op()) {
      case Guard::Op::top: break;
      case Guard::Op::bottom: return false;
      case Guard::Op::atom:
        cs.add(g->atom());
        if (!cs.consistent()) return false;
        break;
      case Guard::Op::conj:
        for (const auto& a : g->args()) pending.push_back(&a);
        break;
      case Guard::Op::disj:
        for (const auto& a : g->args()) {
          auto mark = cs.mark();
          auto branch = pending;
          branch.push_back(&a);
          if (satisfiable(std::move(branch), cs)) return true;
          cs.rollback(mark);
        }
        return false;
      case Guard::Op::neg: throw std::logic_error("negation left after NNF");
    }
  }
  return true;
}

}  // namespace

bool guard_satisfiable(const Guard& g, const Preorder* fixed) {
  ConstraintSet cs;
  if (fixed && fixed->size() > 0) {
    int m = fixed->size();
    auto operand = [&](int e) { return e == m - 1 ? Operand::current() : Operand::x(e); };
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a == b) continue;
        if (fixed->rank[a] < fixed->rank[b]) cs.add({operand(a), operand(b), true});
        else if (fixed->rank[a] == fixed->rank[b]) cs.add({operand(a), operand(b), false});
      }
    if (!cs.consistent()) return false;
  }
  Guard nnf = to_nnf(g);
  return satisfiable({&nnf}, cs);
}

Guard substitute(const Guard& g, const std::function<Operand(const Operand&)>& f) {
  switch (g.op()) {
    case Guard::Op::top:
    case Guard::Op::bottom: return g;
    case Guard::Op::atom: return Guard::atom({f(g.atom().left), f(g.atom().right), g.atom().strict});
    case Guard::Op::conj:
    case Guard::Op::disj: {
      std::vector<Guard> args;
      for (const auto& a : g.args()) args.push_back(substitute(a, f));
      return g.op() == Guard::Op::conj ? Guard::conj(std::move(args)) : Guard::disj(std::move(args));
    }
    case Guard::Op::neg: return Guard::negate(substitute(g.args().front(), f));
  }
  return g;
}

bool has_negation(const Guard& g) {
  if (g.op() == Guard::Op::neg) return true;
  return std::any_of(g.args().begin(), g.args().end(), [](const Guard& a) { return has_negation(a); });
}

bool has_strict_atom(const Guard& g) {
  if (g.op() == Guard::Op::atom) return g.atom().strict;
  return std::any_of(g.args().begin(), g.args().end(), [](const Guard& a) { return has_strict_atom(a); });
}

void collect_constants(const Guard& g, std::set<Rational>& out) {
  if (g.op() == Guard::Op::atom) {
    if (g.atom().left.is_constant()) out.insert(g.atom().left.value);
    if (g.atom().right.is_constant()) out.insert(g.atom().right.value);
  }
  for (const auto& a : g.args()) collect_constants(a, out);
}

int max_control_index(const Guard& g) {
  int m = -1;
  if (g.op() == Guard::Op::atom) {
    if (g.atom().left.is_control()) m = std::max(m, g.atom().left.index);
    if (g.atom().right.is_control()) m = std::max(m, g.atom().right.index);
  }
  for (const auto& a : g.args()) m = std::max(m, max_control_index(a));
  return m;
}

std::string to_string(const Operand& o, std::span<const std::string> names) {
  switch (o.kind) {
    case Operand::Kind::control:
      if (static_cast<std::size_t>(o.index) < names.size() && !names[o.index].empty()) return names[o.index];
      return "x" + std::to_string(o.index + 1);
    case Operand::Kind::cur: return "cur";
    case Operand::Kind::constant: return to_string(o.value);
  }
  return "?";
}

std::string to_string(const Guard& g, std::span<const std::string> names) {
  switch (g.op()) {
    case Guard::Op::top: return "true";
    case Guard::Op::bottom: return "false";
    case Guard::Op::atom:
      return to_string(g.atom().left, names) + (g.atom().strict ? " < " : " <= ") + to_string(g.atom().right, names);
    case Guard::Op::conj:
    case Guard::Op::disj: {
      std::string sep = g.op() == Guard::Op::conj ? " && " : " || ";
      std::string out;
      for (std::size_t i = 0; i < g.args().size(); ++i) {
        if (i) out += sep;
        const Guard& a = g.args()[i];
        bool paren = a.op() == Guard::Op::conj || a.op() == Guard::Op::disj;
        out += paren ? "(" + to_string(a, names) + ")" : to_string(a, names);
      }
      return out;
    }
    case Guard::Op::neg: return "!(" + to_string(g.args().front(), names) + ")";
  }
  return "?";
}

namespace {

class GuardParser {
 public:
  GuardParser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  Guard parse() {
    Guard g = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw UsageError("guard '" + std::string(text_) + "': " + why);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    // keywords must not run into an identifier
    if (std::isalpha(static_cast<unsigned char>(token.front()))) {
      std::size_t end = pos_ + token.size();
      if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        return false;
    }
    pos_ += token.size();
    return true;
  }

  Guard parse_or() {
    std::vector<Guard> args{parse_and()};
    while (accept("||") || accept("or")) args.push_back(parse_and());
    return Guard::disj(std::move(args));
  }

  Guard parse_and() {
    std::vector<Guard> args{parse_unary()};
    while (accept("&&") || accept("and")) args.push_back(parse_unary());
    return Guard::conj(std::move(args));
  }

  Guard parse_unary() {
    if (accept("!=")) fail("misplaced '!='");
    if (accept("!") || accept("not")) return Guard::negate(parse_unary());
    if (accept("(")) {
      Guard g = parse_or();
      if (!accept(")")) fail("missing ')'");
      return g;
    }
    if (accept("true")) return Guard::top();
    if (accept("false")) return Guard::bottom();
    return parse_chain();
  }

  Guard parse_chain() {
    Operand left = parse_operand();
    std::vector<Guard> parts;
    while (true) {
      std::string op = relation();
      if (op.empty()) break;
      Operand right = parse_operand();
      if (op == "<=") parts.push_back(Guard::le(left, right));
      else if (op == "<") parts.push_back(Guard::lt(left, right));
      else if (op == ">=") parts.push_back(Guard::le(right, left));
      else if (op == ">") parts.push_back(Guard::lt(right, left));
      else if (op == "=" || op == "==") parts.push_back(Guard::eq(left, right));
      else parts.push_back(Guard::negate(Guard::eq(left, right)));
      left = right;
    }
    if (parts.empty()) fail("expected a comparison");
    return Guard::conj(std::move(parts));
  }

  std::string relation() {
    for (std::string_view op : {"<=", ">=", "==", "!=", "<", ">", "="})
      if (accept(op)) return std::string(op);
    return {};
  }

  Operand parse_operand() {
    skip_space();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                     text_[pos_] == '\''))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "cur") return Operand::current();
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return Operand::x(static_cast<int>(i));
      if (name.size() > 1 && name[0] == 'x' &&
          std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        int i = std::stoi(name.substr(1));
        if (i < 1) fail("control variables are numbered from x1");
        return Operand::x(i - 1);
      }
      fail("unknown variable '" + name + "'");
    }
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' ||
                                   text_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) fail("expected an operand");
    return Operand::constant(parse_rational(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

Guard parse_guard(std::string_view text, std::span<const std::string> names) {
  return GuardParser(text, names).parse();
}

}  // namespace raq
