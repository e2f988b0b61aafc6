#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "raq/io.hpp"

namespace raq {

namespace {

std::string escape_pointer_token(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// Walks the raw text once and records the line on which every value starts.
std::map<std::string, int> value_lines(std::string_view text) {
  struct Frame {
    bool array;
    int index;
    std::string key;
  };
  std::map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;
  bool expecting_key = false;
  auto path = [&]() {
    std::string p;
    for (const auto& f : stack) p += "/" + (f.array ? std::to_string(f.index) : escape_pointer_token(f.key));
    return p;
  };
  auto record = [&]() { lines.emplace(path(), line); };
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::string s;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) {
          s += text[i + 1];
          i += 2;
          continue;
        }
        if (text[i] == '\n') ++line;
        s += text[i++];
      }
      ++i;
      if (!stack.empty() && !stack.back().array && expecting_key) {
        stack.back().key = s;
      } else {
        record();
      }
    } else if (c == '{' || c == '[') {
      record();
      stack.push_back({c == '[', 0, ""});
      expecting_key = c == '{';
      ++i;
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      expecting_key = false;
      ++i;
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().array) ++stack.back().index;
        else expecting_key = true;
      }
      ++i;
    } else if (c == ':') {
      expecting_key = false;
      ++i;
    } else {
      record();
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',' &&
             text[i] != '}' && text[i] != ']')
        ++i;
    }
  }
  return lines;
}

}  // namespace

JsonSource::JsonSource(std::string_view text) {
  try {
    root_ = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    int line = 1;
    std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < upto; ++i)
      if (text[i] == '\n') ++line;
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError("invalid JSON: " + what, line);
  }
  lines_ = value_lines(text);
}

int JsonSource::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    if (auto it = lines_.find(p); it != lines_.end()) return it->second;
    if (p.empty()) return 0;
    p = p.substr(0, p.rfind('/'));
  }
}

void JsonSource::fail(const std::string& pointer, const std::string& message) const {
  throw ParseError((pointer.empty() ? std::string("document") : pointer) + ": " + message, line_of(pointer));
}

Rational JsonSource::rational(const Json& v, const std::string& pointer) const {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const UsageError& e) {
      fail(pointer, e.what());
    }
  }
  fail(pointer, "expected a rational (string \"p/q\" or an integer)");
}

QVector JsonSource::vector(const Json& v, const std::string& pointer, Index expected) const {
  if (!v.is_array()) fail(pointer, "expected an array");
  if (expected >= 0 && static_cast<Index>(v.size()) != expected)
    fail(pointer, "expected " + std::to_string(expected) + " entries, found " + std::to_string(v.size()));
  QVector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Index>(i)] = rational(v[i], pointer + "/" + std::to_string(i));
  return out;
}

QMatrix JsonSource::matrix(const Json& v, const std::string& pointer, Index rows, Index cols) const {
  if (!v.is_array() || static_cast<Index>(v.size()) != rows)
    fail(pointer, "expected " + std::to_string(rows) + " rows");
  QMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    std::string rp = pointer + "/" + std::to_string(i);
    m.row(i) = vector(v[static_cast<std::size_t>(i)], rp, cols).transpose();
  }
  return m;
}

const Json& JsonSource::field(const Json& obj, const std::string& pointer, const std::string& key) const {
  if (!obj.is_object()) fail(pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(pointer, "missing field '" + key + "'");
  return *it;
}

std::string JsonSource::string(const Json& v, const std::string& pointer) const {
  if (!v.is_string()) fail(pointer, "expected a string");
  return v.get<std::string>();
}

int JsonSource::integer(const Json& v, const std::string& pointer) const {
  if (!v.is_number_integer()) fail(pointer, "expected an integer");
  return v.get<int>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << contents;
}

Json rational_json(const Rational& r) { return to_string(r); }

Json vector_json(const QVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(rational_json(v[i]));
  return out;
}

Json matrix_json(const QMatrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

LinearForm parse_linear(std::string_view text, std::span<const std::string> control, std::span<const std::string> data) {
  Index k = static_cast<Index>(control.size()), l = static_cast<Index>(data.size());
  LinearForm f{QVector::Zero(k + l + 1), Rational(0)};
  auto fail = [&](const std::string& why) { throw UsageError("expression '" + std::string(text) + "': " + why); };
  std::size_t i = 0;
  auto skip = [&]() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool first = true;
  while (true) {
    skip();
    if (i == text.size()) {
      if (first) fail("empty expression");
      break;
    }
    Rational sign(1);
    if (text[i] == '+' || text[i] == '-') {
      if (text[i] == '-') sign = -1;
      ++i;
      skip();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    Rational coeff(1);
    bool have_number = false;
    std::size_t start = i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/' || text[i] == '.')) ++i;
    if (i > start) {
      coeff = parse_rational(text.substr(start, i - start));
      have_number = true;
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      }
    }
    start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\'')) ++i;
    std::string name(text.substr(start, i - start));
    if (name.empty()) {
      if (!have_number) fail("expected a term");
      f.constant += sign * coeff;
      continue;
    }
    Index slot = -1;
    if (name == "cur") slot = k + l;
    for (Index j = 0; j < k && slot < 0; ++j)
      if (control[static_cast<std::size_t>(j)] == name) slot = j;
    for (Index j = 0; j < l && slot < 0; ++j)
      if (data[static_cast<std::size_t>(j)] == name) slot = k + j;
    if (slot < 0) fail("unknown variable '" + name + "'");
    f.coeffs[slot] += sign * coeff;
  }
  return f;
}

namespace {

std::vector<std::string> data_labels(const Raq& a) {
  std::vector<std::string> names;
  for (int j = 0; j < a.l; ++j)
    names.push_back(static_cast<std::size_t>(j) < a.data_names.size() ? a.data_names[j] : "y" + std::to_string(j + 1));
  return names;
}

Operand operand_from_json(const JsonSource& src, const Json& v, const std::string& ptr,
                          std::span<const std::string> names) {
  if (v.is_number_integer()) return Operand::constant(Rational(v.get<long long>()));
  std::string s = src.string(v, ptr);
  try {
    Guard g = parse_guard(s + " <= 0", names);
    return g.atom().left;
  } catch (const UsageError& e) {
    src.fail(ptr, "bad operand '" + s + "'");
  }
}

Guard guard_from_json(const JsonSource& src, const Json& v, const std::string& ptr,
                      std::span<const std::string> names) {
  if (v.is_boolean()) return v.get<bool>() ? Guard::top() : Guard::bottom();
  if (v.is_string()) {
    try {
      return parse_guard(v.get<std::string>(), names);
    } catch (const UsageError& e) {
      src.fail(ptr, e.what());
    }
  }
  if (!v.is_object() || v.size() != 1) src.fail(ptr, "a guard is a string, a boolean or a one-key object");
  const std::string& op = v.begin().key();
  const Json& arg = v.begin().value();
  std::string ap = ptr + "/" + op;
  if (op == "not") return Guard::negate(guard_from_json(src, arg, ap, names));
  if (op == "and" || op == "or") {
    if (!arg.is_array()) src.fail(ap, "expected an array of guards");
    std::vector<Guard> args;
    for (std::size_t i = 0; i < arg.size(); ++i)
      args.push_back(guard_from_json(src, arg[i], ap + "/" + std::to_string(i), names));
    return op == "and" ? Guard::conj(std::move(args)) : Guard::disj(std::move(args));
  }
  if (!arg.is_array() || arg.size() != 2) src.fail(ap, "a comparison takes two operands");
  Operand a = operand_from_json(src, arg[0], ap + "/0", names);
  Operand b = operand_from_json(src, arg[1], ap + "/1", names);
  if (op == "le") return Guard::le(a, b);
  if (op == "lt") return Guard::lt(a, b);
  if (op == "ge") return Guard::le(b, a);
  if (op == "gt") return Guard::lt(b, a);
  if (op == "eq") return Guard::eq(a, b);
  src.fail(ptr, "unknown guard operator '" + op + "'");
}

std::vector<std::string> string_list(const JsonSource& src, const Json& v, const std::string& ptr) {
  if (!v.is_array()) src.fail(ptr, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(src.string(v[i], ptr + "/" + std::to_string(i)));
  return out;
}

}  // namespace

Json guard_to_json(const Guard& g) {
  auto operand = [](const Operand& o) -> Json {
    if (o.is_constant()) return to_string(o.value);
    return to_string(o);
  };
  switch (g.op()) {
    case Guard::Op::top: return true;
    case Guard::Op::bottom: return false;
    case Guard::Op::atom:
      return Json{{g.atom().strict ? "lt" : "le", Json::array({operand(g.atom().left), operand(g.atom().right)})}};
    case Guard::Op::conj:
    case Guard::Op::disj: {
      Json args = Json::array();
      for (const auto& a : g.args()) args.push_back(guard_to_json(a));
      return Json{{g.op() == Guard::Op::conj ? "and" : "or", args}};
    }
    case Guard::Op::neg: return Json{{"not", guard_to_json(g.args().front())}};
  }
  return true;
}

Raq parse_raq(std::string_view text) {
  JsonSource src(text);
  const Json& root = src.root();
  if (!root.is_object()) src.fail("", "an automaton is a JSON object");
  Raq a;
  a.states = string_list(src, src.field(root, "", "states"), "/states");
  a.initial = src.string(src.field(root, "", "initial"), "/initial");
  a.finals = string_list(src, src.field(root, "", "finals"), "/finals");
  a.k = src.integer(src.field(root, "", "k"), "/k");
  a.l = src.integer(src.field(root, "", "l"), "/l");
  if (a.k < 0 || a.l < 0) src.fail("/k", "variable counts must be non-negative");
  if (root.contains("control_names")) a.control_names = string_list(src, root["control_names"], "/control_names");
  if (root.contains("data_names")) a.data_names = string_list(src, root["data_names"], "/data_names");
  if (!a.control_names.empty() && static_cast<int>(a.control_names.size()) != a.k)
    src.fail("/control_names", "must name all " + std::to_string(a.k) + " control variables");
  if (!a.data_names.empty() && static_cast<int>(a.data_names.size()) != a.l)
    src.fail("/data_names", "must name all " + std::to_string(a.l) + " data variables");
  std::vector<std::string> xnames = a.control_labels(), ynames = data_labels(a);
  std::set<std::string> states(a.states.begin(), a.states.end());
  if (states.size() != a.states.size()) src.fail("/states", "duplicate state name");
  if (!states.count(a.initial)) src.fail("/initial", "'" + a.initial + "' is not a declared state");
  for (std::size_t i = 0; i < a.finals.size(); ++i)
    if (!states.count(a.finals[i])) src.fail("/finals/" + std::to_string(i), "'" + a.finals[i] + "' is not a declared state");

  a.initial_values = root.contains("u0") ? src.vector(root["u0"], "/u0", a.k + a.l) : QVector::Zero(a.k + a.l);

  const Json& ts = src.field(root, "", "transitions");
  if (!ts.is_array()) src.fail("/transitions", "expected an array");
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    std::string tp = "/transitions/" + std::to_string(ti);
    const Json& tj = ts[ti];
    Transition t;
    t.source = src.string(src.field(tj, tp, "source"), tp + "/source");
    t.target = src.string(src.field(tj, tp, "target"), tp + "/target");
    if (!states.count(t.source)) src.fail(tp + "/source", "'" + t.source + "' is not a declared state");
    if (!states.count(t.target)) src.fail(tp + "/target", "'" + t.target + "' is not a declared state");
    t.guard = tj.contains("guard") ? guard_from_json(src, tj["guard"], tp + "/guard", xnames) : Guard::top();
    if (max_control_index(t.guard) >= a.k) src.fail(tp + "/guard", "mentions an undeclared control variable");
    t.update = Reassignment::identity(a.k, a.l);
    if (tj.contains("assign")) {
      if (tj.contains("A") || tj.contains("B") || tj.contains("b"))
        src.fail(tp + "/assign", "use either 'assign' or A/B/b, not both");
      const Json& as = tj["assign"];
      if (!as.is_object()) src.fail(tp + "/assign", "expected an object mapping variables to expressions");
      for (auto it = as.begin(); it != as.end(); ++it) {
        std::string ap = tp + "/assign/" + escape_pointer_token(it.key());
        std::string expr = src.string(it.value(), ap);
        auto xi = std::find(xnames.begin(), xnames.end(), it.key());
        auto yi = std::find(ynames.begin(), ynames.end(), it.key());
        if (xi != xnames.end()) {
          std::string e = expr;
          e.erase(std::remove_if(e.begin(), e.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                  e.end());
          int src_index = -1;
          if (e == "cur") src_index = a.k;
          for (int j = 0; j < a.k && src_index < 0; ++j)
            if (xnames[j] == e) src_index = j;
          if (src_index < 0) src.fail(ap, "a control variable can only copy another control variable or cur");
          t.update.control_source[xi - xnames.begin()] = src_index;
        } else if (yi != ynames.end()) {
          LinearForm f;
          try {
            f = parse_linear(expr, xnames, ynames);
          } catch (const UsageError& e) {
            src.fail(ap, e.what());
          }
          Index row = yi - ynames.begin();
          t.update.data_matrix.row(row) = f.coeffs.transpose();
          t.update.data_offset[row] = f.constant;
        } else {
          src.fail(ap, "unknown variable '" + it.key() + "'");
        }
      }
    } else {
      if (tj.contains("A")) {
        const Json& aj = tj["A"];
        if (!aj.is_array() || static_cast<int>(aj.size()) != a.k)
          src.fail(tp + "/A", "expected " + std::to_string(a.k) + " row indices");
        for (int i = 0; i < a.k; ++i) {
          int v = src.integer(aj[i], tp + "/A/" + std::to_string(i));
          if (v < 1 || v > a.k + 1)
            src.fail(tp + "/A/" + std::to_string(i),
                     "index " + std::to_string(v) + " out of range 1.." + std::to_string(a.k + 1));
          t.update.control_source[i] = v - 1;
        }
      }
      if (tj.contains("B")) t.update.data_matrix = src.matrix(tj["B"], tp + "/B", a.l, a.k + a.l + 1);
      if (tj.contains("b")) t.update.data_offset = src.vector(tj["b"], tp + "/b", a.l);
    }
    a.transitions.push_back(std::move(t));
  }

  const Json& outs = src.field(root, "", "outputs");
  if (!outs.is_object()) src.fail("/outputs", "expected an object keyed by final state");
  for (auto it = outs.begin(); it != outs.end(); ++it) {
    std::string op = "/outputs/" + escape_pointer_token(it.key());
    if (!a.is_final(it.key())) src.fail(op, "'" + it.key() + "' is not a final state");
    OutputFunction z = OutputFunction::zero(a.k, a.l);
    if (it.value().is_string()) {
      LinearForm f;
      try {
        f = parse_linear(it.value().get<std::string>(), xnames, ynames);
      } catch (const UsageError& e) {
        src.fail(op, e.what());
      }
      if (f.coeffs[a.k + a.l] != 0) src.fail(op, "an output cannot depend on cur");
      z.control_coeffs = f.coeffs.head(a.k);
      z.data_coeffs = f.coeffs.segment(a.k, a.l);
      z.constant = f.constant;
    } else {
      const Json& oj = it.value();
      if (oj.contains("a")) z.control_coeffs = src.vector(oj["a"], op + "/a", a.k);
      if (oj.contains("b")) z.data_coeffs = src.vector(oj["b"], op + "/b", a.l);
      if (oj.contains("c")) z.constant = src.rational(oj["c"], op + "/c");
    }
    a.outputs[it.key()] = z;
  }
  for (std::size_t i = 0; i < a.finals.size(); ++i)
    if (!a.outputs.count(a.finals[i]))
      src.fail("/finals/" + std::to_string(i), "final state '" + a.finals[i] + "' has no output function");
  a.validate();
  return a;
}

Raq load_raq(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_raq(text);
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

Json raq_to_json(const Raq& a) {
  Json j;
  j["states"] = a.states;
  j["initial"] = a.initial;
  j["finals"] = a.finals;
  j["k"] = a.k;
  j["l"] = a.l;
  if (!a.control_names.empty()) j["control_names"] = a.control_names;
  if (!a.data_names.empty()) j["data_names"] = a.data_names;
  j["u0"] = vector_json(a.initial_values);
  Json ts = Json::array();
  for (const auto& t : a.transitions) {
    Json tj;
    tj["source"] = t.source;
    tj["guard"] = guard_to_json(t.guard);
    tj["target"] = t.target;
    Json aj = Json::array();
    for (int s : t.update.control_source) aj.push_back(s + 1);
    tj["A"] = aj;
    tj["B"] = matrix_json(t.update.data_matrix);
    tj["b"] = vector_json(t.update.data_offset);
    ts.push_back(tj);
  }
  j["transitions"] = ts;
  Json outs = Json::object();
  for (const auto& f : a.finals) {
    const auto& z = a.outputs.at(f);
    outs[f] = Json{{"a", vector_json(z.control_coeffs)}, {"b", vector_json(z.data_coeffs)}, {"c", rational_json(z.constant)}};
  }
  j["outputs"] = outs;
  return j;
}

std::string serialize_raq(const Raq& a) { return raq_to_json(a).dump(2) + "\n"; }

AffineProgram parse_ap(std::string_view text) {
  JsonSource src(text);
  const Json& root = src.root();
  AffineProgram p;
  p.states = string_list(src, src.field(root, "", "states"), "/states");
  p.n = src.integer(src.field(root, "", "n"), "/n");
  if (p.n < 0) src.fail("/n", "dimension must be non-negative");
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < p.states.size(); ++i)
    if (!index.emplace(p.states[i], static_cast<int>(i)).second) src.fail("/states", "duplicate state name");
  auto state = [&](const Json& v, const std::string& ptr) {
    std::string s = src.string(v, ptr);
    auto it = index.find(s);
    if (it == index.end()) src.fail(ptr, "'" + s + "' is not a declared state");
    return it->second;
  };
  p.initial = state(src.field(root, "", "initial"), "/initial");
  const Json& ts = src.field(root, "", "transitions");
  if (!ts.is_array()) src.fail("/transitions", "expected an array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::string tp = "/transitions/" + std::to_string(i);
    ApTransition t;
    t.source = state(src.field(ts[i], tp, "source"), tp + "/source");
    t.target = state(src.field(ts[i], tp, "target"), tp + "/target");
    t.map.matrix = src.matrix(src.field(ts[i], tp, "M"), tp + "/M", p.n, p.n);
    t.map.offset = ts[i].contains("a") ? src.vector(ts[i]["a"], tp + "/a", p.n) : QVector::Zero(p.n);
    p.transitions.push_back(std::move(t));
  }
  p.validate();
  return p;
}

AffineProgram load_ap(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_ap(text);
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

std::string serialize_ap(const AffineProgram& p) {
  Json j;
  j["states"] = p.states;
  j["initial"] = p.states.at(p.initial);
  j["n"] = p.n;
  Json ts = Json::array();
  for (const auto& t : p.transitions)
    ts.push_back(Json{{"source", p.states.at(t.source)},
                      {"M", matrix_json(t.map.matrix)},
                      {"a", vector_json(t.map.offset)},
                      {"target", p.states.at(t.target)}});
  j["transitions"] = ts;
  return j.dump(2) + "\n";
}

QAffineSpace space_from_json(const JsonSource& src, const Json& v, const std::string& ptr, Index n) {
  if (!v.is_object()) src.fail(ptr, "an affine space is an object with anchor/basis or points");
  if (v.contains("points")) {
    const Json& pts = v["points"];
    if (!pts.is_array() || pts.empty()) src.fail(ptr + "/points", "expected a non-empty array of points");
    std::vector<QVector> points;
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(src.vector(pts[i], ptr + "/points/" + std::to_string(i), n));
    return QAffineSpace::from_points(points);
  }
  QVector anchor = src.vector(src.field(v, ptr, "anchor"), ptr + "/anchor", n);
  std::vector<QVector> basis;
  if (v.contains("basis")) {
    const Json& b = v["basis"];
    if (!b.is_array()) src.fail(ptr + "/basis", "expected an array of vectors");
    for (std::size_t i = 0; i < b.size(); ++i) basis.push_back(src.vector(b[i], ptr + "/basis/" + std::to_string(i), n));
  }
  try {
    return QAffineSpace::from_basis(anchor, basis);
  } catch (const UsageError& e) {
    src.fail(ptr + "/basis", e.what());
  }
}

QAffineSpace parse_space(std::string_view text, Index n) {
  JsonSource src(text);
  return space_from_json(src, src.root(), "", n);
}

Json space_to_json(const QAffineSpace& s) {
  Json basis = Json::array();
  for (const auto& b : s.basis()) basis.push_back(vector_json(b));
  return Json{{"anchor", vector_json(s.anchor())}, {"basis", basis}};
}

}  // namespace raq
