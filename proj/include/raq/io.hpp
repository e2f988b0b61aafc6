#pragma once

// JSON file formats for automata, affine programs and affine spaces.
// Rationals are written as "p/q" strings; integers are also accepted as
// JSON numbers. Parse errors carry the line of the offending value.

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "raq/affine_program.hpp"
#include "raq/automaton.hpp"

namespace raq {

using Json = nlohmann::ordered_json;

// Parsed document plus a map from JSON pointers to source lines.
class JsonSource {
 public:
  explicit JsonSource(std::string_view text);
  const Json& root() const { return root_; }
  int line_of(const std::string& pointer) const;
  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;

  Rational rational(const Json& v, const std::string& pointer) const;
  QVector vector(const Json& v, const std::string& pointer, Index expected = -1) const;
  QMatrix matrix(const Json& v, const std::string& pointer, Index rows, Index cols) const;
  const Json& field(const Json& obj, const std::string& pointer, const std::string& key) const;
  std::string string(const Json& v, const std::string& pointer) const;
  int integer(const Json& v, const std::string& pointer) const;

 private:
  Json root_;
  std::map<std::string, int> lines_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Json rational_json(const Rational& r);
Json vector_json(const QVector& v);
Json matrix_json(const QMatrix& m);

// Linear form over (x, y, cur) plus a constant, parsed from e.g. "16*y1 + 6".
struct LinearForm {
  QVector coeffs;  // length k + l + 1
  Rational constant;
};
LinearForm parse_linear(std::string_view text, std::span<const std::string> control_names,
                        std::span<const std::string> data_names);

Raq parse_raq(std::string_view text);
Raq load_raq(const std::string& path);
Json raq_to_json(const Raq& a);
std::string serialize_raq(const Raq& a);

Json guard_to_json(const Guard& g);

AffineProgram parse_ap(std::string_view text);
AffineProgram load_ap(const std::string& path);
std::string serialize_ap(const AffineProgram& p);

QAffineSpace space_from_json(const JsonSource& src, const Json& v, const std::string& pointer, Index n);
QAffineSpace parse_space(std::string_view text, Index n);
Json space_to_json(const QAffineSpace& s);

}  // namespace raq
