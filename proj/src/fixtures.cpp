#include "raq/fixtures.hpp"

namespace raq {

Raq tightness_raq(int k, int l, int n, bool self_loops) {
  if (k < 0 || l < 1 || n < 0) throw UsageError("tightness_raq: need k >= 0, l >= 1, n >= 0");
  Raq a;
  a.k = k + 2;
  a.l = l;
  int zero = k, one = k + 1;
  for (int i = 0; i <= n; ++i) a.states.push_back("q" + std::to_string(i));
  a.initial = "q0";
  a.finals = {a.states.back()};
  for (int h = 0; h < k; ++h) a.control_names.push_back("x" + std::to_string(h + 1));
  a.control_names.push_back("zero");
  a.control_names.push_back("one");
  for (int j = 0; j < l; ++j) a.data_names.push_back("y" + std::to_string(j + 1));
  a.initial_values = QVector::Zero(a.k + l);
  a.initial_values[one] = 1;
  a.initial_values[a.k] = 1;

  auto equals = [](int x, int reg) { return Guard::eq(Operand::x(x), Operand::x(reg)); };
  for (int i = 0; i <= n; ++i) {
    const std::string& from = a.states[i];
    const std::string& next = a.states[(i + 1) % (n + 1)];

    std::vector<Guard> all_set;
    for (int h = 0; h < k; ++h) all_set.push_back(equals(h, one));
    Transition reset{from, Guard::conj(all_set), next, Reassignment::identity(a.k, l)};
    for (int h = 0; h < k; ++h) reset.update.control_source[h] = zero;
    reset.update.data_matrix = QMatrix::Zero(l, a.k + l + 1);
    for (int j = 0; j < l; ++j) reset.update.data_matrix(j, a.k + (j + l - 1) % l) = 1;
    a.transitions.push_back(std::move(reset));

    for (int j = 0; j < k; ++j) {
      std::vector<Guard> g{equals(j, zero)};
      for (int h = 0; h < j; ++h) g.push_back(equals(h, one));
      Transition inc{from, Guard::conj(g), self_loops ? from : next, Reassignment::identity(a.k, l)};
      for (int h = 0; h < j; ++h) inc.update.control_source[h] = zero;
      inc.update.control_source[j] = one;
      a.transitions.push_back(std::move(inc));
    }
  }
  OutputFunction z = OutputFunction::zero(a.k, l);
  z.data_coeffs[l - 1] = 1;
  a.outputs[a.finals.front()] = z;
  a.validate();
  return a;
}

}  // namespace raq
