// Command-line front end. Exit codes: 0 when the answer is false (or the
// command only prints), 10 when it is true, 2 for usage and parse errors,
// 3 when a resource cap is hit.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "raq/circuit.hpp"
#include "raq/equivalence.hpp"
#include "raq/fixtures.hpp"
#include "raq/io.hpp"
#include "raq/nonzero.hpp"
#include "raq/ordering.hpp"
#include "raq/reach.hpp"

namespace {

using namespace raq;

constexpr int exit_false = 0;
constexpr int exit_true = 10;
constexpr int exit_usage = 2;
constexpr int exit_resource = 3;

std::vector<Rational> parse_word(const std::string& text) {
  std::vector<Rational> w;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) w.push_back(parse_rational(item));
  return w;
}

Json word_json(std::span<const Rational> w) {
  Json out = Json::array();
  for (const auto& d : w) out.push_back(rational_json(d));
  return out;
}

Json set_json(const std::set<Rational>& s) {
  Json out = Json::array();
  for (const auto& d : s) out.push_back(rational_json(d));
  return out;
}

std::string set_text(const std::set<Rational>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& d : s) {
    out += (first ? "" : ", ") + to_string(d);
    first = false;
  }
  return out + "}";
}

Json stats_json(const NonZeroStats& s) {
  Json dims = Json::object();
  for (const auto& [d, count] : s.hull_dims) dims[std::to_string(d)] = count;
  return {{"ap_states", s.ap_states}, {"ap_transitions", s.ap_transitions}, {"explored", s.explored},
          {"hull_dims", dims}};
}

Json classification_json(const Raq& a) {
  Classification c = classify(a);
  Json read_only = Json::array();
  auto labels = a.control_labels();
  for (int i = 0; i < a.k; ++i)
    if (c.read_only[i]) read_only.push_back(labels[i]);
  return {{"deterministic", c.deterministic}, {"complete", c.complete}, {"copyless", c.copyless},
          {"non_strict", c.non_strict}, {"read_only", read_only}};
}

int print(const Json& j, bool answer) {
  std::cout << j.dump(2) << "\n";
  return answer ? exit_true : exit_false;
}

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for register automata over the rationals"};
  app.require_subcommand(1);

  std::string file, file2, word, method = "karr", state, space_file, out, smt_out;
  std::size_t bound = 0, cap = 0, state_cap = 200000;
  bool solve = false, loops = false;
  std::string p_text;
  unsigned power_n = 0;
  int gen_k = 0, gen_l = 1, gen_n = 0;

  auto* run_cmd = app.add_subcommand("run", "Print the output set on a word");
  run_cmd->add_option("file", file)->required();
  run_cmd->add_option("--word", word, "Comma-separated rationals")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Deterministic, complete, copyless, non-strict, read-only");
  classify_cmd->add_option("file", file)->required();

  auto* nonzero_cmd = app.add_subcommand("nonzero", "Is some output nonzero? (10 = yes)");
  nonzero_cmd->add_option("file", file)->required();
  nonzero_cmd->add_option("--method", method)->check(CLI::IsMember({"karr", "copyless", "brute"}));
  nonzero_cmd->add_option("--bound", bound, "Word length bound for brute and copyless (default: small-model bound)");
  nonzero_cmd->add_option("--cap", cap, "Configuration cap for brute and copyless");

  auto* invariant_cmd = app.add_subcommand("invariant", "Do all configurations at a state lie in an affine space? (10 = yes)");
  invariant_cmd->add_option("file", file)->required();
  invariant_cmd->add_option("--state", state)->required();
  invariant_cmd->add_option("--space", space_file)->required();

  auto* equiv_cmd = app.add_subcommand("equiv", "Equivalence of two deterministic automata (10 = equivalent)");
  equiv_cmd->add_option("file1", file)->required();
  equiv_cmd->add_option("file2", file2)->required();

  auto* comm_cmd = app.add_subcommand("commutative", "Commutativity of a deterministic automaton (10 = commutative)");
  comm_cmd->add_option("file", file)->required();

  auto* reach_cmd = app.add_subcommand("reach", "Is 0 an output on some word? (10 = yes)");
  reach_cmd->add_option("file", file)->required();
  auto* emit_opt = reach_cmd->add_option("--emit-smt", smt_out, "Write the query as SMT-LIB instead of solving");
  reach_cmd->add_flag("--solve", solve, "Solve with the built-in solver (default)")->excludes(emit_opt);
  reach_cmd->add_option("--cap", cap, "Branch-and-bound node cap");
  reach_cmd->add_option("--state-cap", state_cap, "Q-VASS state cap");

  auto* compile_cmd = app.add_subcommand("compile-ac", "Compile an arithmetic circuit");
  compile_cmd->add_option("circuit", file)->required();
  compile_cmd->add_option("-o", out)->required();

  auto* power_cmd = app.add_subcommand("power", "Automaton outputting P^N on words of length N");
  power_cmd->add_option("p", p_text)->required();
  power_cmd->add_option("n", power_n)->required()->check(CLI::PositiveNumber);
  power_cmd->add_option("-o", out)->required();

  auto* stats_cmd = app.add_subcommand("stats", "Sizes and bounds");
  stats_cmd->add_option("file", file)->required();

  auto* gen_cmd = app.add_subcommand("gen-tightness", "Counter automaton family with long shortest witnesses");
  gen_cmd->add_option("k", gen_k)->required();
  gen_cmd->add_option("l", gen_l)->required();
  gen_cmd->add_option("n", gen_n)->required();
  gen_cmd->add_flag("--loops", loops, "Counter increments stay in their state");
  gen_cmd->add_option("-o", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (*run_cmd) {
      Raq a = load_raq(file);
      std::cout << set_text(run(a, parse_word(word))) << "\n";
      return exit_false;
    }
    if (*classify_cmd) return print(classification_json(load_raq(file)), false);
    if (*stats_cmd) {
      Raq a = load_raq(file);
      Integer orderings = Integer(1) << a.k;
      orderings *= factorial(a.k + 1);
      Json j{{"k", a.k},
             {"l", a.l},
             {"states", a.states.size()},
             {"transitions", a.transitions.size()},
             {"ordering_count", orderings.str()},
             {"small_model_bound", small_model_bound_raq(a)},
             {"classification", classification_json(a)}};
      return print(j, false);
    }
    if (*nonzero_cmd) {
      Raq a = load_raq(file);
      NonZeroVerdict v;
      if (method == "karr") {
        v = nonzero_exptime(a);
      } else if (method == "copyless") {
        CopylessOptions o;
        o.max_depth = bound;
        if (cap) o.cap = cap;
        v = nonzero_copyless(a, o);
      } else {
        BruteOptions o;
        if (cap) o.cap = cap;
        v = nonzero_brute(a, bound ? bound : small_model_bound_raq(a), o);
      }
      Json j{{"answer", v.answer}, {"method", v.method}, {"bound_used", v.bound_used}, {"stats", stats_json(v.stats)}};
      if (v.witness) j["witness"] = word_json(*v.witness);
      return print(j, v.answer);
    }
    if (*invariant_cmd) {
      Raq a = load_raq(file);
      auto load_space = [&] {
        try {
          return parse_space(read_file(space_file), a.n());
        } catch (const ParseError& e) {
          throw ParseError(space_file, e);
        }
      };
      NonZeroVerdict v = invariant_raq(a, state, load_space());
      Json j{{"answer", !v.answer}, {"method", v.method}, {"stats", stats_json(v.stats)}};
      if (v.witness) j["violation"] = word_json(*v.witness);
      return print(j, !v.answer);
    }
    if (*equiv_cmd) {
      EquivVerdict v = equivalent(load_raq(file), load_raq(file2));
      Json j{{"answer", v.equivalent}, {"stats", stats_json(v.stats)}};
      if (v.counterexample) j["counterexample"] = word_json(*v.counterexample);
      if (v.outputs) j["outputs_at_counterexample"] = {set_json(v.outputs->first), set_json(v.outputs->second)};
      return print(j, v.equivalent);
    }
    if (*comm_cmd) {
      CommutativityVerdict v = commutative(load_raq(file));
      Json j{{"answer", v.commutative}, {"stats", stats_json(v.stats)}};
      if (v.counterexample)
        j["counterexample"] = {word_json(v.counterexample->first), word_json(v.counterexample->second)};
      if (v.outputs) j["outputs_at_counterexample"] = {set_json(v.outputs->first), set_json(v.outputs->second)};
      return print(j, v.commutative);
    }
    if (*reach_cmd) {
      Raq a = load_raq(file);
      ReachOptions o;
      if (cap) o.node_cap = cap;
      o.state_cap = state_cap;
      if (!smt_out.empty()) {
        ReachPipeline p = reach_pipeline(a, o);
        write_file(smt_out, to_smtlib(p.query));
        Json j{{"smt", smt_out},
               {"qvass_states", p.qvass.states.size()},
               {"qvass_transitions", p.qvass.transitions.size()},
               {"query_variables", p.query.names.size()},
               {"query_constraints", p.query.constraints.size()}};
        return print(j, false);
      }
      ReachVerdict v = reach_zero(a, o);
      Json j{{"answer", v.reachable},
             {"stats",
              {{"normalized_states", v.stats.normalized_states},
               {"normalized_transitions", v.stats.normalized_transitions},
               {"qvass_states", v.stats.qvass_states},
               {"qvass_transitions", v.stats.qvass_transitions},
               {"query_variables", v.stats.query_variables},
               {"solver_nodes", v.stats.solver_nodes}}}};
      if (v.certificate) {
        Json c = Json::object();
        for (const auto& [label, count] : *v.certificate) c[label] = count.str();
        j["certificate"] = c;
      }
      return print(j, v.reachable);
    }
    if (*compile_cmd) {
      Circuit c = load_circuit(file);
      Raq a = compile_ac(c);
      write_file(out, serialize_raq(a));
      return print({{"value", eval_circuit(c).str()},
                    {"states", a.states.size()},
                    {"transitions", a.transitions.size()},
                    {"k", a.k},
                    {"l", a.l},
                    {"output", out}},
                   false);
    }
    if (*power_cmd) {
      Rational p = parse_rational(p_text);
      if (!is_integer(p)) throw UsageError("power: '" + p_text + "' is not an integer");
      Raq a = build_power_raq(numerator(p), power_n);
      write_file(out, serialize_raq(a));
      return print({{"states", a.states.size()}, {"transitions", a.transitions.size()}, {"k", a.k}, {"output", out}},
                   false);
    }
    if (*gen_cmd) {
      Raq a = tightness_raq(gen_k, gen_l, gen_n, loops);
      write_file(out, serialize_raq(a));
      return print({{"states", a.states.size()}, {"transitions", a.transitions.size()}, {"output", out}}, false);
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return exit_resource;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
