#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include "support.hpp"

using namespace raq::test;

namespace {

struct Outcome {
  int code;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Outcome cli(const std::string& args) {
  std::string command = std::string(RAQ_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  std::array<char, 4096> buffer;
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe)) out.append(buffer.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

nlohmann::json json_of(const Outcome& o) { return nlohmann::json::parse(o.out); }

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "raq_cli_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run prints the output set") {
    Outcome o = cli("run " + fixture("min.raq") + " --word 5,2,7");
    CHECK(o.code == 0);
    CHECK(o.out == "{2}\n");
    CHECK(cli("run " + fixture("pcp_a13.raq") + " --word 1,2").out == "{0}\n");
  }

  TEST_CASE("classify and stats") {
    Outcome o = cli("classify " + fixture("pcp_a13.raq"));
    CHECK(o.code == 0);
    auto j = json_of(o);
    CHECK(j["copyless"] == false);
    CHECK(j["deterministic"] == true);
    auto s = json_of(cli("stats " + fixture("min.raq")));
    CHECK(s["ordering_count"] == "4");
    CHECK(s["small_model_bound"] == 16);
  }

  TEST_CASE("nonzero exit codes") {
    Outcome yes = cli("nonzero " + fixture("min.raq"));
    CHECK(yes.code == 10);
    auto j = json_of(yes);
    CHECK(j["answer"] == true);
    CHECK(j.contains("witness"));
    CHECK(cli("nonzero " + fixture("reach/const_zero.raq")).code == 0);
    CHECK(cli("nonzero " + fixture("min.raq") + " --method brute --bound 3").code == 10);
    CHECK(cli("nonzero " + fixture("sum.raq") + " --method copyless").code == 10);
  }

  TEST_CASE("invariant") {
    std::string space = temp_path("zero.space");
    raq::write_file(space, R"({"anchor": [0], "basis": []})");
    CHECK(cli("invariant " + fixture("sum.raq") + " --state q --space " + space).code == 0);
    raq::write_file(space, R"({"anchor": [0], "basis": [[1]]})");
    CHECK(cli("invariant " + fixture("sum.raq") + " --state q --space " + space).code == 10);
  }

  TEST_CASE("equivalence and commutativity") {
    CHECK(cli("equiv " + fixture("min.raq") + " " + fixture("min.raq")).code == 10);
    Outcome o = cli("equiv " + fixture("min.raq") + " " + fixture("first_element.raq"));
    CHECK(o.code == 0);
    CHECK(json_of(o).contains("counterexample"));
    CHECK(cli("commutative " + fixture("min.raq")).code == 10);
    CHECK(cli("commutative " + fixture("first_element.raq")).code == 0);
  }

  TEST_CASE("reach") {
    Outcome o = cli("reach " + fixture("reach/count_above_le.raq"));
    CHECK(o.code == 10);
    CHECK(json_of(o).contains("certificate"));
    CHECK(cli("reach " + fixture("reach/cancelling_corner.raq") + " --solve").code == 0);
    std::string smt = temp_path("q.smt2");
    Outcome e = cli("reach " + fixture("reach/nonneg_sum.raq") + " --emit-smt " + smt);
    CHECK(e.code == 0);
    std::string why;
    CHECK_MESSAGE(smt_well_formed(raq::read_file(smt), &why), why);
    Outcome bad = cli("reach " + fixture("pcp_a13.raq"));
    CHECK(bad.code == 2);
    CHECK(bad.out.find("not copyless") != std::string::npos);
  }

  TEST_CASE("compilers write automata") {
    std::string out = temp_path("fig1.raq");
    Outcome o = cli("compile-ac " + fixture("fig1.circuit") + " -o " + out);
    CHECK(o.code == 0);
    CHECK(json_of(o)["value"] == "108");
    CHECK(raq::evaluate_compiled(raq::load_raq(out)) == 108);
    std::string power = temp_path("power.raq");
    CHECK(cli("power 3 5 -o " + power).code == 0);
    CHECK(raq::run(raq::load_raq(power), {1, 1, 1, 1, 1}) == std::set<raq::Rational>{243});
    std::string gen = temp_path("gen.raq");
    CHECK(cli("gen-tightness 1 1 1 -o " + gen).code == 0);
    CHECK(raq::load_raq(gen).states.size() == 2);
  }

  TEST_CASE("usage and parse errors") {
    CHECK(cli("").code == 2);
    CHECK(cli("nonzero").code == 2);
    CHECK(cli("nonzero " + fixture("min.raq") + " --method nope").code == 2);
    CHECK(cli("power x 3 -o " + temp_path("p.raq")).code == 2);
    std::string broken = temp_path("broken.raq");
    raq::write_file(broken, "{\n  \"states\": [\"q0\"],\n  \"initial\": \"q7\",\n  \"finals\": [], \"k\": 0, \"l\": 0,\n"
                            "  \"transitions\": [], \"outputs\": {}\n}\n");
    Outcome o = cli("classify " + broken);
    CHECK(o.code == 2);
    CHECK(o.out.find(broken + ":3:") != std::string::npos);
    CHECK(cli("classify " + temp_path("missing.raq")).code == 2);
  }

  TEST_CASE("resource caps") {
    std::string gen = temp_path("big.raq");
    REQUIRE(cli("gen-tightness 2 3 1 -o " + gen).code == 0);
    CHECK(cli("nonzero " + gen + " --method brute --bound 40 --cap 5").code == 3);
  }
}
