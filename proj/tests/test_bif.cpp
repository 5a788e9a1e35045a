#include <doctest.h>

#include "chaininf/bif.hpp"
#include "support/fixtures.hpp"

using namespace chaininf;
using namespace chaininf::testing;

namespace {

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_bif(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

const char* kTwoNodes = R"(network tiny {
}
variable a {
  type discrete [ 2 ] { on, off };
}
variable b {
  type discrete [ 3 ] { lo, mid, hi };
  property weight = 3 ;
}
probability ( a ) {
  table 0.25, 0.75;
}
probability ( b | a ) {
  (off) 0.1, 0.2, 0.7;
  (on) 0.5, 0.25, 0.25;
}
)";

}  // namespace

TEST_CASE("minimal one-node network") {
  const auto net = parse_bif("network x {}\nvariable v { type discrete [ 2 ] { yes, no }; }\nprobability ( v ) { table 1.0, 0.0; }\n");
  REQUIRE(net.size() == 1);
  CHECK(net.node("v").is_root());
  CHECK(max_abs_diff(root_prior(net, "v").probs(), vec({1.0, 0.0})) == 0.0);
}

TEST_CASE("conditional rows are keyed by parent labels") {
  const auto net = parse_bif(kTwoNodes);
  CHECK(net.name() == "tiny");
  const auto& b = net.node("b");
  CHECK(b.parents == std::vector<std::string>{"a"});
  CHECK(max_abs_diff(b.cpt.row(0).transpose(), vec({0.5, 0.25, 0.25})) == 0.0);
  CHECK(max_abs_diff(b.cpt.row(1).transpose(), vec({0.1, 0.2, 0.7})) < 1e-15);
}

TEST_CASE("comments and quoted names") {
  const auto net = parse_bif(
      "// leading comment\nnetwork \"my net\" { }\n/* block\n comment */ variable v { type discrete [ 2 ] { yes, no }; }\n"
      "probability ( v ) { table 0.4, 0.6; } // trailing\n");
  CHECK(net.name() == "my net");
  CHECK(net.size() == 1);
}

TEST_CASE("rows within the input tolerance are renormalized") {
  const auto net = parse_bif("network n {}\nvariable v { type discrete [ 2 ] { yes, no }; }\nprobability ( v ) { table 0.3333334, 0.6666667; }\n");
  CHECK(std::abs(net.node("v").cpt.row(0).sum() - 1.0) < 1e-15);
}

TEST_CASE("errors carry line numbers") {
  SUBCASE("bad row sum") {
    const std::string text = "network n {}\nvariable v { type discrete [ 2 ] { yes, no }; }\nprobability ( v ) {\n  table 0.3, 0.6;\n}\n";
    CHECK(parse_error_line(text) == 4);
  }
  SUBCASE("unknown variable") {
    CHECK(parse_error_line("network n {}\nprobability ( q ) { table 1.0; }\n") == 2);
  }
  SUBCASE("unknown parent label") {
    std::string text = kTwoNodes;
    text.replace(text.find("(off)"), 5, "(of)");
    CHECK(parse_error_line(text) == 14);
  }
  SUBCASE("missing row") {
    std::string text = kTwoNodes;
    text.erase(text.find("  (on) 0.5, 0.25, 0.25;\n"), 24);
    CHECK_THROWS_AS(parse_bif(text), ParseError);
  }
  SUBCASE("duplicate row") {
    std::string text = kTwoNodes;
    text.replace(text.find("(on)"), 4, "(off)");
    CHECK(parse_error_line(text) == 15);
  }
  SUBCASE("syntax") {
    CHECK(parse_error_line("network n {}\nvariable v { type discrete [ 2 ] { yes no }; }\n") == 2);
  }
  SUBCASE("continuous variables are unsupported") {
    CHECK_THROWS_AS(parse_bif("network n {}\nvariable v { type continuous; }\n"), UnsupportedFeature);
  }
}

TEST_CASE("cycles are rejected") {
  const std::string text =
      "network n {}\nvariable a { type discrete [ 2 ] { y, n }; }\nvariable b { type discrete [ 2 ] { y, n }; }\n"
      "probability ( a | b ) { (y) 0.5, 0.5; (n) 0.5, 0.5; }\nprobability ( b | a ) { (y) 0.5, 0.5; (n) 0.5, 0.5; }\n";
  CHECK_THROWS_AS(parse_bif(text), GraphError);
}

TEST_CASE("bundled networks") {
  const auto& a = asia();
  CHECK(a.size() == 8);
  CHECK(max_abs_diff(root_prior(a, "smoke").probs(), vec({0.5, 0.5})) == 0.0);

  const auto& c = child();
  CHECK(c.size() == 20);
  CHECK(c.parameter_count() == 230);

  CHECK(insurance().size() == 27);
}

TEST_CASE("bundled asia differs from the verbatim file only in the dysp table") {
  const auto verbatim = read_bif(data_path("bnlearn/asia.bif"));
  for (const auto& def : asia().nodes()) {
    if (def.name == "dysp") continue;
    CHECK(max_abs_diff(def.cpt, verbatim.node(def.name).cpt) == 0.0);
  }
  const auto& d = asia().node("dysp").cpt;
  CHECK(d(1, 0) == doctest::Approx(0.7));  // bronc yes, either no
  CHECK(d(2, 0) == doctest::Approx(0.8));  // bronc no, either yes
}

TEST_CASE("write and parse round trip") {
  for (const char* file : {"asia.bif", "child.bif", "insurance.bif"}) {
    INFO(file);
    const auto net = read_bif(data_path(file));
    const auto back = parse_bif(write_bif(net));
    REQUIRE(back.size() == net.size());
    for (const auto& def : net.nodes()) {
      const auto& other = back.node(def.name);
      CHECK(other.labels == def.labels);
      CHECK(other.parents == def.parents);
      // ingest renormalizes, so a written table may move by one ulp
      CHECK(max_abs_diff(other.cpt, def.cpt) < 1e-15);
    }
  }
}
