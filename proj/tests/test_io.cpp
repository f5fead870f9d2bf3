#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "shiftlab/io.hpp"
#include "shiftlab/report.hpp"

using namespace shiftlab;

TEST_CASE("scalar literals round-trip") {
  CHECK(io::parse_scalar("3") == Dyadic(3));
  CHECK(io::parse_scalar("-2") == Dyadic(-2));
  CHECK(io::parse_scalar("5/2^4") == Dyadic::from_mantissa_exponent(5, -4));
  CHECK(io::parse_scalar("-1/2^1") == Dyadic::from_mantissa_exponent(-1, -1));
  CHECK(io::parse_scalar("0.25") == Dyadic::pow2(-2));
  CHECK(io::parse_scalar("-0.5") == Dyadic::from_mantissa_exponent(-1, -1));
  CHECK(io::parse_scalar("1.75") == Dyadic::from_mantissa_exponent(7, -2));

  // 0.1 is not dyadic: parsed, but flagged inexact.
  const Dyadic tenth = io::parse_scalar("0.1");
  CHECK_FALSE(tenth.exact());
  CHECK(tenth.to_double() == Catch::Approx(0.1));

  CHECK(io::format_scalar(Dyadic::from_mantissa_exponent(5, -4)) == "5/2^4");
  CHECK(io::format_scalar(Dyadic(12)) == "12");
  CHECK(io::format_scalar(Dyadic(-1)) == "-1");
  for (const char* text : {"7/2^3", "42", "-9/2^1"})
    CHECK(io::format_scalar(io::parse_scalar(text)) == text);

  CHECK_THROWS_AS(io::parse_scalar("abc"), ParseError);
  CHECK_THROWS_AS(io::parse_scalar("1/3^2"), ParseError);
  CHECK_THROWS_AS(io::parse_scalar(""), ParseError);
}

TEST_CASE("natset file format") {
  std::istringstream in("horizon=20\n3\n7\n\n19\n");
  const NatSet a = io::parse_natset(in);
  CHECK(a == NatSet({3, 7, 19}, 20));
  CHECK(io::format_natset(a) == "horizon=20\n3\n7\n19\n");

  std::istringstream reloaded(io::format_natset(a));
  CHECK(io::parse_natset(reloaded) == a);
}

TEST_CASE("natset parse errors carry line numbers") {
  std::istringstream missing("5\n7\n");
  try {
    io::parse_natset(missing);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  std::istringstream bad("horizon=10\n4\nx\n");
  try {
    io::parse_natset(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream unsorted("horizon=10\n4\n3\n");
  CHECK_THROWS_AS(io::parse_natset(unsorted), ParseError);
}

TEST_CASE("vector literals round-trip") {
  const SeqVector v = io::parse_seqvector("1:1, 5:1/2^3, 2:-0.5");
  CHECK(v.at(1) == Dyadic(1));
  CHECK(v.at(5) == Dyadic::pow2(-3));
  CHECK(v.at(2) == Dyadic::from_mantissa_exponent(-1, -1));
  CHECK(io::parse_seqvector(io::format_seqvector(v)) == v);
  CHECK(io::parse_seqvector("0").is_zero());
  CHECK(io::format_seqvector(SeqVector{}) == "0");

  CHECK_THROWS_AS(io::parse_seqvector("1:1,1:2"), ParseError);
  CHECK_THROWS_AS(io::parse_seqvector("0:1"), ParseError);
  CHECK_THROWS_AS(io::parse_seqvector("5"), ParseError);
}

TEST_CASE("weight rule names") {
  CHECK(io::parse_weight_rule("paper-counterexample").kind() == WeightRule::Kind::counterexample);
  const WeightRule c = io::parse_weight_rule("const:2");
  CHECK(c.kind() == WeightRule::Kind::constant);
  CHECK(c.weight(5) == Dyadic(2));
  CHECK(io::parse_weight_rule("const:1/2^1").weight(1) == Dyadic::pow2(-1));
  CHECK_THROWS_AS(io::parse_weight_rule("banana"), ParseError);
  CHECK_THROWS_AS(io::parse_weight_rule("const:0"), ParseError);
  CHECK_THROWS_AS(io::parse_weight_rule("list:@/nonexistent/file"), ParseError);
}

TEST_CASE("density csv shape") {
  const NatSet evens = NatSet::of(100, [](Nat n) { return n % 2 == 0; });
  const std::string csv = io::density_csv(density_profile(evens, DensityKind::lower, 100));
  CHECK(csv.rfind("n,ratio\n", 0) == 0);
  CHECK(csv.find("100,0.5\n") != std::string::npos);
}

TEST_CASE("ap profile csv shape") {
  const NatSet a({3, 6, 9, 12}, 12);
  const std::string csv = io::ap_profile_csv(ap_profile(a, 3));
  CHECK(csv == "k,start,difference,length\n1,3,1,1\n2,3,2,1\n3,3,3,4\n");
}

TEST_CASE("report json is deterministic") {
  const auto j1 = report::counterexample_report(10000, 1, 1, {0});
  const auto j2 = report::counterexample_report(10000, 1, 1, {0});
  CHECK(report::render(j1) == report::render(j2));
  CHECK(j1["chaos"]["verdict"] == "fail");
  CHECK(j1["criterion"]["separation_ok"] == true);
}
