#include <filesystem>
#include <string>

#include "doctest.h"
#include "qsynth/error.hpp"
#include "qsynth/pla.hpp"

using namespace qsynth;

namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_pla(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("minimal document") {
  const PlaTable t = parse_pla(".i 2\n.o 1\n11 1\n.e");
  CHECK(t.num_inputs == 2);
  CHECK(t.num_outputs == 1);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == Cube{"11", "1"});
}

TEST_CASE("dash cubes are kept, not expanded") {
  const PlaTable t = parse_pla(".i 3\n.o 3\n1-0 101\n--1 010\n");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].inputs == "1-0");
  CHECK(t.rows[1].inputs == "--1");
}

TEST_CASE("dialect symbols, separators, comments and CRLF") {
  const PlaTable t = parse_pla("# header\r\n.i 3\r\n.o 2\r\n.p 3\r\n.type fr\r\n1~2|10\r\n011\t0-\r\n01011\r\n.e\r\n");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0] == Cube{"1--", "10"});
  CHECK(t.rows[1] == Cube{"011", "0-"});
  CHECK(t.rows[2] == Cube{"010", "11"});
  CHECK(t.type == "fr");
  CHECK(t.declared_products == 3u);
}

TEST_CASE("product count mismatch is a warning") {
  std::vector<std::string> warnings;
  const PlaTable t = parse_pla(".i 1\n.o 1\n.p 4\n1 1\n", &warnings);
  CHECK(t.rows.size() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("errors") {
  CHECK(code_of("11 1\n") == ErrorCode::MalformedDirective);
  CHECK(code_of(".i 2\n11 1\n") == ErrorCode::MalformedDirective);
  CHECK(code_of(".i 2\n.i 3\n.o 1\n") == ErrorCode::MalformedDirective);
  CHECK(code_of(".i 2\n.o 1\n111 1\n") == ErrorCode::BadCube);
  CHECK(code_of(".i 2\n.o 1\n1x 1\n") == ErrorCode::BadCube);
  CHECK(code_of(".i 2\n.o 1\n11 1\n11 0\n") == ErrorCode::ConflictingRows);
  // Cubes with dashes may overlap freely; only identical patterns conflict.
  CHECK_NOTHROW(parse_pla(".i 2\n.o 1\n1- 1\n11 0\n"));
}

TEST_CASE("write produces directives and separated rows") {
  PlaTable t;
  t.num_inputs = 2;
  t.num_outputs = 1;
  t.rows = {{"11", "1"}};
  const std::string out = write_pla(t);
  CHECK(out.find(".i 2\n") != std::string::npos);
  CHECK(out.find(".o 1\n") != std::string::npos);
  CHECK(out.find("11 1\n") != std::string::npos);

  t.rows.clear();
  const PlaTable back = parse_pla(write_pla(t));
  CHECK(back.rows.empty());
  CHECK(back.num_inputs == 2);
}

TEST_CASE("corpus round trip") {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(QSYNTH_BENCHMARKS)) {
    if (e.path().extension() != ".pla") continue;
    CAPTURE(e.path().string());
    const PlaTable t = read_pla_file(e.path().string());
    const std::string w = write_pla(t);
    CHECK(parse_pla(w) == t);
    CHECK(write_pla(parse_pla(w)) == w);
    ++n;
  }
  CHECK(n >= 11);
}

TEST_CASE("squar5 shape") {
  const PlaTable t = read_pla_file(std::string(QSYNTH_BENCHMARKS) + "/squar5.pla");
  CHECK(t.num_inputs == 5);
  CHECK(t.num_outputs == 8);
}
