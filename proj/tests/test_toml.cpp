#include <doctest.h>

#include <string>

#include "remdyn/params.hpp"
#include "remdyn/toml.hpp"

using namespace remdyn;

TEST_CASE("toml: tables, scalars, and arrays parse") {
    const std::string text = R"(
# leading comment
title = "aging run"   # trailing comment
flag = true
count = 42

[model]
n = 20
eps = 0.5
beta = 1.25e0

[grid]
t = [1.0, 2.0]
s = [0.5, 1, 3]
)";
    const TomlTable cfg = parse_toml_string(text);
    CHECK(cfg.get_string("title") == "aging run");
    CHECK(cfg.get_bool("flag", false));
    CHECK_FALSE(cfg.get_bool("missing_flag", false));
    CHECK(cfg.get_int("count") == 42);
    CHECK(cfg.get_int("model.n") == 20);
    CHECK(cfg.get_double("model.eps") == 0.5);
    CHECK(cfg.get_double("model.beta") == 1.25);
    const auto t = cfg.get_double_array("grid.t");
    REQUIRE(t.size() == 2);
    CHECK(t[1] == 2.0);
    const auto s = cfg.get_double_array("grid.s");
    REQUIRE(s.size() == 3);
    CHECK(s[1] == 1.0);  // integer promoted to double
}

TEST_CASE("toml: strings may contain comment characters and escapes") {
    const TomlTable cfg = parse_toml_string(
        "path = \"out#1.csv\"\nquoted = \"a \\\"b\\\" \\\\ c\"\n");
    CHECK(cfg.get_string("path") == "out#1.csv");
    CHECK(cfg.get_string("quoted") == "a \"b\" \\ c");
}

TEST_CASE("toml: fallbacks and int-to-double promotion") {
    const TomlTable cfg = parse_toml_string("n = 8\n");
    CHECK(cfg.get_int("n", 99) == 8);
    CHECK(cfg.get_int("missing", 99) == 99);
    CHECK(cfg.get_double("n") == 8.0);
    CHECK(cfg.get_string("name", "x") == "x");
    CHECK(cfg.get_double_array("arr", {1.5}).at(0) == 1.5);
    CHECK(cfg.has("n"));
    CHECK(!cfg.has("missing"));
}

TEST_CASE("toml: malformed input is rejected with the offending line") {
    CHECK_THROWS_AS(parse_toml_string("n = \n"), validation_error);
    CHECK_THROWS_AS(parse_toml_string("just words\n"), validation_error);
    CHECK_THROWS_AS(parse_toml_string("[unterminated\nn = 1\n"), validation_error);
    CHECK_THROWS_AS(parse_toml_string("a = 1\na = 2\n"), validation_error);
    CHECK_THROWS_AS(parse_toml_string("s = \"unclosed\n"), validation_error);
    try {
        parse_toml_string("ok = 1\nbroken here\n");
        FAIL("expected a parse error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("toml: missing required keys raise descriptive errors") {
    const TomlTable cfg = parse_toml_string("n = 8\n");
    CHECK_THROWS_AS(cfg.get_int("model.n"), validation_error);
    CHECK_THROWS_AS(cfg.get_double("beta"), validation_error);
    CHECK_THROWS_AS(cfg.get_string("n"), validation_error);  // type mismatch
}
