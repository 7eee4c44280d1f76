#include <doctest.h>

#include <sstream>

#include "offlang/config.hpp"
#include "offlang/error.hpp"

using namespace offlang;

TEST_CASE("flat key=value parsing") {
  std::istringstream in("# comment\n\ntarget_per_class = 3876\nadd.OTH=300\nadd.GRP=237\nseed=7\nflag=on\n");
  const auto cfg = Config::parse(in);
  CHECK(cfg.get_int("target_per_class") == 3876);
  CHECK(cfg.get_u64("seed") == 7u);
  CHECK(cfg.get_bool("flag") == true);
  CHECK_FALSE(cfg.get("missing"));
  const auto add = cfg.section("add");
  CHECK(add.size() == 2);
  CHECK(add.at("OTH") == "300");
  CHECK_NOTHROW(cfg.reject_unknown({"target_per_class", "seed", "flag", "add."}));
  CHECK_THROWS_AS(cfg.reject_unknown({"seed", "add."}), ValidationError);
}

TEST_CASE("config errors") {
  std::istringstream dup("a=1\na=2\n");
  CHECK_THROWS_AS(Config::parse(dup), ParseError);
  std::istringstream noeq("just text\n");
  CHECK_THROWS_AS(Config::parse(noeq), ParseError);
  Config cfg({{"n", "abc"}, {"b", "maybe"}});
  CHECK_THROWS_AS(cfg.get_int("n"), ValidationError);
  CHECK_THROWS_AS(cfg.get_bool("b"), ValidationError);
  CHECK_THROWS_AS(cfg.require("zzz"), ValidationError);
  CHECK_THROWS_AS(Config::parse_file("/nonexistent.cfg"), IoError);
}
