#include <doctest.h>

#include <cstdlib>
#include <string>

#include "misspec/textio.hpp"

using namespace misspec;

TEST_CASE("fmt17 is plain decimal and round-trips") {
  for (double x : {0.1, -0.1, 1.0, -3.141592653589793, 1e-12, 123456.789, 2.0 / 3.0,
                   1.0e6, 5e-8, 0.025}) {
    const std::string s = fmt17(x);
    CHECK(s.find('e') == std::string::npos);
    CHECK(s.find('E') == std::string::npos);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(fmt17(0.0) == "0");
  CHECK(fmt17(1.0) == "1");
  CHECK(fmt17(0.25) == "0.25");
}

TEST_CASE("json writer emits ordered keys") {
  JsonWriter w;
  w.begin_object();
  w.key_value("b", 1.5);
  w.key_value("a", std::string("x\"y"));
  w.begin_array("list");
  w.begin_object_in_array();
  w.key_value("v", true);
  w.end_object();
  w.begin_object_in_array();
  w.key_value("v", false);
  w.end_object();
  w.end_array();
  w.end_object();
  CHECK(w.str() == R"({"b":1.5,"a":"x\"y","list":[{"v":true},{"v":false}]})");
}

TEST_CASE("config round-trips through json") {
  RunConfig cfg;
  cfg.scenario = preset("remark1-kappa");
  cfg.scenario.master_seed = 987654321;
  cfg.output_dir = "/tmp/x";
  cfg.emit_paths = true;
  cfg.threads = 3;
  const std::string text = config_to_json(cfg);
  const RunConfig back = config_from_json(text);
  CHECK(back.scenario.name == cfg.scenario.name);
  CHECK(back.scenario.master_seed == cfg.scenario.master_seed);
  CHECK(back.scenario.theta0 == cfg.scenario.theta0);
  CHECK(back.scenario.horizon == cfg.scenario.horizon);
  CHECK(back.scenario.truth.family_tag() == "power-sgn");
  CHECK(back.scenario.truth.kappa == cfg.scenario.truth.kappa);
  CHECK(back.scenario.assumed.is_sgn());
  CHECK(back.scenario.window.lo == cfg.scenario.window.lo);
  CHECK(back.scenario.ladder == cfg.scenario.ladder);
  CHECK(back.scenario.regime.str() == "remark1");
  CHECK(back.scenario.regime.kappa == 1.5);
  CHECK(back.scenario.targets.slope_min == cfg.scenario.targets.slope_min);
  CHECK(back.output_dir == "/tmp/x");
  CHECK(back.emit_paths);
  CHECK(back.threads == 3);
  // second trip is textually stable
  RunConfig cfg2 = back;
  CHECK(config_to_json(cfg2) == text);
}
