#include <string>

#include "config.hpp"
#include "doctest.h"
#include "report.hpp"
#include "runner.hpp"

using namespace floquet;
using namespace floquet::cli;

TEST_SUITE("cli") {
  TEST_CASE("minimal config takes defaults") {
    auto cfg = parse_config("[region]\nrho = 50\n");
    finalize(cfg);
    CHECK(cfg.dim == 2);
    CHECK(cfg.region.rho == 50);
    CHECK(cfg.region.q.size() == 2);
  }

  TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS(parse_config("[region]\nrhoo = 50\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[regions]\nrho = 50\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[symbol]\nkind = gaussian\n"), ValidationError);
  }

  TEST_CASE("invalid numbers name the key") {
    try {
      parse_config("[region]\nrho = abc\n");
      FAIL("no throw");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("rho") != std::string::npos);
    }
  }

  TEST_CASE("region inequalities are checked after overrides") {
    auto cfg = parse_config("[region]\nrho = 50\n");
    Overrides o;
    o.rho = -3;
    apply_overrides(cfg, o);
    CHECK_THROWS_AS(finalize(cfg), ValidationError);
  }

  TEST_CASE("doubles print round-trip and non-finite values as strings") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0 / 0.0) == "inf");
    nlohmann::json j;
    j["x"] = 0.1;
    j["bad"] = std::nan("");
    const std::string text = dump_json(j);
    CHECK(text.find("\"nan\"") != std::string::npos);
    CHECK(nlohmann::json::parse(text)["x"].get<double>() == 0.1);
  }

  TEST_CASE("volumes report carries the envelope") {
    auto cfg = parse_config("[region]\nrho = 50\n[volumes]\nset = A\n[run]\nsamples = 2000\n");
    finalize(cfg);
    std::string summary;
    const auto j = nlohmann::json::parse(run_subcommand("volumes", cfg, &summary));
    CHECK(j["schema_version"] == 1);
    CHECK(j["command"] == "volumes");
    CHECK(j["results"]["samples"] == 2000);
    CHECK(!j["config_echo"].contains("threads"));
  }
}
