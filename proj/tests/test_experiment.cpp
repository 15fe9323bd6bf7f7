#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycone/experiment.hpp"
#include "polycone/io.hpp"

#include <filesystem>

using namespace polycone;

TEST_CASE("labels and config overrides") {
  CHECK(problem_label(ObjectiveId::cq, 3, 2, 1) == "cq_m3_n2_s1");
  ConfigOverrides o;
  o.zeta = 10;
  o.mode = Mode::standard;
  const ALMConfig c = make_config(3, 9, o);
  CHECK(c.zeta == 10);
  CHECK(c.mode == Mode::standard);
  CHECK(c.seed == 9);
  CHECK(c.rho0 == 0.1);
  ExperimentConfig bad;
  bad.jobs = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("parallel runs match serial runs") {
  const auto base = std::filesystem::temp_directory_path() / "polycone_test_experiment";
  std::filesystem::remove_all(base);
  ExperimentConfig cfg;
  cfg.objectives = {ObjectiveId::cq, ObjectiveId::W, ObjectiveId::B};
  cfg.seeds = {1, 2};
  cfg.modes = {Mode::proposed, Mode::standard};
  cfg.out_dir = base / "serial";
  const auto serial = run_experiment(cfg);
  cfg.jobs = 3;
  cfg.out_dir = base / "parallel";
  const auto parallel = run_experiment(cfg);
  REQUIRE(serial.size() == 12);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].problem == parallel[i].problem);
    CHECK(serial[i].solver == parallel[i].solver);
    CHECK(serial[i].report.x_final == parallel[i].report.x_final);
    const auto rel = std::filesystem::path(serial[i].problem) / serial[i].solver / "iterations.csv";
    CHECK(read_text(base / "serial" / rel) == read_text(base / "parallel" / rel));
    CHECK(read_text(base / "serial" / serial[i].problem / "instance.json") ==
          read_text(base / "parallel" / serial[i].problem / "instance.json"));
    CHECK(std::filesystem::exists(base / "serial" / serial[i].problem / serial[i].solver / "report.json"));
  }
  std::filesystem::remove_all(base);
}
