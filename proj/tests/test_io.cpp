#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycone/io.hpp"

#include <filesystem>
#include <sstream>

using namespace polycone;

TEST_CASE("instance json round trip is bit-exact") {
  for (const ObjectiveSpec& spec : all_objectives()) {
    for (int m : {3, 5}) {
      const ProblemInstance a = generate_instance(spec.id, m, 0, 7);
      const std::string text = instance_to_json(a);
      const ProblemInstance b = instance_from_json(text);
      CHECK(b.objective == a.objective);
      CHECK(b.seed == a.seed);
      CHECK(b.x_star == a.x_star);
      CHECK(b.x_bar == a.x_bar);
      REQUIRE(b.n() == a.n());
      for (int i = 0; i <= a.n(); ++i) CHECK(b.map.q(i).matrix() == a.map.q(i).matrix());
      CHECK(b.p1.matrix() == a.p1.matrix());
      CHECK(b.p2.matrix() == a.p2.matrix());
      CHECK(instance_to_json(b) == text);
    }
  }
}

TEST_CASE("instance file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "polycone_test_io";
  std::filesystem::remove_all(dir);
  const ProblemInstance a = generate_instance(ObjectiveId::W, 3, 0, 2);
  write_instance(dir / "nested" / "instance.json", a);
  const ProblemInstance b = read_instance(dir / "nested" / "instance.json");
  CHECK(instance_to_json(b) == instance_to_json(a));
  CHECK_THROWS(read_instance(dir / "missing.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(instance_from_json("not json"), SchemaError);
  CHECK_THROWS_AS(instance_from_json("{}"), SchemaError);
  const ProblemInstance a = generate_instance(ObjectiveId::cq, 3, 0, 1);
  std::string text = instance_to_json(a);
  const auto pos = text.find("\"cq\"");
  REQUIRE(pos != std::string::npos);
  std::string bad = text;
  bad.replace(pos, 4, "\"zz\"");
  CHECK_THROWS_AS(instance_from_json(bad), SchemaError);
  CHECK_THROWS_AS(summary_from_report_json("[]"), SchemaError);
}

TEST_CASE("iteration csv and report json") {
  const ProblemInstance inst = generate_instance(ObjectiveId::cq, 3, 0, 1);
  ALMConfig cfg = ALMConfig::defaults_for(3);
  cfg.seed = 1;
  const RunReport r = run_alm(inst, cfg);
  std::ostringstream csv;
  write_iteration_csv(csv, r);
  const std::string text = csv.str();
  CHECK(text.rfind(std::string(kIterationCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.records.size()) + 1);
  CHECK(text.find("wall") == std::string::npos);
  std::ostringstream timing;
  write_timing_csv(timing, r);
  CHECK(timing.str().rfind("k,wall_time\n", 0) == 0);
  const std::string json = report_to_json(r, inst, cfg, "proposed");
  const ReportSummary s = summary_from_report_json(json);
  CHECK(s.problem == "cq_m3_n2_s1");
  CHECK(s.solver == "proposed");
  CHECK(s.success == r.success());
  CHECK(s.iterations == r.iterations);
  CHECK(s.wall_time >= 0.0);
}
