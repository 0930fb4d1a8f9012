#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "divkit/io.hpp"

using namespace divkit;

namespace {

const std::string kData = FDIV_DATA_DIR;

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/divkit_io_" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

double ev(const EntropyDescriptor& F, double s) { return evaluate(F, s).as_double(); }

}  // namespace

TEST_CASE("entropy specs parse into the right families") {
  CHECK(parse_entropy_spec("powerlike:2").family() == EntropyFamily::PowerLike);
  CHECK(ev(parse_entropy_spec("powerlike:2"), 3.0) == doctest::Approx(2.0));
  CHECK(ev(parse_entropy_spec("chi:2"), 3.0) == doctest::Approx(4.0));
  CHECK(ev(parse_entropy_spec("matusita:0.5"), 4.0) == doctest::Approx(1.0));
  CHECK(parse_entropy_spec("powerlog:1").family() == EntropyFamily::PowerLog);
  CHECK(parse_entropy_spec("doublepower:1.5,0.5").family() == EntropyFamily::DoublePower);

  const auto box = parse_entropy_spec("indicator:0.5,2");
  CHECK(ev(box, 0.75) == 0.0);
  CHECK(std::isinf(ev(box, 3.0)));
  CHECK(ev(parse_entropy_spec("indicator:0,inf"), 100.0) == 0.0);

  // bare tv defaults to unit scale
  CHECK(ev(parse_entropy_spec("tv"), 0.0) == doctest::Approx(1.0));
  CHECK(ev(parse_entropy_spec("tv:1.5"), 0.0) == doctest::Approx(1.5));

  const auto tab = parse_entropy_spec("tab:" + kData + "/tabulated_example.txt");
  CHECK(tab.family() == EntropyFamily::Tabulated);
  CHECK(ev(tab, 1.0) == 0.0);

  CHECK_THROWS_AS(parse_entropy_spec("frobnicate:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_entropy_spec("powerlike"), std::invalid_argument);
  CHECK_THROWS_AS(parse_entropy_spec("powerlike:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_entropy_spec("chi:abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_entropy_spec("chi:2junk"), std::invalid_argument);
  CHECK_THROWS_AS(parse_entropy_spec("tab:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_entropy_spec("tab:/no/such/file.txt"), std::runtime_error);
}

TEST_CASE("tabulated entropies load from two-column text") {
  const auto F = load_tabulated_entropy(kData + "/tabulated_example.txt");
  CHECK(ev(F, 1.0) == 0.0);
  CHECK(ev(F, 0.0) == doctest::Approx(1.0));
  CHECK(ev(F, 4.0) == doctest::Approx(4.0));
  // interpolated between the 0.5 and 1 nodes
  CHECK(ev(F, 0.75) == doctest::Approx(0.25));

  const auto wall = load_tabulated_entropy(
      temp_file("wall.txt", "0 inf\n0.5 0.4  # comment\n1 0\n\n2 1.5\n"));
  CHECK(std::isinf(ev(wall, 0.0)));
  CHECK(ev(wall, 0.75) == doctest::Approx(0.2));

  CHECK_THROWS_AS(load_tabulated_entropy("/no/such/file.txt"), std::runtime_error);
  CHECK_THROWS_AS(load_tabulated_entropy(temp_file("short.txt", "0.5\n1 0\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_tabulated_entropy(temp_file("junk.txt", "a b\n1 0\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_tabulated_entropy(temp_file("wide.txt", "1 0 7\n")),
                  std::runtime_error);
  // structurally broken tables are rejected by the descriptor check
  CHECK_THROWS_AS(load_tabulated_entropy(temp_file("no_root.txt", "0 1\n2 1\n")),
                  std::runtime_error);
}

TEST_CASE("measures load from JSON") {
  const auto mu = load_measure_json(kData + "/mu1.json");
  CHECK(mu.space_id() == "demo");
  CHECK(mu.atoms().size() == 3);
  CHECK(mu.total_mass() == doctest::Approx(3.5));

  CHECK_THROWS_AS(load_measure_json("/no/such/measure.json"), std::runtime_error);
  CHECK_THROWS_AS(load_measure_json(temp_file("notjson.json", "pebbles")),
                  std::runtime_error);
  CHECK_THROWS_AS(
      load_measure_json(temp_file("noschema.json", R"({"space":"x","atoms":[[0,1]]})")),
      std::runtime_error);
  CHECK_THROWS_AS(
      load_measure_json(temp_file(
          "badatom.json", R"({"schema":1,"space":"x","atoms":[[0.5,1.0]]})")),
      std::runtime_error);
  CHECK_THROWS_AS(
      load_measure_json(temp_file("negmass.json",
                                  R"({"schema":1,"space":"x","atoms":[[0,-1.0]]})")),
      std::runtime_error);
}

TEST_CASE("metric spaces load from CSV") {
  const auto space = load_metric_csv(kData + "/planar5.csv");
  CHECK(space.size() == 5);
  CHECK(space.distance(0, 1) == doctest::Approx(1.0));
  CHECK(space.distance(0, 2) == doctest::Approx(1.0));
  CHECK(space.distance(1, 2) == space.distance(2, 1));

  CHECK_THROWS_AS(load_metric_csv("/no/such/space.csv"), std::runtime_error);
  CHECK_THROWS_AS(load_metric_csv(temp_file("badcell.csv", "0,x\nx,0\n")),
                  std::runtime_error);
  // validation failures surface as load errors too: 5 > 1 + 1
  CHECK_THROWS_AS(
      load_metric_csv(temp_file("triangle.csv", "0,1,5\n1,0,1\n5,1,0\n")),
      std::runtime_error);
}

TEST_CASE("transport problems load from JSON") {
  const auto prob = load_et_problem_json(kData + "/pure_entropy.json");
  CHECK(prob.rows() == 2);
  CHECK(prob.cols() == 2);
  CHECK(prob.entropy().family() == EntropyFamily::PowerLike);
  CHECK(std::isinf(prob.cost()[0][1]));
  CHECK(prob.cost()[0][0] == 0.0);
  CHECK(prob.masses1() == std::vector<double>{1.0, 1.0});
  CHECK(prob.masses2() == std::vector<double>{4.0, 1.0});
  CHECK(prob.form() == ETForm::Energy);

  const auto tiny = load_et_problem_json(kData + "/tiny_et.json");
  CHECK(tiny.cost()[1][1] == doctest::Approx(0.2));

  // the form argument is honored, which also admits sublinear entropies
  const auto hom = load_et_problem_json(kData + "/pure_entropy.json", ETForm::Homogeneous);
  CHECK(hom.form() == ETForm::Homogeneous);

  CHECK_THROWS_AS(load_et_problem_json("/no/such/problem.json"), std::runtime_error);
  CHECK_THROWS_AS(load_et_problem_json(temp_file(
                      "nokey.json",
                      R"({"schema":1,"entropy":{"family":"powerlike","params":[1]},)"
                      R"("cost":[[0]],"mu1":[1]})")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_et_problem_json(temp_file(
                      "badfam.json",
                      R"({"schema":1,"entropy":{"family":"nope","params":[1]},)"
                      R"("cost":[[0]],"mu1":[1],"mu2":[1]})")),
                  std::runtime_error);
  // a sublinear entropy cannot head an energy-form problem
  CHECK_THROWS_AS(load_et_problem_json(temp_file(
                      "tvform.json",
                      R"({"schema":1,"entropy":{"family":"tv"},)"
                      R"("cost":[[0]],"mu1":[1],"mu2":[1]})")),
                  std::runtime_error);
}

TEST_CASE("reports serialize to schema-tagged JSON") {
  TriangleReport report;
  report.passed = false;
  report.worst_violation = 0.25;
  report.witness = TriangleWitness{0.1, 0.9, 1.5, 1.25};
  report.tested = 42;
  report.skipped = 3;

  auto doc = nlohmann::json::parse(to_json(report));
  CHECK(doc["schema"] == 1);
  CHECK(doc["passed"] == false);
  CHECK(doc["worst_violation"] == doctest::Approx(0.25));
  CHECK(doc["witness"]["u"] == doctest::Approx(0.1));
  CHECK(doc["witness"]["rhs"] == doctest::Approx(1.25));
  CHECK(doc["tested"] == 42);

  report.witness.reset();
  report.passed = true;
  doc = nlohmann::json::parse(to_json(report));
  CHECK(doc["witness"].is_null());
  CHECK(doc["passed"] == true);
}

TEST_CASE("solve results serialize with inf tokens") {
  SolveResult result;
  result.plan = TransportPlan::zeros(1, 2);
  result.plan.at(0, 1) = 0.75;
  result.value = ExtendedValue::infinity();
  result.report.converged = true;
  result.report.iterations = 7;
  result.report.best_start = 2;

  auto doc = nlohmann::json::parse(to_json(result));
  CHECK(doc["schema"] == 1);
  CHECK(doc["value"] == "inf");
  CHECK(doc["plan"].size() == 1);
  CHECK(doc["plan"][0][1] == doctest::Approx(0.75));
  CHECK(doc["converged"] == true);
  CHECK(doc["iterations"] == 7);
  CHECK(doc["best_start"] == 2);

  result.value = ExtendedValue::finite(1.5);
  doc = nlohmann::json::parse(to_json(result));
  CHECK(doc["value"] == doctest::Approx(1.5));
}

TEST_CASE("marginal cost grids print as CSV") {
  const auto csv = h_grid_csv(EntropyDescriptor::power_log(2.0), {0.0, 1.0});
  CHECK(csv.rfind("r,t,H\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  // mass appearing from nothing is infinitely expensive for this family
  CHECK(csv.find("0,1,inf") != std::string::npos);
  CHECK(csv.find("1,0,inf") != std::string::npos);
  CHECK(csv.find("1,1,0") != std::string::npos);
}
