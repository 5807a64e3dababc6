#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mulab/reports.hpp"

using namespace mulab;

namespace {

ExperimentReport sample_report() {
  ExperimentReport r;
  r.experiment = "demo";
  r.paper_ref = "demo-claim";
  r.parameters = {{"grid", "64"}, {"p", "1.5"}};
  r.claimed = "a value, with a comma";
  r.observed = "says \"ok\"";
  r.verdict = Verdict::holds;
  r.seconds = 0.25;
  return r;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("suite ids are the canonical ten") {
  const auto& ids = suite_ids();
  REQUIRE(ids.size() == 10);
  const std::vector<std::string> expected = {
      "submajorization-532", "dyadic-split", "logconvex",   "counterexample",
      "moyal-hs",            "moyal-sobolev", "magnetic-hs", "magnetic-cwikel",
      "clr",                 "core-invariants"};
  CHECK(ids == expected);
  for (const auto& id : ids) CHECK(!suite_claim(id).empty());

  CHECK_THROWS_AS((void)suite_claim("nope"), std::invalid_argument);
  try {
    (void)suite_claim("nope");
  } catch (const std::invalid_argument& ex) {
    const std::string what = ex.what();
    CHECK(what.find("valid ids") != std::string::npos);
    CHECK(what.find("submajorization-532") != std::string::npos);
    CHECK(what.find("core-invariants") != std::string::npos);
  }
}

TEST_CASE("verdict names round-trip") {
  CHECK(std::string(verdict_name(Verdict::holds)) == "holds");
  CHECK(std::string(verdict_name(Verdict::fails)) == "fails");
  CHECK(std::string(verdict_name(Verdict::recorded_only)) == "recorded-only");
  for (Verdict v : {Verdict::holds, Verdict::fails, Verdict::recorded_only})
    CHECK(verdict_from_name(verdict_name(v)) == v);
  CHECK_THROWS_AS(verdict_from_name("maybe"), std::invalid_argument);
}

TEST_CASE("significant digit formatting") {
  CHECK(format_significant(0.0) == "0");
  CHECK(format_significant(1.0 / 3.0) == "0.333333333333");
  CHECK(format_significant(1e-10) == "1e-10");
  CHECK(format_significant(123456789012345.0) == "1.23456789012e+14");
  CHECK(format_significant(-2.5) == "-2.5");
  CHECK(format_significant(0.000125) == "0.000125");
  CHECK(format_significant(1234.5, 3) == "1.23e+03");
  CHECK_THROWS_AS(format_significant(1.0, 0), std::invalid_argument);
}

TEST_CASE("csv emission quotes and orders the fixed columns") {
  CHECK(emit_csv({}) == "experiment,paper_ref,param_json,claimed,observed,verdict,seconds\n");

  const auto text = emit_csv({sample_report()});
  const auto lines = split_lines(text);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "experiment,paper_ref,param_json,claimed,observed,verdict,seconds");
  CHECK(lines[1] ==
        "demo,demo-claim,\"{\"\"grid\"\":\"\"64\"\",\"\"p\"\":\"\"1.5\"\"}\","
        "\"a value, with a comma\",\"says \"\"ok\"\"\",holds,0.25");

  CHECK(parameters_json({}) == "{}");
  CHECK(parameters_json({{"b", "2"}, {"a", "1"}}) == "{\"a\":\"1\",\"b\":\"2\"}");
}

TEST_CASE("json round-trips reports exactly") {
  auto with_plot = sample_report();
  with_plot.experiment = "demo-plot";
  with_plot.verdict = Verdict::recorded_only;
  with_plot.plot = PlotPoint{1e-4, 8.779};
  const std::vector<ExperimentReport> reports = {sample_report(), with_plot};

  const auto text = emit_json(reports);
  const auto parsed = reports_from_json(text);
  REQUIRE(parsed.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(parsed[i].experiment == reports[i].experiment);
    CHECK(parsed[i].paper_ref == reports[i].paper_ref);
    CHECK(parsed[i].parameters == reports[i].parameters);
    CHECK(parsed[i].claimed == reports[i].claimed);
    CHECK(parsed[i].observed == reports[i].observed);
    CHECK(parsed[i].verdict == reports[i].verdict);
    CHECK(parsed[i].seconds == reports[i].seconds);
    CHECK(parsed[i].plot.has_value() == reports[i].plot.has_value());
  }
  REQUIRE(parsed[1].plot.has_value());
  CHECK(parsed[1].plot->x == 1e-4);
  CHECK(parsed[1].plot->y == 8.779);

  CHECK(emit_json(parsed) == text);
  CHECK_THROWS(reports_from_json("{\"not\":\"an array\"}"));
}

TEST_CASE("plotdata groups by experiment and sorts by x") {
  ExperimentReport a1, a2, b1, quiet;
  a1.experiment = a2.experiment = "beta";
  b1.experiment = "alpha";
  quiet.experiment = "alpha";
  a1.plot = PlotPoint{2.0, 4.0};
  a2.plot = PlotPoint{1.0, 9.0};
  b1.plot = PlotPoint{0.5, 0.25};
  const auto text = emit_plotdata({a1, quiet, a2, b1});
  CHECK(text ==
        "# alpha\n0.5 0.25\n\n# beta\n1 9\n2 4\n");
  CHECK(emit_plotdata({quiet}) == "");
}

TEST_CASE("config text parses keys and rejects unknown ones") {
  const std::string text =
      "# a comment\n"
      "suites = clr, core-invariants\n"
      "grid=32\n"
      "samples = 50\n"
      "seed=99\n"
      "out = /tmp/somewhere\n"
      "timing = on\n"
      "tol.moyal-hs = 5e-4\n";
  const auto config = parse_config_text(text);
  CHECK(config.selection == std::vector<std::string>{"clr", "core-invariants"});
  CHECK(config.grid_points == 32);
  CHECK(config.sample_count == 50);
  CHECK(config.seed == 99);
  CHECK(config.output_dir == "/tmp/somewhere");
  CHECK(config.record_timing);
  REQUIRE(config.tolerances.count("moyal-hs") == 1);
  CHECK(config.tolerances.at("moyal-hs") == 5e-4);

  const auto all = parse_config_text("suites=all\n");
  CHECK(all.selection == std::vector<std::string>{"all"});

  CHECK_THROWS_AS(parse_config_text("tolerance=1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("tol.nope=1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("timing=sideways\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("just a line\n"), std::invalid_argument);

  RunConfig base;
  base.grid_points = 7;
  const auto kept = parse_config_text("seed=3\n", base);
  CHECK(kept.grid_points == 7);
  CHECK(kept.seed == 3);

  CHECK_THROWS_AS(load_config_file("/no/such/config.txt"), std::runtime_error);
}

TEST_CASE("empty selection runs nothing and unknown ids abort before work") {
  RunConfig config;
  CHECK(run(config).empty());

  config.selection = {"clr", "definitely-not-a-suite"};
  CHECK_THROWS_AS(run(config), std::invalid_argument);
  try {
    run(config);
  } catch (const std::invalid_argument& ex) {
    CHECK(std::string(ex.what()).find("valid ids") != std::string::npos);
  }
}

TEST_CASE("fixed seeds give byte-identical reports and sorted rows") {
  RunConfig config;
  config.selection = {"core-invariants", "clr"};
  config.sample_count = 200;
  const auto first = run(config);
  const auto second = run(config);
  REQUIRE(!first.empty());
  CHECK(emit_csv(first) == emit_csv(second));
  CHECK(emit_json(first) == emit_json(second));

  CHECK(std::is_sorted(first.begin(), first.end(),
                       [](const ExperimentReport& a, const ExperimentReport& b) {
                         return a.experiment < b.experiment;
                       }));
  for (const auto& r : first) {
    CHECK(r.seconds == 0.0);
    CHECK(r.paper_ref == suite_claim(r.experiment));
    CHECK(r.parameters.count("check") == 1);
  }

  RunConfig reseeded = config;
  reseeded.seed = 7;
  const auto third = run(reseeded);
  CHECK(emit_csv(third) != emit_csv(first));

  RunConfig timed = config;
  timed.selection = {"clr"};
  timed.record_timing = true;
  const auto stamped = run(timed);
  for (const auto& r : stamped) CHECK(r.seconds > 0.0);
}

TEST_CASE("a failing suite yields one failed row and the run continues") {
  RunConfig config;
  config.selection = {"moyal-hs", "core-invariants"};
  config.grid_points = 13;  // odd: the lattice constructor rejects it
  config.sample_count = 50;
  const auto reports = run(config);
  long failed = 0, held = 0;
  for (const auto& r : reports) {
    if (r.experiment == "moyal-hs") {
      CHECK(r.verdict == Verdict::fails);
      CHECK(r.observed.rfind("error: ", 0) == 0);
      ++failed;
    }
    if (r.experiment == "core-invariants" && r.verdict == Verdict::holds) ++held;
  }
  CHECK(failed == 1);
  CHECK(held == 6);
}

TEST_CASE("the counterexample suite emits a monotone plot block") {
  RunConfig config;
  config.selection = {"counterexample"};
  config.grid_points = 512;
  const auto reports = run(config);
  for (const auto& r : reports) CHECK(r.verdict != Verdict::fails);

  const auto lines = split_lines(emit_plotdata(reports));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "# counterexample");
  double prev_x = 0, prev_y = 1e300;
  for (int i = 1; i <= 5; ++i) {
    std::istringstream in(lines[i]);
    double x = 0, y = 0;
    REQUIRE((in >> x >> y));
    CHECK(x > prev_x);  // cutoffs ascend
    CHECK(y < prev_y);  // the truncated integral shrinks as the cutoff grows
    prev_x = x;
    prev_y = y;
  }
}

TEST_CASE("emit_files writes the requested formats") {
  const auto dir = std::filesystem::temp_directory_path() / "mulab_reports_test";
  std::filesystem::remove_all(dir);
  const std::vector<ExperimentReport> reports = {sample_report()};
  emit_files(reports, "all", dir.string());
  for (const char* name : {"reports.csv", "reports.json", "plotdata.dat"})
    CHECK(std::filesystem::exists(dir / name));
  std::ifstream in(dir / "reports.csv", std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == emit_csv(reports));
  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS(emit_files(reports, "yaml", "/tmp"), std::invalid_argument);
  CHECK_THROWS_AS(emit_files(reports, "csv", "/proc/none/sub"), std::runtime_error);
}
