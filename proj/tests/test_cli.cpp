#include <doctest.h>

#include <cstdio>
#include <string>

#include "test_support.hpp"

using namespace calibsmooth;
using testsupport::read_file_text;
using testsupport::run_command;
using testsupport::temp_path;
using testsupport::write_file_text;

namespace {

const std::string kCli = CALIB_SMOOTH_CLI_PATH;
const std::string kData = CALIB_SMOOTH_DATA_DIR;

} // namespace

TEST_CASE("cli: success path writes the requested artifacts") {
  const std::string report = temp_path("cli_report.json");
  const std::string svg = temp_path("cli_diagram.svg");
  const int code = run_command(kCli + " --input " + kData +
                               "/toy_overconfident.csv --bootstrap 20 --seed 5"
                               " --out-report-json " + report + " --out-svg " + svg);
  CHECK(code == 0);
  const std::string json = read_file_text(report);
  CHECK(json.find("\"smece_star\"") != std::string::npos);
  CHECK(json.find("\"smece_ci\": [") != std::string::npos);
  const std::string picture = read_file_text(svg);
  CHECK(picture.find("</svg>") != std::string::npos);
  std::remove(report.c_str());
  std::remove(svg.c_str());
}

TEST_CASE("cli: same seed twice gives byte-identical artifacts") {
  const std::string report_a = temp_path("cli_a.json");
  const std::string report_b = temp_path("cli_b.json");
  const std::string svg_a = temp_path("cli_a.svg");
  const std::string svg_b = temp_path("cli_b.svg");
  const std::string base = kCli + " --input " + kData +
                           "/toy_overconfident.csv --bootstrap 15 --seed 42";
  CHECK(run_command(base + " --out-report-json " + report_a + " --out-svg " + svg_a) == 0);
  CHECK(run_command(base + " --out-report-json " + report_b + " --out-svg " + svg_b) == 0);
  CHECK(read_file_text(report_a) == read_file_text(report_b));
  CHECK(read_file_text(svg_a) == read_file_text(svg_b));
  std::remove(report_a.c_str());
  std::remove(report_b.c_str());
  std::remove(svg_a.c_str());
  std::remove(svg_b.c_str());
}

TEST_CASE("cli: exit codes for input, config, and parse failures") {
  // 2: missing file
  CHECK(run_command(kCli + " --input nope_does_not_exist.csv --out-report-json x.json") == 2);

  // 2: malformed row
  const std::string bad = temp_path("cli_bad.csv");
  write_file_text(bad, "0.5,7\n");
  CHECK(run_command(kCli + " --input " + bad + " --out-report-json x.json") == 2);
  std::remove(bad.c_str());

  // 3: no outputs requested
  CHECK(run_command(kCli + " --input " + kData + "/toy_overconfident.csv") == 3);

  // 3: bad flag value
  CHECK(run_command(kCli + " --input " + kData +
                    "/toy_overconfident.csv --format xml --out-report-json x.json") == 3);

  // 4: the balanced dataset drives sigma down until the grid cap trips
  CHECK(run_command(kCli + " --input " + kData +
                    "/toy_balanced.csv --eps 0.00001"
                    " --out-report-json x.json") == 4);
}

TEST_CASE("cli: logit transform and fixed bins run end to end") {
  const std::string report = temp_path("cli_logit.json");
  const int code = run_command(kCli + " --input " + kData +
                               "/toy_calibrated.csv --transform logit --bins 10"
                               " --bootstrap 0 --out-report-json " + report);
  CHECK(code == 0);
  const std::string json = read_file_text(report);
  CHECK(json.find("\"bins_used\": 10") != std::string::npos);
  CHECK(json.find("\"smece_ci\": null") != std::string::npos);
  std::remove(report.c_str());
}
