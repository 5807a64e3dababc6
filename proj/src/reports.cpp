#include "mulab/reports.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mulab {

namespace {

using nlohmann::json;

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string::npos ? comma : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_switch(const std::string& value, const std::string& key) {
  if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
  if (value == "off" || value == "false" || value == "no" || value == "0") return false;
  throw std::invalid_argument("config key '" + key + "' expects on/off, got '" + value + "'");
}

json report_to_json(const ExperimentReport& r) {
  json j;
  j["experiment"] = r.experiment;
  j["paper_ref"] = r.paper_ref;
  j["parameters"] = r.parameters;
  j["claimed"] = r.claimed;
  j["observed"] = r.observed;
  j["verdict"] = verdict_name(r.verdict);
  j["seconds"] = r.seconds;
  if (r.plot) j["plot"] = {{"x", r.plot->x}, {"y", r.plot->y}};
  return j;
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.paper_ref = j.at("paper_ref").get<std::string>();
  r.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
  r.claimed = j.at("claimed").get<std::string>();
  r.observed = j.at("observed").get<std::string>();
  r.verdict = verdict_from_name(j.at("verdict").get<std::string>());
  r.seconds = j.at("seconds").get<double>();
  if (j.contains("plot"))
    r.plot = PlotPoint{j.at("plot").at("x").get<double>(), j.at("plot").at("y").get<double>()};
  return r;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::recorded_only: return "recorded-only";
  }
  throw std::invalid_argument("unhandled verdict value");
}

Verdict verdict_from_name(const std::string& name) {
  if (name == "holds") return Verdict::holds;
  if (name == "fails") return Verdict::fails;
  if (name == "recorded-only") return Verdict::recorded_only;
  throw std::invalid_argument("unknown verdict '" + name +
                              "'; expected holds, fails, or recorded-only");
}

std::string format_significant(double v, int digits) {
  if (digits < 1) throw std::invalid_argument("significant digits must be positive");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string parameters_json(const std::map<std::string, std::string>& parameters) {
  return json(parameters).dump();
}

std::string emit_csv(const std::vector<ExperimentReport>& reports) {
  std::string out = "experiment,paper_ref,param_json,claimed,observed,verdict,seconds\n";
  for (const auto& r : reports) {
    out += csv_escape(r.experiment);
    out += ',';
    out += csv_escape(r.paper_ref);
    out += ',';
    out += csv_escape(parameters_json(r.parameters));
    out += ',';
    out += csv_escape(r.claimed);
    out += ',';
    out += csv_escape(r.observed);
    out += ',';
    out += verdict_name(r.verdict);
    out += ',';
    out += format_significant(r.seconds);
    out += '\n';
  }
  return out;
}

std::string emit_json(const std::vector<ExperimentReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr.dump(2) + "\n";
}

std::vector<ExperimentReport> reports_from_json(const std::string& text) {
  const json arr = json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("report JSON must be an array");
  std::vector<ExperimentReport> out;
  out.reserve(arr.size());
  for (const auto& j : arr) out.push_back(report_from_json(j));
  return out;
}

std::string emit_plotdata(const std::vector<ExperimentReport>& reports) {
  std::map<std::string, std::vector<PlotPoint>> blocks;
  for (const auto& r : reports)
    if (r.plot) blocks[r.experiment].push_back(*r.plot);
  std::string out;
  bool first = true;
  for (auto& [experiment, points] : blocks) {
    std::sort(points.begin(), points.end(), [](const PlotPoint& a, const PlotPoint& b) {
      return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    if (!first) out += '\n';
    first = false;
    out += "# " + experiment + "\n";
    for (const auto& p : points)
      out += format_significant(p.x) + " " + format_significant(p.y) + "\n";
  }
  return out;
}

void emit_files(const std::vector<ExperimentReport>& reports,
                const std::string& format, const std::string& dir) {
  const bool all = format == "all";
  if (!all && format != "csv" && format != "json" && format != "plotdata")
    throw std::invalid_argument("unknown format '" + format +
                                "'; expected csv, json, plotdata, or all");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto write = [&](const char* name, const std::string& content) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
  };
  if (all || format == "csv") write("reports.csv", emit_csv(reports));
  if (all || format == "json") write("reports.json", emit_json(reports));
  if (all || format == "plotdata") write("plotdata.dat", emit_plotdata(reports));
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "suites") {
      base.selection = split_list(value);
    } else if (key == "grid") {
      base.grid_points = std::stol(value);
    } else if (key == "samples") {
      base.sample_count = std::stol(value);
    } else if (key == "seed") {
      base.seed = std::stoull(value);
    } else if (key == "out") {
      base.output_dir = value;
    } else if (key == "timing") {
      base.record_timing = parse_switch(value, key);
    } else if (key.rfind("tol.", 0) == 0) {
      const std::string id = key.substr(4);
      suite_claim(id);  // validates the id
      base.tolerances[id] = std::stod(value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

}  // namespace mulab
