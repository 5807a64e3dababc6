#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mulab {

enum class Verdict { holds, fails, recorded_only };

/// "holds", "fails", "recorded-only".
const char* verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

/// One x-y sample for the plotdata emitter.
struct PlotPoint {
  double x = 0;
  double y = 0;
};

/// One row of a batch run: a single measured claim with its context.
struct ExperimentReport {
  std::string experiment;                         // suite id
  std::string paper_ref;                          // claim tag, one per suite
  std::map<std::string, std::string> parameters;  // grid, seed, p, eps, b, ...
  std::string claimed;
  std::string observed;
  Verdict verdict = Verdict::recorded_only;
  double seconds = 0;
  std::optional<PlotPoint> plot;
};

/// Batch configuration. The zero values keep each suite's built-in sizes.
struct RunConfig {
  std::vector<std::string> selection;  // suite ids; "all" expands; empty runs nothing
  long grid_points = 0;
  long sample_count = 0;
  std::uint64_t seed = 20260816;
  std::map<std::string, double> tolerances;  // per-suite verdict tolerances
  std::string output_dir = ".";
  bool record_timing = false;  // off keeps report bytes stable run to run
};

/// key=value lines, '#' starts a comment. Keys: suites (comma list or
/// "all"), grid, samples, seed, out, timing (on/off), tol.<suite-id>.
/// Unknown keys or suite ids throw. `base` supplies the defaults.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// The ten suite ids in canonical order.
const std::vector<std::string>& suite_ids();

/// The claim tag carried by a suite's rows in paper_ref.
/// Unknown ids throw, listing the valid ones.
std::string suite_claim(const std::string& id);

/// Runs the selected suites and aggregates the rows sorted by suite id,
/// then parameter hash. A suite that throws contributes one failed row and
/// the run continues. Unknown ids throw before anything runs. Output is
/// deterministic for a fixed config while record_timing stays off.
std::vector<ExperimentReport> run(const RunConfig& config);

/// printf %g with the given significant digits.
std::string format_significant(double v, int digits = 12);

/// Compact JSON object for a parameter map, keys in sorted order.
std::string parameters_json(const std::map<std::string, std::string>& parameters);

std::string emit_csv(const std::vector<ExperimentReport>& reports);
std::string emit_json(const std::vector<ExperimentReport>& reports);

/// Gnuplot-style blocks: one per suite that carries plot points, rows
/// sorted by x, blocks separated by blank lines.
std::string emit_plotdata(const std::vector<ExperimentReport>& reports);

std::vector<ExperimentReport> reports_from_json(const std::string& text);

/// Writes reports.csv / reports.json / plotdata.dat under dir.
/// `format` is one of csv, json, plotdata, all.
void emit_files(const std::vector<ExperimentReport>& reports,
                const std::string& format, const std::string& dir);

}  // namespace mulab
