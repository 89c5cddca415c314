#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace stlab {

enum class StudyKind { Capacity, RodConvergence, RodSpectrum, ResolventProbe, GraphLimit, Regime };

const char* to_string(StudyKind kind);
/// Throws ConfigError for an unknown name.
StudyKind parse_study_kind(const std::string& name);

/// Invalid configuration or usage (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceSpec {
  std::string type = "constant";  // constant | cosine | file
  double value = 1.0;             // constant
  int mode = 1;                   // cosine: cos(mode pi t)
  std::string path;               // file: CSV of (t, value) pairs
};

struct FattenedMember {
  double epsilon = 0.0;
  double vertex_scale = 0.0;
};

struct StudyConfig {
  StudyKind kind = StudyKind::RodConvergence;
  int dimension = 3;
  std::vector<double> ladder{0.5, 0.35};   // strictly decreasing
  double delta_ratio = 0.5;                 // delta = ratio * eps; 1/2 or 1/4
  std::vector<double> deltas{0.25, 0.1, 0.05};  // capacity sweep
  double z = 1.0;
  SourceSpec source;
  double h_factor = 0.5;                    // h = h_factor * r
  double cg_tol = 1e-10;
  double eigen_tol = 1e-8;
  std::size_t eigen_count = 2;
  std::size_t probe_modes = 6;
  bool no_holes = false;                    // hole-free control rod
  std::optional<double> limit_mu;           // overrides mu in the limit solver
  std::string graph_file;
  double n_per_unit_length = 200.0;
  double vol_ratio = 1.0;
  std::vector<std::string> regimes{"small-vertex", "large-vertex", "borderline"};
  std::vector<double> alphas{0.5, 2.0 / 3.0, 0.8};  // regime study
  std::vector<FattenedMember> sequence;     // regime study, eps decreasing
  int threads = 0;
  std::string out_dir = ".";

  /// Throws ConfigError when a field violates a module precondition.
  void validate() const;
  /// mu used by the limit solver (0 for a hole-free control unless overridden).
  double effective_limit_mu() const;
};

/// Reads a JSON config; unspecified fields keep their defaults. Throws ConfigError.
StudyConfig parse_study_config(const nlohmann::json& doc, StudyKind kind);
StudyConfig load_study_config(const std::string& path, StudyKind kind);

/// Samples the configured right-hand side on [0, 1].
std::function<double(double)> make_source(const SourceSpec& source);

using Cell = std::variant<double, std::int64_t, std::string>;

/// Tabular study output plus named trend flags.
struct StudyReport {
  std::string study;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::map<std::string, bool> trends;
  std::vector<double> wall_seconds;   // per row; kept out of the CSV so it stays reproducible
  std::vector<std::string> notes;
  /// Extra CSV files (name, content) such as graph profiles.
  std::vector<std::pair<std::string, std::string>> attachments;

  bool trends_pass() const;
  double number(std::size_t row, const std::string& column) const;
  std::size_t column(const std::string& name) const;
};

inline constexpr const char* kCsvSchemaLine = "# strange-term-lab v1";

std::string to_csv(const StudyReport& report);
nlohmann::json to_json(const StudyReport& report);
/// Writes <study>.csv, <study>.json and any attachments into dir (created if needed).
void write_report(const StudyReport& report, const std::string& dir);

StudyReport run_capacity(const StudyConfig& config);
StudyReport run_rod_convergence(const StudyConfig& config);
StudyReport run_rod_spectrum(const StudyConfig& config);
StudyReport run_resolvent_probe(const StudyConfig& config);
StudyReport run_graph_limit(const StudyConfig& config);
StudyReport run_regime(const StudyConfig& config);
StudyReport run_study(const StudyConfig& config);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace stlab
