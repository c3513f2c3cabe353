#pragma once

#include "ptmu/cyclicity.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ptmu {

using nlohmann::json;

struct Diagnostic {
  std::string code;
  std::string path; ///< JSON pointer into the config
  std::string message;
};

/// Raised by parse_config when diagnostics are present.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<Diagnostic> d);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
  std::vector<Diagnostic> diags_;
};

enum class Expectation { none, cyclic, noncyclic };

struct ThetaConfig {
  std::string label;
  BoundedFunctionSpec spec;
  Expectation expect = Expectation::none;
  bool certificate = false;
};

struct RobertsConfig {
  std::string theta; ///< label whose singular measure is decomposed
  double c = 1.0;
  int N = 2;
  int M = 3;
};

struct CompanionConfig {
  std::string theta;
  std::vector<int> n{16, 64, 256};
  double sigma_fraction = 0.5; ///< sigma = fraction * c c1 rho^2 / 8
  int grid_points = 1000;      ///< closed-disk check grid
  /// Scale c of the companion. Unset: beta / (6 c1 K), so that 3 c c1 K = beta / 2.
  std::optional<double> c;
};

struct ExperimentConfig {
  std::string name;
  SpaceMeasure space;
  std::vector<ThetaConfig> thetas;
  std::vector<int> degrees{0, 1, 2, 4, 8, 16, 32, 64, 100};
  QuadratureOptions quadrature;
  CertificateOptions certificate;
  double evidence_threshold = 1e-2;
  std::optional<RobertsConfig> roberts;
  std::optional<CompanionConfig> companion;
};

/// Structural and invariant checks of a parsed JSON document. Never throws.
std::vector<Diagnostic> validate(const json& doc);
/// Throws ValidationError when validate() reports anything.
ExperimentConfig parse_config(const json& doc);
/// Canonical form: every field explicit. parse_config(config_to_json(c)) reproduces it.
json config_to_json(const ExperimentConfig& c);
json diagnostics_to_json(const std::vector<Diagnostic>& d);

/// Euclidean distance between the realized support of nu and the carrier;
/// nullopt without a boundary part or without singular mass.
std::optional<double> support_distance(const SingularMeasure& nu, const SpaceMeasure& mu);

json measure_to_json(const SingularMeasure& nu);
json circle_set_to_json(const CircleSet& s);

struct ThetaResult {
  std::string label;
  DistanceCurve curve;
  std::optional<DualCertificate> certificate;
  json certificate_status; ///< {"status": "ok"} or the failure code
  Verdict verdict;
};

struct RunResult {
  json report;
  std::vector<std::pair<std::string, std::string>> files; ///< name, contents
  bool failed = false;                                    ///< some stage failed
};

/// Executes the pipeline. Stage failures are recorded in the report; only
/// validation failures throw.
RunResult run_experiment(const ExperimentConfig& c);

/// CSV with columns N, d_N, best_dual_bound, verdict.
std::string curve_csv(const ThetaResult& r);

/// Writes each file through a temporary and a rename. Throws Error("io").
void write_files(const std::filesystem::path& dir, const std::vector<std::pair<std::string, std::string>>& files);

struct GoldenMismatch {
  std::string file;
  std::string detail;
};

/// <dir>/manifest.json lists {"configs": [path, ...]} relative to <dir>; each
/// config's artifacts live in <dir>/<name>/. Byte-equal files pass; otherwise
/// numbers are compared with relative tolerance `rtol`.
std::vector<GoldenMismatch> goldens_check(const std::filesystem::path& dir, double rtol = 1e-10);
void goldens_update(const std::filesystem::path& dir);

/// Reads and parses a JSON file. Throws Error("io") or Error("parse").
json read_json(const std::filesystem::path& p);
/// Stable text form used for every emitted JSON artifact.
std::string dump_json(const json& j);

} // namespace ptmu
