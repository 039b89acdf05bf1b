#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hermitize/flow.hpp"
#include "hermitize/models.hpp"

namespace hermitize
{

using Json = nlohmann::json;

enum class ModelKind
{
	TwoLevelLoss,
	TwoModeBosonic,
	Custom
};

enum class GaugeKind
{
	Zero,
	ModelHermitianPart,
	Custom,
	PointwiseCholesky,
	PointwiseSqrt
};

enum class SeedKind
{
	Identity,
	Oracle,
	Matrix
};

enum class OutputFormat
{
	Csv,
	Json
};

struct ScenarioTolerances
{
	double hermiticity = 1e-8;
	double oracle = 1e-8;
	double metric_consistency = 1e-8;
	double norm_drift = 1e-7;
};

struct ObservableSpec
{
	std::string label;
	Matrix matrix;
};

struct ScenarioConfig
{
	ModelKind model = ModelKind::TwoLevelLoss;
	TwoLevelLossParams two_level;
	TwoModeBosonicParams bosonic;
	Matrix custom_matrix;

	TimeGrid grid;
	GaugeKind gauge = GaugeKind::Zero;
	Matrix gauge_matrix;
	Vector initial_state;
	SeedKind seed = SeedKind::Identity;
	Matrix seed_matrix;
	std::vector<ObservableSpec> observables;

	std::string output_path = "diagnostics.csv";
	OutputFormat format = OutputFormat::Csv;
	double ep_tol = 1e-9;
	ScenarioTolerances tolerances;
	FlowOptions flow;

	/// The configuration document as given (after overrides).
	Json source;
};

/// Reads a JSON document; throws ConfigError on I/O or syntax errors.
[[nodiscard]] Json load_config_file(const std::string& path);

/// Applies "dotted.key=value"; the value is parsed as JSON when possible,
/// otherwise taken as a string.
void apply_override(Json& config, std::string_view assignment);

/// Sets a dotted key to a JSON value, creating intermediate objects.
void set_dotted(Json& config, std::string_view dotted_key, Json value);

/// Validates against the schema; throws ConfigError naming the offending key.
[[nodiscard]] ScenarioConfig parse_config(const Json& config);

[[nodiscard]] HamiltonianModel build_model(const ScenarioConfig& config);

[[nodiscard]] std::string regime_label(const ScenarioConfig& config);

struct DiagnosticRecord
{
	double t;
	double herm_residual_Hflat;
	double min_eig_G;
	double cond_G;
	double metric_consistency;
	double inner_product_re;
	double inner_product_im;
	std::optional<double> oracle_deviation;
	double flat_norm;
	std::vector<Complex> observables;
};

struct InvariantViolation
{
	std::string invariant;
	std::string message;
};

struct ScenarioResult
{
	std::vector<DiagnosticRecord> records;
	std::vector<std::string> observable_labels;
	double max_hermiticity_residual = 0.0;
	/// max_t |<psi|G|psi>(t) - <psi|G|psi>(0)| / |<psi|G|psi>(0)|
	double max_norm_drift = 0.0;
	std::optional<double> max_oracle_deviation;
	std::optional<InvariantViolation> violation;
};

/// model -> metric / vielbein -> dynamics, one record per node. Library
/// errors propagate; post-hoc invariant checks land in `violation`.
[[nodiscard]] ScenarioResult execute_scenario(const ScenarioConfig& config);

[[nodiscard]] std::string csv_number(double x);

[[nodiscard]] std::string format_records(const ScenarioConfig& config, const ScenarioResult& result,
                                         OutputFormat format);

void write_text_file(const std::string& path, const std::string& content);

struct SweepRow
{
	double value = 0.0;
	std::string regime;
	double max_herm_residual = 0.0;
	double max_norm_drift = 0.0;
	/// "ok", "config-error" or "invariant:<name>"
	std::string status;
	std::string error;
	std::string output_path;
};

struct SweepOptions
{
	bool parallel = true;
	bool write_element_files = true;
};

/// One scenario per value of `axis` (a numeric model parameter such as
/// "model.gamma"). Failures are recorded per row; rows follow input order.
[[nodiscard]] std::vector<SweepRow> run_sweep(const Json& base, const std::string& axis,
                                              const std::vector<double>& values, const SweepOptions& options = {});

[[nodiscard]] std::string format_sweep(const std::string& axis, const std::vector<SweepRow>& rows, OutputFormat format);

/// Element file for sweep index i next to the summary path: stem.i.ext
[[nodiscard]] std::string sweep_element_path(const std::string& summary_path, std::size_t index, OutputFormat format);

} // namespace hermitize
