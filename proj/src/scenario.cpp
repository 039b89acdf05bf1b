#include "hermitize/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hermitize/dynamics.hpp"
#include "hermitize/errors.hpp"
#include "hermitize/metric.hpp"
#include "hermitize/oracles.hpp"
#include "hermitize/parallel.hpp"
#include "hermitize/vielbein.hpp"

namespace hermitize
{

namespace
{

std::string join(const std::string& path, const std::string& key)
{
	return path.empty() ? key : path + "." + key;
}

// Schema walker: every getter marks its key as known; finish() rejects the rest.
class Section
{
public:
	Section(const Json& j, std::string path)
		: j_{j}, path_{std::move(path)}
	{
		if(!j_.is_object())
		{
			throw ConfigError("key '" + (path_.empty() ? std::string("<root>") : path_) + "' must be an object");
		}
	}

	[[nodiscard]] bool has(const std::string& key)
	{
		known_.insert(key);
		return j_.contains(key);
	}

	[[nodiscard]] const Json& get(const std::string& key)
	{
		if(!has(key))
		{
			throw ConfigError("missing required key '" + name(key) + "'");
		}
		return j_.at(key);
	}

	[[nodiscard]] double number(const std::string& key)
	{
		const Json& v = get(key);
		if(!v.is_number())
		{
			throw ConfigError("key '" + name(key) + "' must be a number");
		}
		const double x = v.get<double>();
		if(!std::isfinite(x))
		{
			throw ConfigError("key '" + name(key) + "' must be finite");
		}
		return x;
	}

	[[nodiscard]] double number_or(const std::string& key, double fallback)
	{
		return has(key) ? number(key) : fallback;
	}

	[[nodiscard]] int integer(const std::string& key)
	{
		const Json& v = get(key);
		if(!v.is_number_integer())
		{
			throw ConfigError("key '" + name(key) + "' must be an integer");
		}
		return v.get<int>();
	}

	[[nodiscard]] std::string string(const std::string& key)
	{
		const Json& v = get(key);
		if(!v.is_string())
		{
			throw ConfigError("key '" + name(key) + "' must be a string");
		}
		return v.get<std::string>();
	}

	[[nodiscard]] std::string string_or(const std::string& key, const std::string& fallback)
	{
		return has(key) ? string(key) : fallback;
	}

	[[nodiscard]] bool boolean_or(const std::string& key, bool fallback)
	{
		if(!has(key))
		{
			return fallback;
		}
		const Json& v = j_.at(key);
		if(!v.is_boolean())
		{
			throw ConfigError("key '" + name(key) + "' must be true or false");
		}
		return v.get<bool>();
	}

	[[nodiscard]] std::string name(const std::string& key) const { return join(path_, key); }

	void finish() const
	{
		for(const auto& item : j_.items())
		{
			if(known_.count(item.key()) == 0)
			{
				throw ConfigError("unknown key '" + join(path_, item.key()) + "'");
			}
		}
	}

private:
	const Json& j_;
	std::string path_;
	std::set<std::string> known_;
};

Complex parse_complex(const Json& v, const std::string& where)
{
	if(v.is_number())
	{
		return {v.get<double>(), 0.0};
	}
	if(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
	{
		return {v[0].get<double>(), v[1].get<double>()};
	}
	throw ConfigError("key '" + where + "' must hold numbers or [re, im] pairs");
}

Matrix parse_matrix(const Json& v, const std::string& where)
{
	if(!v.is_array() || v.empty())
	{
		throw ConfigError("key '" + where + "' must be a non-empty array of rows");
	}
	const auto n = static_cast<Eigen::Index>(v.size());
	Matrix m(n, n);
	for(Eigen::Index r = 0; r < n; ++r)
	{
		const Json& row = v[static_cast<std::size_t>(r)];
		if(!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
		{
			throw ConfigError("key '" + where + "' must be a square matrix");
		}
		for(Eigen::Index c = 0; c < n; ++c)
		{
			m(r, c) = parse_complex(row[static_cast<std::size_t>(c)], where);
		}
	}
	if(!all_finite(m))
	{
		throw ConfigError("key '" + where + "' has non-finite entries");
	}
	return m;
}

Vector parse_vector(const Json& v, const std::string& where)
{
	if(!v.is_array() || v.empty())
	{
		throw ConfigError("key '" + where + "' must be a non-empty array");
	}
	Vector out(static_cast<Eigen::Index>(v.size()));
	for(std::size_t k = 0; k < v.size(); ++k)
	{
		out(static_cast<Eigen::Index>(k)) = parse_complex(v[k], where);
	}
	return out;
}

GaugeKind parse_gauge_kind(const std::string& s, const std::string& where)
{
	if(s == "zero")
	{
		return GaugeKind::Zero;
	}
	if(s == "model-hermitian-part")
	{
		return GaugeKind::ModelHermitianPart;
	}
	if(s == "custom")
	{
		return GaugeKind::Custom;
	}
	if(s == "pointwise-cholesky")
	{
		return GaugeKind::PointwiseCholesky;
	}
	if(s == "pointwise-sqrt")
	{
		return GaugeKind::PointwiseSqrt;
	}
	throw ConfigError("key '" + where
	                  + "' must be one of zero, model-hermitian-part, custom, pointwise-cholesky, pointwise-sqrt");
}

SeedKind parse_seed_kind(const std::string& s, const std::string& where)
{
	if(s == "identity")
	{
		return SeedKind::Identity;
	}
	if(s == "oracle")
	{
		return SeedKind::Oracle;
	}
	if(s == "matrix")
	{
		return SeedKind::Matrix;
	}
	throw ConfigError("key '" + where + "' must be one of identity, oracle, matrix");
}

Eigen::Index model_dim(const ScenarioConfig& c)
{
	switch(c.model)
	{
	case ModelKind::TwoLevelLoss:
		return 2;
	case ModelKind::TwoModeBosonic:
		return TwoModeFockSpace(c.bosonic.n_max).dim();
	case ModelKind::Custom:
		return c.custom_matrix.rows();
	}
	return 0;
}

} // namespace

Json load_config_file(const std::string& path)
{
	std::ifstream in(path);
	if(!in)
	{
		throw ConfigError("cannot open config file '" + path + "'");
	}
	try
	{
		return Json::parse(in);
	}
	catch(const Json::parse_error& e)
	{
		throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
	}
}

void set_dotted(Json& config, std::string_view dotted_key, Json value)
{
	if(dotted_key.empty())
	{
		throw ConfigError("empty key in override");
	}
	Json* node = &config;
	std::size_t start = 0;
	while(true)
	{
		const std::size_t dot = dotted_key.find('.', start);
		const std::string part(dotted_key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
		if(part.empty())
		{
			throw ConfigError("malformed key '" + std::string(dotted_key) + "'");
		}
		if(node->is_null())
		{
			*node = Json::object();
		}
		if(!node->is_object())
		{
			throw ConfigError("key '" + std::string(dotted_key) + "' descends into a non-object value");
		}
		if(dot == std::string_view::npos)
		{
			(*node)[part] = std::move(value);
			return;
		}
		node = &(*node)[part];
		start = dot + 1;
	}
}

void apply_override(Json& config, std::string_view assignment)
{
	const std::size_t eq = assignment.find('=');
	if(eq == std::string_view::npos)
	{
		throw ConfigError("override '" + std::string(assignment) + "' must have the form key=value");
	}
	const std::string_view key = assignment.substr(0, eq);
	const std::string text(assignment.substr(eq + 1));
	Json value = Json::parse(text, nullptr, false);
	if(value.is_discarded())
	{
		value = text;
	}
	set_dotted(config, key, std::move(value));
}

ScenarioConfig parse_config(const Json& j)
{
	ScenarioConfig c;
	c.source = j;
	Section root(j, "");

	{
		Section model(root.get("model"), "model");
		const std::string name = model.string("name");
		if(name == "two_level_loss")
		{
			c.model = ModelKind::TwoLevelLoss;
			c.two_level.omega = model.number("omega");
			c.two_level.gamma = model.number("gamma");
		}
		else if(name == "two_mode_bosonic")
		{
			c.model = ModelKind::TwoModeBosonic;
			c.bosonic.gamma_a = model.number("gamma_a");
			c.bosonic.gamma_b = model.number("gamma_b");
			c.bosonic.g = model.number("g");
			c.bosonic.n_max = model.integer("n_max");
			if(c.bosonic.n_max < 0 || c.bosonic.n_max > 40)
			{
				throw ConfigError("key 'model.n_max' must lie in [0, 40]");
			}
		}
		else if(name == "custom")
		{
			c.model = ModelKind::Custom;
			c.custom_matrix = parse_matrix(model.get("matrix"), "model.matrix");
		}
		else
		{
			throw ConfigError("key 'model.name' must be one of two_level_loss, two_mode_bosonic, custom");
		}
		model.finish();
	}
	const Eigen::Index dim = model_dim(c);

	{
		Section grid(root.get("grid"), "grid");
		const double t0 = grid.number_or("t0", 0.0);
		const double t1 = grid.number("t1");
		const int steps = grid.integer("steps");
		grid.finish();
		try
		{
			c.grid = TimeGrid(t0, t1, steps);
		}
		catch(const PreconditionError& e)
		{
			throw ConfigError(std::string("key 'grid': ") + e.what());
		}
	}

	if(root.has("gauge"))
	{
		const Json& g = j.at("gauge");
		if(g.is_string())
		{
			c.gauge = parse_gauge_kind(g.get<std::string>(), "gauge");
		}
		else
		{
			Section gauge(g, "gauge");
			c.gauge = parse_gauge_kind(gauge.string("kind"), "gauge.kind");
			if(c.gauge == GaugeKind::Custom)
			{
				c.gauge_matrix = parse_matrix(gauge.get("matrix"), "gauge.matrix");
			}
			gauge.finish();
		}
		if(c.gauge == GaugeKind::Custom && c.gauge_matrix.size() == 0)
		{
			throw ConfigError("missing required key 'gauge.matrix'");
		}
		if(c.gauge == GaugeKind::Custom && c.gauge_matrix.rows() != dim)
		{
			throw ConfigError("key 'gauge.matrix' does not match the model dimension");
		}
	}

	if(root.has("initial_state"))
	{
		c.initial_state = parse_vector(j.at("initial_state"), "initial_state");
		if(c.initial_state.size() != dim)
		{
			throw ConfigError("key 'initial_state' does not match the model dimension");
		}
		if(c.initial_state.norm() == 0.0)
		{
			throw ConfigError("key 'initial_state' must be nonzero");
		}
	}
	else
	{
		c.initial_state = Vector::Zero(dim);
		c.initial_state(0) = 1.0;
	}

	if(root.has("metric_seed"))
	{
		const Json& s = j.at("metric_seed");
		if(s.is_string())
		{
			c.seed = parse_seed_kind(s.get<std::string>(), "metric_seed");
		}
		else
		{
			Section seed(s, "metric_seed");
			c.seed = parse_seed_kind(seed.string("kind"), "metric_seed.kind");
			if(c.seed == SeedKind::Matrix)
			{
				c.seed_matrix = parse_matrix(seed.get("matrix"), "metric_seed.matrix");
			}
			seed.finish();
		}
		if(c.seed == SeedKind::Matrix && c.seed_matrix.size() == 0)
		{
			throw ConfigError("missing required key 'metric_seed.matrix'");
		}
		if(c.seed == SeedKind::Matrix && c.seed_matrix.rows() != dim)
		{
			throw ConfigError("key 'metric_seed.matrix' does not match the model dimension");
		}
		if(c.seed == SeedKind::Oracle && c.model == ModelKind::Custom)
		{
			throw ConfigError("key 'metric_seed': no closed form exists for custom models");
		}
	}

	if(root.has("observables"))
	{
		const Json& list = j.at("observables");
		if(!list.is_array())
		{
			throw ConfigError("key 'observables' must be an array");
		}
		std::set<std::string> labels;
		for(std::size_t k = 0; k < list.size(); ++k)
		{
			const std::string path = "observables[" + std::to_string(k) + "]";
			Section obs(list[k], path);
			ObservableSpec entry{obs.string("label"), parse_matrix(obs.get("matrix"), path + ".matrix")};
			obs.finish();
			if(entry.label.empty() || entry.label.find_first_of(",\"\n") != std::string::npos)
			{
				throw ConfigError("key '" + path + ".label' must be non-empty without commas or quotes");
			}
			if(!labels.insert(entry.label).second)
			{
				throw ConfigError("key '" + path + ".label' duplicates another observable");
			}
			if(entry.matrix.rows() != dim)
			{
				throw ConfigError("key '" + path + ".matrix' does not match the model dimension");
			}
			c.observables.push_back(std::move(entry));
		}
	}

	if(root.has("output"))
	{
		Section out(j.at("output"), "output");
		const std::string format = out.string_or("format", "csv");
		if(format == "csv")
		{
			c.format = OutputFormat::Csv;
		}
		else if(format == "json")
		{
			c.format = OutputFormat::Json;
		}
		else
		{
			throw ConfigError("key 'output.format' must be csv or json");
		}
		c.output_path = out.string_or("path", c.format == OutputFormat::Csv ? "diagnostics.csv" : "diagnostics.json");
		out.finish();
	}

	c.ep_tol = root.number_or("ep_tol", c.ep_tol);
	if(!(c.ep_tol > 0.0))
	{
		throw ConfigError("key 'ep_tol' must be positive");
	}

	if(root.has("tolerances"))
	{
		Section tol(j.at("tolerances"), "tolerances");
		c.tolerances.hermiticity = tol.number_or("hermiticity", c.tolerances.hermiticity);
		c.tolerances.oracle = tol.number_or("oracle", c.tolerances.oracle);
		c.tolerances.metric_consistency = tol.number_or("metric_consistency", c.tolerances.metric_consistency);
		c.tolerances.norm_drift = tol.number_or("norm_drift", c.tolerances.norm_drift);
		tol.finish();
	}

	if(root.has("integrator"))
	{
		Section integ(j.at("integrator"), "integrator");
		const std::string stepper = integ.string_or("stepper", "rk4");
		if(stepper == "rk4")
		{
			c.flow.stepper = Stepper::RungeKutta4;
		}
		else if(stepper == "euler")
		{
			c.flow.stepper = Stepper::ForwardEuler;
		}
		else
		{
			throw ConfigError("key 'integrator.stepper' must be rk4 or euler");
		}
		c.flow.hermitian_projection = integ.boolean_or("hermitian_projection", true);
		integ.finish();
	}

	root.finish();
	return c;
}

HamiltonianModel build_model(const ScenarioConfig& config)
{
	switch(config.model)
	{
	case ModelKind::TwoLevelLoss:
		return two_level_loss(config.two_level);
	case ModelKind::TwoModeBosonic:
		return two_mode_bosonic(config.bosonic);
	case ModelKind::Custom:
		break;
	}
	const Matrix h = config.custom_matrix;
	return HamiltonianModel(
		h.rows(), [h](double) { return h; }, "custom", true);
}

std::string regime_label(const ScenarioConfig& config)
{
	switch(config.model)
	{
	case ModelKind::TwoLevelLoss:
		return std::string(to_string(classify_regime(config.two_level, config.ep_tol)));
	case ModelKind::TwoModeBosonic:
		return std::string(to_string(classify_bosonic_regime(config.bosonic, config.ep_tol)));
	case ModelKind::Custom:
		break;
	}
	return "custom";
}

namespace
{

OracleParams oracle_params(const ScenarioConfig& c)
{
	OracleParams p;
	p.omega = c.two_level.omega;
	p.gamma = c.two_level.gamma;
	return p;
}

Matrix oracle_vielbein_at(const ScenarioConfig& c, double t)
{
	if(c.model == ModelKind::TwoLevelLoss)
	{
		return vielbein_closed_form(oracle_params(c), t, c.ep_tol).value;
	}
	return bosonic_vielbein_closed_form(c.bosonic, t, {}, c.ep_tol).value;
}

Matrix oracle_target(const ScenarioConfig& c)
{
	if(c.model == ModelKind::TwoLevelLoss)
	{
		return oracle_induced_hamiltonian(oracle_params(c), c.ep_tol);
	}
	const Eigen::Index n = model_dim(c);
	return Matrix::Zero(n, n);
}

// The co-evolved frame reproduces the closed form when it starts from the
// closed form and targets the same induced Hamiltonian.
bool oracle_applies(const ScenarioConfig& c)
{
	if(c.seed != SeedKind::Oracle || c.model == ModelKind::Custom)
	{
		return false;
	}
	const Matrix expected = oracle_target(c);
	if(c.gauge == GaugeKind::Zero)
	{
		return max_norm(expected) == 0.0;
	}
	if(c.gauge == GaugeKind::Custom)
	{
		return max_norm(c.gauge_matrix - expected) <= 1e-12 * std::max(1.0, max_norm(expected));
	}
	return false;
}

} // namespace

ScenarioResult execute_scenario(const ScenarioConfig& config)
{
	const HamiltonianModel model = build_model(config);
	const Eigen::Index dim = model.dim();
	const TimeGrid& grid = config.grid;

	Matrix e0 = Matrix::Identity(dim, dim);
	Matrix g0 = Matrix::Identity(dim, dim);
	if(config.seed == SeedKind::Oracle)
	{
		e0 = oracle_vielbein_at(config, grid.t0());
		g0 = e0.adjoint() * e0;
	}
	else if(config.seed == SeedKind::Matrix)
	{
		g0 = config.seed_matrix;
	}

	const MetricTrajectory metric = evolve_metric(model, g0, grid, config.flow);
	if(config.seed == SeedKind::Matrix)
	{
		e0 = cholesky_upper(hermitian_part(g0));
	}

	VielbeinFrame frame;
	switch(config.gauge)
	{
	case GaugeKind::PointwiseCholesky:
		frame = factor_metric_pointwise(metric, model, PointwiseFactor::Cholesky);
		break;
	case GaugeKind::PointwiseSqrt:
		frame = factor_metric_pointwise(metric, model, PointwiseFactor::HermitianSqrt);
		break;
	case GaugeKind::Zero: {
		const TimeFunction zero = [dim](double) { return Matrix(Matrix::Zero(dim, dim)); };
		frame = coevolve_vielbein(model, zero, e0, grid, config.flow);
		break;
	}
	case GaugeKind::ModelHermitianPart: {
		const TimeFunction part = [&model](double t) { return hermitian_part(model(t)); };
		frame = coevolve_vielbein(model, part, e0, grid, config.flow);
		break;
	}
	case GaugeKind::Custom: {
		const Matrix target = config.gauge_matrix;
		frame = coevolve_vielbein(model, [target](double) { return target; }, e0, grid, config.flow);
		break;
	}
	}

	const StateTrajectory psi = evolve_state(model, config.initial_state, grid, config.flow);
	const StateTrajectory flat = to_flat(frame, psi);
	const bool with_oracle = oracle_applies(config);

	ScenarioResult result;
	for(const ObservableSpec& o : config.observables)
	{
		result.observable_labels.push_back(o.label);
	}

	const Complex initial = inner_product(metric[0], psi[0], psi[0]);
	double worst_consistency = 0.0;
	double worst_oracle = 0.0;
	std::optional<std::string> hermiticity_failure;

	for(std::size_t k = 0; k < grid.nodes(); ++k)
	{
		const double t = grid.time(k);
		const Matrix& g = metric[k];
		const Matrix& e = frame.vielbein(k);

		DiagnosticRecord r{};
		r.t = t;
		r.herm_residual_Hflat = frame.hermiticity_residuals[k];
		r.min_eig_G = metric.min_eigenvalues[k];
		r.cond_G = metric.condition_numbers[k];
		r.metric_consistency = max_norm(e.adjoint() * e - g);
		const Complex ip = inner_product(g, psi[k], psi[k]);
		r.inner_product_re = ip.real();
		r.inner_product_im = ip.imag();
		r.flat_norm = flat[k].norm();
		if(with_oracle)
		{
			const Matrix expected = oracle_vielbein_at(config, t);
			r.oracle_deviation = max_norm(e - expected) / std::max(1.0, max_norm(expected));
			worst_oracle = std::max(worst_oracle, *r.oracle_deviation);
		}
		for(const ObservableSpec& o : config.observables)
		{
			r.observables.push_back(expectation(e, Observable{o.matrix, std::nullopt}, psi[k]).value);
		}

		double allowed = config.tolerances.hermiticity * (1.0 + max_norm(frame.induced[k]));
		if(frame.pointwise)
		{
			allowed += frame.induced_error_bounds[k];
		}
		if(r.herm_residual_Hflat > allowed && !hermiticity_failure)
		{
			hermiticity_failure = "induced Hamiltonian residual " + csv_number(r.herm_residual_Hflat) + " at t = "
			                      + csv_number(t);
		}
		result.max_hermiticity_residual = std::max(result.max_hermiticity_residual, r.herm_residual_Hflat);
		worst_consistency = std::max(worst_consistency, r.metric_consistency / max_norm(g));
		result.max_norm_drift = std::max(result.max_norm_drift, std::abs(ip - initial) / std::abs(initial));
		result.records.push_back(std::move(r));
	}
	if(with_oracle)
	{
		result.max_oracle_deviation = worst_oracle;
	}

	if(hermiticity_failure)
	{
		result.violation = InvariantViolation{"hermiticity", *hermiticity_failure};
	}
	else if(worst_consistency > config.tolerances.metric_consistency)
	{
		result.violation = InvariantViolation{"metric-consistency",
		                                      "|E†E - G| / |G| reached " + csv_number(worst_consistency)};
	}
	else if(result.max_norm_drift > config.tolerances.norm_drift)
	{
		result.violation = InvariantViolation{"norm-conservation",
		                                      "metric norm drifted by " + csv_number(result.max_norm_drift)};
	}
	else if(with_oracle && worst_oracle > config.tolerances.oracle)
	{
		result.violation = InvariantViolation{"oracle-equivalence",
		                                      "deviation from the closed form reached " + csv_number(worst_oracle)};
	}
	return result;
}

std::string csv_number(double x)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", x);
	return buf;
}

std::string format_records(const ScenarioConfig& config, const ScenarioResult& result, OutputFormat format)
{
	static const char* const columns[] = {"t",
	                                      "herm_residual_Hflat",
	                                      "min_eig_G",
	                                      "cond_G",
	                                      "metric_consistency",
	                                      "inner_product_re",
	                                      "inner_product_im",
	                                      "oracle_deviation",
	                                      "flat_norm"};
	if(format == OutputFormat::Csv)
	{
		std::ostringstream out;
		for(std::size_t c = 0; c < std::size(columns); ++c)
		{
			out << (c == 0 ? "" : ",") << columns[c];
		}
		for(const std::string& label : result.observable_labels)
		{
			out << ',' << label << "_re," << label << "_im";
		}
		out << '\n';
		for(const DiagnosticRecord& r : result.records)
		{
			out << csv_number(r.t) << ',' << csv_number(r.herm_residual_Hflat) << ',' << csv_number(r.min_eig_G) << ','
			    << csv_number(r.cond_G) << ',' << csv_number(r.metric_consistency) << ','
			    << csv_number(r.inner_product_re) << ',' << csv_number(r.inner_product_im) << ','
			    << (r.oracle_deviation ? csv_number(*r.oracle_deviation) : "") << ',' << csv_number(r.flat_norm);
			for(const Complex& v : r.observables)
			{
				out << ',' << csv_number(v.real()) << ',' << csv_number(v.imag());
			}
			out << '\n';
		}
		return out.str();
	}

	Json records = Json::array();
	for(const DiagnosticRecord& r : result.records)
	{
		Json row = {{"t", r.t},
		            {"herm_residual_Hflat", r.herm_residual_Hflat},
		            {"min_eig_G", r.min_eig_G},
		            {"cond_G", r.cond_G},
		            {"metric_consistency", r.metric_consistency},
		            {"inner_product_re", r.inner_product_re},
		            {"inner_product_im", r.inner_product_im},
		            {"oracle_deviation", r.oracle_deviation ? Json(*r.oracle_deviation) : Json(nullptr)},
		            {"flat_norm", r.flat_norm}};
		for(std::size_t k = 0; k < r.observables.size(); ++k)
		{
			row[result.observable_labels[k] + "_re"] = r.observables[k].real();
			row[result.observable_labels[k] + "_im"] = r.observables[k].imag();
		}
		records.push_back(std::move(row));
	}
	const Json doc = {{"config", config.source}, {"records", std::move(records)}};
	return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if(!out)
	{
		throw ConfigError("cannot write output file '" + path + "'");
	}
	out << content;
	if(!out)
	{
		throw ConfigError("failed writing output file '" + path + "'");
	}
}

std::string sweep_element_path(const std::string& summary_path, std::size_t index, OutputFormat format)
{
	const std::string ext = format == OutputFormat::Csv ? ".csv" : ".json";
	const std::size_t slash = summary_path.find_last_of('/');
	const std::size_t dot = summary_path.find_last_of('.');
	const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
	const std::string stem = has_ext ? summary_path.substr(0, dot) : summary_path;
	return stem + "." + std::to_string(index) + ext;
}

std::vector<SweepRow> run_sweep(const Json& base, const std::string& axis, const std::vector<double>& values,
                                const SweepOptions& options)
{
	if(values.empty())
	{
		throw ConfigError("sweep needs at least one value");
	}
	if(axis.rfind("model.", 0) != 0 || axis == "model.name")
	{
		throw ConfigError("sweep axis '" + axis + "' must name a numeric model parameter");
	}
	const Json::json_pointer pointer("/" + [&] {
		std::string p = axis;
		std::replace(p.begin(), p.end(), '.', '/');
		return p;
	}());
	if(!base.contains(pointer) || !base.at(pointer).is_number())
	{
		throw ConfigError("sweep axis '" + axis + "' must name a numeric model parameter of the base config");
	}
	// validates the base document before fanning out
	const ScenarioConfig base_config = parse_config(base);

	const std::function<SweepRow(std::size_t)> element = [&](std::size_t i) {
		SweepRow row;
		row.value = values[i];
		row.output_path = sweep_element_path(base_config.output_path, i, base_config.format);
		try
		{
			Json doc = base;
			set_dotted(doc, axis, Json(values[i]));
			if(axis == "model.n_max")
			{
				set_dotted(doc, axis, Json(static_cast<int>(std::lround(values[i]))));
			}
			const ScenarioConfig config = parse_config(doc);
			row.regime = regime_label(config);
			const ScenarioResult result = execute_scenario(config);
			row.max_herm_residual = result.max_hermiticity_residual;
			row.max_norm_drift = result.max_norm_drift;
			if(options.write_element_files)
			{
				write_text_file(row.output_path, format_records(config, result, config.format));
			}
			if(result.violation)
			{
				row.status = "invariant:" + result.violation->invariant;
				row.error = result.violation->message;
			}
			else
			{
				row.status = "ok";
			}
		}
		catch(const ConfigError& e)
		{
			row.status = "config-error";
			row.error = e.what();
		}
		catch(const ParameterError& e)
		{
			row.status = "config-error";
			row.error = e.what();
		}
		catch(const Error& e)
		{
			row.status = "invariant:" + std::string(e.invariant());
			row.error = e.what();
		}
		catch(const std::exception& e)
		{
			row.status = "error";
			row.error = e.what();
		}
		return row;
	};

	return options.parallel ? parallel_map<SweepRow>(values.size(), element) : serial_map<SweepRow>(values.size(), element);
}

std::string format_sweep(const std::string& axis, const std::vector<SweepRow>& rows, OutputFormat format)
{
	if(format == OutputFormat::Json)
	{
		Json list = Json::array();
		for(std::size_t i = 0; i < rows.size(); ++i)
		{
			const SweepRow& r = rows[i];
			list.push_back({{"index", i},
			                {"value", r.value},
			                {"regime", r.regime},
			                {"max_herm_residual", r.max_herm_residual},
			                {"max_norm_drift", r.max_norm_drift},
			                {"status", r.status},
			                {"error", r.error},
			                {"output", r.output_path}});
		}
		return Json{{"axis", axis}, {"rows", std::move(list)}}.dump(2) + "\n";
	}

	auto quoted = [](const std::string& s) {
		std::string out = "\"";
		for(const char ch : s)
		{
			out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
		}
		return out + "\"";
	};
	std::ostringstream out;
	out << "index,value,regime,max_herm_residual,max_norm_drift,status,error,output\n";
	for(std::size_t i = 0; i < rows.size(); ++i)
	{
		const SweepRow& r = rows[i];
		out << i << ',' << csv_number(r.value) << ',' << r.regime << ',' << csv_number(r.max_herm_residual) << ','
		    << csv_number(r.max_norm_drift) << ',' << r.status << ',' << quoted(r.error) << ',' << quoted(r.output_path)
		    << '\n';
	}
	return out.str();
}

} // namespace hermitize
