#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hermitize/acceptance.hpp"
#include "hermitize/errors.hpp"
#include "hermitize/scenario.hpp"

namespace
{

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInvariantViolation = 2;

struct CommonFlags
{
	std::string config_path;
	std::vector<std::string> overrides;
	std::string output;
	std::string format;
};

void add_common(CLI::App& cmd, CommonFlags& flags)
{
	cmd.add_option("--config", flags.config_path, "JSON scenario file");
	cmd.add_option("--set", flags.overrides, "Override a config key: dotted.key=value (repeatable)");
	cmd.add_option("--output", flags.output, "Output path (overrides output.path)");
	cmd.add_option("--format", flags.format, "Output format (overrides output.format)")
		->check(CLI::IsMember({"csv", "json"}));
}

hermitize::Json assemble(const CommonFlags& flags)
{
	hermitize::Json doc = flags.config_path.empty() ? hermitize::Json::object()
	                                                : hermitize::load_config_file(flags.config_path);
	for(const std::string& o : flags.overrides)
	{
		hermitize::apply_override(doc, o);
	}
	if(!flags.output.empty())
	{
		hermitize::set_dotted(doc, "output.path", flags.output);
	}
	if(!flags.format.empty())
	{
		hermitize::set_dotted(doc, "output.format", flags.format);
	}
	return doc;
}

int report_violation(const std::string& invariant, const std::string& message)
{
	std::cerr << "invariant violated: " << invariant << ": " << message << '\n';
	return kInvariantViolation;
}

int run_command(const CommonFlags& flags)
{
	const hermitize::ScenarioConfig config = hermitize::parse_config(assemble(flags));
	const hermitize::ScenarioResult result = hermitize::execute_scenario(config);
	hermitize::write_text_file(config.output_path, hermitize::format_records(config, result, config.format));

	std::cout << "regime " << hermitize::regime_label(config) << ", " << result.records.size() << " records -> "
	          << config.output_path << '\n'
	          << "max hermiticity residual " << hermitize::csv_number(result.max_hermiticity_residual) << '\n'
	          << "max metric-norm drift " << hermitize::csv_number(result.max_norm_drift) << '\n';
	if(result.max_oracle_deviation)
	{
		std::cout << "max oracle deviation " << hermitize::csv_number(*result.max_oracle_deviation) << '\n';
	}
	if(result.violation)
	{
		return report_violation(result.violation->invariant, result.violation->message);
	}
	return kOk;
}

std::vector<double> parse_values(const std::vector<std::string>& items)
{
	std::vector<double> values;
	for(const std::string& item : items)
	{
		std::stringstream ss(item);
		std::string token;
		while(std::getline(ss, token, ','))
		{
			if(token.empty())
			{
				continue;
			}
			try
			{
				std::size_t used = 0;
				values.push_back(std::stod(token, &used));
				if(used != token.size())
				{
					throw std::invalid_argument(token);
				}
			}
			catch(const std::exception&)
			{
				throw hermitize::ConfigError("sweep value '" + token + "' is not a number");
			}
		}
	}
	return values;
}

int sweep_command(const CommonFlags& flags, const std::string& axis, const std::vector<std::string>& raw_values)
{
	const hermitize::Json doc = assemble(flags);
	const hermitize::ScenarioConfig base = hermitize::parse_config(doc);
	const std::vector<hermitize::SweepRow> rows = hermitize::run_sweep(doc, axis, parse_values(raw_values));
	hermitize::write_text_file(base.output_path, hermitize::format_sweep(axis, rows, base.format));

	int code = kOk;
	for(std::size_t i = 0; i < rows.size(); ++i)
	{
		const hermitize::SweepRow& r = rows[i];
		std::cout << axis << '=' << hermitize::csv_number(r.value) << "  " << r.regime << "  " << r.status << '\n';
		if(r.status.rfind("invariant:", 0) == 0)
		{
			std::cerr << "row " << i << ": invariant violated: " << r.status.substr(10) << ": " << r.error << '\n';
			code = kInvariantViolation;
		}
		else if(r.status != "ok")
		{
			std::cerr << "row " << i << ": " << r.status << ": " << r.error << '\n';
			code = code == kOk ? kConfigError : code;
		}
	}
	std::cout << "summary -> " << base.output_path << '\n';
	return code;
}

std::string second_run_path(const std::string& path)
{
	const std::size_t slash = path.find_last_of('/');
	const std::size_t dot = path.find_last_of('.');
	if(dot != std::string::npos && (slash == std::string::npos || dot > slash))
	{
		return path.substr(0, dot) + ".rerun" + path.substr(dot);
	}
	return path + ".rerun";
}

int check_command(const std::string& output, const std::string& stepper, bool no_projection)
{
	hermitize::SuiteOptions options;
	options.stepper = stepper == "euler" ? hermitize::Stepper::ForwardEuler : hermitize::Stepper::RungeKutta4;
	options.hermitian_projection = !no_projection;

	const auto results = hermitize::run_check(options, output, second_run_path(output));
	std::cout << hermitize::format_table(results);
	bool ok = true;
	for(const auto& r : results)
	{
		if(!r.passed())
		{
			std::cerr << "invariant violated: criterion " << r.id << " (" << r.name << ")"
			          << (r.error.empty() ? "" : ": " + r.error) << '\n';
			ok = false;
		}
	}
	return ok ? kOk : kInvariantViolation;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Metric flows, vielbeins and induced Hermitian Hamiltonians for non-Hermitian models"};
	app.require_subcommand(1);

	CommonFlags run_flags;
	CLI::App* run = app.add_subcommand("run", "Run one scenario and write per-node diagnostics");
	add_common(*run, run_flags);

	CommonFlags sweep_flags;
	std::string axis;
	std::vector<std::string> values;
	CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario for each value of one model parameter");
	add_common(*sweep, sweep_flags);
	sweep->add_option("--axis", axis, "Dotted model parameter, e.g. model.gamma")->required();
	sweep->add_option("--values", values, "Comma-separated values (repeatable)");

	std::string check_output = "check_diagnostics.csv";
	std::string stepper = "rk4";
	bool no_projection = false;
	CLI::App* check = app.add_subcommand("check", "Run the acceptance suite");
	check->add_option("--output", check_output, "Diagnostic file");
	check->add_option("--stepper", stepper, "Integrator")->check(CLI::IsMember({"rk4", "euler"}));
	check->add_flag("--no-projection", no_projection, "Disable Hermitian projection of the metric");

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::Success& e)
	{
		return app.exit(e);
	}
	catch(const CLI::ParseError& e)
	{
		app.exit(e);
		return kConfigError;
	}

	try
	{
		if(run->parsed())
		{
			return run_command(run_flags);
		}
		if(sweep->parsed())
		{
			return sweep_command(sweep_flags, axis, values);
		}
		return check_command(check_output, stepper, no_projection);
	}
	catch(const hermitize::ConfigError& e)
	{
		std::cerr << "config error: " << e.what() << '\n';
		return kConfigError;
	}
	catch(const hermitize::ParameterError& e)
	{
		std::cerr << "config error: " << e.what() << '\n';
		return kConfigError;
	}
	catch(const hermitize::Error& e)
	{
		return report_violation(std::string(e.invariant()), e.what());
	}
	catch(const std::exception& e)
	{
		return report_violation("internal", e.what());
	}
}
