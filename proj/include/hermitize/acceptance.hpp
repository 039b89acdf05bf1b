#pragma once

#include <string>
#include <vector>

#include "hermitize/flow.hpp"

namespace hermitize
{

struct Check
{
	std::string label;
	double measured = 0.0;
	double lower = 0.0;
	double upper = 0.0;
	bool passed = false;
};

struct CriterionResult
{
	int id = 0;
	std::string name;
	std::vector<Check> checks;
	/// Set when the criterion aborted with an exception.
	std::string error;
	double seconds = 0.0;

	[[nodiscard]] bool passed() const;
};

struct SuiteOptions
{
	Stepper stepper = Stepper::RungeKutta4;
	bool hermitian_projection = true;
};

/// Criteria 1-9, in order.
[[nodiscard]] std::vector<CriterionResult> run_acceptance(const SuiteOptions& options = {});

/// Deterministic CSV of the results (no timings).
[[nodiscard]] std::string serialize_results(const std::vector<CriterionResult>& results);

/// Runs criteria 1-9 twice, writes each serialization to its own file and
/// appends criterion 10 comparing the two files byte for byte. The first
/// run's results are returned.
[[nodiscard]] std::vector<CriterionResult> run_check(const SuiteOptions& options, const std::string& first_path,
                                                     const std::string& second_path);

/// One line per criterion: "[PASS] 1 name  (0.41 s)  label=value ...".
[[nodiscard]] std::string format_table(const std::vector<CriterionResult>& results);

} // namespace hermitize
