#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hermitize
{

/// Base of every error raised by the library. `invariant()` names the
/// structural property that failed; the CLI prints it on the error stream.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;

	[[nodiscard]] virtual std::string_view invariant() const noexcept { return "unspecified"; }
};

/// Bad caller input: dimensions, non-finite entries, violated preconditions.
class PreconditionError : public Error
{
public:
	using Error::Error;
	[[nodiscard]] std::string_view invariant() const noexcept override { return "precondition"; }
};

/// Model or oracle parameters outside their admissible domain (e.g. omega = 0).
class ParameterError : public PreconditionError
{
public:
	using PreconditionError::PreconditionError;
	[[nodiscard]] std::string_view invariant() const noexcept override { return "parameters"; }
};

class HermiticityError : public Error
{
public:
	HermiticityError(const std::string& what, double residual)
		: Error(what), residual_{residual}
	{
	}

	[[nodiscard]] std::string_view invariant() const noexcept override { return "hermiticity"; }
	[[nodiscard]] double residual() const noexcept { return residual_; }

private:
	double residual_;
};

/// Positivity failure during a factorization of a metric.
class MetricDegeneracyError : public Error
{
public:
	MetricDegeneracyError(const std::string& what, std::size_t pivot)
		: Error(what), pivot_{pivot}
	{
	}

	[[nodiscard]] std::string_view invariant() const noexcept override { return "positivity"; }
	[[nodiscard]] std::size_t pivot() const noexcept { return pivot_; }

private:
	std::size_t pivot_;
};

/// Positivity lost along an integrated metric flow.
class MetricCollapseError : public Error
{
public:
	MetricCollapseError(const std::string& what, double time, double min_eigenvalue)
		: Error(what), time_{time}, min_eigenvalue_{min_eigenvalue}
	{
	}

	[[nodiscard]] std::string_view invariant() const noexcept override { return "positivity"; }
	[[nodiscard]] double time() const noexcept { return time_; }
	[[nodiscard]] double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
	double time_;
	double min_eigenvalue_;
};

class SingularityError : public Error
{
public:
	SingularityError(const std::string& what, double condition)
		: Error(what), condition_{condition}
	{
	}

	[[nodiscard]] std::string_view invariant() const noexcept override { return "invertibility"; }
	[[nodiscard]] double condition() const noexcept { return condition_; }

private:
	double condition_;
};

/// Non-finite value produced by an integrator or a matrix function.
class DivergenceError : public Error
{
public:
	DivergenceError(const std::string& what, std::size_t step)
		: Error(what), step_{step}
	{
	}

	[[nodiscard]] std::string_view invariant() const noexcept override { return "finiteness"; }
	[[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
	std::size_t step_;
};

class UnitarityDriftError : public Error
{
public:
	UnitarityDriftError(const std::string& what, std::size_t node, double drift)
		: Error(what), node_{node}, drift_{drift}
	{
	}

	[[nodiscard]] std::string_view invariant() const noexcept override { return "unitarity"; }
	[[nodiscard]] std::size_t node() const noexcept { return node_; }
	[[nodiscard]] double drift() const noexcept { return drift_; }

private:
	std::size_t node_;
	double drift_;
};

/// Two routes to the same quantity disagree beyond tolerance.
class ConsistencyError : public Error
{
public:
	ConsistencyError(std::string name, const std::string& what)
		: Error(what), name_{std::move(name)}
	{
	}

	[[nodiscard]] std::string_view invariant() const noexcept override { return name_; }

private:
	std::string name_;
};

/// Invalid scenario configuration: missing, unknown or ill-typed keys.
class ConfigError : public Error
{
public:
	using Error::Error;
	[[nodiscard]] std::string_view invariant() const noexcept override { return "config"; }
};

/// Compact number formatting for error messages.
[[nodiscard]] inline std::string format_number(double x)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.6g", x);
	return buf;
}

} // namespace hermitize
