#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hermitize/linalg.hpp"

namespace hermitize
{

/// Uniform grid t_k = t0 + k (t1 - t0) / steps, k = 0..steps.
class TimeGrid
{
public:
	TimeGrid() = default;
	TimeGrid(double t0, double t1, int steps);

	[[nodiscard]] double t0() const noexcept { return t0_; }
	[[nodiscard]] double t1() const noexcept { return t1_; }
	[[nodiscard]] int steps() const noexcept { return steps_; }
	[[nodiscard]] std::size_t nodes() const noexcept { return static_cast<std::size_t>(steps_) + 1; }
	[[nodiscard]] double step() const noexcept { return (t1_ - t0_) / steps_; }
	[[nodiscard]] double time(std::size_t k) const noexcept
	{
		return k == static_cast<std::size_t>(steps_) ? t1_ : t0_ + static_cast<double>(k) * step();
	}

	/// Same interval, `factor` times as many steps.
	[[nodiscard]] TimeGrid refined(int factor) const { return {t0_, t1_, steps_ * factor}; }

	friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
	double t0_ = 0.0;
	double t1_ = 1.0;
	int steps_ = 1;
};

enum class TrajectoryRole
{
	Metric,
	Vielbein,
	Unitary,
	State
};

struct OperatorTrajectory
{
	TimeGrid grid;
	std::vector<Matrix> samples;
	TrajectoryRole role = TrajectoryRole::Metric;

	[[nodiscard]] const Matrix& operator[](std::size_t k) const { return samples[k]; }
	[[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
};

/// dM/dt = rhs(t, M)
using MatrixRhs = std::function<Matrix(double, const Matrix&)>;

enum class Stepper
{
	RungeKutta4,
	/// First order; exists as a negative control for convergence checks.
	ForwardEuler
};

struct FlowOptions
{
	Stepper stepper = Stepper::RungeKutta4;
	/// Used by the metric flow only: project G <- (G + G†)/2 after each step.
	bool hermitian_projection = true;
};

[[nodiscard]] Matrix advance(const MatrixRhs& rhs, double t, const Matrix& m, double h, Stepper stepper);

/// Called after each accepted step with the node index and the new sample;
/// may modify the sample (e.g. structural projection).
using StepHook = std::function<void(std::size_t node, double t, Matrix& sample)>;

/// Fixed-step integration sampled at every grid node. Throws DivergenceError
/// on the first non-finite sample.
[[nodiscard]] OperatorTrajectory integrate_matrix_ode(const MatrixRhs& rhs, const Matrix& m0, const TimeGrid& grid,
                                                      TrajectoryRole role = TrajectoryRole::Metric,
                                                      const FlowOptions& options = {},
                                                      const StepHook& after_step = {});

/// Empirical order from the errors at h and h/2 against a reference at h/4.
/// Returns NaN when both errors vanish (the flow is integrated exactly) and 0
/// when refining does not reduce the error.
[[nodiscard]] double richardson_order_check(const MatrixRhs& rhs, const Matrix& m0, const TimeGrid& grid,
                                            const FlowOptions& options = {});

} // namespace hermitize
