#include "hermitize/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hermitize/errors.hpp"

namespace hermitize
{

TimeGrid::TimeGrid(double t0, double t1, int steps)
	: t0_{t0}, t1_{t1}, steps_{steps}
{
	if(!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
	{
		throw PreconditionError("TimeGrid: need finite t0 < t1");
	}
	if(steps < 1)
	{
		throw PreconditionError("TimeGrid: steps must be >= 1");
	}
}

Matrix advance(const MatrixRhs& rhs, double t, const Matrix& m, double h, Stepper stepper)
{
	if(stepper == Stepper::ForwardEuler)
	{
		return m + h * rhs(t, m);
	}
	const double half = 0.5 * h;
	const Matrix k1 = rhs(t, m);
	const Matrix k2 = rhs(t + half, m + half * k1);
	const Matrix k3 = rhs(t + half, m + half * k2);
	const Matrix k4 = rhs(t + h, m + h * k3);
	return m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

OperatorTrajectory integrate_matrix_ode(const MatrixRhs& rhs, const Matrix& m0, const TimeGrid& grid,
                                        TrajectoryRole role, const FlowOptions& options, const StepHook& after_step)
{
	if(!all_finite(m0))
	{
		throw PreconditionError("integrate_matrix_ode: initial value has non-finite entries");
	}
	OperatorTrajectory out{grid, {}, role};
	out.samples.reserve(grid.nodes());
	out.samples.push_back(m0);

	const double h = grid.step();
	for(std::size_t k = 1; k < grid.nodes(); ++k)
	{
		const double t = grid.time(k - 1);
		Matrix next = advance(rhs, t, out.samples.back(), h, options.stepper);
		if(!all_finite(next))
		{
			throw DivergenceError("integrate_matrix_ode: non-finite state at step " + std::to_string(k), k);
		}
		if(after_step)
		{
			after_step(k, grid.time(k), next);
		}
		out.samples.push_back(std::move(next));
	}
	return out;
}

namespace
{
double trajectory_distance(const OperatorTrajectory& coarse, const OperatorTrajectory& fine)
{
	const std::size_t stride = (fine.size() - 1) / (coarse.size() - 1);
	double worst = 0.0;
	for(std::size_t k = 0; k < coarse.size(); ++k)
	{
		worst = std::max(worst, max_norm(coarse[k] - fine[k * stride]));
	}
	return worst;
}
} // namespace

double richardson_order_check(const MatrixRhs& rhs, const Matrix& m0, const TimeGrid& grid,
                              const FlowOptions& options)
{
	const auto coarse = integrate_matrix_ode(rhs, m0, grid, TrajectoryRole::Metric, options);
	const auto half = integrate_matrix_ode(rhs, m0, grid.refined(2), TrajectoryRole::Metric, options);
	const auto reference = integrate_matrix_ode(rhs, m0, grid.refined(4), TrajectoryRole::Metric, options);

	const double e_coarse = trajectory_distance(coarse, reference);
	const double e_half = trajectory_distance(half, reference);
	if(e_coarse == 0.0 && e_half == 0.0)
	{
		return std::numeric_limits<double>::quiet_NaN();
	}
	// with the reference at h/4, e(h) / e(h/2) = 1 + 2^p for an order-p method
	const double excess = e_coarse / e_half - 1.0;
	return excess > 0.0 ? std::log2(excess) : 0.0;
}

} // namespace hermitize
