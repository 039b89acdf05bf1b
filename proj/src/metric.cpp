#include "hermitize/metric.hpp"

#include <algorithm>
#include <string>

#include "hermitize/errors.hpp"

namespace hermitize
{

Matrix metric_rhs(const Matrix& g, const Matrix& h)
{
	return I * (g * h - h.adjoint() * g);
}

MetricTrajectory evolve_metric(const HamiltonianModel& model, const Matrix& g0, const TimeGrid& grid,
                               const FlowOptions& options, std::optional<StructuralTolerance> tolerance)
{
	require_operator(g0, "evolve_metric");
	if(g0.rows() != model.dim())
	{
		throw PreconditionError("evolve_metric: initial metric does not match the model dimension");
	}
	const StructuralTolerance tol = tolerance.value_or(StructuralTolerance::for_dim(model.dim()));

	// validates Hermiticity and positive-definiteness of the seed
	(void)cholesky_upper(g0, tol);

	MetricTrajectory out{{grid, {}, TrajectoryRole::Metric}, {}, {}, {}};
	out.min_eigenvalues.reserve(grid.nodes());
	out.hermiticity_residuals.reserve(grid.nodes());
	out.condition_numbers.reserve(grid.nodes());

	auto record = [&](double t, const Matrix& g) {
		const RealVector eig = hermitian_eigenvalues(g, tol.hermiticity * std::max(1.0, max_norm(g)));
		const double lo = eig.minCoeff();
		if(!(lo > tol.positivity))
		{
			throw MetricCollapseError("metric lost positivity at t = " + hermitize::format_number(t)
			                              + " (min eigenvalue " + hermitize::format_number(lo) + ")",
			                          t, lo);
		}
		out.min_eigenvalues.push_back(lo);
		out.condition_numbers.push_back(eig.maxCoeff() / lo);
	};

	const Matrix g_start = hermitian_part(g0);
	out.hermiticity_residuals.push_back(hermiticity_residual(g0));
	record(grid.t0(), g_start);

	const MatrixRhs rhs = [&model](double t, const Matrix& g) { return metric_rhs(g, model(t)); };
	const StepHook hook = [&](std::size_t, double t, Matrix& g) {
		out.hermiticity_residuals.push_back(hermiticity_residual(g));
		if(options.hermitian_projection)
		{
			g = hermitian_part(g);
		}
		record(t, g);
	};
	out.trajectory = integrate_matrix_ode(rhs, g_start, grid, TrajectoryRole::Metric, options, hook);
	return out;
}

bool metric_gauge_related(const MetricTrajectory& g1, const MetricTrajectory& g2, const HamiltonianModel& model,
                          double tol, const FlowOptions& options)
{
	if(!(g1.grid() == g2.grid()) || g1.size() != g2.size())
	{
		throw PreconditionError("metric_gauge_related: trajectories are on different grids");
	}
	if(g1[0].rows() != model.dim() || g2[0].rows() != model.dim())
	{
		throw PreconditionError("metric_gauge_related: dimension mismatch with the model");
	}

	// T(0) = G1(0)^{-1/2} G2(0)^{1/2}
	const Matrix t0 = solve_linear(hermitian_sqrt(g1[0]), hermitian_sqrt(g2[0]));
	const MatrixRhs rhs = [&model](double t, const Matrix& transport) {
		const Matrix h = model(t);
		return Matrix(-I * (h * transport) + I * (transport * h));
	};
	const OperatorTrajectory transport = integrate_matrix_ode(rhs, t0, g1.grid(), TrajectoryRole::Unitary, options);

	for(std::size_t k = 0; k < g1.size(); ++k)
	{
		if(!(condition_estimate(g1[k]) < kSingularCondition) || !(condition_estimate(g2[k]) < kSingularCondition))
		{
			throw SingularityError("metric_gauge_related: singular metric at t = "
			                           + hermitize::format_number(g1.grid().time(k)),
			                       condition_estimate(g1[k]));
		}
		const Matrix& t = transport[k];
		if(max_norm(g2[k] - t.adjoint() * g1[k] * t) > tol)
		{
			return false;
		}
	}
	return true;
}

} // namespace hermitize
