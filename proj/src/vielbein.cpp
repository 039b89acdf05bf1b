#include "hermitize/vielbein.hpp"

#include <algorithm>
#include <string>

#include "hermitize/errors.hpp"

namespace hermitize
{

std::string_view to_string(GaugeLabel label)
{
	switch(label)
	{
	case GaugeLabel::Cholesky:
		return "Cholesky";
	case GaugeLabel::HermitianSqrt:
		return "HermitianSqrt";
	case GaugeLabel::TargetFlat:
		return "TargetFlat";
	case GaugeLabel::Custom:
		return "Custom";
	}
	return "?";
}

Matrix induced_hamiltonian(const Matrix& e, const Matrix& de, const Matrix& h)
{
	if(e.rows() != h.rows() || de.rows() != e.rows() || de.cols() != e.cols())
	{
		throw PreconditionError("induced_hamiltonian: operands are not conformable");
	}
	return right_solve(e * h + I * de, e);
}

Matrix coevolution_rate(const Matrix& target_flat, const Matrix& e, const Matrix& h)
{
	return -I * (target_flat * e) + I * (e * h);
}

double induced_hermiticity_tolerance(const Matrix& induced)
{
	return 1e-8 * (1.0 + max_norm(induced));
}

namespace
{
void require_hermitian_generator(const Matrix& m, double t, const char* what)
{
	const double tol = StructuralTolerance::for_dim(m.rows()).hermiticity * std::max(1.0, max_norm(m));
	const double residual = hermiticity_residual(m);
	if(residual > tol)
	{
		throw PreconditionError(std::string(what) + " is not Hermitian at t = " + hermitize::format_number(t)
		                        + " (residual " + hermitize::format_number(residual) + ")");
	}
}

void check_induced_hermiticity(const Matrix& induced, double t)
{
	const double residual = hermiticity_residual(induced);
	if(residual > induced_hermiticity_tolerance(induced))
	{
		throw HermiticityError("induced Hamiltonian is not Hermitian at t = " + hermitize::format_number(t)
		                           + " (residual " + hermitize::format_number(residual) + ")",
		                       residual);
	}
}

void require_invertible(const Matrix& e, double t)
{
	const double cond = condition_estimate(e);
	if(!(cond < kSingularCondition))
	{
		throw SingularityError("vielbein lost invertibility at t = " + hermitize::format_number(t), cond);
	}
}
} // namespace

VielbeinFrame coevolve_vielbein(const HamiltonianModel& model, const TimeFunction& target_flat, const Matrix& e0,
                                const TimeGrid& grid, const FlowOptions& options)
{
	require_operator(e0, "coevolve_vielbein");
	if(e0.rows() != model.dim())
	{
		throw PreconditionError("coevolve_vielbein: initial vielbein does not match the model dimension");
	}
	require_invertible(e0, grid.t0());

	auto target_at = [&](double t) {
		Matrix m = target_flat(t);
		if(m.rows() != model.dim() || m.cols() != model.dim())
		{
			throw PreconditionError("coevolve_vielbein: target has the wrong dimension");
		}
		return m;
	};

	const MatrixRhs rhs = [&](double t, const Matrix& e) { return coevolution_rate(target_at(t), e, model(t)); };
	OperatorTrajectory traj = integrate_matrix_ode(rhs, e0, grid, TrajectoryRole::Vielbein, options);

	VielbeinFrame frame;
	frame.gauge = GaugeLabel::TargetFlat;
	frame.induced_generator = target_flat;
	const std::size_t n = traj.size();
	frame.rates.reserve(n);
	frame.hamiltonians.reserve(n);
	frame.induced.reserve(n);
	frame.hermiticity_residuals.reserve(n);

	for(std::size_t k = 0; k < n; ++k)
	{
		const double t = grid.time(k);
		const Matrix target = target_at(t);
		require_hermitian_generator(target, t, "target induced Hamiltonian");
		const Matrix& e = traj[k];
		require_invertible(e, t);
		Matrix h = model(t);
		Matrix de = coevolution_rate(target, e, h);
		Matrix induced = induced_hamiltonian(e, de, h);
		check_induced_hermiticity(induced, t);
		const double gap = max_norm(induced - target);
		if(gap > 1e-8 * (1.0 + max_norm(target)))
		{
			throw ConsistencyError("induced-hamiltonian", "co-evolved frame misses its target at t = "
			                                                  + hermitize::format_number(t) + " by " + hermitize::format_number(gap));
		}
		frame.hermiticity_residuals.push_back(hermiticity_residual(induced));
		frame.rates.push_back(std::move(de));
		frame.hamiltonians.push_back(std::move(h));
		frame.induced.push_back(std::move(induced));
	}
	frame.trajectory = std::move(traj);
	return frame;
}

namespace
{
// Fourth-order and second-order finite-difference derivatives of samples
// at node k; the gap between them bounds the fourth-order error.
std::pair<Matrix, Matrix> differentiate(const std::vector<Matrix>& s, std::size_t k, double h)
{
	const std::size_t n = s.size();
	if(k >= 2 && k + 2 < n)
	{
		Matrix d4 = (s[k - 2] - 8.0 * s[k - 1] + 8.0 * s[k + 1] - s[k + 2]) / (12.0 * h);
		Matrix d2 = (s[k + 1] - s[k - 1]) / (2.0 * h);
		return {std::move(d4), std::move(d2)};
	}
	if(k == 0)
	{
		Matrix d4 = (-25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4]) / (12.0 * h);
		Matrix d2 = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h);
		return {std::move(d4), std::move(d2)};
	}
	if(k == 1)
	{
		Matrix d4 = (-3.0 * s[0] - 10.0 * s[1] + 18.0 * s[2] - 6.0 * s[3] + s[4]) / (12.0 * h);
		Matrix d2 = (s[2] - s[0]) / (2.0 * h);
		return {std::move(d4), std::move(d2)};
	}
	if(k == n - 2)
	{
		Matrix d4 = (3.0 * s[n - 1] + 10.0 * s[n - 2] - 18.0 * s[n - 3] + 6.0 * s[n - 4] - s[n - 5]) / (12.0 * h);
		Matrix d2 = (s[n - 1] - s[n - 3]) / (2.0 * h);
		return {std::move(d4), std::move(d2)};
	}
	Matrix d4 = (25.0 * s[n - 1] - 48.0 * s[n - 2] + 36.0 * s[n - 3] - 16.0 * s[n - 4] + 3.0 * s[n - 5]) / (12.0 * h);
	Matrix d2 = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h);
	return {std::move(d4), std::move(d2)};
}
} // namespace

VielbeinFrame factor_metric_pointwise(const MetricTrajectory& metric, const HamiltonianModel& model,
                                      PointwiseFactor factor)
{
	const TimeGrid& grid = metric.grid();
	if(metric.size() < 5)
	{
		throw PreconditionError("factor_metric_pointwise: need at least 5 nodes for fourth-order differences");
	}
	if(metric[0].rows() != model.dim())
	{
		throw PreconditionError("factor_metric_pointwise: metric does not match the model dimension");
	}

	VielbeinFrame frame;
	frame.gauge = factor == PointwiseFactor::Cholesky ? GaugeLabel::Cholesky : GaugeLabel::HermitianSqrt;
	frame.pointwise = true;
	frame.trajectory = {grid, {}, TrajectoryRole::Vielbein};
	const std::size_t n = metric.size();
	frame.trajectory.samples.reserve(n);
	for(std::size_t k = 0; k < n; ++k)
	{
		const Matrix& g = metric[k];
		const StructuralTolerance tol = StructuralTolerance::for_dim(g.rows());
		frame.trajectory.samples.push_back(factor == PointwiseFactor::Cholesky ? cholesky_upper(g, tol)
		                                                                       : hermitian_sqrt(g, tol));
	}

	const double h = grid.step();
	for(std::size_t k = 0; k < n; ++k)
	{
		const double t = grid.time(k);
		const Matrix& e = frame.trajectory[k];
		require_invertible(e, t);
		auto [de, de_low] = differentiate(frame.trajectory.samples, k, h);
		Matrix ham = model(t);
		Matrix induced = induced_hamiltonian(e, de, ham);
		frame.induced_error_bounds.push_back(max_norm(right_solve(de - de_low, e)));
		frame.hermiticity_residuals.push_back(hermiticity_residual(induced));
		frame.rates.push_back(std::move(de));
		frame.hamiltonians.push_back(std::move(ham));
		frame.induced.push_back(std::move(induced));
	}
	return frame;
}

OperatorTrajectory gauge_flow(const GaugeGenerator& generator, const TimeGrid& grid, const FlowOptions& options,
                              double unitarity_tol)
{
	if(!generator.h_left || !generator.h_right)
	{
		throw PreconditionError("gauge_flow: generator functions are empty");
	}
	require_operator(generator.u0, "gauge_flow");
	if(unitarity_residual(generator.u0) > unitarity_tol)
	{
		throw PreconditionError("gauge_flow: U(0) is not unitary");
	}

	auto check_generators = [&](double t) {
		const Matrix left = generator.h_left(t);
		const Matrix right = generator.h_right(t);
		if(left.rows() != generator.u0.rows() || right.rows() != generator.u0.rows())
		{
			throw PreconditionError("gauge_flow: generator dimension mismatch");
		}
		require_hermitian_generator(left, t, "H_L");
		require_hermitian_generator(right, t, "H_R");
	};
	check_generators(grid.t0());

	const MatrixRhs rhs = [&](double t, const Matrix& u) {
		return Matrix(-I * (generator.h_left(t) * u) + I * (u * generator.h_right(t)));
	};
	const StepHook hook = [&](std::size_t k, double t, Matrix& u) {
		check_generators(t);
		const double drift = unitarity_residual(u);
		if(drift > unitarity_tol)
		{
			throw UnitarityDriftError("gauge_flow: unitarity drift " + hermitize::format_number(drift) + " at t = "
			                              + hermitize::format_number(t) + "; refine the grid",
			                          k, drift);
		}
	};
	return integrate_matrix_ode(rhs, generator.u0, grid, TrajectoryRole::Unitary, options, hook);
}

VielbeinFrame apply_gauge(const VielbeinFrame& frame, const OperatorTrajectory& unitary,
                          const GaugeGenerator& generator, double agreement_tol)
{
	if(!(frame.grid() == unitary.grid) || frame.size() != unitary.size())
	{
		throw PreconditionError("apply_gauge: frame and gauge live on different grids");
	}

	VielbeinFrame out;
	out.gauge = GaugeLabel::Custom;
	out.pointwise = frame.pointwise;
	out.induced_error_bounds = frame.induced_error_bounds;
	out.trajectory = {frame.grid(), {}, TrajectoryRole::Vielbein};
	const std::size_t n = frame.size();
	out.trajectory.samples.reserve(n);

	for(std::size_t k = 0; k < n; ++k)
	{
		const double t = frame.grid().time(k);
		const Matrix& u = unitary[k];
		if(unitarity_residual(u) > StructuralTolerance{}.unitarity)
		{
			throw UnitarityDriftError("apply_gauge: gauge is not unitary at t = " + hermitize::format_number(t), k,
			                          unitarity_residual(u));
		}
		const Matrix left = generator.h_left(t);
		const Matrix right = generator.h_right(t);
		const Matrix& e = frame.vielbein(k);

		Matrix e_new = u * e;
		const Matrix du = -I * (left * u) + I * (u * right);
		Matrix de_new = du * e + u * frame.rates[k];

		Matrix by_formula = left + right_solve(u * (frame.induced[k] - right), u);
		const Matrix direct = induced_hamiltonian(e_new, de_new, frame.hamiltonians[k]);
		const double gap = max_norm(by_formula - direct);
		if(gap > agreement_tol)
		{
			throw ConsistencyError("gauge-covariance", "gauge formula and direct induced Hamiltonian differ by "
			                                               + hermitize::format_number(gap) + " at t = " + hermitize::format_number(t)
			                                               + "; grid too coarse?");
		}
		if(!frame.pointwise)
		{
			check_induced_hermiticity(by_formula, t);
		}
		out.gauge_route_residuals.push_back(gap);
		out.hermiticity_residuals.push_back(hermiticity_residual(by_formula));
		out.trajectory.samples.push_back(std::move(e_new));
		out.rates.push_back(std::move(de_new));
		out.hamiltonians.push_back(frame.hamiltonians[k]);
		out.induced.push_back(std::move(by_formula));
	}
	return out;
}

VielbeinFrame retarget_gauge(const VielbeinFrame& frame, const TimeFunction& new_target, const TimeGrid& grid,
                             const FlowOptions& options)
{
	if(!frame.induced_generator)
	{
		throw PreconditionError("retarget_gauge: frame has no off-grid induced Hamiltonian (pointwise or gauged frame)");
	}
	if(!(grid == frame.grid()))
	{
		throw PreconditionError("retarget_gauge: grid differs from the frame grid");
	}
	const Eigen::Index dim = frame.vielbein(0).rows();
	const GaugeGenerator generator{new_target, frame.induced_generator, Matrix::Identity(dim, dim)};
	const OperatorTrajectory connecting = gauge_flow(generator, grid, options);
	VielbeinFrame out = apply_gauge(frame, connecting, generator);

	for(std::size_t k = 0; k < out.size(); ++k)
	{
		const double t = grid.time(k);
		const double gap = max_norm(out.induced[k] - new_target(t));
		if(gap > 1e-7)
		{
			throw ConsistencyError("induced-hamiltonian", "retargeted frame misses its target at t = "
			                                                  + hermitize::format_number(t) + " by " + hermitize::format_number(gap));
		}
	}
	out.gauge = GaugeLabel::TargetFlat;
	out.induced_generator = new_target;
	return out;
}

} // namespace hermitize
