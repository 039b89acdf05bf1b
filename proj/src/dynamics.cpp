#include "hermitize/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hermitize/errors.hpp"

namespace hermitize
{

StateTrajectory evolve_state(const HamiltonianModel& model, const Vector& psi0, const TimeGrid& grid,
                             const FlowOptions& options)
{
	if(psi0.size() != model.dim())
	{
		throw PreconditionError("evolve_state: state dimension does not match the model");
	}
	if(!psi0.allFinite() || psi0.norm() == 0.0)
	{
		throw PreconditionError("evolve_state: initial state must be finite and nonzero");
	}
	const MatrixRhs rhs = [&model](double t, const Matrix& psi) { return Matrix(-I * (model(t) * psi)); };
	const OperatorTrajectory traj = integrate_matrix_ode(rhs, Matrix(psi0), grid, TrajectoryRole::State, options);

	StateTrajectory out{grid, {}, FrameTag::Original};
	out.samples.reserve(traj.size());
	for(const Matrix& m : traj.samples)
	{
		out.samples.emplace_back(m.col(0));
	}
	return out;
}

StateTrajectory to_flat(const VielbeinFrame& frame, const StateTrajectory& psi)
{
	if(!(frame.grid() == psi.grid) || frame.size() != psi.size())
	{
		throw PreconditionError("to_flat: frame and state live on different grids");
	}
	if(psi.frame != FrameTag::Original)
	{
		throw PreconditionError("to_flat: state is already in the flat frame");
	}
	StateTrajectory out{psi.grid, {}, FrameTag::Flat};
	out.samples.reserve(psi.size());
	for(std::size_t k = 0; k < psi.size(); ++k)
	{
		out.samples.emplace_back(frame.vielbein(k) * psi[k]);
	}
	return out;
}

Complex inner_product(const Matrix& g, const Vector& phi, const Vector& psi)
{
	if(g.rows() != phi.size() || g.cols() != psi.size())
	{
		throw PreconditionError("inner_product: operands are not conformable");
	}
	return phi.dot(g * psi);
}

InnerProductSeries inner_product_series(const MetricTrajectory& metric, const VielbeinFrame& frame,
                                        const StateTrajectory& phi, const StateTrajectory& psi)
{
	if(!(metric.grid() == frame.grid()) || !(phi.grid == frame.grid()) || !(psi.grid == frame.grid()))
	{
		throw PreconditionError("inner_product_series: grid mismatch");
	}
	InnerProductSeries out;
	for(std::size_t k = 0; k < frame.size(); ++k)
	{
		out.metric_route.push_back(inner_product(metric[k], phi[k], psi[k]));
		const Vector e_phi = frame.vielbein(k) * phi[k];
		const Vector e_psi = frame.vielbein(k) * psi[k];
		out.flat_route.push_back(e_phi.dot(e_psi));
		out.scale.push_back(phi[k].norm() * psi[k].norm() * max_norm(metric[k]));
	}
	return out;
}

double self_adjointness_residual(const Matrix& o, const Matrix& g)
{
	const double scale = max_norm(g) * max_norm(o);
	const double gap = max_norm(o.adjoint() * g - g * o);
	return scale > 0.0 ? gap / scale : gap;
}

void validate_observable(const Observable& o, double tol)
{
	require_operator(o.matrix, "observable");
	if(o.metric)
	{
		if(o.metric->rows() != o.matrix.rows())
		{
			throw PreconditionError("observable: metric dimension mismatch");
		}
		const double residual = self_adjointness_residual(o.matrix, *o.metric);
		if(residual > tol)
		{
			throw PreconditionError("observable is not self-adjoint with respect to its metric (relative residual "
			                        + hermitize::format_number(residual) + ")");
		}
	}
}

Complex expectation_in_metric(const Matrix& g, const Observable& o, const Vector& psi)
{
	if(o.matrix.rows() != psi.size() || g.rows() != psi.size())
	{
		throw PreconditionError("expectation: dimension mismatch");
	}
	return psi.dot(g * (o.matrix * psi));
}

Expectation expectation(const Matrix& e, const Observable& o, const Vector& psi)
{
	validate_observable(o);
	const Matrix g = e.adjoint() * e;
	const Complex value = expectation_in_metric(g, o, psi);

	const Vector flat = e * psi;
	const Matrix o_flat = right_solve(e * o.matrix, e);
	const Complex flat_value = flat.dot(o_flat * flat);

	const double difference = std::abs(value - flat_value);
	if(difference > 1e-8 * std::max(1.0, std::abs(value)))
	{
		throw ConsistencyError("expectation-frame-independence",
		                       "original and flat expectation values differ by " + hermitize::format_number(difference));
	}
	return {value, difference};
}

FlatObservable observable_flat(const VielbeinFrame& frame, const Observable& o, std::size_t node)
{
	if(node >= frame.size())
	{
		throw PreconditionError("observable_flat: node out of range");
	}
	require_operator(o.matrix, "observable");
	const Matrix& e = frame.vielbein(node);
	if(o.matrix.rows() != e.rows())
	{
		throw PreconditionError("observable_flat: dimension mismatch");
	}
	const Matrix g = frame.metric(node);
	const double residual = self_adjointness_residual(o.matrix, g);
	if(residual > 1e-9)
	{
		throw PreconditionError("observable_flat: O is not self-adjoint with respect to the frame metric (relative residual "
		                        + hermitize::format_number(residual) + ")");
	}

	FlatObservable out{right_solve(e * o.matrix, e), 0.0, 0.0};
	out.hermiticity_residual = hermiticity_residual(out.matrix);
	if(out.hermiticity_residual > 1e-9 * std::max(1.0, max_norm(out.matrix)))
	{
		throw HermiticityError("flat observable is not Hermitian (residual " + hermitize::format_number(out.hermiticity_residual)
		                           + ")",
		                       out.hermiticity_residual);
	}
	out.spectrum_gap = spectrum_distance(sorted_eigenvalues(o.matrix), sorted_eigenvalues(out.matrix));
	if(out.spectrum_gap > 1e-8 * std::max(1.0, max_norm(o.matrix)))
	{
		throw ConsistencyError("spectral-invariance",
		                       "flat observable spectrum differs by " + hermitize::format_number(out.spectrum_gap));
	}
	return out;
}

VielbeinFrame heisenberg_frame(const HamiltonianModel& model, const TimeGrid& grid, const FlowOptions& options)
{
	const Eigen::Index n = model.dim();
	const TimeFunction zero = [n](double) { return Matrix(Matrix::Zero(n, n)); };
	return coevolve_vielbein(model, zero, Matrix::Identity(n, n), grid, options);
}

VielbeinFrame interaction_frame(const TimeFunction& h_s, const TimeFunction& h_int, const TimeGrid& grid,
                                const FlowOptions& options)
{
	if(!h_s || !h_int)
	{
		throw PreconditionError("interaction_frame: empty Hamiltonian function");
	}
	const Matrix probe = h_s(grid.t0());
	const Eigen::Index n = probe.rows();
	const Matrix coupling = h_int(grid.t0());
	if(coupling.rows() != n || hermiticity_residual(coupling) > StructuralTolerance::for_dim(n).hermiticity
	                                                                  * std::max(1.0, max_norm(coupling)))
	{
		throw PreconditionError("interaction_frame: h_int must be Hermitian with the dimension of h_s");
	}
	const TimeFunction zero = [n](double) { return Matrix(Matrix::Zero(n, n)); };
	const OperatorTrajectory u = gauge_flow({h_s, zero, Matrix::Identity(n, n)}, grid, options);

	VielbeinFrame frame;
	frame.gauge = GaugeLabel::Custom;
	frame.trajectory = {grid, {}, TrajectoryRole::Vielbein};
	for(std::size_t k = 0; k < u.size(); ++k)
	{
		const double t = grid.time(k);
		const Matrix hs = h_s(t);
		const Matrix hi = h_int(t);
		if(hi.rows() != n || hi.cols() != n)
		{
			throw PreconditionError("interaction_frame: h_int has the wrong dimension");
		}
		const double tol = StructuralTolerance::for_dim(n).hermiticity * std::max(1.0, max_norm(hi));
		if(hermiticity_residual(hi) > tol)
		{
			throw PreconditionError("interaction_frame: h_int is not Hermitian at t = " + hermitize::format_number(t));
		}

		Matrix e = u[k].adjoint();
		Matrix de = I * (e * hs);
		Matrix h = hs + hi;
		Matrix induced = induced_hamiltonian(e, de, h);
		const Matrix expected = e * hi * u[k];
		const double gap = max_norm(induced - expected);
		if(gap > 1e-8 * (1.0 + max_norm(expected)))
		{
			throw ConsistencyError("induced-hamiltonian", "interaction frame differs from U† h_int U by "
			                                                  + hermitize::format_number(gap) + " at t = " + hermitize::format_number(t));
		}
		const double residual = hermiticity_residual(induced);
		if(residual > induced_hermiticity_tolerance(induced))
		{
			throw HermiticityError("interaction-frame induced Hamiltonian is not Hermitian", residual);
		}
		frame.hermiticity_residuals.push_back(residual);
		frame.trajectory.samples.push_back(std::move(e));
		frame.rates.push_back(std::move(de));
		frame.hamiltonians.push_back(std::move(h));
		frame.induced.push_back(std::move(induced));
	}
	return frame;
}

std::vector<double> flat_step_residuals(const TimeFunction& h_flat, const StateTrajectory& flat)
{
	if(flat.frame != FrameTag::Flat)
	{
		throw PreconditionError("flat_step_residuals: trajectory is not in the flat frame");
	}
	const MatrixRhs rhs = [&h_flat](double t, const Matrix& psi) { return Matrix(-I * (h_flat(t) * psi)); };
	const double h = flat.grid.step();
	std::vector<double> out;
	out.reserve(flat.size() > 0 ? flat.size() - 1 : 0);
	for(std::size_t k = 0; k + 1 < flat.size(); ++k)
	{
		const Matrix next = advance(rhs, flat.grid.time(k), Matrix(flat[k]), h, Stepper::RungeKutta4);
		out.push_back(max_norm(next - Matrix(flat[k + 1])));
	}
	return out;
}

} // namespace hermitize
