#pragma once

#include <optional>
#include <vector>

#include "hermitize/flow.hpp"
#include "hermitize/metric.hpp"
#include "hermitize/models.hpp"
#include "hermitize/vielbein.hpp"

namespace hermitize
{

enum class FrameTag
{
	Original,
	Flat
};

struct StateTrajectory
{
	TimeGrid grid;
	std::vector<Vector> samples;
	FrameTag frame = FrameTag::Original;

	[[nodiscard]] const Vector& operator[](std::size_t k) const { return samples[k]; }
	[[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
};

/// d|psi>/dt = -i H |psi>, no renormalization.
[[nodiscard]] StateTrajectory evolve_state(const HamiltonianModel& model, const Vector& psi0, const TimeGrid& grid,
                                           const FlowOptions& options = {});

/// |psi>_flat = E |psi> node by node.
[[nodiscard]] StateTrajectory to_flat(const VielbeinFrame& frame, const StateTrajectory& psi);

/// <phi| G |psi>
[[nodiscard]] Complex inner_product(const Matrix& g, const Vector& phi, const Vector& psi);

/// Metric-route and flat-route inner products of two evolved states.
struct InnerProductSeries
{
	std::vector<Complex> metric_route;
	std::vector<Complex> flat_route;
	/// |phi| |psi| |G| per node; the natural scale of both routes.
	std::vector<double> scale;
};

[[nodiscard]] InnerProductSeries inner_product_series(const MetricTrajectory& metric, const VielbeinFrame& frame,
                                                      const StateTrajectory& phi, const StateTrajectory& psi);

struct Observable
{
	Matrix matrix;
	/// When set, O is declared self-adjoint with respect to this metric.
	std::optional<Matrix> metric;
};

/// |O† G - G O| / (|G| |O|), max-norms.
[[nodiscard]] double self_adjointness_residual(const Matrix& o, const Matrix& g);

/// Throws PreconditionError if a declared metric does not make O self-adjoint.
void validate_observable(const Observable& o, double tol = 1e-9);

struct Expectation
{
	Complex value;
	double route_difference;
};

/// <psi| G O |psi> with G = E†E, cross-checked against the flat route
/// (E psi)† (E O E^-1) (E psi). Throws ConsistencyError when the two routes
/// differ by more than 1e-8 relative to max(1, |value|).
[[nodiscard]] Expectation expectation(const Matrix& e, const Observable& o, const Vector& psi);

/// Original route only.
[[nodiscard]] Complex expectation_in_metric(const Matrix& g, const Observable& o, const Vector& psi);

struct FlatObservable
{
	Matrix matrix;
	double hermiticity_residual;
	double spectrum_gap;
};

/// E O E^-1 at one node. O must be self-adjoint with respect to E†E; the
/// result is checked Hermitian (1e-9) and isospectral with O (1e-8).
[[nodiscard]] FlatObservable observable_flat(const VielbeinFrame& frame, const Observable& o, std::size_t node);

/// E(0) = 1, H_flat = 0.
[[nodiscard]] VielbeinFrame heisenberg_frame(const HamiltonianModel& model, const TimeGrid& grid,
                                             const FlowOptions& options = {});

/// E = U_I† with dU_I/dt = -i h_s U_I, U_I(0) = 1, for H = h_s + h_int.
/// The induced Hamiltonian is U_I† h_int U_I.
[[nodiscard]] VielbeinFrame interaction_frame(const TimeFunction& h_s, const TimeFunction& h_int,
                                              const TimeGrid& grid, const FlowOptions& options = {});

/// Per-step gap between the flat trajectory and one RK4 step of
/// d|psi>/dt = -i H_flat |psi> from the previous node.
[[nodiscard]] std::vector<double> flat_step_residuals(const TimeFunction& h_flat, const StateTrajectory& flat);

} // namespace hermitize
