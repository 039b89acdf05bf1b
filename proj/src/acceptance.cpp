#include "hermitize/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>

#include "hermitize/dynamics.hpp"
#include "hermitize/errors.hpp"
#include "hermitize/metric.hpp"
#include "hermitize/oracles.hpp"
#include "hermitize/parallel.hpp"
#include "hermitize/scenario.hpp"
#include "hermitize/vielbein.hpp"

namespace hermitize
{

bool CriterionResult::passed() const
{
	if(!error.empty() || checks.empty())
	{
		return false;
	}
	for(const Check& c : checks)
	{
		if(!c.passed)
		{
			return false;
		}
	}
	return true;
}

namespace
{

Check at_most(std::string label, double measured, double bound)
{
	return {std::move(label), measured, 0.0, bound, std::isfinite(measured) && measured <= bound};
}

Check within(std::string label, double measured, double lower, double upper)
{
	return {std::move(label), measured, lower, upper, std::isfinite(measured) && measured >= lower && measured <= upper};
}

struct RegimeCase
{
	std::string name;
	double gamma;
	double t1;
};

const RegimeCase kUnderdamped{"underdamped", 1.0, 5.0};
const RegimeCase kOverdamped{"overdamped", 4.0, 5.0};
const RegimeCase kExceptional{"ep", 2.0, 5.0};

OracleParams params_for(double gamma)
{
	OracleParams p;
	p.omega = 1.0;
	p.gamma = gamma;
	return p;
}

TimeFunction constant(const Matrix& m)
{
	return [m](double) { return m; };
}

// co-evolved frame started on the closed form with the closed form's target
VielbeinFrame coevolved_oracle_frame(double gamma, const TimeGrid& grid, const FlowOptions& flow)
{
	const OracleParams p = params_for(gamma);
	const HamiltonianModel model = two_level_loss({p.omega, p.gamma});
	return coevolve_vielbein(model, constant(oracle_induced_hamiltonian(p)), vielbein_closed_form(p, grid.t0()).value,
	                         grid, flow);
}

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index n)
{
	std::uniform_real_distribution<double> u(-1.0, 1.0);
	Matrix h(n, n);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		h(i, i) = u(rng);
		for(Eigen::Index j = i + 1; j < n; ++j)
		{
			const double re = u(rng);
			const double im = u(rng);
			h(i, j) = Complex(re, im);
			h(j, i) = Complex(re, -im);
		}
	}
	return h;
}

Vector random_state(std::mt19937_64& rng, Eigen::Index n)
{
	std::uniform_real_distribution<double> u(-1.0, 1.0);
	Vector v(n);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		const double re = u(rng);
		const double im = u(rng);
		v(i) = Complex(re, im);
	}
	return v;
}

double relative_deviation(const Matrix& value, const Matrix& reference)
{
	return max_norm(value - reference) / std::max(1.0, max_norm(reference));
}

// 1. Hermiticity of the induced Hamiltonian under random gauges
std::vector<Check> hermiticity_under_random_gauges(const FlowOptions& flow)
{
	std::vector<Check> checks;
	std::uint64_t seed = 1001;
	for(const RegimeCase& rc : {kUnderdamped, kExceptional, kOverdamped})
	{
		const TimeGrid grid(0.0, 5.0, 5000);
		const VielbeinFrame frame = coevolved_oracle_frame(rc.gamma, grid, flow);

		std::mt19937_64 rng(seed++);
		std::vector<std::pair<Matrix, Matrix>> generators;
		for(int k = 0; k < 50; ++k)
		{
			Matrix left = random_hermitian(rng, 2);
			Matrix right = random_hermitian(rng, 2);
			generators.emplace_back(std::move(left), std::move(right));
		}
		const std::vector<double> worst = parallel_map<double>(generators.size(), [&](std::size_t i) {
			const GaugeGenerator gen{constant(generators[i].first), constant(generators[i].second),
			                         Matrix::Identity(2, 2)};
			const OperatorTrajectory u = gauge_flow(gen, grid, flow);
			const VielbeinFrame gauged = apply_gauge(frame, u, gen);
			double w = 0.0;
			for(const Matrix& h : gauged.induced)
			{
				w = std::max(w, hermiticity_residual(h));
			}
			return w;
		});
		double w = 0.0;
		for(const double x : worst)
		{
			w = std::max(w, x);
		}
		checks.push_back(at_most(rc.name + ".max_hermiticity_residual", w, 1e-8));
	}
	return checks;
}

// 2./3. co-evolved vielbein and integrated metric against the closed forms
std::vector<Check> oracle_equivalence(const RegimeCase& rc, double tol, const FlowOptions& flow)
{
	const TimeGrid grid(0.0, rc.t1, 5000);
	const OracleParams p = params_for(rc.gamma);
	const HamiltonianModel model = two_level_loss({p.omega, p.gamma});
	const VielbeinFrame frame = coevolved_oracle_frame(rc.gamma, grid, flow);
	const MetricTrajectory metric = evolve_metric(model, metric_closed_form(p, 0.0).value, grid, flow);

	double e_rel = 0.0;
	double e_abs = 0.0;
	double g_rel = 0.0;
	double g_abs = 0.0;
	for(std::size_t k = 0; k < grid.nodes(); ++k)
	{
		const double t = grid.time(k);
		const Matrix e = vielbein_closed_form(p, t).value;
		const Matrix g = metric_closed_form(p, t).value;
		e_rel = std::max(e_rel, relative_deviation(frame.vielbein(k), e));
		e_abs = std::max(e_abs, max_norm(frame.vielbein(k) - e));
		g_rel = std::max(g_rel, relative_deviation(metric[k], g));
		g_abs = std::max(g_abs, max_norm(metric[k] - g));
	}
	return {at_most(rc.name + ".vielbein_rel", e_rel, tol), at_most(rc.name + ".metric_rel", g_rel, tol),
	        within(rc.name + ".vielbein_abs(info)", e_abs, 0.0, INFINITY),
	        within(rc.name + ".metric_abs(info)", g_abs, 0.0, INFINITY)};
}

// 4. the three printed gauge moves
std::vector<Check> printed_gauge_moves(const FlowOptions& flow)
{
	struct Move
	{
		RegimeCase rc;
		double t1;
		Matrix h_left;
		Matrix h_right;
		double closed_form_sign;
		Matrix expected;
	};
	const Matrix half_sx = 0.5 * pauli::x();
	const Matrix zero = Matrix::Zero(2, 2);
	const std::vector<Move> moves = {{kUnderdamped, 5.0, half_sx, zero, -1.0, half_sx},
	                                 {kOverdamped, 5.0, half_sx, zero, -1.0, half_sx},
	                                 {kExceptional, 3.0, zero, half_sx, 1.0, zero}};

	std::vector<Check> checks;
	for(const Move& m : moves)
	{
		const TimeGrid grid(0.0, m.t1, 5000);
		const OracleParams p = params_for(m.rc.gamma);
		const HamiltonianModel model = two_level_loss({p.omega, p.gamma});
		const VielbeinFrame frame = coevolved_oracle_frame(m.rc.gamma, grid, flow);
		const GaugeGenerator gen{constant(m.h_left), constant(m.h_right), Matrix::Identity(2, 2)};
		const OperatorTrajectory u = gauge_flow(gen, grid, flow);
		const VielbeinFrame gauged = apply_gauge(frame, u, gen);
		const VielbeinFrame direct = coevolve_vielbein(model, constant(m.expected), frame.vielbein(0), grid, flow);

		double route = 0.0;
		double target = 0.0;
		double unitary = 0.0;
		double coevolved = 0.0;
		for(std::size_t k = 0; k < grid.nodes(); ++k)
		{
			const double t = grid.time(k);
			route = std::max(route, gauged.gauge_route_residuals[k]);
			target = std::max(target, max_norm(gauged.induced[k] - m.expected));
			const Matrix closed = matrix_exponential(Complex(0.0, m.closed_form_sign * p.omega * t / 2.0) * pauli::x());
			unitary = std::max(unitary, max_norm(u[k] - closed));
			coevolved = std::max(coevolved, relative_deviation(direct.vielbein(k), gauged.vielbein(k)));
		}
		checks.push_back(at_most(m.rc.name + ".route_a_vs_b", route, 1e-7));
		checks.push_back(at_most(m.rc.name + ".induced_vs_printed", target, 1e-7));
		checks.push_back(at_most(m.rc.name + ".gauge_vs_closed_form", unitary, 1e-7));
		checks.push_back(at_most(m.rc.name + ".gauged_vs_coevolved_rel", coevolved, 1e-7));
	}
	return checks;
}

// 5. inner-product conservation
std::vector<Check> inner_product_conservation(const FlowOptions& flow)
{
	std::vector<Check> checks;
	std::uint64_t seed = 5001;
	for(const RegimeCase& rc : {kUnderdamped, kExceptional, kOverdamped})
	{
		const TimeGrid grid(0.0, 5.0, 5000);
		const OracleParams p = params_for(rc.gamma);
		const HamiltonianModel model = two_level_loss({p.omega, p.gamma});
		const VielbeinFrame frame = coevolved_oracle_frame(rc.gamma, grid, flow);
		const MetricTrajectory metric = evolve_metric(model, frame.metric(0), grid, flow);

		std::mt19937_64 rng(seed++);
		std::vector<std::pair<Vector, Vector>> pairs;
		for(int k = 0; k < 20; ++k)
		{
			Vector phi = random_state(rng, 2);
			Vector psi = random_state(rng, 2);
			pairs.emplace_back(std::move(phi), std::move(psi));
		}
		using Pair = std::pair<double, double>;
		const std::vector<Pair> worst = parallel_map<Pair>(pairs.size(), [&](std::size_t i) {
			const StateTrajectory phi = evolve_state(model, pairs[i].first, grid, flow);
			const StateTrajectory psi = evolve_state(model, pairs[i].second, grid, flow);
			const InnerProductSeries s = inner_product_series(metric, frame, phi, psi);
			const double initial = std::abs(s.metric_route[0]);
			Pair w{0.0, 0.0};
			for(std::size_t k = 0; k < s.metric_route.size(); ++k)
			{
				w.first = std::max(w.first, std::abs(s.metric_route[k] - s.metric_route[0]) / initial);
				w.second = std::max(w.second, std::abs(s.metric_route[k] - s.flat_route[k]) / initial);
			}
			return w;
		});
		Pair w{0.0, 0.0};
		for(const Pair& x : worst)
		{
			w.first = std::max(w.first, x.first);
			w.second = std::max(w.second, x.second);
		}
		checks.push_back(at_most(rc.name + ".conservation_rel", w.first, 1e-7));
		checks.push_back(at_most(rc.name + ".flat_route_rel", w.second, 1e-9));
	}
	return checks;
}

// 6. observable transport
std::vector<Check> observable_transport(const FlowOptions& flow)
{
	std::vector<Check> checks;
	std::uint64_t seed = 6001;
	for(const RegimeCase& rc : {kUnderdamped, kExceptional, kOverdamped})
	{
		const TimeGrid grid(0.0, 5.0, 5000);
		const VielbeinFrame frame = coevolved_oracle_frame(rc.gamma, grid, flow);
		std::mt19937_64 rng(seed++);
		std::uniform_real_distribution<double> u(-1.0, 1.0);
		std::uniform_int_distribution<std::size_t> node(0, grid.nodes() - 1);

		double herm = 0.0;
		double spectrum = 0.0;
		for(int k = 0; k < 20; ++k)
		{
			const std::size_t at = node(rng);
			const double d0 = u(rng);
			const double d1 = u(rng);
			const Matrix d = Vector(Eigen::Vector2cd(d0, d1)).asDiagonal();
			const Matrix& e = frame.vielbein(at);
			const Observable o{solve_linear(e, d * e), frame.metric(at)};
			const FlatObservable flat = observable_flat(frame, o, at);
			herm = std::max(herm, flat.hermiticity_residual);
			spectrum = std::max(spectrum, flat.spectrum_gap);
		}
		checks.push_back(at_most(rc.name + ".flat_hermiticity", herm, 1e-9));
		checks.push_back(at_most(rc.name + ".spectrum_gap", spectrum, 1e-8));
	}
	return checks;
}

// 7. Heisenberg and interaction pictures
std::vector<Check> picture_constructors(const FlowOptions& flow)
{
	const TimeGrid grid(0.0, 4.0 * M_PI, 8000);
	const Matrix sz = pauli::z();
	const HamiltonianModel model = custom_model(2, constant(sz), "sigma_z");
	const VielbeinFrame heisenberg = heisenberg_frame(model, grid, flow);

	std::mt19937_64 rng(7001);
	double drift = 0.0;
	for(int k = 0; k < 5; ++k)
	{
		const StateTrajectory psi = evolve_state(model, random_state(rng, 2), grid, flow);
		const StateTrajectory flat = to_flat(heisenberg, psi);
		for(std::size_t n = 0; n < flat.size(); ++n)
		{
			drift = std::max(drift, (flat[n] - flat[0]).cwiseAbs().maxCoeff());
		}
	}

	const double delta = 1.0;
	const double g = 1.0;
	const VielbeinFrame interaction =
		interaction_frame(constant(delta / 2.0 * sz), constant(g * pauli::x()), grid, flow);
	double rotation = 0.0;
	for(std::size_t n = 0; n < grid.nodes(); ++n)
	{
		const double t = grid.time(n);
		const Matrix expected = g * (std::cos(delta * t) * pauli::x() - std::sin(delta * t) * pauli::y());
		rotation = std::max(rotation, max_norm(interaction.induced[n] - expected));
	}
	return {at_most("heisenberg.flat_state_drift", drift, 1e-8),
	        at_most("interaction.induced_vs_rotated_coupling", rotation, 1e-8)};
}

// 8. two-mode bosonic model
std::vector<Check> bosonic_model(const FlowOptions& flow)
{
	std::vector<Check> checks;
	const std::vector<std::pair<std::string, TwoModeBosonicParams>> cases = {{"non_ep", {1.0, 0.0, 1.0, 4}},
	                                                                        {"ep", {4.0, 0.0, 1.0, 4}}};
	for(const auto& [name, p] : cases)
	{
		const TwoModeFockSpace space(p.n_max);
		double commutators = 0.0;
		for(const NamedResidual& r : bosonic_commutator_residuals(p))
		{
			commutators = std::max(commutators, r.residual);
		}

		const TimeGrid grid(0.0, 2.0, 1000);
		const VielbeinFrame frame = bosonic_oracle_frame(p, grid);
		const GaugeGenerator gen = bosonic_gauge_generator(p);
		const OperatorTrajectory u = gauge_flow(gen, grid, flow);
		const VielbeinFrame gauged = apply_gauge(frame, u, gen);
		const Matrix hopping = bosonic_hopping(p);

		double gauge_gap = 0.0;
		double induced = 0.0;
		for(std::size_t k = 0; k < grid.nodes(); ++k)
		{
			gauge_gap = std::max(gauge_gap, max_norm(u[k] - bosonic_gauge_closed_form(p, grid.time(k)).value));
			induced = std::max(induced, interior_block_residual(space, gauged.induced[k] - hopping));
		}
		checks.push_back(at_most(name + ".commutators", commutators, 1e-10));
		checks.push_back(at_most(name + ".gauge_vs_closed_form", gauge_gap, 1e-8));
		checks.push_back(at_most(name + ".induced_vs_hopping", induced, 1e-8));
	}
	return checks;
}

// 9. Richardson order of the metric flow
std::vector<Check> integrator_order(const FlowOptions& flow)
{
	const OracleParams p = params_for(kUnderdamped.gamma);
	const HamiltonianModel model = two_level_loss({p.omega, p.gamma});
	const MatrixRhs rhs = [&model](double t, const Matrix& g) { return metric_rhs(g, model(t)); };
	const double order = richardson_order_check(rhs, metric_closed_form(p, 0.0).value, TimeGrid(0.0, 5.0, 40), flow);
	return {within("metric_flow.observed_order", order, 3.8, 4.2)};
}

CriterionResult timed(int id, std::string name, const std::function<std::vector<Check>()>& body)
{
	CriterionResult r;
	r.id = id;
	r.name = std::move(name);
	const auto start = std::chrono::steady_clock::now();
	try
	{
		r.checks = body();
	}
	catch(const Error& e)
	{
		r.error = std::string(e.invariant()) + ": " + e.what();
	}
	catch(const std::exception& e)
	{
		r.error = e.what();
	}
	r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const SuiteOptions& options)
{
	const FlowOptions flow{options.stepper, options.hermitian_projection};
	std::vector<CriterionResult> out;
	out.push_back(timed(1, "induced-hamiltonian-hermiticity", [&] { return hermiticity_under_random_gauges(flow); }));
	out.push_back(timed(2, "oracle-underdamped", [&] { return oracle_equivalence(kUnderdamped, 1e-8, flow); }));
	out.push_back(timed(3, "oracle-overdamped-and-ep", [&] {
		std::vector<Check> checks = oracle_equivalence(kOverdamped, 1e-8, flow);
		const RegimeCase ep{"ep", kExceptional.gamma, 3.0};
		for(Check& c : oracle_equivalence(ep, 1e-7, flow))
		{
			checks.push_back(std::move(c));
		}
		return checks;
	}));
	out.push_back(timed(4, "gauge-formula", [&] { return printed_gauge_moves(flow); }));
	out.push_back(timed(5, "inner-product-conservation", [&] { return inner_product_conservation(flow); }));
	out.push_back(timed(6, "observable-transport", [&] { return observable_transport(flow); }));
	out.push_back(timed(7, "picture-constructors", [&] { return picture_constructors(flow); }));
	out.push_back(timed(8, "bosonic-model", [&] { return bosonic_model(flow); }));
	out.push_back(timed(9, "integrator-order", [&] { return integrator_order(flow); }));
	return out;
}

std::string serialize_results(const std::vector<CriterionResult>& results)
{
	std::ostringstream out;
	out << "criterion,name,check,measured,lower,upper,passed,error\n";
	for(const CriterionResult& r : results)
	{
		if(!r.error.empty() || r.checks.empty())
		{
			std::string error = r.error;
			std::replace(error.begin(), error.end(), '"', '\'');
			out << r.id << ',' << r.name << ",,,,," << (r.passed() ? 1 : 0) << ",\"" << error << "\"\n";
			continue;
		}
		for(const Check& c : r.checks)
		{
			out << r.id << ',' << r.name << ',' << c.label << ',' << csv_number(c.measured) << ','
			    << csv_number(c.lower) << ',' << csv_number(c.upper) << ',' << (c.passed ? 1 : 0) << ",\n";
		}
	}
	return out.str();
}

std::vector<CriterionResult> run_check(const SuiteOptions& options, const std::string& first_path,
                                       const std::string& second_path)
{
	std::vector<CriterionResult> first = run_acceptance(options);
	const std::vector<CriterionResult> second = run_acceptance(options);

	first.push_back(timed(10, "determinism", [&] {
		write_text_file(first_path, serialize_results(first));
		write_text_file(second_path, serialize_results(second));
		auto slurp = [](const std::string& path) {
			std::ifstream in(path, std::ios::binary);
			return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
		};
		const std::string a = slurp(first_path);
		const std::string b = slurp(second_path);
		std::size_t differing = a.size() == b.size() ? 0 : 1;
		for(std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
		{
			differing += a[i] != b[i] ? 1 : 0;
		}
		return std::vector<Check>{at_most("differing_bytes", static_cast<double>(differing), 0.0)};
	}));
	return first;
}

std::string format_table(const std::vector<CriterionResult>& results)
{
	std::ostringstream out;
	for(const CriterionResult& r : results)
	{
		char head[128];
		std::snprintf(head, sizeof head, "[%s] %2d %-34s (%6.2f s)", r.passed() ? "PASS" : "FAIL", r.id,
		              r.name.c_str(), r.seconds);
		out << head;
		if(!r.error.empty())
		{
			out << "  error: " << r.error;
		}
		for(const Check& c : r.checks)
		{
			char item[160];
			if(c.lower > 0.0 || c.lower < 0.0)
			{
				std::snprintf(item, sizeof item, "  %s=%.3g in [%g, %g]%s", c.label.c_str(), c.measured, c.lower,
				              c.upper, c.passed ? "" : " !");
			}
			else if(std::isinf(c.upper))
			{
				std::snprintf(item, sizeof item, "  %s=%.3g", c.label.c_str(), c.measured);
			}
			else
			{
				std::snprintf(item, sizeof item, "  %s=%.3g<=%g%s", c.label.c_str(), c.measured, c.upper,
				              c.passed ? "" : " !");
			}
			out << item;
		}
		out << '\n';
	}
	return out.str();
}

} // namespace hermitize
