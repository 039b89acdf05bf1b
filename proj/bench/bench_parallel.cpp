#include <functional>
#include <random>

#include <benchmark/benchmark.h>

#include "hermitize/oracles.hpp"
#include "hermitize/parallel.hpp"
#include "hermitize/scenario.hpp"
#include "hermitize/vielbein.hpp"

namespace
{

using namespace hermitize;

Matrix random_hermitian(std::mt19937_64& rng)
{
	std::uniform_real_distribution<double> u(-1.0, 1.0);
	Matrix m(2, 2);
	for(Eigen::Index i = 0; i < 2; ++i)
	{
		for(Eigen::Index j = 0; j < 2; ++j)
		{
			m(i, j) = Complex(u(rng), u(rng));
		}
	}
	return (m + m.adjoint()) / 2.0;
}

/// One random gauge applied to a co-evolved oracle frame; returns the worst
/// Hermiticity residual of the gauged induced Hamiltonian.
double random_gauge_task(std::size_t index, int steps)
{
	const double gammas[] = {1.0, 2.0, 4.0};
	const double gamma = gammas[index % 3];
	std::mt19937_64 rng(0x5eed + index);
	const Matrix hl = random_hermitian(rng);
	const Matrix hr = random_hermitian(rng);
	const OracleParams p{1.0, gamma};
	const TimeGrid grid(0.0, 5.0, steps);
	const Matrix target = oracle_induced_hamiltonian(p);
	const VielbeinFrame frame = coevolve_vielbein(
		two_level_loss({1.0, gamma}), [&](double) { return target; }, vielbein_closed_form(p, 0.0).value, grid);
	const GaugeGenerator gen{[&](double) { return hl; }, [&](double) { return hr; }, Matrix::Identity(2, 2)};
	const VielbeinFrame gauged = apply_gauge(frame, gauge_flow(gen, grid), gen);
	double worst = 0.0;
	for(const double r : gauged.hermiticity_residuals)
	{
		worst = std::max(worst, r);
	}
	return worst;
}

constexpr std::size_t kBatch = 12;
constexpr int kSteps = 1000;

void BM_RandomGaugeSerial(benchmark::State& state)
{
	const std::function<double(std::size_t)> f = [](std::size_t i) { return random_gauge_task(i, kSteps); };
	for(auto _ : state)
	{
		benchmark::DoNotOptimize(serial_map<double>(kBatch, f));
	}
	state.SetItemsProcessed(static_cast<long>(state.iterations() * kBatch));
}

void BM_RandomGaugeParallel(benchmark::State& state)
{
	const std::function<double(std::size_t)> f = [](std::size_t i) { return random_gauge_task(i, kSteps); };
	const int threads = static_cast<int>(state.range(0));
	for(auto _ : state)
	{
		benchmark::DoNotOptimize(parallel_map<double>(kBatch, f, threads));
	}
	state.SetItemsProcessed(static_cast<long>(state.iterations() * kBatch));
}

Json sweep_base()
{
	return Json::parse(R"({
		"model": {"name": "two_level_loss", "omega": 1.0, "gamma": 1.0},
		"grid": {"t1": 5.0, "steps": 1000},
		"gauge": {"kind": "zero"},
		"metric_seed": "identity"
	})");
}

const std::vector<double> kSweepValues{0.0, 0.5, 1.0, 1.5, 1.9, 2.0, 2.1, 3.0, 4.0};

void BM_SweepSerial(benchmark::State& state)
{
	const Json base = sweep_base();
	for(auto _ : state)
	{
		benchmark::DoNotOptimize(run_sweep(base, "model.gamma", kSweepValues, {false, false}));
	}
}

void BM_SweepParallel(benchmark::State& state)
{
	const Json base = sweep_base();
	for(auto _ : state)
	{
		benchmark::DoNotOptimize(run_sweep(base, "model.gamma", kSweepValues, {true, false}));
	}
}

} // namespace

BENCHMARK(BM_RandomGaugeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomGaugeParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
