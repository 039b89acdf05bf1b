#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace hermitize
{

/// Thread cap from HERMITIZE_THREADS, falling back to the OpenMP default.
[[nodiscard]] int configured_threads();

/// Evaluates f(0..n-1) with OpenMP. Exceptions are captured per index and the
/// first one (lowest index) is rethrown after the loop.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f, int threads = configured_threads())
{
	std::vector<T> out(n);
	std::vector<std::exception_ptr> errors(n);
	const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
	for(long i = 0; i < count; ++i)
	{
		try
		{
			out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
		}
		catch(...)
		{
			errors[static_cast<std::size_t>(i)] = std::current_exception();
		}
	}
	for(const auto& e : errors)
	{
		if(e)
		{
			std::rethrow_exception(e);
		}
	}
	return out;
}

/// Serial reference for parallel_map.
template <class T>
std::vector<T> serial_map(std::size_t n, const std::function<T(std::size_t)>& f)
{
	std::vector<T> out;
	out.reserve(n);
	for(std::size_t i = 0; i < n; ++i)
	{
		out.push_back(f(i));
	}
	return out;
}

} // namespace hermitize
