#include "hermitize/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace hermitize
{

int configured_threads()
{
	const int fallback = omp_get_max_threads();
	const char* env = std::getenv("HERMITIZE_THREADS");
	if(env == nullptr || *env == '\0')
	{
		return fallback;
	}
	try
	{
		const int requested = std::stoi(env);
		return requested > 0 ? requested : fallback;
	}
	catch(const std::exception&)
	{
		return fallback;
	}
}

} // namespace hermitize
