#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace detsched {

inline std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

// Uniform integer in [0, n). Standard distributions are implementation
// defined, so results would differ between standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n)
{
	if (n <= 1)
		return 0;
	const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
	std::uint64_t x;
	do
		x = rng();
	while (x >= limit);
	return x % n;
}

// Uniform integer in [lo, hi].
inline std::int64_t uniform_between(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi)
{
	return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

template <class T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& rng)
{
	for (std::size_t i = v.size(); i > 1; --i)
		std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

} // namespace detsched
