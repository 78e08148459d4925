#pragma once

// Brute-force references: every periodic reservation is expanded into the
// slots it occupies over a hyperperiod and compared bit by bit.

#include <numeric>
#include <span>
#include <vector>

#include "detsched/model.hpp"

namespace oracle {

using detsched::PeriodicReservation;
using detsched::Slot;

inline Slot lcm_of(Slot a, Slot b) { return a / std::gcd(a, b) * b; }

// Occupancy of one reservation over [0, hp), occurrences wrapping cyclically.
inline std::vector<char> occupancy(const PeriodicReservation& r, Slot hp)
{
	std::vector<char> bits(static_cast<std::size_t>(hp), 0);
	for (Slot k = 0; k < hp / r.period; ++k)
		for (Slot i = 0; i < r.len; ++i)
			bits[static_cast<std::size_t>((r.start + k * r.period + i) % hp)] = 1;
	return bits;
}

inline bool conflict(const PeriodicReservation& a, const PeriodicReservation& b)
{
	const Slot hp = lcm_of(a.period, b.period);
	auto x = occupancy(a, hp);
	auto y = occupancy(b, hp);
	for (Slot s = 0; s < hp; ++s)
		if (x[static_cast<std::size_t>(s)] && y[static_cast<std::size_t>(s)])
			return true;
	return false;
}

inline bool conflicts_any(std::span<const PeriodicReservation> existing, const PeriodicReservation& r)
{
	for (const auto& e : existing)
		if (conflict(e, r))
			return true;
	return false;
}

// Starts o in [0, period) where some occurrence of the new task begins on a
// slot already busy.
inline std::vector<char> compute_start_hits(std::span<const PeriodicReservation> existing, Slot period)
{
	Slot hp = period;
	for (const auto& e : existing)
		hp = lcm_of(hp, e.period);
	std::vector<char> busy(static_cast<std::size_t>(hp), 0);
	for (const auto& e : existing) {
		auto occ = occupancy(e, hp);
		for (Slot s = 0; s < hp; ++s)
			busy[static_cast<std::size_t>(s)] |= occ[static_cast<std::size_t>(s)];
	}
	std::vector<char> out(static_cast<std::size_t>(period), 0);
	for (Slot o = 0; o < period; ++o)
		for (Slot k = 0; k < hp / period; ++k)
			if (busy[static_cast<std::size_t>(o + k * period)])
				out[static_cast<std::size_t>(o)] = 1;
	return out;
}

// Starts in [0, period) for which (s, len, period) collides with something.
inline std::vector<char> blocked(std::span<const PeriodicReservation> existing, Slot period, Slot len)
{
	std::vector<char> out(static_cast<std::size_t>(period), 0);
	for (Slot s = 0; s < period; ++s)
		out[static_cast<std::size_t>(s)] = conflicts_any(existing, {0, s, len, period});
	return out;
}

// Departures in [0, period) that make some hop of a no-wait transmission collide.
inline std::vector<char> departure_hits(const std::vector<std::vector<PeriodicReservation>>& hops,
                                        Slot period, Slot gamma)
{
	std::vector<char> out(static_cast<std::size_t>(period), 0);
	for (Slot b = 0; b < period; ++b)
		for (std::size_t w = 0; w < hops.size(); ++w)
			if (conflicts_any(hops[w], {0, (b + static_cast<Slot>(w) * gamma) % period, gamma, period}))
				out[static_cast<std::size_t>(b)] = 1;
	return out;
}

} // namespace oracle
