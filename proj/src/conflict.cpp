#include "detsched/conflict.hpp"

#include <numeric>
#include <tuple>

namespace detsched {

namespace {

// x*a + y*b = gcd(a, b)
std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b)
{
	std::int64_t old_r = a, r = b, old_x = 1, x = 0, old_y = 0, y = 1;
	while (r != 0) {
		const std::int64_t q = old_r / r;
		std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
		std::tie(old_x, x) = std::make_tuple(x, old_x - q * x);
		std::tie(old_y, y) = std::make_tuple(y, old_y - q * y);
	}
	return {old_r, old_x, old_y};
}

__int128 floor_mod128(__int128 a, __int128 m)
{
	__int128 r = a % m;
	return r < 0 ? r + m : r;
}

void check(const PeriodicReservation& r)
{
	require(r.valid(), "invalid periodic reservation");
}

// Adds every t in [0, period) with (t - lo) mod g in [0, hi - lo).
// g must divide period.
void add_residue_window(ModularIntervalSet& out, Slot lo, Slot hi, Slot g)
{
	if (hi <= lo)
		return;
	const Slot period = out.modulus();
	if (hi - lo >= g) {
		out = ModularIntervalSet::full(period);
		return;
	}
	const Slot a = floor_mod(lo, g);
	const Slot b = a + (hi - lo);
	for (Slot base = 0; base < period; base += g) {
		if (b <= g) {
			out.insert(base + a, base + b);
		} else {
			out.insert(base + a, base + g);
			out.insert(base, base + (b - g));
		}
	}
}

} // namespace

ConflictVerdict reservations_conflict(const PeriodicReservation& a, const PeriodicReservation& b)
{
	check(a);
	check(b);
	const Slot g = std::gcd(a.period, b.period);
	const Slot r = floor_mod(b.start - a.start, g);
	// candidate start differences closest to zero: r and r - g
	Slot d = 0;
	if (r < a.len)
		d = r;
	else if (g - r < b.len)
		d = r - g;
	else
		return {};

	// Solve n*Pb - m*Pa = d - (sb - sa) for a concrete witness.
	const auto [gg, x, y] = ext_gcd(b.period, a.period);
	const __int128 k = (static_cast<__int128>(d) - (b.start - a.start)) / gg;
	const __int128 hp = static_cast<__int128>(a.period / g) * b.period;
	const __int128 count_b = hp / b.period;
	const __int128 count_a = hp / a.period;
	const __int128 n = floor_mod128(k * x, count_b);
	const __int128 xb = b.start + n * b.period;
	const __int128 xa = xb - d;
	const __int128 m = (xa - a.start) / a.period;

	ConflictWitness w;
	w.n = static_cast<std::int64_t>(n);
	w.m = static_cast<std::int64_t>(floor_mod128(m, count_a));
	w.slot = static_cast<Slot>(floor_mod128(xa > xb ? xa : xb, hp));
	return {true, w};
}

ModularIntervalSet infeasible_compute_starts(std::span<const PeriodicReservation> existing,
                                             Slot period, Slot compute_len)
{
	require(period > 0, "period must be positive");
	require(compute_len > 0, "compute length must be positive");
	ModularIntervalSet out(period);
	for (const auto& r : existing) {
		check(r);
		add_residue_window(out, r.start, r.start + r.len, std::gcd(r.period, period));
	}
	return out;
}

ModularIntervalSet blocked_starts(std::span<const PeriodicReservation> existing, Slot period,
                                  Slot len)
{
	require(period > 0 && len > 0, "period and length must be positive");
	ModularIntervalSet out(period);
	for (const auto& r : existing) {
		check(r);
		add_residue_window(out, r.start - len + 1, r.start + r.len, std::gcd(r.period, period));
	}
	return out;
}

ModularIntervalSet infeasible_departures(
	std::span<const std::span<const PeriodicReservation>> hop_ledgers, Slot period, Slot gamma)
{
	require(period > 0 && gamma > 0, "period and gamma must be positive");
	ModularIntervalSet out(period);
	for (std::size_t w = 0; w < hop_ledgers.size(); ++w) {
		const Slot shift = static_cast<Slot>(w) * gamma;
		for (const auto& r : hop_ledgers[w]) {
			check(r);
			add_residue_window(out, r.start - gamma + 1 - shift, r.start + r.len - shift,
			                   std::gcd(r.period, period));
		}
	}
	return out;
}

bool window_free(std::span<const PeriodicReservation> existing, Slot start, Slot len, Slot period)
{
	const PeriodicReservation probe{-1, floor_mod(start, period), len, period};
	for (const auto& r : existing)
		if (reservations_conflict(r, probe).conflicting)
			return false;
	return true;
}

} // namespace detsched
