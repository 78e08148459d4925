#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "detsched/interval_set.hpp"
#include "detsched/model.hpp"

namespace detsched {

// Locates one overlap: occurrence m of the first reservation and occurrence n
// of the second (both counted within their hyperperiod) share `slot`, an
// absolute slot in [0, hyperperiod).
struct ConflictWitness {
	std::int64_t m = 0;
	std::int64_t n = 0;
	Slot slot = 0;
};

struct ConflictVerdict {
	bool conflicting = false;
	std::optional<ConflictWitness> witness;
};

// Whether two periodic reservations on one resource ever occupy the same
// slot. Occurrences repeat forever, so a window that runs past the end of
// its period collides with windows at the start of the next one.
//
// With g = gcd(Pa, Pb) the start difference of any occurrence pair ranges
// over exactly the integers congruent to (sb - sa) mod g, so the test reduces
// to whether that residue class meets the open range (-len_b, len_a).
ConflictVerdict reservations_conflict(const PeriodicReservation& a, const PeriodicReservation& b);

// Start offsets o (mod `period`) at which a new task would begin inside a
// busy window of some existing reservation. Windows that the new task would
// only run into later are not included; `compute_len` does not widen the set.
ModularIntervalSet infeasible_compute_starts(std::span<const PeriodicReservation> existing,
                                             Slot period, Slot compute_len);

// Start offsets s (mod `period`) for which a window (s, len, period) would
// conflict with any existing reservation, in either direction.
ModularIntervalSet blocked_starts(std::span<const PeriodicReservation> existing, Slot period,
                                  Slot len);

// Source departure times (mod `period`) that make some hop collide. Hop w
// (0-based) of a no-buffering transmission occupies [b + w*gamma, b + (w+1)*gamma),
// so each existing window on hop w is translated left by w*gamma.
// `hop_ledgers[w]` holds the reservations already on hop w.
ModularIntervalSet infeasible_departures(
	std::span<const std::span<const PeriodicReservation>> hop_ledgers, Slot period, Slot gamma);

// True when (start, len, period) is conflict-free against every reservation.
bool window_free(std::span<const PeriodicReservation> existing, Slot start, Slot len, Slot period);

} // namespace detsched
