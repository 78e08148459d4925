#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "detsched/types.hpp"

namespace detsched {

// Half-open slot range [lo, hi).
struct Interval {
	Slot lo = 0;
	Slot hi = 0;

	Slot length() const { return hi - lo; }
	friend bool operator==(const Interval&, const Interval&) = default;
};

// A set of slots within one period [0, modulus), stored as sorted,
// pairwise disjoint, non-adjacent, non-empty half-open intervals.
class ModularIntervalSet {
public:
	explicit ModularIntervalSet(Slot modulus);

	static ModularIntervalSet full(Slot modulus);
	// [lo, hi) clipped to [0, modulus); empty when the clip is empty.
	static ModularIntervalSet range(Slot modulus, Slot lo, Slot hi);
	// Builds from arbitrary in-range intervals (unsorted, overlapping allowed).
	static ModularIntervalSet from_intervals(Slot modulus, std::vector<Interval> parts);

	// Adds [lo, hi) with 0 <= lo <= hi <= modulus.
	void insert(Slot lo, Slot hi);
	// Adds the integers of [lo, hi) reduced modulo the period; wraps around.
	void insert_wrapped(Slot lo, Slot hi);

	ModularIntervalSet united(const ModularIntervalSet& other) const;
	ModularIntervalSet subtract(const ModularIntervalSet& other) const;
	ModularIntervalSet intersect(const ModularIntervalSet& other) const;
	ModularIntervalSet complement() const;

	bool contains(Slot t) const;
	bool empty() const { return parts_.empty(); }
	// Number of member slots.
	Slot measure() const;
	std::optional<Slot> first() const;
	// The first `n` member slots in ascending order.
	std::vector<Slot> first_slots(std::size_t n) const;

	Slot modulus() const { return modulus_; }
	std::span<const Interval> intervals() const { return parts_; }

	friend bool operator==(const ModularIntervalSet&, const ModularIntervalSet&) = default;

private:
	void check_same_modulus(const ModularIntervalSet& other) const;
	void normalize();

	Slot modulus_;
	std::vector<Interval> parts_;
};

} // namespace detsched
