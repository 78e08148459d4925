#include "detsched/interval_set.hpp"

#include <algorithm>

namespace detsched {

ModularIntervalSet::ModularIntervalSet(Slot modulus) : modulus_(modulus)
{
	require(modulus > 0, "interval set modulus must be positive");
}

ModularIntervalSet ModularIntervalSet::full(Slot modulus)
{
	ModularIntervalSet s(modulus);
	s.parts_.push_back({0, modulus});
	return s;
}

ModularIntervalSet ModularIntervalSet::range(Slot modulus, Slot lo, Slot hi)
{
	ModularIntervalSet s(modulus);
	lo = std::max<Slot>(lo, 0);
	hi = std::min(hi, modulus);
	if (lo < hi)
		s.parts_.push_back({lo, hi});
	return s;
}

ModularIntervalSet ModularIntervalSet::from_intervals(Slot modulus, std::vector<Interval> parts)
{
	ModularIntervalSet s(modulus);
	for (const auto& p : parts)
		require(0 <= p.lo && p.lo <= p.hi && p.hi <= modulus, "interval outside [0, modulus]");
	s.parts_ = std::move(parts);
	s.normalize();
	return s;
}

void ModularIntervalSet::normalize()
{
	std::erase_if(parts_, [](const Interval& p) { return p.lo >= p.hi; });
	std::sort(parts_.begin(), parts_.end(),
	          [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
	std::vector<Interval> merged;
	merged.reserve(parts_.size());
	for (const auto& p : parts_) {
		if (!merged.empty() && p.lo <= merged.back().hi)
			merged.back().hi = std::max(merged.back().hi, p.hi);
		else
			merged.push_back(p);
	}
	parts_ = std::move(merged);
}

void ModularIntervalSet::insert(Slot lo, Slot hi)
{
	require(0 <= lo && lo <= hi && hi <= modulus_, "insert outside [0, modulus]");
	if (lo == hi)
		return;
	// first interval whose end reaches lo
	auto first = std::lower_bound(parts_.begin(), parts_.end(), lo,
	                              [](const Interval& p, Slot v) { return p.hi < v; });
	auto last = first;
	while (last != parts_.end() && last->lo <= hi) {
		lo = std::min(lo, last->lo);
		hi = std::max(hi, last->hi);
		++last;
	}
	first = parts_.erase(first, last);
	parts_.insert(first, Interval{lo, hi});
}

void ModularIntervalSet::insert_wrapped(Slot lo, Slot hi)
{
	if (hi <= lo)
		return;
	if (hi - lo >= modulus_) {
		parts_.assign(1, Interval{0, modulus_});
		return;
	}
	const Slot a = floor_mod(lo, modulus_);
	const Slot b = a + (hi - lo);
	if (b <= modulus_) {
		insert(a, b);
	} else {
		insert(a, modulus_);
		insert(0, b - modulus_);
	}
}

void ModularIntervalSet::check_same_modulus(const ModularIntervalSet& other) const
{
	require(modulus_ == other.modulus_, "interval sets have different moduli");
}

ModularIntervalSet ModularIntervalSet::united(const ModularIntervalSet& other) const
{
	check_same_modulus(other);
	std::vector<Interval> all(parts_);
	all.insert(all.end(), other.parts_.begin(), other.parts_.end());
	return from_intervals(modulus_, std::move(all));
}

ModularIntervalSet ModularIntervalSet::complement() const
{
	ModularIntervalSet out(modulus_);
	Slot cursor = 0;
	for (const auto& p : parts_) {
		if (cursor < p.lo)
			out.parts_.push_back({cursor, p.lo});
		cursor = p.hi;
	}
	if (cursor < modulus_)
		out.parts_.push_back({cursor, modulus_});
	return out;
}

ModularIntervalSet ModularIntervalSet::intersect(const ModularIntervalSet& other) const
{
	check_same_modulus(other);
	ModularIntervalSet out(modulus_);
	std::size_t i = 0, j = 0;
	while (i < parts_.size() && j < other.parts_.size()) {
		const Slot lo = std::max(parts_[i].lo, other.parts_[j].lo);
		const Slot hi = std::min(parts_[i].hi, other.parts_[j].hi);
		if (lo < hi)
			out.parts_.push_back({lo, hi});
		if (parts_[i].hi < other.parts_[j].hi)
			++i;
		else
			++j;
	}
	return out;
}

ModularIntervalSet ModularIntervalSet::subtract(const ModularIntervalSet& other) const
{
	check_same_modulus(other);
	return intersect(other.complement());
}

bool ModularIntervalSet::contains(Slot t) const
{
	auto it = std::upper_bound(parts_.begin(), parts_.end(), t,
	                           [](Slot v, const Interval& p) { return v < p.hi; });
	return it != parts_.end() && it->lo <= t;
}

Slot ModularIntervalSet::measure() const
{
	Slot total = 0;
	for (const auto& p : parts_)
		total += p.length();
	return total;
}

std::optional<Slot> ModularIntervalSet::first() const
{
	if (parts_.empty())
		return std::nullopt;
	return parts_.front().lo;
}

std::vector<Slot> ModularIntervalSet::first_slots(std::size_t n) const
{
	std::vector<Slot> out;
	for (const auto& p : parts_) {
		for (Slot t = p.lo; t < p.hi && out.size() < n; ++t)
			out.push_back(t);
		if (out.size() >= n)
			break;
	}
	return out;
}

} // namespace detsched
