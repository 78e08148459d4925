#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace detsched {

// One slot is the atomic time unit (1 ms at the default link rate).
using Slot = std::int64_t;
using NodeId = std::int32_t;
using TaskId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
	explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Raised when a commit would introduce a resource-sharing conflict.
class CommitRejected : public std::runtime_error {
public:
	explicit CommitRejected(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const char* msg)
{
	if (!cond)
		throw ContractViolation(msg);
}

// Mathematical modulo: result in [0, m) for m > 0.
constexpr Slot floor_mod(Slot a, Slot m)
{
	Slot r = a % m;
	return r < 0 ? r + m : r;
}

} // namespace detsched
