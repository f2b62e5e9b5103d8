#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mcprod {

/// A well-formed request whose mathematical answer is a failure
/// (obstruction, non-cocycle, non-nilpotent algebra, ...).
class MathError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class NotACocycle : public MathError {
public:
	using MathError::MathError;
};

class NotNilpotent : public MathError {
public:
	using MathError::MathError;
};

/// An in-pipeline assertion failed; the message names the failing check.
class AssertionFailure : public MathError {
public:
	using MathError::MathError;
};

/// Malformed input: unknown names, bad degrees, parse errors.
class InputError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

struct ValidationReport {
	std::vector<std::string> violations;

	bool ok() const { return violations.empty(); }
	void fail(std::string what) { violations.push_back(std::move(what)); }
	void merge(const ValidationReport& o, const std::string& prefix = {})
	{
		for (const auto& v : o.violations)
			violations.push_back(prefix + v);
	}
};

} // namespace mcprod
