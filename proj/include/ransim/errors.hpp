// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ransim {

/// Base class for every error the simulator raises on purpose.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

#define RANSIM_DEFINE_ERROR(Name)                                    \
    class Name : public SimError {                                   \
    public:                                                          \
        explicit Name(const std::string& msg) : SimError(msg) {}     \
    }

RANSIM_DEFINE_ERROR(InvalidSpecError);
RANSIM_DEFINE_ERROR(UnknownNodeError);
RANSIM_DEFINE_ERROR(NoPathError);
RANSIM_DEFINE_ERROR(OutOfValidityError);
RANSIM_DEFINE_ERROR(EmptyAllocationError);
RANSIM_DEFINE_ERROR(UnsupportedHostError);
RANSIM_DEFINE_ERROR(DoubleApplyError);
RANSIM_DEFINE_ERROR(CapacityViolationError);
RANSIM_DEFINE_ERROR(NonFiniteRewardError);
RANSIM_DEFINE_ERROR(ZeroRateError);
RANSIM_DEFINE_ERROR(AllZeroError);
RANSIM_DEFINE_ERROR(IncomparableSpecsError);
RANSIM_DEFINE_ERROR(InvalidArgumentError);
RANSIM_DEFINE_ERROR(UnknownKeyError);
RANSIM_DEFINE_ERROR(InvalidValueError);

#undef RANSIM_DEFINE_ERROR

/// Config parse failure with a source position.
class ParseError : public SimError {
public:
    ParseError(const std::string& msg, int line, int column)
        : SimError(msg + " (line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace ransim
