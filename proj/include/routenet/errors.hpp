// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace routenet {

enum class ErrorKind {
    DomainMismatch,
    UnknownLabel,
    CycleRisk,
    Overflow,
    Parse,
    HasBoxes,
    CyclicNet,
    StaleRedex,
    BudgetExhausted,
    NotNormal,
    NotAreaShaped,
    NotStratified,
    Type,
    DerivationMismatch,
    InterfaceMismatch,
    CanonBudget,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/** Raised by every text and JSON reader; offset is a byte position in the input. */
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& reason)
        : Error(ErrorKind::Parse, "parse error at byte " + std::to_string(offset) + ": " + reason),
          offset_(offset), reason_(reason) {}
    std::size_t offset() const noexcept { return offset_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t offset_;
    std::string reason_;
};

}  // namespace routenet
