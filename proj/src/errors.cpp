// SPDX-License-Identifier: Apache-2.0
#include "routenet/errors.hpp"

namespace routenet {

const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::CycleRisk: return "CycleRisk";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::HasBoxes: return "HasBoxes";
    case ErrorKind::CyclicNet: return "CyclicNet";
    case ErrorKind::StaleRedex: return "StaleRedex";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotAreaShaped: return "NotAreaShaped";
    case ErrorKind::NotStratified: return "NotStratified";
    case ErrorKind::Type: return "TypeError";
    case ErrorKind::DerivationMismatch: return "DerivationMismatch";
    case ErrorKind::InterfaceMismatch: return "InterfaceMismatch";
    case ErrorKind::CanonBudget: return "CanonBudget";
    }
    return "Unknown";
}

}  // namespace routenet
