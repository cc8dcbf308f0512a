#pragma once

#include <stdexcept>
#include <string>

namespace schurlab {

enum class ErrorCode {
  OrderTooLow,
  NodeClash,
  DegenerateDenominator,
  ZeroNode,
  IndexOutOfRange,
  InvalidExponents,
  InvalidArgument,
  OnDiagonal,
  SizeGuard,
  OffDomain,
  SingularSystem,
  SupportViolation,
  GridTooCoarse,
  ZeroCoordinate,
  DimensionMismatch,
  NonpositiveInput,
  MissingInput,
  InvalidConfig,
};

/// Every library failure carries a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OrderTooLow: return "OrderTooLow";
    case ErrorCode::NodeClash: return "NodeClash";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ZeroNode: return "ZeroNode";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidExponents: return "InvalidExponents";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OnDiagonal: return "OnDiagonal";
    case ErrorCode::SizeGuard: return "SizeGuard";
    case ErrorCode::OffDomain: return "OffDomain";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonpositiveInput: return "NonpositiveInput";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace schurlab
