#include "brauer/errors.hpp"

namespace brauer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPlace: return "InvalidPlace";
    case ErrorCode::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::NotQuadratic: return "NotQuadratic";
    case ErrorCode::WrongCase: return "WrongCase";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CMNotSupported: return "CMNotSupported";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::ConsistencyViolation: return "ConsistencyViolation";
    case ErrorCode::FetchError: return "FetchError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::CacheMiss: return "CacheMiss";
    case ErrorCode::WriteError: return "WriteError";
  }
  return "Unknown";
}

}  // namespace brauer
