#include "lagsurg/errors.hpp"

namespace lagsurg {

std::string_view error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::ZeroDivision: return "ZeroDivision";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NegativeValuation: return "NegativeValuation";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingBall: return "MissingBall";
    case ErrorCode::DimensionTooLow: return "DimensionTooLow";
    case ErrorCode::NotOdd: return "NotOdd";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NoProgress: return "NoProgress";
    case ErrorCode::NotProjectivelyFlat: return "NotProjectivelyFlat";
    case ErrorCode::SquareNotZero: return "SquareNotZero";
    case ErrorCode::RankUnstable: return "RankUnstable";
    case ErrorCode::NotSubcomplex: return "NotSubcomplex";
    case ErrorCode::NotAcyclic: return "NotAcyclic";
    case ErrorCode::UnannotatedCorner: return "UnannotatedCorner";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::MissingOneChain: return "MissingOneChain";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::WrongWayCorner: return "WrongWayCorner";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code), detail_(detail) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

} // namespace lagsurg
