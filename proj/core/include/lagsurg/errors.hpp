#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lagsurg {

enum class ErrorCode {
    ZeroDivision,
    NotAUnit,
    NegativeValuation,
    UnknownGenerator,
    DimensionMismatch,
    MissingBall,
    DimensionTooLow,
    NotOdd,
    NotAdmissible,
    NonConvergent,
    NoProgress,
    NotProjectivelyFlat,
    SquareNotZero,
    RankUnstable,
    NotSubcomplex,
    NotAcyclic,
    UnannotatedCorner,
    CapTooSmall,
    MissingOneChain,
    NotClosed,
    WrongWayCorner,
    UnknownExample,
    ParseError,
    InvalidInput,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& detail);
    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

} // namespace lagsurg
