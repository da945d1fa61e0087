#pragma once

#include <stdexcept>
#include <string>

namespace kappax {

enum class ErrorCode {
    MalformedRow,
    DuplicateRecord,
    EmptyFile,
    DuplicatePair,
    RecordOutsideRoster,
    UnknownCategory,
    MalformedPredicate,
    UnknownCategoryReference,
    CyclicDependency,
    HierarchyViolation,
    InvalidCounts,
    ZeroOpportunity,
    NotMutuallyExclusive,
    AllZeroScores,
    NotTwoRaters,
    UndefinedKappa,
    NoValidPairs,
    TooFewReplicates,
    AllReplicatesDegenerate,
    OutOfRange,
    DuplicateCategory,
    MalformedConfig,
    IoError,
};

const char* to_string(ErrorCode code);

/// All library failures are reported through this exception; `code()` gives
/// the machine-checkable cause, `what()` the human-readable context.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace kappax
