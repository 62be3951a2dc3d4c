#ifndef BDPP_ERROR_HPP
#define BDPP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bdpp {

enum class ErrorCode {
    InvalidInput,   // bad argument, dimension mismatch
    NotAvailable,   // requested data not present (e.g. no interior point)
    Unsupported,    // function kind outside what this routine handles
    Validation,     // constructed object violates its invariants
    Infeasible,     // no point satisfies the coupled constraint
    Parse,          // malformed JSON / CSV
    Io,             // file system failure
    Runtime,        // solver failure and other internal errors
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "invalid-input";
        case ErrorCode::NotAvailable: return "not-available";
        case ErrorCode::Unsupported:  return "unsupported";
        case ErrorCode::Validation:   return "validation";
        case ErrorCode::Infeasible:   return "infeasible";
        case ErrorCode::Parse:        return "parse";
        case ErrorCode::Io:           return "io";
        case ErrorCode::Runtime:      return "runtime";
    }
    return "unknown";
}

}  // namespace bdpp

#endif
