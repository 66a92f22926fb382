#pragma once

#include <stdexcept>
#include <string>

namespace percolab {

enum class ErrorCode {
    invalid_input,
    out_of_regime,
    sampling_failure,
    no_root,
    resource_limit,
    io_failure,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_input: return "invalid_input";
        case ErrorCode::out_of_regime: return "out_of_regime";
        case ErrorCode::sampling_failure: return "sampling_failure";
        case ErrorCode::no_root: return "no_root";
        case ErrorCode::resource_limit: return "resource_limit";
        case ErrorCode::io_failure: return "io_failure";
    }
    return "unknown";
}

}  // namespace percolab
