#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace smiledyn {

/// Failure classes, ordered by the process exit code they map to.
enum class ErrorKind {
    Io = 2,
    Schema = 3,
    Validation = 4,
    Analysis = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Analysis: return "analysis";
    }
    return "unknown";
}

}  // namespace smiledyn
