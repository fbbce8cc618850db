#pragma once

#include <stdexcept>
#include <string>

namespace gazeheat {

// Coarse failure category. Values line up with the CLI exit codes.
enum class ErrorKind { Usage = 1, Data = 2, Internal = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) { throw Error(ErrorKind::Usage, msg); }
[[noreturn]] inline void fail_data(const std::string& msg) { throw Error(ErrorKind::Data, msg); }
[[noreturn]] inline void fail_internal(const std::string& msg) { throw Error(ErrorKind::Internal, msg); }

}  // namespace gazeheat
