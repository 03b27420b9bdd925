#pragma once

#include <stdexcept>
#include <string>

namespace dataless {

// Categories map one-to-one onto CLI exit codes.
enum class ErrorKind { usage = 2, parse = 3, validation = 4, runtime = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] void throw_parse(const std::string& source, std::size_t line, const std::string& msg);
[[noreturn]] void throw_validation(const std::string& msg);
[[noreturn]] void throw_runtime(const std::string& msg);

const char* to_string(ErrorKind kind);

}  // namespace dataless
