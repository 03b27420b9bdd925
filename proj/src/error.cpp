#include "dataless/error.hpp"

namespace dataless {

void throw_parse(const std::string& source, std::size_t line, const std::string& msg) {
    throw Error(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + msg);
}

void throw_validation(const std::string& msg) { throw Error(ErrorKind::validation, msg); }

void throw_runtime(const std::string& msg) { throw Error(ErrorKind::runtime, msg); }

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage: return "usage";
        case ErrorKind::parse: return "parse";
        case ErrorKind::validation: return "validation";
        case ErrorKind::runtime: return "runtime";
    }
    return "unknown";
}

}  // namespace dataless
