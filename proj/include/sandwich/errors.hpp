#pragma once
#include <stdexcept>
#include <string>

namespace sandwich {

// code is a short machine tag, location is "line:col" or empty
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg, std::string location = {})
        : std::runtime_error(msg), code_(std::move(code)), location_(std::move(location)) {}
    const std::string& code() const { return code_; }
    const std::string& location() const { return location_; }

private:
    std::string code_;
    std::string location_;
};

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int col)
        : Error("ParseError", msg, std::to_string(line) + ":" + std::to_string(col)) {}
};

}  // namespace sandwich
