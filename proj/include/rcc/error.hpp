#pragma once

#include <stdexcept>
#include <string>

namespace rcc {

// Base for everything this library throws deliberately.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lexical / syntactic / scope+type errors. Carries a 1-based source position.
struct ParseError : Error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : Error("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

// An interpreter ran out of its step budget.
struct FuelError : Error {
    using Error::Error;
};

// A number failed to decode as a value of the claimed type.
struct EncodingError : Error {
    using Error::Error;
};

} // namespace rcc
