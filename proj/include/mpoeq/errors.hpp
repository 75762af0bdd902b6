#pragma once

#include <stdexcept>
#include <string>

namespace mpoeq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shape/axis violations in tensor operations.
struct TensorError : Error {
    using Error::Error;
};

/// SVD non-convergence, non-finite input, and friends.
struct NumericError : Error {
    using Error::Error;
};

/// Unknown gate kind, bad parameter count, invalid qubit targets.
struct CatalogError : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " + std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

} // namespace mpoeq
