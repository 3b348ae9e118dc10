#pragma once

#include <stdexcept>
#include <string>

namespace lws {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySequenceError : Error {
    EmptySequenceError() : Error("sequence contains no monomers") {}
};

struct InvalidCharacterError : Error {
    int position;  // 1-based among non-whitespace characters
    char character;
    InvalidCharacterError(int pos, char c)
        : Error("invalid character '" + std::string(1, c) + "' at position " +
                std::to_string(pos)),
          position(pos),
          character(c) {}
};

struct UnknownResidueError : Error {
    int position;
    char character;
    UnknownResidueError(int pos, char c)
        : Error("unknown residue '" + std::string(1, c) + "' at position " + std::to_string(pos)),
          position(pos),
          character(c) {}
};

struct LengthMismatchError : Error {
    LengthMismatchError(std::size_t positions, std::size_t monomers)
        : Error("conformation has " + std::to_string(positions) + " positions but sequence has " +
                std::to_string(monomers) + " monomers") {}
};

struct InfeasibleMoveError : Error {
    using Error::Error;
};

struct InitializationFailedError : Error {
    using Error::Error;
};

struct TooLongError : Error {
    TooLongError(int n, int bound)
        : Error("sequence length " + std::to_string(n) + " exceeds enumeration bound " +
                std::to_string(bound)) {}
};

struct ParseError : Error {
    int line;  // 1-based line number in the input file
    ParseError(int line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct DuplicateNameError : Error {
    explicit DuplicateNameError(const std::string& name)
        : Error("duplicate instance name '" + name + "'") {}
};

struct UndefinedBoundError : Error {
    UndefinedBoundError() : Error("no lower bound available for relative improvement") {}
};

struct DegenerateDenominatorError : Error {
    DegenerateDenominatorError() : Error("reference energy equals the lower bound") {}
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace lws
