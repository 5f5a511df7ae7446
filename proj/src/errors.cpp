#include "atwist/errors.hpp"

namespace atwist {

const char* to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::Syntax: return "SyntaxError";
    case ParseErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ParseErrorKind::DuplicateComponent: return "DuplicateComponent";
    case ParseErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ParseErrorKind::CyclicScalarDefinition: return "CyclicScalarDefinition";
    }
    return "ParseError";
}

ParseError::ParseError(ParseErrorKind kind, int line, int column, const std::string& token,
                       const std::string& message)
    : Error(std::string(to_string(kind)) + " at line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      token_(token) {}

} // namespace atwist
