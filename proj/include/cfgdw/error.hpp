#pragma once

#include <stdexcept>
#include <string>

namespace cfgdw {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed program text or a document that does not follow its schema.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// File could not be read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

// The graph violates a structural precondition (unreachable vertex,
// non-structured control flow, cyclic decomposition DAG, ...).
class GraphError : public Error {
  public:
    using Error::Error;
};

// A game move broke the rules of the cops-and-robber game.
class GameError : public Error {
  public:
    using Error::Error;
};

} // namespace cfgdw
