#pragma once

#include <stdexcept>
#include <string>

namespace ircheck {

/// Syntax or validation failure while reading textual IR or a rules file.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string file, int line, int col, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(col) +
                           ": " + what),
        file_(std::move(file)), line_(line), col_(col) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int col() const { return col_; }

private:
  std::string file_;
  int line_;
  int col_;
};

class DuplicateSymbolError : public ParseError {
public:
  DuplicateSymbolError(std::string file, int line, int col, std::string symbol)
      : ParseError(std::move(file), line, col, "duplicate symbol '" + symbol + "'"),
        symbol_(std::move(symbol)) {}

  const std::string& symbol() const { return symbol_; }

private:
  std::string symbol_;
};

class UnknownPropertyError : public ParseError {
public:
  UnknownPropertyError(std::string file, int line, int col, std::string property)
      : ParseError(std::move(file), line, col, "unknown property '" + property + "'"),
        property_(std::move(property)) {}

  const std::string& property() const { return property_; }

private:
  std::string property_;
};

class EmptyFunctionListError : public ParseError {
public:
  EmptyFunctionListError(std::string file, int line, int col)
      : ParseError(std::move(file), line, col, "f[] must list at least one function") {}
};

class OrderArityError : public ParseError {
public:
  OrderArityError(std::string file, int line, int col)
      : ParseError(std::move(file), line, col,
                   "property 'order' requires at least two functions in f[]") {}
};

class EntryNotFoundError : public std::runtime_error {
public:
  explicit EntryNotFoundError(const std::string& name)
      : std::runtime_error("entry function '" + name + "' is not defined"), name_(name) {}

  const std::string& name() const { return name_; }

private:
  std::string name_;
};

class RootNotFoundError : public std::runtime_error {
public:
  explicit RootNotFoundError(const std::string& name)
      : std::runtime_error("root '" + name + "' is not a call-graph node") {}
};

class UnknownVariableError : public std::runtime_error {
public:
  explicit UnknownVariableError(const std::string& name)
      : std::runtime_error("unknown variable '" + name + "'") {}
};

/// The solver exhausted its propagation-step budget. Signals pathological
/// input, not a wrong answer.
class BudgetExceededError : public std::runtime_error {
public:
  explicit BudgetExceededError(std::uint64_t budget)
      : std::runtime_error("propagation budget of " + std::to_string(budget) +
                           " steps exceeded") {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ircheck
