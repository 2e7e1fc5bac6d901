#pragma once
// Error types shared by every module. Domain failures are exceptions derived
// from hcps::Error; the code lets callers branch without string matching.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcps {

enum class Errc {
  syntax,
  unknown_prefix,
  cyclic_subclass,
  conflicting_declaration,
  undeclared_term,
  unbound_projection,
  unbound_filter_var,
  unannotated_class,
  duplicate_individual,
  unknown_individual,
  unknown_taxonomy_term,
  invalid_capability,
  immutable_skill_set,
  unknown_provider,
  invalid_profile,
  no_completed_invocation,
  rating_out_of_range,
  empty_criteria,
  unknown_service,
  input_signature_mismatch,
  invalid_state,
  empty_task_list,
  invalid_weights,
  zero_relations,
  unknown_node,
  io,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by every line-oriented parser in the project (kb documents, queries,
// profiles, capability files, scenarios).
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected)
      : Error(Errc::syntax, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                ": expected " + expected),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

}  // namespace hcps
