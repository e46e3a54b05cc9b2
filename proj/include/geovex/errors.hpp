#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geovex {

enum class errc {
  domain_exit,
  base_mismatch,
  metric_degeneracy,
  unsupported_inverse,
  zero_alpha,
  empty_set,
  parse_error,
  eval_error,
  schema_error,
  config_error,
  parameter_order,
  construction_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::domain_exit: return "domain-exit";
    case errc::base_mismatch: return "base-mismatch";
    case errc::metric_degeneracy: return "metric-degeneracy";
    case errc::unsupported_inverse: return "unsupported-inverse";
    case errc::zero_alpha: return "zero-alpha";
    case errc::empty_set: return "empty-set";
    case errc::parse_error: return "parse-error";
    case errc::eval_error: return "eval-error";
    case errc::schema_error: return "schema-error";
    case errc::config_error: return "config-error";
    case errc::parameter_order: return "parameter-order";
    case errc::construction_error: return "construction-error";
  }
  return "unknown";
}

class error : public std::runtime_error {
public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

/// Syntax error with a 1-based source location and the token classes that
/// would have been accepted at that point.
class parse_error : public error {
public:
  parse_error(int line, int column, const std::string& msg, std::vector<std::string> expected = {})
      : error(errc::parse_error,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg +
                  (expected.empty() ? std::string{} : ", expected " + join(expected))),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  static std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out += " | ";
      out += xs[i];
    }
    return out;
  }

  int line_;
  int column_;
  std::vector<std::string> expected_;
};

}  // namespace geovex
