#pragma once

#include <stdexcept>
#include <string>

namespace calibsmooth {

// Exit-code taxonomy used by the CLI: 2 input, 3 config, 4 resource.
class input_error : public std::runtime_error {
public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data; carries the 1-based row (CSV line / JSON element).
class parse_error : public input_error {
public:
  parse_error(const std::string& msg, long row)
    : input_error("row " + std::to_string(row) + ": " + msg), row_(row) {}
  long row() const { return row_; }

private:
  long row_;
};

class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid size exceeded the configured cap (tiny sigma and/or tiny eps).
class resource_limit_error : public std::runtime_error {
public:
  explicit resource_limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace calibsmooth
