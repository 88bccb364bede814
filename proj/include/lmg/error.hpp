#pragma once
/*
 * (C) Copyright 2026 landmark-gate developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <stdexcept>
#include <string>

namespace lmg {

enum class errc {
  io_error = 1,
  parse_error,
  invalid_argument,
  landmark_count_mismatch,
  nonfinite_coordinate,
  degenerate_input,
  unsupported_format,
  schema_violation,
  match_failed,
  search_space_too_large,
  empty_input,
  out_of_range,
  dimension_mismatch,
};

const char* errc_name(errc code);

/// Exception carrying a stable error code; the C API maps these to lmg_status.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& message) : std::runtime_error(message), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) { throw error(code, message); }

}  // namespace lmg
