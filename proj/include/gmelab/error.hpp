#pragma once

#include <stdexcept>
#include <string>

namespace gmelab {

enum class errc {
  shape_mismatch,
  index_out_of_range,
  discard_all,
  malformed_permutation,
  non_hermitian,
  not_normalized,
  not_xform,
  zero_trace,
  zero_probability,
  rectangle_violation,
  non_positive_parameter,
  invalid_probability,
  parameter_out_of_range,
  unsupported,
  numerical_contract,
  invalid_argument,
};

const char* to_string(errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// the CLI can map it onto an exit status.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace gmelab
