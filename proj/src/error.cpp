#include "gmelab/error.hpp"

namespace gmelab {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::shape_mismatch: return "shape mismatch";
    case errc::index_out_of_range: return "index out of range";
    case errc::discard_all: return "cannot discard every subsystem";
    case errc::malformed_permutation: return "malformed permutation";
    case errc::non_hermitian: return "non-Hermitian input";
    case errc::not_normalized: return "not normalized";
    case errc::not_xform: return "not X-form";
    case errc::zero_trace: return "zero trace";
    case errc::zero_probability: return "zero probability";
    case errc::rectangle_violation: return "rectangle violation";
    case errc::non_positive_parameter: return "non-positive parameter";
    case errc::invalid_probability: return "invalid probability vector";
    case errc::parameter_out_of_range: return "parameter out of range";
    case errc::unsupported: return "unsupported";
    case errc::numerical_contract: return "numerical contract violated";
    case errc::invalid_argument: return "invalid argument";
  }
  return "unknown error";
}

}  // namespace gmelab
