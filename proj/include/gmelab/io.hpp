#pragma once

// JSON and CSV interchange.
//
// DensityMatrix:    { "dims": [int], "re": [[float]], "im": [[float]] }
// ProductFormState: { "global_dims": [int], "terms": [ { "weight": float, "factors": [DensityMatrix] } ] }

#include <string>

#include "json.hpp"

#include "gmelab/gme.hpp"
#include "gmelab/linalg.hpp"
#include "gmelab/states.hpp"

namespace gmelab {

/// printf "%.12g": fixed width of significant digits for reproducible output.
std::string format_number(double v);

nlohmann::json to_json(const DensityMatrix& rho);
/// Flagged normalized when the trace is 1 within tol::trace. Throws invalid_argument.
DensityMatrix density_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ProductFormState& s);
ProductFormState product_form_from_json(const nlohmann::json& j);

/// Reads a file holding either schema above; product forms are expanded densely.
DensityMatrix read_density_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string threshold_csv_header();
std::string threshold_csv_row(const ThresholdReport& r);

}  // namespace gmelab
