#include "gmelab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gmelab/error.hpp"
#include "gmelab/tolerances.hpp"

namespace gmelab {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ir = nlohmann::json::array();
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      rr.push_back(rho(r, c).real());
      ir.push_back(rho(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"dims", rho.dims()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  try {
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("im").get<std::vector<std::vector<double>>>();
    const std::size_t d = re.size();
    if (im.size() != d) throw error(errc::invalid_argument, "re/im row counts differ");
    std::vector<cplx> entries;
    entries.reserve(d * d);
    for (std::size_t r = 0; r < d; ++r) {
      if (re[r].size() != d || im[r].size() != d) throw error(errc::invalid_argument, "matrix is not square");
      for (std::size_t c = 0; c < d; ++c) entries.emplace_back(re[r][c], im[r][c]);
    }
    ComplexMatrix m(d, d, std::move(entries));
    const bool unit = std::abs(m.trace() - 1.0) <= tol::trace;
    return DensityMatrix(std::move(m), dims, unit ? normalization::normalized : normalization::unnormalized);
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_argument, std::string("density matrix JSON: ") + e.what());
  }
}

nlohmann::json to_json(const ProductFormState& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : s.terms()) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : t.factors) factors.push_back(to_json(f));
    terms.push_back({{"weight", t.weight}, {"factors", std::move(factors)}});
  }
  return {{"global_dims", s.global_dims()}, {"terms", std::move(terms)}};
}

ProductFormState product_form_from_json(const nlohmann::json& j) {
  try {
    const auto dims = j.at("global_dims").get<std::vector<std::size_t>>();
    std::vector<ProductTerm> terms;
    double total = 0.0;
    for (const auto& t : j.at("terms")) {
      ProductTerm term{t.at("weight").get<double>(), {}};
      for (const auto& f : t.at("factors")) term.factors.push_back(density_from_json(f));
      total += term.weight;
      terms.push_back(std::move(term));
    }
    const bool unit = std::abs(total - 1.0) <= tol::trace;
    return ProductFormState(dims, std::move(terms), unit ? normalization::normalized : normalization::unnormalized);
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_argument, std::string("product-form JSON: ") + e.what());
  }
}

DensityMatrix read_density_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::invalid_argument, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_argument, path + ": " + e.what());
  }
  if (j.contains("terms")) return product_form_from_json(j).dense();
  return density_from_json(j);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::invalid_argument, "cannot write " + path);
  out << text;
  if (!out) throw error(errc::invalid_argument, "write failed for " + path);
}

std::string threshold_csv_header() { return "N,k,p_threshold,kind"; }

std::string threshold_csv_row(const ThresholdReport& r) {
  return std::to_string(r.n_qubits) + "," + std::to_string(r.k) + "," + format_number(r.p_threshold) + "," +
         std::string(to_string(r.kind));
}

}  // namespace gmelab
