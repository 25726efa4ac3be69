#include "gmelab/separability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gmelab/error.hpp"
#include "gmelab/tolerances.hpp"

namespace gmelab {

namespace {

constexpr std::size_t kQubits = 6;
constexpr std::size_t kDim = 64;

const std::vector<std::size_t>& six_qubits() {
  static const std::vector<std::size_t> dims(kQubits, 2);
  return dims;
}

// Bit mask (over the 0-based label m-1) of the two qubits held by party k.
unsigned party_mask(int k) { return 0b11u << (4 - 2 * k); }

unsigned side_mask(const std::vector<int>& parties) {
  unsigned m = 0;
  for (int k : parties) m |= party_mask(k);
  return m;
}

std::string spec_string(const EmbeddingSpec& s) {
  return "gamma(" + std::to_string(s.m[0]) + "," + std::to_string(s.m[1]) + "," + std::to_string(s.m[2]) +
         "," + std::to_string(s.m[3]) + ")";
}

bool satisfies_rectangle(const EmbeddingSpec& s) {
  try {
    embedding_cut(s);
    return true;
  } catch (const error&) {
    return false;
  }
}

// Single-qubit kets in the order 0, 1, +, -, r, l.
std::array<cplx, 2> qubit_ket(char c) {
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  switch (c) {
    case '0': return {1.0, 0.0};
    case '1': return {0.0, 1.0};
    case '+': return {h, h};
    case '-': return {h, -h};
    case 'r': return {h, -i * h};
    case 'l': return {h, i * h};
  }
  throw error(errc::invalid_argument, std::string("unknown qubit label ") + c);
}

ComplexMatrix product_projector(std::string_view labels) {
  std::vector<cplx> v{1.0};
  for (char c : labels) {
    const auto q = qubit_ket(c);
    std::vector<cplx> next;
    next.reserve(v.size() * 2);
    for (cplx a : v) {
      next.push_back(a * q[0]);
      next.push_back(a * q[1]);
    }
    v = std::move(next);
  }
  return ComplexMatrix::outer(v);
}

// Entry-class id (0..3) for each 1-based label.
const std::array<int, kDim + 1>& diag_classes() {
  static const std::array<int, kDim + 1> cls = [] {
    std::array<int, kDim + 1> c{};
    c.fill(-1);
    for (int m : {1, 22, 43, 64}) c[m] = 0;
    for (int m : {2, 3, 5, 6, 9, 11, 17, 18, 21, 24, 30, 32, 33, 35, 41, 44, 47, 48, 54, 56, 59, 60, 62, 63})
      c[m] = 1;
    for (int m : {4, 13, 16, 23, 26, 27, 38, 39, 42, 49, 52, 61}) c[m] = 2;
    for (int m : {7, 8, 10, 12, 14, 15, 19, 20, 25, 28, 29, 31, 34, 36, 37, 40, 45, 46, 50, 51, 53, 55, 57, 58})
      c[m] = 3;
    return c;
  }();
  return cls;
}

// Coefficients (c0, c1, c2) of c0 + c1 p + c2 p^2 for each entry class.
constexpr std::array<std::array<double, 3>, 4> kClassPoly{{
    {1.0, -2.0, 1.0},
    {1.0, -10.0 / 3.0, 7.0 / 3.0},
    {1.0, -2.0, -13.0 / 3.0},
    {1.0, -6.0, 31.0 / 3.0},
}};

DecompositionWeights weights_at(double p) {
  return {(1 - 2 * p) * (1 - 2 * p), p * (3 - 7 * p), p * (1 - p), 4 * p * p};
}

ComplexMatrix diag_numerators(double p) {
  std::vector<double> d(kDim);
  for (int m = 1; m <= static_cast<int>(kDim); ++m) d[m - 1] = rho_diag_numerator(m, p) / 64.0;
  return ComplexMatrix::diagonal(d);
}

ComplexMatrix mixture(const std::vector<EmbeddingSpec>& specs) {
  ComplexMatrix acc(kDim, kDim);
  for (const auto& s : specs) acc += embed_gamma(s).matrix();
  acc *= 1.0 / static_cast<double>(specs.size());
  return acc;
}

// Right-hand side minus Gamma_1, i.e. everything except the Gamma_1 mixture.
ComplexMatrix rest_of_rhs(double p) {
  const auto w = weights_at(p);
  ComplexMatrix m = diag_numerators(p);
  m.add_scaled(w.gamma2, gamma_big_2().matrix());
  m.add_scaled(w.sigma, sigma_big().matrix());
  return m;
}

struct Gamma1Repair {
  std::vector<EmbeddingSpec> tuples;
  std::optional<std::string> note;
};

// The decomposition identity is exact, so it decides which single-index edit
// of the printed Gamma_1 list is the intended one.
Gamma1Repair repair_gamma1() {
  const auto& printed = gamma1_tuples_printed();
  const std::array<double, 2> probes{0.1, 0.27};

  std::array<ComplexMatrix, 2> gap;  // target - (rhs without Gamma_1), per probe
  for (std::size_t i = 0; i < probes.size(); ++i) gap[i] = two_copy_target(probes[i]).matrix() - rest_of_rhs(probes[i]);

  auto residual_with = [&](const std::vector<EmbeddingSpec>& list) {
    const ComplexMatrix g1 = mixture(list);
    double worst = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i)
      worst = std::max(worst, max_abs_diff(g1 * cplx(weights_at(probes[i]).gamma1), gap[i]));
    return worst;
  };

  std::vector<std::size_t> suspects;
  for (std::size_t t = 0; t < printed.size(); ++t)
    if (!satisfies_rectangle(printed[t])) suspects.push_back(t);
  if (suspects.empty()) {
    if (residual_with(printed) <= tol::decomp) return {printed, std::nullopt};
    for (std::size_t t = 0; t < printed.size(); ++t) suspects.push_back(t);
  }

  std::vector<std::pair<std::size_t, EmbeddingSpec>> fixes;
  for (std::size_t t : suspects) {
    for (std::size_t pos = 0; pos < 4; ++pos) {
      for (int v = 1; v <= static_cast<int>(kDim); ++v) {
        EmbeddingSpec cand = printed[t];
        if (cand.m[pos] == v) continue;
        cand.m[pos] = v;
        if (!satisfies_rectangle(cand)) continue;
        auto list = printed;
        list[t] = cand;
        bool others_ok = true;
        for (std::size_t u = 0; u < list.size() && others_ok; ++u)
          if (u != t && !satisfies_rectangle(list[u])) others_ok = false;
        if (others_ok && residual_with(list) <= tol::decomp) fixes.emplace_back(t, cand);
      }
    }
  }
  if (fixes.size() != 1) {
    throw error(errc::numerical_contract,
                "expected exactly one single-index repair of the Gamma_1 list, found " + std::to_string(fixes.size()));
  }
  auto list = printed;
  list[fixes[0].first] = fixes[0].second;
  return {list, spec_string(printed[fixes[0].first]) + " -> " + spec_string(fixes[0].second)};
}

const Gamma1Repair& gamma1_repair() {
  static const Gamma1Repair r = repair_gamma1();
  return r;
}

// Sorted feasible set of c0 + c1 p + c2 p^2 >= 0 as closed intervals.
std::vector<Interval> nonnegative_set(double c0, double c1, double c2) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (c2 == 0.0) {
    if (c1 == 0.0) return c0 >= 0 ? std::vector<Interval>{{-inf, inf}} : std::vector<Interval>{};
    const double r = -c0 / c1;
    return c1 > 0 ? std::vector<Interval>{{r, inf}} : std::vector<Interval>{{-inf, r}};
  }
  const double disc = c1 * c1 - 4 * c2 * c0;
  if (disc < 0) return c2 > 0 ? std::vector<Interval>{{-inf, inf}} : std::vector<Interval>{};
  // Cancellation-free roots.
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  double r1 = q / c2;
  double r2 = q != 0.0 ? c0 / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  if (c2 > 0) return {{-inf, r1}, {r2, inf}};
  return {{r1, r2}};
}

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
  return out;
}

}  // namespace

// ---- embeddings ----------------------------------------------------------

EmbeddingCut embedding_cut(const EmbeddingSpec& spec) {
  for (int v : spec.m) {
    if (v < 1 || v > static_cast<int>(kDim)) {
      throw error(errc::rectangle_violation, spec_string(spec) + ": label outside 1..64");
    }
  }
  const unsigned m1 = spec.m[0] - 1, m2 = spec.m[1] - 1, m3 = spec.m[2] - 1, m4 = spec.m[3] - 1;
  for (int alone = 0; alone < 3; ++alone) {
    std::vector<int> rest;
    for (int k = 0; k < 3; ++k)
      if (k != alone) rest.push_back(k);
    for (int orient = 0; orient < 2; ++orient) {
      const std::vector<int> first = orient == 0 ? std::vector<int>{alone} : rest;
      const unsigned c = side_mask(first);
      const unsigned d = 63u & ~c;
      const unsigned d12 = m1 ^ m2, d13 = m1 ^ m3;
      if (d12 == 0 || d13 == 0) continue;
      if ((d12 & c) != 0 || (d13 & d) != 0) continue;
      if (m4 != ((m3 & c) | (m2 & d))) continue;
      return {Partition{{{alone}, rest}}, first};
    }
  }
  throw error(errc::rectangle_violation, spec_string(spec) + " is not a product rectangle across any party cut");
}

DensityMatrix gamma_base() {
  ComplexMatrix g(4, 4);
  for (const char* t : {"++", "--", "rl", "lr"}) g += product_projector(t);
  g *= 0.25;
  return DensityMatrix(std::move(g), {2, 2});
}

DensityMatrix embed_gamma(const EmbeddingSpec& spec) {
  embedding_cut(spec);
  static const DensityMatrix g = gamma_base();
  ComplexMatrix out(kDim, kDim);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) out(spec.m[r] - 1, spec.m[c] - 1) = g(r, c);
  return DensityMatrix(std::move(out), six_qubits());
}

const std::vector<EmbeddingSpec>& gamma1_tuples_printed() {
  static const std::vector<EmbeddingSpec> t{
      {{2, 10, 36, 44}},  {{2, 12, 34, 44}},  {{33, 37, 50, 54}}, {{3, 7, 20, 24}},   {{3, 8, 19, 24}},
      {{5, 7, 45, 47}},   {{5, 15, 37, 47}},  {{9, 10, 29, 30}},  {{9, 14, 25, 30}},  {{18, 20, 58, 60}},
      {{18, 28, 50, 60}}, {{41, 45, 58, 62}}, {{41, 46, 57, 62}}, {{21, 29, 55, 63}}, {{21, 31, 53, 63}},
      {{35, 36, 55, 56}}, {{35, 40, 51, 56}}, {{6, 8, 46, 48}},   {{6, 14, 40, 48}},  {{11, 12, 31, 31}},
      {{11, 15, 28, 32}}, {{17, 19, 57, 59}}, {{17, 25, 51, 59}}, {{33, 34, 53, 54}},
  };
  return t;
}

const std::vector<EmbeddingSpec>& gamma2_tuples() {
  static const std::vector<EmbeddingSpec> t{
      {{1, 2, 21, 22}},   {{1, 5, 18, 22}},   {{1, 6, 17, 22}},   {{1, 3, 41, 43}},
      {{1, 9, 35, 43}},   {{1, 11, 33, 43}},  {{22, 24, 62, 64}}, {{22, 30, 56, 64}},
      {{22, 32, 54, 64}}, {{43, 44, 63, 64}}, {{43, 47, 60, 64}}, {{43, 48, 59, 64}},
  };
  return t;
}

const std::vector<EmbeddingSpec>& gamma1_tuples() { return gamma1_repair().tuples; }

const std::optional<std::string>& gamma1_correction() { return gamma1_repair().note; }

DensityMatrix gamma_big_1() {
  static const DensityMatrix g(mixture(gamma1_tuples()), six_qubits());
  return g;
}

DensityMatrix gamma_big_2() {
  static const DensityMatrix g(mixture(gamma2_tuples()), six_qubits());
  return g;
}

// ---- sigma ---------------------------------------------------------------

DensityMatrix sigma_small() {
  static const DensityMatrix s = [] {
    ComplexMatrix m(16, 16);
    for (const char* t : {"++++", "+-+-", "-+-+", "----", "+r+l", "+l+r", "-r-l", "-l-r", "r+l+", "r-l-",
                          "l+r+", "l-r-", "rrll", "rllr", "lrrl", "llrr"})
      m += product_projector(t);
    m *= 1.0 / 16.0;
    return DensityMatrix(std::move(m), {2, 2, 2, 2});
  }();
  return s;
}

DensityMatrix sigma_term(int k) {
  if (k < 0 || k > 2) throw error(errc::index_out_of_range, "party " + std::to_string(k));
  // Six-qubit positions written by each of sigma's four qubits.
  std::array<std::vector<int>, 4> targets;
  targets[0] = {2 * k};
  targets[1] = {2 * k + 1};
  for (int o = 0; o < 3; ++o) {
    if (o == k) continue;
    targets[2].push_back(2 * o);
    targets[3].push_back(2 * o + 1);
  }
  std::array<std::size_t, 16> image{};
  for (std::size_t idx = 0; idx < 16; ++idx) {
    std::size_t out = 0;
    for (int q = 0; q < 4; ++q) {
      if ((idx >> (3 - q)) & 1u)
        for (int pos : targets[q]) out |= std::size_t{1} << (5 - pos);
    }
    image[idx] = out;
  }
  const DensityMatrix& s = sigma_small();
  ComplexMatrix m(kDim, kDim);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) m(image[r], image[c]) = s(r, c);
  return DensityMatrix(std::move(m), six_qubits());
}

DensityMatrix sigma_big() {
  static const DensityMatrix s = [] {
    ComplexMatrix m(kDim, kDim);
    for (int k = 0; k < 3; ++k) m += sigma_term(k).matrix();
    m *= 1.0 / 3.0;
    return DensityMatrix(std::move(m), six_qubits());
  }();
  return s;
}

// ---- diagonal part and the decomposition ---------------------------------

double rho_diag_numerator(int m, double p) {
  if (m < 1 || m > static_cast<int>(kDim)) throw error(errc::index_out_of_range, "label " + std::to_string(m));
  const auto& c = kClassPoly[diag_classes()[m]];
  return c[0] + c[1] * p + c[2] * p * p;
}

DensityMatrix rho_diag_closed_form(double p) {
  const double w = (1 - 2 * p) * (1 - 2 * p);
  std::vector<double> d(kDim);
  for (int m = 1; m <= static_cast<int>(kDim); ++m) d[m - 1] = rho_diag_numerator(m, p) / 64.0;
  // At p = 1/2 the limit of (1-2p)^2 rho_diag, flagged unnormalized.
  if (w == 0.0) return DensityMatrix(ComplexMatrix::diagonal(d), six_qubits(), normalization::unnormalized);
  for (double& v : d) v /= w;
  return DensityMatrix(ComplexMatrix::diagonal(d), six_qubits());
}

DensityMatrix two_copy_target(double p) {
  const DensityMatrix rho = isotropic_ghz_dense(3, p);
  return permute_subsystems(tensor(rho, rho), {0, 3, 1, 4, 2, 5});
}

BisepDecomposition two_copy_decomposition(double p) {
  const auto w = weights_at(p);
  std::vector<BisepComponent> comps;
  ComplexMatrix sum(kDim, kDim);

  const ComplexMatrix diag = diag_numerators(p);  // already (1-2p)^2 rho_diag
  double diag_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kDim; ++i) diag_min = std::min(diag_min, diag(i, i).real());
  sum += diag;
  if (w.diagonal != 0.0) comps.push_back({w.diagonal, component_kind::diagonal, std::nullopt, rho_diag_closed_form(p)});

  for (const auto& s : gamma1_tuples()) {
    const double wt = w.gamma1 / 24.0;
    DensityMatrix g = embed_gamma(s);
    sum.add_scaled(wt, g.matrix());
    comps.push_back({wt, component_kind::gamma1, embedding_cut(s).partition, std::move(g)});
  }
  for (const auto& s : gamma2_tuples()) {
    const double wt = w.gamma2 / 12.0;
    DensityMatrix g = embed_gamma(s);
    sum.add_scaled(wt, g.matrix());
    comps.push_back({wt, component_kind::gamma2, embedding_cut(s).partition, std::move(g)});
  }
  for (int k = 0; k < 3; ++k) {
    const double wt = w.sigma / 3.0;
    DensityMatrix t = sigma_term(k);
    sum.add_scaled(wt, t.matrix());
    std::vector<int> rest;
    for (int o = 0; o < 3; ++o)
      if (o != k) rest.push_back(o);
    comps.push_back({wt, component_kind::sigma, Partition{{{k}, rest}}, std::move(t)});
  }

  DensityMatrix target = two_copy_target(p);
  const double residual = max_abs_diff(sum, target.matrix());
  const bool weights_ok = w.gamma1 >= -tol::decomp && w.gamma2 >= -tol::decomp;
  return BisepDecomposition{p,
                            std::move(comps),
                            std::move(target),
                            w,
                            residual,
                            diag_min,
                            weights_ok && diag_min >= -tol::decomp,
                            gamma1_correction()};
}

std::vector<AuditEntry> separability_audit(const BisepDecomposition& d) {
  std::vector<AuditEntry> out;
  for (const auto& c : d.components) {
    if (!c.partition) continue;
    // Transpose the qubits of the lone party.
    const int alone = c.partition->blocks[0].size() == 1 ? c.partition->blocks[0][0] : c.partition->blocks[1][0];
    const std::size_t qa = 2 * alone, qb = 2 * alone + 1;
    out.push_back({c.kind, *c.partition, partial_transpose(c.state, {qa, qb}).min_eigenvalue()});
  }
  return out;
}

Interval bisep_validity_interval() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<Interval> feasible{{-inf, inf}};
  // Component weights: p(3-7p), p(1-p), 4p^2 (the (1-2p)^2 weight is a square).
  feasible = intersect(feasible, nonnegative_set(0.0, 3.0, -7.0));
  feasible = intersect(feasible, nonnegative_set(0.0, 1.0, -1.0));
  feasible = intersect(feasible, nonnegative_set(0.0, 0.0, 4.0));
  for (const auto& c : kClassPoly) feasible = intersect(feasible, nonnegative_set(c[0], c[1], c[2]));
  // Merge touching pieces.
  std::sort(feasible.begin(), feasible.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : feasible) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  if (merged.size() != 1) {
    throw error(errc::numerical_contract, "validity set has " + std::to_string(merged.size()) + " pieces");
  }
  // Adding +0.0 turns a root computed as -0.0 into 0.
  return {merged.front().lo + 0.0, merged.front().hi + 0.0};
}

// ---- partial transpose of isotropic GHZ states ---------------------------

double ppt_crit(int n_qubits) {
  if (n_qubits < 2) throw error(errc::parameter_out_of_range, "qubit count");
  return 1.0 / (1.0 + std::ldexp(1.0, n_qubits - 1));
}

double pt_flagged_eigenvalue(int n_qubits, double p) { return (1.0 - p) / std::ldexp(1.0, n_qubits) - p / 2.0; }

std::vector<double> pt_spectrum_isotropic(int n_qubits, double p, const Partition& cut) {
  cut.validate(n_qubits);
  const auto side = cut.far_side();
  return hermitian_eigenvalues(partial_transpose(isotropic_ghz_dense(n_qubits, p), side).matrix());
}

double pt_min_eig_isotropic(int n_qubits, double p, const Partition& cut) {
  return pt_spectrum_isotropic(n_qubits, p, cut).front();
}

}  // namespace gmelab
