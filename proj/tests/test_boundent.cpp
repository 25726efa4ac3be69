#include <cmath>
#include <random>

#include "doctest.h"
#include "gmelab/boundent.hpp"
#include "gmelab/error.hpp"

using namespace gmelab;

namespace {

bool throws_code(errc code, auto&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code() == code;
  }
  return false;
}

std::vector<cplx> random_ket(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(d);
  double n = 0.0;
  for (auto& x : v) {
    x = {g(rng), g(rng)};
    n += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(n);
  return v;
}

// Dense oracle for the triangle witness trace: embed the three pair states
// qubit by qubit and evaluate W3 on the projected block directly.
double dense_triangle_trace(double x, double y, double z) {
  const DensityMatrix full = triangle_state(x, y, z).dense();
  const DensityMatrix w = witness_w3();
  // Order A2 A3 B1 B3 C1 C2; |ijk> sits at A2=j, A3=k, B1=i, B3=k, C1=i, C2=j.
  auto idx = [](std::size_t i, std::size_t j, std::size_t k) { return ((((j * 3 + k) * 3 + i) * 3 + k) * 3 + i) * 3 + j; };
  double t = 0.0;
  for (std::size_t r = 0; r < 27; ++r)
    for (std::size_t c = 0; c < 27; ++c)
      t += (w(r, c) * full(idx(c / 9, c / 3 % 3, c % 3), idx(r / 9, r / 3 % 3, r % 3))).real();
  return t;
}

}  // namespace

TEST_CASE("qutrit PPT family") {
  const auto r1 = qutrit_ppt_state(1.0);
  CHECK(ppt_normalization(1.0) == 9.0);
  for (std::size_t i : {1u, 5u, 6u, 2u, 3u, 7u}) CHECK(std::abs(r1(i, i) - cplx(1.0 / 9)) < 1e-15);
  for (double p : {0.1, 0.3, 1.0, 2.0, 5.0}) {
    const auto r = qutrit_ppt_state(p);
    CHECK(r.trace() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(r(0, 4) - cplx(1.0 / ppt_normalization(p))) < 1e-15);
    CHECK(r.is_positive());
    CHECK(partial_transpose(r, {1}).min_eigenvalue() >= -1e-10);
  }
  CHECK(throws_code(errc::non_positive_parameter, [] { qutrit_ppt_state(0.0); }));
  CHECK(throws_code(errc::non_positive_parameter, [] { qutrit_ppt_state(-1.0); }));
}

TEST_CASE("qutrit PPT family stays PPT on a log grid") {
  for (int i = 0; i <= 40; ++i) {
    const double p = std::pow(10.0, -2.0 + 4.0 * i / 40.0);
    CAPTURE(p);
    CHECK(partial_transpose(qutrit_ppt_state(p), {1}).min_eigenvalue() >= -1e-10);
  }
}

TEST_CASE("partial transpose spectrum of the PPT family") {
  // Normalized spectrum: {0, 1/N_p, (p + 1/p)/N_p}, each threefold.
  for (double p : {0.3, 1.0, 2.5}) {
    const double np = ppt_normalization(p);
    const auto ev = hermitian_eigenvalues(partial_transpose(qutrit_ppt_state(p), {1}).matrix());
    std::vector<double> expect{0, 0, 0, 1 / np, 1 / np, 1 / np, (p + 1 / p) / np, (p + 1 / p) / np, (p + 1 / p) / np};
    std::sort(expect.begin(), expect.end());
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(ev[i] - expect[i]) < 1e-12);
    MESSAGE("p = " << p << ": PT eigenvalues 0, " << 1 / np << ", " << (p + 1 / p) / np << " (each x3)");
  }
}

TEST_CASE("witness W3") {
  const auto w = witness_w3();
  CHECK(w.dims() == std::vector<std::size_t>{3, 3, 3});
  CHECK(w(0, 13) == cplx(-1.0));
  CHECK(w(13, 26) == cplx(-1.0));
  CHECK(w(4, 4) == cplx(1.0));
  CHECK(w(2, 2) == cplx(0.0));
  CHECK(w.trace() == 12.0);
  CHECK(is_hermitian(w.matrix(), 0.0));
  std::size_t nonzero = 0;
  for (auto v : w.matrix().data())
    if (v != cplx(0.0)) ++nonzero;
  CHECK(nonzero == 18);
}

TEST_CASE("triangle state") {
  const auto t = triangle_state(1.0, 1.0, 1.0);
  const auto d = t.dense();
  CHECK(d.dim() == 729);
  CHECK(d.trace() == doctest::Approx(1.0).epsilon(1e-13));
  const auto& f = t.terms()[0].factors;
  CHECK(f[0].matrix() == f[1].matrix());
  CHECK(f[1].matrix() == f[2].matrix());
  const auto mixed_params = triangle_state(1.0, 0.3, 2.0);
  for (const auto& factor : mixed_params.terms()[0].factors)
    CHECK(partial_transpose(factor, {1}).min_eigenvalue() >= -1e-10);
  CHECK(throws_code(errc::non_positive_parameter, [] { triangle_state(1.0, 0.0, 1.0); }));
}

TEST_CASE("triangle projection") {
  const auto pr = project_triangle_to_D(triangle_state(1.0, 1.0, 1.0));
  CHECK(pr.state.trace() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(pr.unnormalized.trace() - pr.probability) < 1e-15);

  const auto det = project_triangle_to_D(triangle_state(1.0, 0.3, 0.3));
  CHECK(witness_expectation(det.state) < 0.0);
  CHECK(std::abs(witness_expectation(det.unnormalized) - witness_trace_triangle(1.0, 0.3, 0.3)) < 1e-12);
  CHECK(std::abs(witness_expectation(det.unnormalized) - dense_triangle_trace(1.0, 0.3, 0.3)) < 1e-12);
}

TEST_CASE("triangle closed form") {
  auto bracket = [](double x, double y, double z) {
    return witness_trace_triangle(x, y, z) * ppt_normalization(x) * ppt_normalization(y) * ppt_normalization(z) / 3;
  };
  CHECK(bracket(1, 0.3, 0.3) == doctest::Approx(-0.31).epsilon(1e-12));
  CHECK(bracket(1, 1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  const double s = std::sqrt(2.0) - 1;
  CHECK(std::abs(witness_trace_triangle(1, s, s)) < 1e-15);
  // Frozen value at the demo point.
  CHECK(std::abs(witness_trace_triangle(1, 0.3, 0.3) - (-0.000534823939410)) < 1e-13);
}

TEST_CASE("triangle closed form matches the dense projection") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const auto pr = project_triangle_to_D(triangle_state(x, y, z));
    CAPTURE(x);
    CAPTURE(y);
    CAPTURE(z);
    CHECK(std::abs(witness_expectation(pr.unnormalized) - witness_trace_triangle(x, y, z)) < 1e-10);
  }
  // Independent check of the subspace compression against the full 729 x 729 matrix.
  for (int i = 0; i < 3; ++i) {
    const double x = u(rng), y = u(rng), z = u(rng);
    CHECK(std::abs(dense_triangle_trace(x, y, z) - witness_trace_triangle(x, y, z)) < 1e-10);
  }
}

TEST_CASE("wedge closed form") {
  auto bracket = [](double x, double y) { return witness_trace_wedge(x, y) * ppt_normalization(x) * ppt_normalization(y) / 3; };
  CHECK(bracket(0.3, 0.3) == doctest::Approx(-0.31).epsilon(1e-12));
  CHECK(bracket(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  const double s = std::sqrt(2.0) - 1;
  CHECK(std::abs(witness_trace_wedge(s, s)) < 1e-15);

  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = u(rng);
    const auto pr = project_wedge_to_D(wedge_state(x, y));
    CHECK(std::abs(witness_expectation(pr.unnormalized) - witness_trace_wedge(x, y)) < 1e-10);
    CHECK((witness_expectation(pr.state) < 0) == (x + y + x * y - 1 < 0));
  }
}

TEST_CASE("detection region") {
  for (double y : {0.40, 0.41, 0.414, 0.415, 0.42}) {
    CAPTURE(y);
    CHECK((witness_trace_triangle(1, y, y) < 0) == (y < std::sqrt(2.0) - 1));
  }
}

TEST_CASE("witness is nonnegative on states product across one cut") {
  std::mt19937_64 rng(71);
  const DensityMatrix w = witness_w3();
  for (std::size_t lone = 0; lone < 3; ++lone) {
    for (int i = 0; i < 100; ++i) {
      const auto a = random_ket(3, rng);
      const auto bc = random_ket(9, rng);
      // Build |a>|bc> then move the lone factor into place.
      std::vector<cplx> ket(27);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 9; ++s) ket[9 * r + s] = a[r] * bc[s];
      DensityMatrix rho(ComplexMatrix::outer(ket), {3, 3, 3});
      if (lone == 1) rho = permute_subsystems(rho, {1, 0, 2});
      if (lone == 2) rho = permute_subsystems(rho, {1, 2, 0});
      CAPTURE(lone);
      CHECK(witness_expectation(rho) >= -1e-12);
    }
  }
}

TEST_CASE("biseparable source") {
  const auto s = biseparable_source_state({1.0, 0.0, 0.0}, 1, 0.3, 0.3);
  CHECK(s.terms().size() == 1);
  CHECK(biseparable_source_state({0.5, 0.5, 0.0}, 1, 1, 1).terms().size() == 2);
  CHECK(biseparable_source_state({0.2, 0.3, 0.5}, 1, 1, 1).terms().size() == 3);
  CHECK(throws_code(errc::invalid_probability, [] { biseparable_source_state({0.5, 0.6, -0.1}, 1, 1, 1); }));
  CHECK(throws_code(errc::invalid_probability, [] { biseparable_source_state({0.5, 0.4, 0.0}, 1, 1, 1); }));

  const auto full = biseparable_source_state({0.2, 0.3, 0.5}, 1, 0.3, 0.3);
  for (int party = 0; party < 3; ++party) {
    const std::vector<int> far{party};
    CHECK(source_pt_min_eigenvalue(full, far) >= -1e-10);
  }
}

TEST_CASE("LOCC reduction reproduces the triangle state") {
  for (auto [x, y, z] : std::vector<std::array<double, 3>>{{1, 1, 1}, {1, 0.3, 0.3}, {0.7, 2.0, 0.4}}) {
    const auto src = biseparable_source_state({1.0 / 3, 1.0 / 3, 1.0 / 3}, x, y, z);
    const auto out = simulate_locc_triangle({src, src, src});
    const auto expect = triangle_state(x, y, z).dense();
    CHECK(out.state.global_dims() == std::vector<std::size_t>(6, 3));
    CHECK(max_abs_diff(out.state.dense().matrix(), expect.matrix()) < 1e-12);
    // Each projection keeps only the term in which that party is uncorrelated.
    for (double sp : out.step_probability) CHECK(sp == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(out.success_probability == doctest::Approx(1.0 / 27).epsilon(1e-14));
  }
  const auto src = biseparable_source_state({0.2, 0.3, 0.5}, 1, 0.3, 0.3);
  const auto out = simulate_locc_triangle({src, src, src});
  CHECK(out.success_probability == doctest::Approx(0.2 * 0.3 * 0.5).epsilon(1e-13));
  CHECK(witness_expectation(project_triangle_to_D(out.state).state) < 0.0);

  const auto none = biseparable_source_state({0.0, 0.5, 0.5}, 1, 1, 1);
  CHECK(throws_code(errc::zero_probability, [&] { simulate_locc_triangle({none, none, none}); }));
}
