#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gmelab/error.hpp"
#include "gmelab/linalg.hpp"
#include "gmelab/states.hpp"
#include "gmelab/boundent.hpp"

using namespace gmelab;

namespace {

DensityMatrix proj(std::vector<cplx> ket, std::vector<std::size_t> dims) {
  return DensityMatrix(ComplexMatrix::outer(ket), std::move(dims));
}

DensityMatrix bell() {
  const double s = 1.0 / std::sqrt(2.0);
  return proj({s, 0, 0, s}, {2, 2});
}

DensityMatrix mixed(std::size_t d) {
  ComplexMatrix m = ComplexMatrix::identity(d);
  m *= 1.0 / static_cast<double>(d);
  return DensityMatrix(std::move(m), {d});
}

// Random full-rank state rho = G G^dagger / Tr.
DensityMatrix random_state(std::vector<std::size_t> dims, std::mt19937_64& rng) {
  const std::size_t d = product(dims);
  std::normal_distribution<double> g;
  ComplexMatrix a(d, d);
  for (auto& x : a.data()) x = {g(rng), g(rng)};
  ComplexMatrix m = matmul(a, a.adjoint());
  m *= 1.0 / m.trace().real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) m(j, i) = std::conj(m(i, j));
  return DensityMatrix(std::move(m), std::move(dims));
}

bool throws_code(errc code, auto&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("tensor") {
  const DensityMatrix mm = tensor(mixed(2), mixed(2));
  CHECK(mm.dims() == std::vector<std::size_t>{2, 2});
  CHECK(max_abs_diff(mm.matrix(), mixed(4).matrix()) == 0.0);

  const DensityMatrix p01 = tensor(proj({1, 0}, {2}), proj({0, 1}, {2}));
  CHECK(p01(1, 1) == cplx(1.0));
  CHECK(std::abs(p01.trace() - 1.0) < 1e-15);

  const DensityMatrix r3 = isotropic_ghz_dense(3, 0.25);
  const DensityMatrix two = tensor(r3, r3);
  CHECK(two.dims() == std::vector<std::size_t>(6, 2));
  CHECK(std::abs(two.trace() - 1.0) < 1e-14);

  std::mt19937_64 rng(7);
  const auto a = random_state({2}, rng), b = random_state({3}, rng), c = random_state({2}, rng);
  CHECK(max_abs_diff(tensor(tensor(a, b), c).matrix(), tensor(a, tensor(b, c)).matrix()) < 1e-15);

  // Dyadic entries make every product exact, so the orderings agree bit for bit.
  const DensityMatrix d1 = isotropic_ghz_dense(2, 0.5), d2 = mixed(3), d3 = isotropic_ghz_dense(2, 0.25);
  const DensityMatrix d2u(d2.matrix() * 3.0, {3}, normalization::unnormalized);
  CHECK(tensor(tensor(d1, d2u), d3).matrix() == tensor(d1, tensor(d2u, d3)).matrix());
}

TEST_CASE("hadamard") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(hadamard(i2, i2) == i2);

  std::mt19937_64 rng(11);
  const auto m = random_state({3}, rng).matrix();
  ComplexMatrix ones(3, 3, std::vector<cplx>(9, 1.0));
  CHECK(hadamard(ones, m) == m);

  const auto r = isotropic_ghz_dense(3, 0.5).matrix();
  CHECK(std::abs(hadamard(r, r)(0, 7) - cplx(0.0625)) < 1e-15);

  CHECK(throws_code(errc::shape_mismatch, [&] { hadamard(i2, ComplexMatrix::identity(3)); }));
}

TEST_CASE("hadamard keeps the X pattern") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t d = 16;
    ComplexMatrix a(d, d), b(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      a(i, i) = u(rng);
      a(i, d - 1 - i) = {u(rng), u(rng)};
      b(i, i) = u(rng);
      b(i, d - 1 - i) = {u(rng), u(rng)};
    }
    const ComplexMatrix h = hadamard(a, b);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (c != r && c != d - 1 - r) CHECK(h(r, c) == cplx(0.0));
  }
}

TEST_CASE("partial transpose") {
  CHECK(partial_transpose(bell(), {1}).min_eigenvalue() == doctest::Approx(-0.5).epsilon(1e-12));

  std::mt19937_64 rng(5);
  const auto prod = tensor(tensor(random_state({2}, rng), random_state({3}, rng)), random_state({2}, rng));
  for (auto subs : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {0, 1, 2}}) {
    CHECK(partial_transpose(prod, subs).min_eigenvalue() >= -1e-12);
  }

  const auto r3a = isotropic_ghz_dense(3, 0.3);
  const auto r3b = isotropic_ghz_dense(3, 0.15);
  CHECK(partial_transpose(r3a, {0}).min_eigenvalue() < -1e-3);
  CHECK(partial_transpose(r3b, {0}).min_eigenvalue() >= -1e-12);

  CHECK(throws_code(errc::index_out_of_range, [&] { partial_transpose(r3a, {3}); }));
}

TEST_CASE("partial transpose is a trace-preserving Hermitian involution") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const auto rho = random_state({2, 3, 2}, rng);
    for (auto subs : {std::vector<std::size_t>{0}, {1}, {0, 2}, {1, 2}}) {
      const auto pt = partial_transpose(rho, subs);
      CHECK_FALSE(pt.normalized());
      CHECK(is_hermitian(pt.matrix(), 1e-12));
      CHECK(std::abs(pt.trace() - rho.trace()) < 1e-12);
      CHECK(partial_transpose(pt, subs).matrix() == rho.matrix());
    }
  }
}

TEST_CASE("partial trace") {
  CHECK(max_abs_diff(partial_trace(bell(), {1}).matrix(), mixed(2).matrix()) < 1e-15);

  std::mt19937_64 rng(23);
  const auto a = random_state({3}, rng);
  const auto b = DensityMatrix(random_state({2}, rng).matrix() * 2.5, {2}, normalization::unnormalized);
  const auto ab = tensor(a, b);
  CHECK(max_abs_diff(partial_trace(ab, {1}).matrix(), a.matrix() * 2.5) < 1e-14);
  CHECK(std::abs(partial_trace(ab, {0}).trace() - ab.trace()) < 1e-14);

  const auto red = partial_trace(isotropic_ghz_dense(3, 0.4), {2});
  CHECK(red.dims() == std::vector<std::size_t>{2, 2});
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (r != c) CHECK(std::abs(red(r, c)) < 1e-15);

  CHECK(throws_code(errc::discard_all, [&] { partial_trace(ab, {0, 1}); }));
}

TEST_CASE("permute subsystems") {
  std::mt19937_64 rng(29);
  const auto rho = random_state({2, 3, 2}, rng);
  CHECK(permute_subsystems(rho, {0, 1, 2}).matrix() == rho.matrix());

  const auto swapped = permute_subsystems(proj({0, 1, 0, 0}, {2, 2}), {1, 0});
  CHECK(swapped(2, 2) == cplx(1.0));
  CHECK(swapped(1, 1) == cplx(0.0));

  const std::vector<std::size_t> perm{2, 0, 1};
  const auto p = permute_subsystems(rho, perm);
  CHECK(p.dims() == std::vector<std::size_t>{2, 2, 3});
  const auto inv = inverse_permutation(perm);
  CHECK(permute_subsystems(p, inv).matrix() == rho.matrix());

  const auto r3 = isotropic_ghz_dense(3, 0.25);
  const auto two = tensor(r3, r3);
  const auto reord = permute_subsystems(two, {0, 3, 1, 4, 2, 5});
  const auto e1 = hermitian_eigenvalues(two.matrix());
  const auto e2 = hermitian_eigenvalues(reord.matrix());
  double diff = 0.0;
  for (std::size_t i = 0; i < e1.size(); ++i) diff = std::max(diff, std::abs(e1[i] - e2[i]));
  CHECK(diff < 1e-10);

  CHECK(throws_code(errc::malformed_permutation, [&] { permute_subsystems(rho, {0, 0, 1}); }));
  CHECK(throws_code(errc::malformed_permutation, [&] { permute_subsystems(rho, {0, 1}); }));
}

TEST_CASE("eigenvalues") {
  CHECK(min_eigenvalue_hermitian(ComplexMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<double> d{3, -2, 0};
  CHECK(min_eigenvalue_hermitian(ComplexMatrix::diagonal(d)) == doctest::Approx(-2.0).epsilon(1e-14));
  const auto pt = partial_transpose(qutrit_ppt_state(0.5), {1});
  CHECK(pt.min_eigenvalue() >= -1e-10);

  ComplexMatrix bad(2, 2);
  bad(0, 1) = 1.0;
  CHECK(throws_code(errc::non_hermitian, [&] { min_eigenvalue_hermitian(bad); }));
}

TEST_CASE("density matrix validation") {
  CHECK(throws_code(errc::shape_mismatch, [] { DensityMatrix(ComplexMatrix::identity(4), {2, 3}); }));
  CHECK(throws_code(errc::shape_mismatch, [] { DensityMatrix(ComplexMatrix(2, 3), {2}); }));
  CHECK(throws_code(errc::not_normalized, [] { DensityMatrix(ComplexMatrix::identity(2), {2}); }));
  ComplexMatrix nh = ComplexMatrix::identity(2) * 0.5;
  nh(0, 1) = cplx(0.0, 0.1);
  CHECK(throws_code(errc::non_hermitian, [&] { DensityMatrix(nh, {2}); }));
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix::identity(2), {2}, normalization::unnormalized));
}

TEST_CASE("index helpers use most-significant-first ordering") {
  const std::vector<std::size_t> dims{2, 3, 4};
  const std::vector<std::size_t> digits{1, 2, 3};
  CHECK(flat_index(digits, dims) == 1 * 12 + 2 * 4 + 3);
  for (std::size_t i = 0; i < 24; ++i) CHECK(flat_index(digits_of(i, dims), dims) == i);
}
