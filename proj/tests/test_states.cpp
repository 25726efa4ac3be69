#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gmelab/error.hpp"
#include "gmelab/separability.hpp"
#include "gmelab/states.hpp"

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

DensityMatrix mixed(std::size_t d) {
  return DensityMatrix(ComplexMatrix::identity(d) * (1.0 / static_cast<double>(d)), {d});
}

ProductFormState random_product_form(const std::vector<std::vector<std::size_t>>& factor_dims, int n_terms,
                                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(n_terms);
  for (auto& x : w) x = u(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<ProductTerm> terms;
  std::vector<std::size_t> global;
  for (const auto& d : factor_dims) global.insert(global.end(), d.begin(), d.end());
  for (int t = 0; t < n_terms; ++t) {
    ProductTerm term{w[t] / total, {}};
    for (const auto& d : factor_dims) term.factors.push_back(random_state(d, rng));
    terms.push_back(std::move(term));
  }
  return ProductFormState(global, std::move(terms));
}

ComplexMatrix embed_local(const std::vector<std::size_t>& dims, std::size_t pos, const ComplexMatrix& op) {
  ComplexMatrix k = ComplexMatrix::identity(1);
  for (std::size_t i = 0; i < dims.size(); ++i) k = kron(k, i == pos ? op : ComplexMatrix::identity(dims[i]));
  return k;
}

}  // namespace

TEST_CASE("ghz vector") {
  const auto v2 = ghz_vector(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(v2 == std::vector<cplx>{s, 0, 0, s});
  const auto v3 = ghz_vector(3);
  CHECK(v3[0] == cplx(s));
  CHECK(v3[7] == cplx(s));
  for (int n = 2; n <= 10; ++n) {
    double norm = 0.0;
    for (auto c : ghz_vector(n)) norm += std::norm(c);
    CHECK(std::abs(norm - 1.0) < 1e-15);
  }
  CHECK(throws_code(errc::parameter_out_of_range, [] { ghz_vector(1); }));
}

TEST_CASE("isotropic GHZ parameters") {
  const auto pure = isotropic_ghz(3, 1.0);
  CHECK(pure.a[0] == 0.5);
  CHECK(pure.b[0] == 0.5);
  CHECK(pure.z[0] == cplx(0.5));
  for (std::size_t i = 1; i < 4; ++i) CHECK(pure.a[i] == 0.0);

  const auto mm = isotropic_ghz(3, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(mm.a[i] == 0.125);
    CHECK(mm.b[i] == 0.125);
    CHECK(mm.z[i] == cplx(0.0));
  }

  const auto x = isotropic_ghz(3, 0.2);
  CHECK(x.a[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(x.a[1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(x.z[0].real() == doctest::Approx(0.1).epsilon(1e-15));

  CHECK(throws_code(errc::parameter_out_of_range, [] { isotropic_ghz(3, 1.01); }));
  CHECK(throws_code(errc::parameter_out_of_range, [] { isotropic_ghz(3, -0.2); }));
  CHECK_NOTHROW(isotropic_ghz(3, -1.0 / 7));
}

TEST_CASE("X-form dense expansion") {
  const auto d = xform_to_dense(isotropic_ghz(3, 0.5));
  CHECK(d(0, 7) == cplx(0.25));
  CHECK(d(7, 0) == cplx(0.25));

  XFormState diag{2, {0.25, 0.25}, {0.25, 0.25}, {0.0, 0.0}};
  const auto dd = xform_to_dense(diag);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (r != c) CHECK(dd(r, c) == cplx(0.0));

  XFormState w{2, {0.25, 0.25}, {0.25, 0.25}, {0.25, 0.0}};
  const auto wd = xform_to_dense(w);
  CHECK(wd.normalized());
  CHECK(wd.trace() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(wd(0, 3) == cplx(0.25));
  CHECK(wd(1, 2) == cplx(0.0));
}

TEST_CASE("X-form round trip") {
  const auto x = isotropic_ghz(3, 0.3);
  const auto back = xform_from_dense(xform_to_dense(x));
  CHECK(back.a == x.a);
  CHECK(back.b == x.b);
  CHECK(back.z == x.z);

  const auto m = xform_from_dense(DensityMatrix(ComplexMatrix::identity(4) * 0.25, {2, 2}));
  CHECK(m.a == std::vector<double>{0.25, 0.25});
  CHECK(m.b == std::vector<double>{0.25, 0.25});
  CHECK(m.z == std::vector<cplx>{0.0, 0.0});

  std::mt19937_64 rng(41);
  CHECK(throws_code(errc::not_xform, [&] { xform_from_dense(random_state({2, 2}, rng)); }));
}

TEST_CASE("two copies reordered party-wise are not X-form") {
  // |GHZ>|GHZ> in A1 B1 A2 B2 A3 B3 has support on 000000, 010101, 101010 and
  // 111111, so coherences such as (0, 21) lie off both diagonals.
  const DensityMatrix two = two_copy_target(0.25);
  CHECK(std::abs(two(0, 21)) > 1e-3);
  CHECK(throws_code(errc::not_xform, [&] { xform_from_dense(two); }));
}

TEST_CASE("isotropic GHZ is a state across the valid range") {
  for (int n = 2; n <= 6; ++n) {
    for (int i = 0; i <= 20; ++i) {
      const double p = IsotropicGHZ::p_min(n) + (1.0 - IsotropicGHZ::p_min(n)) * i / 20.0;
      CAPTURE(n);
      CAPTURE(p);
      const auto x = isotropic_ghz(n, p);
      for (std::size_t k = 0; k < x.half(); ++k) CHECK(std::norm(x.z[k]) <= x.a[k] * x.b[k] + 1e-15);
      const auto d = xform_to_dense(x);
      CHECK(is_hermitian(d.matrix(), 1e-12));
      CHECK(std::abs(d.trace() - 1.0) < 1e-12);
      if (n <= 5) CHECK(d.min_eigenvalue() >= -1e-10);
    }
  }
}

TEST_CASE("isotropic GHZ is invariant under qubit permutations") {
  const auto rho = isotropic_ghz_dense(4, 0.37);
  std::vector<std::size_t> perm{0, 1, 2, 3};
  do {
    CHECK(permute_subsystems(rho, perm).matrix() == rho.matrix());
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("partitions") {
  CHECK(bipartitions(2).size() == 1);
  CHECK(bipartitions(3).size() == 3);
  CHECK(bipartitions(5).size() == 15);
  for (const auto& p : bipartitions(4)) {
    CHECK_NOTHROW(p.validate(4));
    CHECK(p.blocks[0].front() == 0);
    CHECK_FALSE(p.far_side().empty());
  }
  CHECK(throws_code(errc::invalid_argument, [] { Partition{{{0}, {0, 1}}}.validate(2); }));
  CHECK(throws_code(errc::invalid_argument, [] { Partition{{{0}}}.validate(2); }));
}

TEST_CASE("product form tensor") {
  std::mt19937_64 rng(43);
  const auto a = random_product_form({{2}, {2}}, 2, rng);
  const auto b = random_product_form({{2}, {2}}, 2, rng);
  const auto ab = product_form_tensor(a, b);
  CHECK(ab.terms().size() == 4);
  CHECK(ab.global_dims() == std::vector<std::size_t>{2, 2, 2, 2});
  CHECK(max_abs_diff(ab.dense().matrix(), tensor(a.dense(), b.dense()).matrix()) < 1e-14);

  const auto single = random_product_form({{2}}, 1, rng);
  const auto ss = product_form_tensor(single, single);
  CHECK(ss.terms().size() == 1);
  CHECK(ss.terms()[0].factors.size() == 2);

  const auto three = random_product_form({{2}}, 3, rng);
  CHECK(product_form_tensor(product_form_tensor(three, three), three).terms().size() == 27);
}

TEST_CASE("product form projection") {
  const DensityMatrix zero(ComplexMatrix::diagonal(std::vector<double>{1, 0}), {2});
  ComplexMatrix not_zero = ComplexMatrix::identity(2);
  not_zero(0, 0) = 0.0;
  const ProductFormState drop({2, 2}, {ProductTerm{0.5, {zero, mixed(2)}}, ProductTerm{0.5, {mixed(2), mixed(2)}}});
  const Projected pr = product_form_project(drop, 0, not_zero);
  CHECK(pr.state.terms().size() == 1);
  CHECK(pr.probability == doctest::Approx(0.25).epsilon(1e-15));

  const ProductFormState q({3}, {ProductTerm{1.0, {mixed(3)}}});
  const ComplexMatrix rank2 = ComplexMatrix::diagonal(std::vector<double>{1, 1, 0});
  CHECK(product_form_project(q, 0, rank2).probability == doctest::Approx(2.0 / 3).epsilon(1e-15));

  const ProductFormState only_zero({2}, {ProductTerm{1.0, {zero}}});
  CHECK(throws_code(errc::zero_probability, [&] { product_form_project(only_zero, 0, not_zero); }));
  CHECK(throws_code(errc::invalid_argument, [&] { product_form_project(q, 0, ComplexMatrix::identity(3) * 2.0); }));
}

TEST_CASE("projection commutes with dense expansion") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 3; ++trial) {
    const auto s = random_product_form({{3, 3}, {3}, {3, 3, 3}}, 3, rng);
    REQUIRE(s.dimension() == 729);
    const std::size_t sub = static_cast<std::size_t>(trial * 2);
    ComplexMatrix p = ComplexMatrix::diagonal(std::vector<double>{0, 1, 1});
    const Projected pr = product_form_project(s, sub, p);
    const ComplexMatrix big = embed_local(s.global_dims(), sub, p);
    ComplexMatrix expect = matmul(matmul(big, s.dense().matrix()), big);
    const double prob = expect.trace().real();
    CHECK(std::abs(pr.probability - prob) < 1e-12);
    expect *= 1.0 / prob;
    CHECK(max_abs_diff(pr.state.dense().matrix(), expect) < 1e-12);
  }
}

TEST_CASE("product form partial trace and local maps match the dense path") {
  std::mt19937_64 rng(53);
  const auto s = random_product_form({{2, 3}, {2}}, 3, rng);
  const std::vector<std::size_t> keep{0, 2};
  const auto pt = product_form_partial_trace(s, keep);
  CHECK(max_abs_diff(pt.dense().matrix(), partial_trace(s.dense(), {1}).matrix()) < 1e-14);

  ComplexMatrix iso(2, 3);
  iso(0, 1) = 1.0;
  iso(1, 2) = 1.0;
  const auto applied = product_form_apply_local(s, 1, iso);
  const ComplexMatrix big = embed_local(s.global_dims(), 1, iso);
  const ComplexMatrix expect = matmul(matmul(big, s.dense().matrix()), big.adjoint());
  CHECK(max_abs_diff(applied.dense().matrix(), expect) < 1e-14);
}

TEST_CASE("product form entry matches the dense matrix") {
  std::mt19937_64 rng(59);
  const auto s = random_product_form({{2}, {3}, {2}}, 2, rng);
  const auto d = s.dense();
  const auto& dims = s.global_dims();
  for (std::size_t r = 0; r < 12; r += 5)
    for (std::size_t c = 0; c < 12; ++c)
      CHECK(std::abs(s.entry(digits_of(r, dims), digits_of(c, dims)) - d(r, c)) < 1e-15);
}

TEST_CASE("product form validation") {
  CHECK(throws_code(errc::shape_mismatch, [] { ProductFormState({2, 2}, {ProductTerm{1.0, {mixed(2)}}}); }));
  CHECK(throws_code(errc::not_normalized, [] { ProductFormState({2}, {ProductTerm{0.5, {mixed(2)}}}); }));
  CHECK_NOTHROW(ProductFormState({2}, {ProductTerm{0.5, {mixed(2)}}}, normalization::unnormalized));
}

TEST_CASE("embed levels") {
  const auto e = embed_levels(mixed(3), 4, 1);
  CHECK(e.dims() == std::vector<std::size_t>{4});
  CHECK(e(0, 0) == cplx(0.0));
  CHECK(e(3, 3) == cplx(1.0 / 3));
}
