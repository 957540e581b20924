#include "doctest.h"

#include <cmath>

#include "qop/error.hpp"
#include "qop/linalg.hpp"
#include "qop/random.hpp"
#include "test_helpers.hpp"

using namespace qop;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using testutil::close;
using testutil::matrix_close;

TEST_CASE("hermitian_eig on pinned examples") {
  SUBCASE("identity") {
    const auto eig = linalg::hermitian_eig(HermitianMatrix::identity(2));
    CHECK(close(eig.eigenvalues[0], 1.0));
    CHECK(close(eig.eigenvalues[1], 1.0));
  }
  SUBCASE("swap matrix") {
    const HermitianMatrix m(ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    const auto eig = linalg::hermitian_eig(m);
    CHECK(close(eig.eigenvalues[0], 1.0));
    CHECK(close(eig.eigenvalues[1], -1.0));
  }
  SUBCASE("complex off-diagonal") {
    // Characteristic polynomial (2-x)^2 - 1 by hand: roots 3 and 1.
    const HermitianMatrix m(ComplexMatrix::from_rows(
        {{Complex(2, 0), Complex(0, 1)}, {Complex(0, -1), Complex(2, 0)}}));
    const auto eig = linalg::hermitian_eig(m);
    CHECK(close(eig.eigenvalues[0], 3.0));
    CHECK(close(eig.eigenvalues[1], 1.0));
  }
}

TEST_CASE("hermitian_eig reconstructs and stays orthonormal") {
  rng::Engine eng(11);
  for (std::size_t dim : {1, 2, 3, 5, 8, 13}) {
    const HermitianMatrix m = rng::hermitian(eng, dim);
    const auto eig = linalg::hermitian_eig(m);
    REQUIRE(eig.eigenvalues.size() == dim);
    for (std::size_t i = 0; i + 1 < dim; ++i) {
      CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i + 1]);
    }

    ComplexMatrix d(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) d(i, i) = eig.eigenvalues[i];
    const ComplexMatrix recon =
        eig.eigenvectors * d * eig.eigenvectors.adjoint();
    const double tol = scaled_tol(dim, m.max_abs()) + 1e-14;
    CHECK((recon - m.matrix()).frobenius_norm() <= tol);
    CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors -
           ComplexMatrix::identity(dim))
              .frobenius_norm() <= tol);
  }
}

TEST_CASE("psd_check") {
  SUBCASE("identity and zero") {
    CHECK(linalg::psd_check(HermitianMatrix::identity(3)).positive);
    CHECK(linalg::psd_check(HermitianMatrix::zero(3)).positive);
  }
  SUBCASE("indefinite with known witness") {
    // Eigenvalues 3 and -1 by hand.
    const HermitianMatrix m(ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}));
    const auto report = linalg::psd_check(m);
    CHECK_FALSE(report.positive);
    CHECK(close(report.min_eigenvalue, -1.0));
  }
  SUBCASE("monotone in the tolerance") {
    const HermitianMatrix m(ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}));
    CHECK_FALSE(linalg::psd_check(m, 0.5).positive);
    CHECK(linalg::psd_check(m, 1.0).positive);
    CHECK(linalg::psd_check(m, 2.0).positive);
  }
  SUBCASE("negative tolerance is rejected") {
    CHECK_THROWS_AS(linalg::psd_check(HermitianMatrix::identity(2), -1.0),
                    DomainError);
  }
}

TEST_CASE("factor_psd") {
  SUBCASE("identity factors to a unitary") {
    const ComplexMatrix c = linalg::factor_psd(HermitianMatrix::identity(3));
    CHECK(matrix_close(c.adjoint() * c, ComplexMatrix::identity(3), 1e-12));
  }
  SUBCASE("rank-one all-ones matrix fits in a single row") {
    const HermitianMatrix ones(ComplexMatrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}));
    const ComplexMatrix c = linalg::factor_psd(ones, 1);
    REQUIRE(c.rows() == 1);
    CHECK(matrix_close(c.adjoint() * c, ones.matrix(), 1e-12));
  }
  SUBCASE("diagonal matrix") {
    const HermitianMatrix d = HermitianMatrix::from_diagonal({0.3, 0.5, 0.9});
    const ComplexMatrix c = linalg::factor_psd(d);
    CHECK(matrix_close(c.adjoint() * c, d.matrix(), 1e-12));
  }
  SUBCASE("non-PSD input is a domain error") {
    const HermitianMatrix m(ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}));
    CHECK_THROWS_AS(linalg::factor_psd(m), DomainError);
  }
  SUBCASE("too few rows is a domain error") {
    CHECK_THROWS_AS(linalg::factor_psd(HermitianMatrix::identity(3), 2), DomainError);
  }
  SUBCASE("refactoring C^dagger C reproduces the Gram") {
    rng::Engine eng(5);
    const HermitianMatrix p = rng::psd(eng, 6);
    const ComplexMatrix c = linalg::factor_psd(p);
    const ComplexMatrix gram = c.adjoint() * c;
    CHECK(matrix_close(gram, p.matrix(), scaled_tol(6, p.max_abs()) * 10));
  }
}

TEST_CASE("hadamard product and inverse") {
  const ComplexMatrix a =
      ComplexMatrix::from_rows({{Complex(1, 2), 0.5}, {Complex(-3, 0), 2.0}});
  const ComplexMatrix ones = ComplexMatrix::from_rows({{1.0, 1.0}, {1.0, 1.0}});

  SUBCASE("ones is the identity for the product") {
    CHECK(matrix_close(linalg::hadamard(a, ones), a));
  }
  SUBCASE("elementwise reciprocal") {
    const ComplexMatrix m = ComplexMatrix::from_rows({{1.0, 0.5}, {0.5, 1.0}});
    const ComplexMatrix inv = linalg::hadamard_inverse(m);
    CHECK(matrix_close(inv, ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}})));
  }
  SUBCASE("product with the inverse gives all-ones") {
    CHECK(matrix_close(linalg::hadamard(a, linalg::hadamard_inverse(a)), ones, 1e-12));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(linalg::hadamard(a, ComplexMatrix(2, 3)), DomainError);
  }
  SUBCASE("zero entry is reported with its index") {
    const ComplexMatrix z = ComplexMatrix::from_rows({{1.0, 0.0}, {1.0, 1.0}});
    CHECK_THROWS_WITH_AS(linalg::hadamard_inverse(z),
                         doctest::Contains("(0,1)"), DomainError);
  }
}

TEST_CASE("trace and Frobenius norm survive diagonalization") {
  rng::Engine eng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix m = rng::hermitian(eng, 7);
    const auto eig = linalg::hermitian_eig(m);
    double sum = 0.0, sq = 0.0;
    for (double x : eig.eigenvalues) {
      sum += x;
      sq += x * x;
    }
    const double tol = scaled_tol(7, m.max_abs()) + 1e-13;
    CHECK(close(sum, m.trace().real(), tol));
    CHECK(close(std::sqrt(sq), m.matrix().frobenius_norm(), tol));
  }
}

TEST_CASE("Schur product of PSD matrices stays PSD") {
  rng::Engine eng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix a = rng::psd(eng, 5);
    const HermitianMatrix b = rng::psd(eng, 5);
    const HermitianMatrix prod(linalg::hadamard(a.matrix(), b.matrix()));
    CHECK(linalg::psd_check(prod).positive);
  }
}

TEST_CASE("psd_sqrt and hermitian_inverse") {
  rng::Engine eng(31);
  const HermitianMatrix p = rng::psd(eng, 5);
  const HermitianMatrix root = linalg::psd_sqrt(p);
  CHECK(matrix_close(root.matrix() * root.matrix(), p.matrix(),
                     scaled_tol(5, p.max_abs()) * 10));

  const HermitianMatrix shifted(p.matrix() + ComplexMatrix::identity(5));
  const HermitianMatrix inv = linalg::hermitian_inverse(shifted);
  CHECK(matrix_close(inv.matrix() * shifted.matrix(), ComplexMatrix::identity(5),
                     1e-10));

  CHECK_THROWS_AS(linalg::psd_sqrt(HermitianMatrix(
                      ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}))),
                  DomainError);
  CHECK_THROWS_AS(linalg::hermitian_inverse(HermitianMatrix::zero(2)), DomainError);
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(ComplexMatrix(0, 2), DomainError);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0}), DomainError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(nan, 0.0)}), DomainError);
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::from_rows({{1.0, 1.0}})),
                  DomainError);
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::from_rows(
                      {{1.0, Complex(0, 1)}, {Complex(0, 1), 1.0}})),
                  DomainError);
  // Diagonal must be real.
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::from_rows(
                      {{Complex(1, 0.5), 0.0}, {0.0, 1.0}})),
                  DomainError);
}

TEST_CASE("degenerate spectra compare as multisets") {
  // Projector with a two-fold degenerate eigenvalue; no ordering guarantee
  // among equal eigenvalues, so only the sorted values are pinned.
  const HermitianMatrix m(ComplexMatrix::from_rows(
      {{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}}));
  const auto eig = linalg::hermitian_eig(m);
  CHECK(close(eig.eigenvalues[0], 1.0));
  CHECK(close(eig.eigenvalues[1], 1.0));
  CHECK(close(eig.eigenvalues[2], 0.0));
}
