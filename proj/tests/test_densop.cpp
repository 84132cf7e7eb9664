#include <doctest.h>

#include "qwalk/densop.hpp"
#include "testutil.hpp"

using namespace qwalk;
using testutil::make_rng;
using testutil::random_density;

namespace {

Basis st_basis() {
  return {BasisLabel{1, "S", {}}, BasisLabel{2, "T", {}}};
}

}  // namespace

TEST_CASE("maximally mixed state is a valid normalized operator") {
  Matrix m = 0.5 * Matrix::Identity(2, 2);
  DensityOperator rho(m, TraceClass::normalized);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.5));
  CHECK(rho.hermiticity_defect() == 0.0);
}

TEST_CASE("pure projector on four sites") {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;
  DensityOperator rho(m, TraceClass::normalized);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.0));
}

TEST_CASE("diagnostics of simple states") {
  Matrix mixed = 0.25 * Matrix::Identity(4, 4);
  DensityOperator rho(mixed, TraceClass::normalized);
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.25));
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.hermiticity_defect() == 0.0);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  DensityOperator mix(diag, st_basis(), TraceClass::normalized);
  CHECK(mix.trace() == doctest::Approx(1.0));
  CHECK(mix.min_eigenvalue() == doctest::Approx(0.3));
}

TEST_CASE("overlarge coherence fails positivity") {
  // Eigenvalues of [[0.5, 0.6], [0.6, 0.5]] are 0.5 +- 0.6.
  Matrix m(2, 2);
  m << 0.5, 0.6, 0.6, 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> oracle(m);
  CHECK(oracle.eigenvalues()(0) == doctest::Approx(-0.1));
  CHECK(oracle.eigenvalues()(1) == doctest::Approx(1.1));

  try {
    DensityOperator rho(m, TraceClass::normalized);
    FAIL("expected a positivity error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::negative_eigenvalue);
  }
}

TEST_CASE("construction rejects malformed input") {
  SUBCASE("non-Hermitian") {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.0, 0.5;
    CHECK_THROWS_AS(DensityOperator(m, TraceClass::subnormalized), Error);
  }
  SUBCASE("trace above one") {
    Matrix m = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityOperator(m, TraceClass::subnormalized), Error);
  }
  SUBCASE("normalized label on half trace") {
    Matrix m = 0.25 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityOperator(m, TraceClass::normalized), Error);
    CHECK_NOTHROW(DensityOperator(m, TraceClass::subnormalized));
  }
  SUBCASE("not square") {
    Matrix m = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(DensityOperator(m, TraceClass::subnormalized), Error);
  }
  SUBCASE("basis size mismatch") {
    Matrix m = 0.5 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityOperator(m, Basis{BasisLabel::Named("S")},
                                    TraceClass::normalized),
                    Error);
  }
}

TEST_CASE("matrix elements by label") {
  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  DensityOperator rho(pure, st_basis(), TraceClass::normalized);
  CHECK(matrix_element(rho, BasisLabel::Named("S"), BasisLabel::Named("S"))
            .real() == doctest::Approx(1.0));
  CHECK(std::abs(matrix_element(rho, BasisLabel::Named("S"),
                                BasisLabel::Named("T"))) ==
        doctest::Approx(0.0));

  Matrix super(2, 2);
  super << 0.5, 0.5, 0.5, 0.5;  // (|S> + |T>)/sqrt(2)
  DensityOperator coh(super, st_basis(), TraceClass::normalized);
  CHECK(matrix_element(coh, BasisLabel::Named("S"), BasisLabel::Named("T"))
            .real() == doctest::Approx(0.5));

  CHECK_THROWS_AS(
      matrix_element(coh, BasisLabel::Named("X"), BasisLabel::Named("T")),
      Error);
}

TEST_CASE("label round trip name -> site -> name") {
  Basis basis = st_basis();
  for (const BasisLabel& label : basis) {
    Eigen::Index by_name = resolve_label(basis, BasisLabel::Named(label.name));
    int site = basis[by_name].site;
    Eigen::Index by_site = resolve_label(basis, BasisLabel::Site(site));
    CHECK(basis[by_site].name == label.name);
  }
}

TEST_CASE("occupation labels resolve and enforce the single-walker rule") {
  Basis occ = {BasisLabel{1, "N", {0, 0}}, BasisLabel{2, "T", {0, 1}},
               BasisLabel{3, "S", {1, 0}}};
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  DensityOperator rho(m, occ, TraceClass::normalized);
  CHECK(resolve_label(rho.basis(), BasisLabel::Occupation({1, 0})) == 2);

  Basis bad = occ;
  bad[0].occupation = {1, 1};
  CHECK_THROWS_AS(DensityOperator(m, bad, TraceClass::normalized), Error);
}

TEST_CASE("random valid states pass the stated bounds") {
  auto rng = make_rng(11);
  for (int n = 0; n < 200; ++n) {
    Eigen::Index dim = 2 + static_cast<Eigen::Index>(n % 3);
    DensityOperator rho(random_density(rng, dim), TraceClass::normalized);
    CHECK(rho.hermiticity_defect() <= 1e-12);
    CHECK(rho.min_eigenvalue() >= -1e-10);
    CHECK(rho.trace() >= -1e-12);
    CHECK(rho.trace() <= 1.0 + 1e-12);
  }
}

TEST_CASE("subnormalized states are first class") {
  Matrix zero = Matrix::Zero(3, 3);
  DensityOperator empty(zero, TraceClass::subnormalized);
  CHECK(empty.trace() == doctest::Approx(0.0));
  Matrix half = 0.25 * Matrix::Identity(2, 2);
  DensityOperator sub(half, TraceClass::subnormalized);
  CHECK(sub.trace() == doctest::Approx(0.5));
}
