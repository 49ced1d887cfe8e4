#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rim/errors.hpp"
#include "rim/geometry.hpp"

using namespace rim;

namespace {

Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

Matrix random_invertible(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Matrix p(n, n);
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = u(rng);
    if (std::abs(oracle::laplace_det(p)) > 0.1) return p;
  }
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("quadratic form contractions") {
  CHECK(quadratic_form(diag({1, -1, -1, -1}), Vector{{1, 0, 0, 0}}) == 1.0);
  CHECK(quadratic_form(diag({1, -1, -1, -1}), Vector{{1, 1, 0, 0}}) == 0.0);
  CHECK(quadratic_form(diag({1, 1, -1, -1}), Vector{{1, 0, 2, 0}}) == -3.0);
  CHECK_THROWS_AS(quadratic_form(diag({1, -1}), Vector{{1, 0, 0}}), Error);
}

TEST_CASE("signature counts") {
  auto s = signature(diag({1, -1, -1, -1}));
  CHECK(s.n_plus == 1);
  CHECK(s.n_minus == 3);
  CHECK(s.n_zero == 0);
  s = signature(diag({-1, -1, -1}));
  CHECK(s.n_plus == 0);
  CHECK(s.n_minus == 3);
  s = signature(diag({1, 1, -1, -1}));
  CHECK(s.n_plus == 2);
  CHECK(s.n_minus == 2);
  s = signature(diag({1, 0, -1}));
  CHECK(s.n_zero == 1);
  CHECK(s.dim() == 3);
  CHECK(s.tolerance == kDefaultEigenTolerance);
}

TEST_CASE("tolerance separates round-off from degeneracy") {
  const Matrix g = diag({1, 1e-12, -1});
  CHECK(signature(g).n_zero == 1);
  CHECK(signature(g, 1e-13).n_plus == 2);
}

TEST_CASE("causality classes") {
  CHECK(causality_class(signature(diag({-1, -1, -1}))).kind == Causality::NoTimeInfeasible);
  CHECK_FALSE(causality_class(signature(diag({-1, -1, -1}))).witness);
  CHECK(causality_class(signature(diag({1, -1, -1, -1}))).kind == Causality::OneTimeBounded);
  CHECK_FALSE(causality_class(signature(diag({1, -1, -1, -1}))).witness);

  const Matrix g = diag({1, 1, -1, -1});
  const auto cls = causality_class(signature(g));
  REQUIRE(cls.kind == Causality::MultiTimeUnbounded);
  REQUIRE(cls.witness);
  const Vector w = cls.witness->original;
  CHECK(quadratic_form(g, w) >= 0.0);
  CHECK(quadratic_form(g, w) == doctest::Approx(cls.witness->quadratic_form).epsilon(1e-14));
  // Time velocity normalized to 1 along the first time axis.
  CHECK(std::abs(w(0)) + std::abs(w(1)) > 1.0);
  CHECK(cls.witness->speed_sq > 1.0);
  // Spatial speed from the witness components in the original frame.
  CHECK(w(2) * w(2) + w(3) * w(3) == doctest::Approx(cls.witness->speed_sq).epsilon(1e-12));
}

TEST_CASE("degenerate signature is rejected") {
  CHECK_THROWS_AS(causality_class(signature(diag({1, 0, -1}))), Error);
  try {
    causality_class(signature(diag({1, 0, -1})));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateMetric);
  }
}

TEST_CASE("Sylvester invariance under congruence") {
  std::mt19937_64 rng(7);
  for (const Matrix& g : {diag({1, -1, -1, -1}), diag({1, 1, -1, -1}), diag({-1, -1, -1, -2}), diag({2, 3, 0.5, -1})}) {
    const auto ref = signature(g);
    for (int t = 0; t < 100; ++t) {
      const Matrix p = random_invertible(rng, 4);
      const Matrix h = p.transpose() * g * p;
      const auto s = signature(0.5 * (h + h.transpose()), 1e-9);
      CHECK(s.n_plus == ref.n_plus);
      CHECK(s.n_minus == ref.n_minus);
      CHECK(s.n_zero == ref.n_zero);
    }
  }
}

TEST_CASE("witness survives non-diagonal frames") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Matrix p = random_invertible(rng, 5);
    const Matrix g0 = diag({1, 2, 0.5, -1, -3});
    Matrix g = p.transpose() * g0 * p;
    g = 0.5 * (g + g.transpose());
    const auto cls = causality_class(signature(g));
    REQUIRE(cls.kind == Causality::MultiTimeUnbounded);
    CHECK(quadratic_form(g, cls.witness->original) >= -1e-12);
    CHECK(cls.witness->speed_sq > 1.0);
  }
}

TEST_CASE("all-positive metric gives an unbounded witness") {
  const auto cls = causality_class(signature(Matrix::Identity(3, 3)));
  REQUIRE(cls.kind == Causality::MultiTimeUnbounded);
  CHECK(cls.witness->quadratic_form >= 0.0);
  CHECK(cls.witness->speed_sq > 1.0);
}

TEST_CASE("one-time metrics bound the spatial speed") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Vector d{{2.0, -0.5, -1.5, -4.0}};
  const Matrix g = d.asDiagonal();
  int accepted = 0;
  for (int t = 0; t < 20000; ++t) {
    const Vector v{{1.0, u(rng), u(rng), u(rng)}};
    if (quadratic_form(g, v) < 0.0) continue;
    ++accepted;
    double speed = 0.0;
    for (int i = 1; i < 4; ++i) speed += v(i) * v(i) * std::abs(d(i)) / d(0);
    CHECK(speed <= 1.0 + 1e-12);
  }
  CHECK(accepted > 10);
}

TEST_CASE("metric fields") {
  const auto mk = MetricField::minkowski(4);
  CHECK(mk.is_constant());
  CHECK(mk.at(Vector::Zero(4)) == diag({1, -1, -1, -1}));
  CHECK(MetricField::euclidean(3).at(Vector::Zero(3)) == Matrix::Identity(3, 3));
  CHECK_THROWS_AS(mk.at(Vector::Zero(3)), Error);

  const auto wf = MetricField::weak_field(4, 0.1, Vector{{1.0, 0.0, 0.0}});
  CHECK(wf.kind() == MetricKind::DiagonalAnalytic);
  const Vector x{{0.3, 0.7, 0.2, -0.1}};
  CHECK(wf.at(x)(0, 0) == doctest::Approx(1.0 + 0.2 * std::cos(0.7)));
  CHECK(wf.at(x)(1, 1) == -1.0);
  const auto grad = wf.gradient(x);
  const Vector fd = oracle::fd_gradient([&](const Vector& y) { return wf.at(y)(0, 0); }, x);
  for (int k = 0; k < 4; ++k) CHECK(grad[static_cast<std::size_t>(k)](0, 0) == doctest::Approx(fd(k)).epsilon(1e-8));

  // User metric without a gradient falls back to differences.
  const auto user = MetricField::user(2, [](const Vector& y) {
    Matrix g(2, 2);
    g << 1.0 + y(1) * y(1), 0.0, 0.0, -1.0;
    return g;
  });
  CHECK(user.gradient(Vector{{0.0, 0.5}})[1](0, 0) == doctest::Approx(1.0).epsilon(1e-8));

  const auto bad = MetricField::user(2, [](const Vector&) {
    Matrix g(2, 2);
    g << 1.0, 0.5, 0.4, -1.0;
    return g;
  });
  CHECK_THROWS_AS(bad.at(Vector::Zero(2)), Error);
  const auto singular = MetricField::user(2, [](const Vector&) {
    Matrix g(2, 2);
    g << 1.0, 1.0, 1.0, 1.0;
    return g;
  });
  CHECK_THROWS_AS(singular.at(Vector::Zero(2)), Error);
}

}  // TEST_SUITE
