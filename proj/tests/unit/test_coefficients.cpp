#include <doctest.h>

#include <cmath>
#include <vector>

#include "sidewise/coefficients.hpp"
#include "sidewise/errors.hpp"

using namespace sidewise;

TEST_CASE("bounds are the node extrema") {
    auto b = bounds(CoefficientField::constant(1.0, 1.0, 1.0));
    CHECK(b.rho0 == 1.0);
    CHECK(b.rho1 == 1.0);
    CHECK(b.a0 == 1.0);
    CHECK(b.a1 == 1.0);

    b = bounds(CoefficientField(1.0, {1.0, 4.0, 2.0}, {1.0, 1.0, 1.0}));
    CHECK(b.rho0 == 1.0);
    CHECK(b.rho1 == 4.0);
    CHECK(b.a0 == 1.0);
    CHECK(b.a1 == 1.0);

    b = bounds(CoefficientField(1.0, {2.0, 2.0}, {1.0, 0.5}));
    CHECK(b.rho0 == 2.0);
    CHECK(b.rho1 == 2.0);
    CHECK(b.a0 == 0.5);
    CHECK(b.a1 == 1.0);
}

TEST_CASE("total variation sums the jumps") {
    auto tv = total_variation(CoefficientField::constant(1.0, 3.0, 2.0, 8));
    CHECK(tv.rho == 0.0);
    CHECK(tv.a == 0.0);

    tv = total_variation(CoefficientField(1.0, {1.0, 3.0, 2.0}, {5.0, 5.0, 5.0}));
    CHECK(tv.rho == doctest::Approx(3.0));
    CHECK(tv.a == 0.0);

    tv = total_variation(CoefficientField(1.0, {1.0, 1.0, 1.0, 1.0}, {1.0, 2.0, 1.0, 2.0}));
    CHECK(tv.rho == 0.0);
    CHECK(tv.a == doctest::Approx(3.0));
}

TEST_CASE("beta is the largest slowness") {
    CHECK(beta(CoefficientField::constant(1.0, 1.0, 1.0)) == doctest::Approx(1.0));
    CHECK(beta(CoefficientField::constant(1.0, 4.0, 1.0)) == doctest::Approx(2.0));
    CHECK(beta(CoefficientField(1.0, {1.0, 9.0}, {1.0, 1.0})) == doctest::Approx(3.0));
    CHECK(minimal_control_time(CoefficientField::constant(2.0, 4.0, 1.0)) == doctest::Approx(4.0));
}

TEST_CASE("observability constant by direct substitution") {
    CHECK(theoretical_observability_constant(CoefficientField::constant(1.0, 1.0, 1.0)) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(theoretical_observability_constant(CoefficientField::constant(2.0, 1.0, 1.0)) ==
          doctest::Approx(std::sqrt(5.0)));
    const double c1 = theoretical_observability_constant(CoefficientField(1.0, {1.0, 2.0}, {1.0, 1.0}));
    CHECK(c1 * c1 == doctest::Approx(1.5 * std::exp(1.0)));
}

TEST_CASE("beta dominates the pointwise slowness") {
    const CoefficientField f(1.0, {1.0, 2.5, 1.7, 3.0, 0.8}, {2.0, 0.7, 1.1, 1.5, 0.9});
    const double b = beta(f);
    const auto bd = bounds(f);
    CHECK(b * b * bd.a0 >= bd.rho0);
    for (std::size_t i = 0; i < f.nodes(); ++i) CHECK(b * b >= f.rho()[i] / f.a()[i] - 1e-12);
}

TEST_CASE("total variation is unchanged by linear refinement") {
    const CoefficientField f(1.0, {1.0, 2.5, 1.7, 3.0, 0.8}, {2.0, 0.7, 1.1, 1.5, 0.9});
    const auto fine = f.resampled(16);
    CHECK(total_variation(fine).rho == doctest::Approx(total_variation(f).rho).epsilon(1e-12));
    CHECK(total_variation(fine).a == doctest::Approx(total_variation(f).a).epsilon(1e-12));
}

TEST_CASE("observability constant grows with total variation") {
    // Same rho0, rho(L) and a(0); only the interior bump changes.
    const double low = theoretical_observability_constant(CoefficientField(1.0, {1.0, 2.0, 1.0}, {1.0, 1.0, 1.0}));
    const double high = theoretical_observability_constant(CoefficientField(1.0, {1.0, 3.0, 1.0}, {1.0, 1.0, 1.0}));
    CHECK(high >= low);
}

TEST_CASE("piecewise-constant coefficients keep their exact variation") {
    const std::vector<double> breaks{0.5};
    const std::vector<double> rho{1.0, 1.5};
    const std::vector<double> a{1.0, 1.0};
    for (std::size_t cells : {7u, 10u, 64u}) {
        const auto f = CoefficientField::piecewise_constant(1.0, breaks, rho, a, cells);
        CHECK(total_variation(f).rho == doctest::Approx(0.5));
        CHECK(bounds(f).rho1 == 1.5);
        CHECK(beta(f) == doctest::Approx(std::sqrt(1.5)));
    }
}

TEST_CASE("invalid coefficient fields are rejected") {
    CHECK_THROWS_AS(CoefficientField(1.0, {1.0, 1.0}, {1.0}), ContractError);
    CHECK_THROWS_AS(CoefficientField(1.0, {1.0}, {1.0}), ContractError);
    CHECK_THROWS_AS(CoefficientField(1.0, {1.0, 0.0}, {1.0, 1.0}), ContractError);
    CHECK_THROWS_AS(CoefficientField(1.0, {1.0, 1.0}, {1.0, -2.0}), ContractError);
    CHECK_THROWS_AS(CoefficientField(0.0, {1.0, 1.0}, {1.0, 1.0}), ContractError);
}

TEST_CASE("unit fields") {
    CHECK(CoefficientField::constant(1.0, 1.0, 1.0, 5).is_unit());
    CHECK_FALSE(CoefficientField(1.0, {1.0, 1.5}, {1.0, 1.0}).is_unit());
}
