#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kerrscope/model.hpp"

using namespace kerrscope;

namespace {

ModelParams reference_params(double delta) {
    ModelParams p;
    p.delta = delta;
    p.alpha = 1.0;
    p.epsilon = 0.06 * std::sqrt(50.0);
    p.kappa = 0.05;
    return p;
}

} // namespace

TEST_CASE("parameter validation") {
    ModelParams p;
    p.epsilon = 0.1;
    CHECK_NOTHROW(p.validate());

    SUBCASE("alpha may be zero but not negative") {
        p.alpha = 0.0;
        CHECK_NOTHROW(p.validate());
        p.alpha = -0.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("epsilon must be nonnegative") {
        p.epsilon = -1e-9;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("kappa must be positive") {
        p.kappa = 0.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("non-finite values rejected") {
        p.delta = std::nan("");
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("spin size must be at least 1") {
        CHECK_THROWS_AS(scale(p, 0), std::invalid_argument);
        CHECK_THROWS_AS(scale(p, -3), std::invalid_argument);
    }
}

TEST_CASE("spin rescaling divides out 2s") {
    const ScaledParams s = scale(reference_params(-1.0), 50);
    CHECK(s.omega == doctest::Approx(0.06).epsilon(1e-14));
    CHECK(s.gamma == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(s.two_s == 50);
    CHECK(s.delta == -1.0);
}

TEST_CASE("round trip preserves the physical parameters") {
    ModelParams p;
    p.delta = 0.37;
    p.alpha = 2.25;
    p.epsilon = 0.81;
    p.kappa = 0.013;
    p.sign = NonlinearSign::Repulsive;
    for (int two_s : {1, 7, 50, 173}) {
        const ModelParams back = unscale(scale(p, two_s));
        CHECK(back.epsilon == doctest::Approx(p.epsilon).epsilon(1e-14));
        CHECK(back.kappa == doctest::Approx(p.kappa).epsilon(1e-14));
        CHECK(back.delta == p.delta);
        CHECK(back.alpha == p.alpha);
        CHECK(back.sign == p.sign);
    }
}

// The compound sign choice inside sigma and phi was fixed by requiring the
// closed-form <n>(delta) to match the master-equation solver (the rejected
// branches are off at order unity); these values pin the chosen branch.
TEST_CASE("frozen branch regression values") {
    SUBCASE("attractive") {
        const ScaledParams s = scale(reference_params(-1.0), 50);
        CHECK(s.sigma.real() == doctest::Approx(5.999994000006001e-05).epsilon(1e-13));
        CHECK(s.sigma.imag() == doctest::Approx(-0.05999994000006).epsilon(1e-13));
        CHECK(s.phi.real() == doctest::Approx(0.04899995100004901).epsilon(1e-13));
        CHECK(s.phi.imag() == doctest::Approx(-48.999951000049).epsilon(1e-13));
    }
    SUBCASE("repulsive") {
        ModelParams p = reference_params(-1.0);
        p.sign = NonlinearSign::Repulsive;
        const ScaledParams s = scale(p, 50);
        CHECK(s.sigma.real() == doctest::Approx(5.999994000006001e-05).epsilon(1e-13));
        CHECK(s.sigma.imag() == doctest::Approx(0.05999994000006).epsilon(1e-13));
        CHECK(s.phi.real() == doctest::Approx(-0.05099994900005101).epsilon(1e-13));
        CHECK(s.phi.imag() == doctest::Approx(-50.999949000051).epsilon(1e-13));
    }
}

TEST_CASE("sigma modulus is branch independent") {
    ModelParams p = reference_params(0.0);
    const ScaledParams att = scale(p, 50);
    p.sign = NonlinearSign::Repulsive;
    const ScaledParams rep = scale(p, 50);

    const double expected = att.omega / std::hypot(att.gamma, p.alpha);
    CHECK(std::abs(att.sigma) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(rep.sigma) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("sigma is linear in the drive, phi independent of it") {
    ModelParams p = reference_params(-2.3);
    const ScaledParams s1 = scale(p, 50);
    p.epsilon *= 2.0;
    const ScaledParams s2 = scale(p, 50);

    CHECK(std::abs(s2.sigma) == doctest::Approx(2.0 * std::abs(s1.sigma)).epsilon(1e-15));
    CHECK(s2.phi == s1.phi);
}
