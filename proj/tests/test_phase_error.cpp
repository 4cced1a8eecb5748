#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "qkd/phase_error.hpp"

using namespace qkd::coin;

TEST_SUITE_BEGIN("phase_error");

TEST_CASE("real-ideal fidelity lower bound") {
    CHECK(real_ideal_fidelity_lower(0.5, 0.5, 0.0) == doctest::Approx(1.0));
    // q_lower = 0.4 with gamma = 0.01
    CHECK(real_ideal_fidelity_lower(0.4, 0.6, 0.01) ==
          doctest::Approx(0.979998969071).epsilon(1e-10));
    CHECK(real_ideal_fidelity_lower(0.0, 0.2, 0.0) == 0.0);
}

TEST_CASE("bures triangle fidelity") {
    CHECK(bures_triangle_fidelity(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    for (double c : {0.2, 0.6, 0.95})
        CHECK(bures_triangle_fidelity(1.0, c, 1.0) == doctest::Approx(c * c).epsilon(1e-12));
    CHECK(bures_triangle_fidelity(0.99, 1.0, 0.99) ==
          doctest::Approx(0.960301509441).epsilon(1e-9));
    // long chains clamp to zero fidelity, never negative
    CHECK(bures_triangle_fidelity(0.1, 0.1, 0.1) >= 0.0);
    // triangle never beats the direct middle leg
    for (double f : {0.9, 0.99, 0.999})
        CHECK(bures_triangle_fidelity(f, 0.9, f) <= 0.81 + 1e-12);
}

TEST_CASE("coin imbalance") {
    CoinAssessment perfect = coin_imbalance(1.0, 0.3, 0.2);
    CHECK(perfect.delta == 0.0);
    CHECK(!perfect.vacuous);
    CoinAssessment a = coin_imbalance(0.99, 0.5, 0.4);
    CHECK(a.coin_yield_lower == 0.4);
    CHECK(a.delta == doctest::Approx(0.00626570361673).epsilon(1e-9));
    CoinAssessment bad = coin_imbalance(0.5, 0.001, 0.001);
    CHECK(bad.vacuous);
    CoinAssessment zero = coin_imbalance(0.9, 0.0, 0.1);
    CHECK(zero.vacuous);
}

TEST_CASE("phase error upper bound") {
    for (double e : {0.0, 0.02, 0.3, 0.5})
        CHECK(phase_error_upper(e, 0.0) == e);
    CHECK(phase_error_upper(0.0, 0.01) == doctest::Approx(4.0 * 0.01 * 0.99));
    CHECK(phase_error_upper(0.02, 0.01) ==
          doctest::Approx(0.112620910548).epsilon(1e-10));
    CHECK(phase_error_upper(0.4, 0.3) == 0.5);
}

TEST_CASE("phase error monotone on the half square") {
    double prev_e = -1.0;
    for (double e = 0.0; e <= 0.5; e += 0.01) {
        double v = phase_error_upper(e, 0.07);
        CHECK(v >= prev_e - 1e-12);
        prev_e = v;
    }
    double prev_d = -1.0;
    for (double d = 0.0; d <= 0.5; d += 0.01) {
        double v = phase_error_upper(0.03, d);
        CHECK(v >= prev_d - 1e-12);
        prev_d = v;
    }
}

TEST_SUITE_END();
