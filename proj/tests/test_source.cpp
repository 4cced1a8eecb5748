#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qkd/source.hpp"

using namespace qkd::source;

TEST_SUITE_BEGIN("source");

TEST_CASE("poisson pmf values and normalization") {
    PhotonStatistics v = poisson_pmf(0.0, 5);
    CHECK(v.probs[0] == 1.0);
    for (int n = 1; n <= 5; ++n) CHECK(v.probs[n] == 0.0);
    CHECK(v.tail == 0.0);

    PhotonStatistics s = poisson_pmf(0.5, 2);
    CHECK(s.probs[0] == doctest::Approx(0.606530659713).epsilon(1e-10));
    CHECK(s.probs[1] == doctest::Approx(0.303265329856).epsilon(1e-10));
    CHECK(s.probs[2] == doctest::Approx(0.0758163324641).epsilon(1e-10));
    CHECK(s.tail == doctest::Approx(0.014387677967).epsilon(1e-9));
    double total = s.tail;
    for (double p : s.probs) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(poisson_pmf(-0.1, 3), std::invalid_argument);
}

TEST_CASE("discrete pmf: exact normalization and vacuum") {
    PhotonStatistics v = discrete_pmf(0.0, 8);
    CHECK(v.probs[0] == doctest::Approx(1.0));
    for (int n = 1; n < 8; ++n) CHECK(v.probs[n] == doctest::Approx(0.0));

    PhotonStatistics s = discrete_pmf(0.5, 4);
    CHECK(s.probs[0] == doctest::Approx(0.608110225401).epsilon(1e-10));
    CHECK(s.probs[1] == doctest::Approx(0.303423283813).epsilon(1e-10));
    CHECK(s.probs[2] == doctest::Approx(0.075829495185).epsilon(1e-10));
    CHECK(s.probs[3] == doctest::Approx(0.0126369956008).epsilon(1e-10));
    double sum = 0.0;
    for (double p : s.probs) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.tail == 0.0);

    CHECK_THROWS_AS(discrete_pmf(0.5, 1), std::invalid_argument);
}

TEST_CASE("discrete pmf agrees with the DFT projection oracle") {
    auto oracle = oracles::discrete_pmf_dft(0.5, 4, 60);
    PhotonStatistics s = discrete_pmf(0.5, 4);
    for (int n = 0; n < 4; ++n)
        CHECK(s.probs[n] == doctest::Approx(oracle[n]).epsilon(1e-10));
}

TEST_CASE("discrete pmf converges to Poisson as N grows") {
    PhotonStatistics d = discrete_pmf(0.5, 64);
    PhotonStatistics p = poisson_pmf(0.5, 20);
    for (int n = 0; n <= 20; ++n)
        CHECK(std::abs(d.probs[n] - p.probs[n]) < 1e-10);
}

TEST_CASE("ideal intensity overlap") {
    PhaseDistribution uni = PhaseDistribution::uniform();
    CHECK(ideal_intensity_overlap(1, 0.5, 0.1, uni) == 1.0);
    PhaseDistribution d8 = PhaseDistribution::discrete(8);
    CHECK(ideal_intensity_overlap(3, 0.7, 0.7, d8) == 1.0);
    double ov = ideal_intensity_overlap(1, 0.5, 0.1, d8);
    CHECK(ov > 0.0);
    CHECK(ov < 1.0);
    CHECK(ov == doctest::Approx(oracles::discrete_overlap_direct(1, 0.5, 0.1, 8, 200))
                    .epsilon(1e-10));
    // symmetry
    CHECK(ideal_intensity_overlap(2, 0.5, 0.1, d8) ==
          doctest::Approx(ideal_intensity_overlap(2, 0.1, 0.5, d8)).epsilon(1e-14));
}

TEST_CASE("encoding fock overlaps") {
    auto z0 = EncodingLabel::zero_z(), z1 = EncodingLabel::one_z();
    auto x0 = EncodingLabel::zero_x(), x1 = EncodingLabel::one_x();
    for (int m = 1; m <= 6; ++m) {
        CHECK(encoding_fock_overlap(z0, z1, m) == 0.0);
        CHECK(encoding_fock_overlap(x0, x1, m) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(encoding_fock_overlap(z0, x0, m) ==
              doctest::Approx(std::pow(2.0, -m / 2.0)).epsilon(1e-13));
    }
    CHECK(encoding_fock_overlap(z0, z0, 4) == doctest::Approx(1.0));
    CHECK(encoding_fock_overlap(z1, x1, 3) ==
          doctest::Approx(-std::pow(2.0, -1.5)).epsilon(1e-13));
}

TEST_CASE("ideal coin overlap") {
    PhaseDistribution uni = PhaseDistribution::uniform();
    CHECK(ideal_coin_overlap(1, 0.7, uni) == doctest::Approx(1.0).epsilon(1e-14));
    // vacuum class: the two virtual states differ only on the ancilla
    CHECK(ideal_coin_overlap(0, 0.7, uni) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
    PhaseDistribution d8 = PhaseDistribution::discrete(8);
    double v = ideal_coin_overlap(1, 0.5, d8);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v == doctest::Approx(0.999999989908208).epsilon(1e-12));
    CHECK(v == doctest::Approx(oracles::discrete_coin_overlap_direct(1, 0.5, 8, 40))
                   .epsilon(1e-10));
}

TEST_CASE("all overlaps stay in [0,1]") {
    PhaseDistribution d4 = PhaseDistribution::discrete(4);
    for (int n = 0; n < 4; ++n) {
        for (double z : {0.05, 0.3, 0.9}) {
            for (double g : {0.0, 0.1, 0.9}) {
                double v = ideal_intensity_overlap(n, z, g, d4);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
        double c = ideal_coin_overlap(n, 0.6, d4);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
}

TEST_SUITE_END();
