#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "vogellab/oracle.hpp"
#include "vogellab/states.hpp"

using namespace vogellab;
using Catch::Approx;

TEST_CASE("numeric transform reproduces frozen values", "[oracle]") {
    auto vac = oracle::tabulate_marginal(make_photon_vacuum_mixture(0.0));
    CHECK(oracle::numeric_char_fn(vac, 2.0).real() == Approx(0.60653065971263342).margin(1e-8));
    CHECK(oracle::numeric_char_fn(vac, 0.0).real() == Approx(1.0).margin(1e-9));

    auto half = oracle::tabulate_marginal(make_photon_vacuum_mixture(0.5));
    const double nu = std::sqrt(24.0);
    const auto f = oracle::numeric_char_fn(half, nu);
    CHECK(f.real() == Approx(-0.099574136735727886).margin(1e-8));  // (1 - 3) e^{-3}
    CHECK(std::abs(f.imag()) < 1e-9);
    // signed value: magnitude exceeds the vacuum reference by exactly e^{-3}
    CHECK(std::abs(f.real()) - std::exp(-3.0) == Approx(std::exp(-3.0)).margin(1e-8));

    CHECK_THROWS_AS(oracle::numeric_char_fn(vac, std::nan("")), std::invalid_argument);
}

TEST_CASE("wigner projection matches the marginal", "[oracle]") {
    CHECK(oracle::numeric_marginal_from_wigner(make_photon_vacuum_mixture(0.5), 0.0) ==
          Approx(0.39894228040143268).margin(1e-8));
    // closed-form diosi marginal at the origin: 2 sqrt(2/(3 pi)) - sqrt(2/pi)
    CHECK(oracle::numeric_marginal_from_wigner(make_diosi_state(40), 0.0) ==
          Approx(0.12343317112069592).margin(1e-7));
    // deep tail agreement, absolute
    CHECK(oracle::numeric_marginal_from_wigner(make_photon_vacuum_mixture(0.0), 3.0) ==
          Approx(1.2151765699646571e-08).margin(1e-12));

    std::mt19937_64 eng(5);
    std::vector<FockDiagonalState> states = {make_photon_vacuum_mixture(0.0),
                                             make_photon_vacuum_mixture(0.28),
                                             make_photon_vacuum_mixture(1.0),
                                             make_diosi_state(40),
                                             FockDiagonalState(testsupport::random_weights(eng, 11))};
    for (const auto& s : states)
        for (double x : {0.0, 0.5, 1.0, 2.0})
            CHECK(oracle::numeric_marginal_from_wigner(s, x) == Approx(marginal_pdf(s, x)).margin(1e-8));
}

TEST_CASE("numeric moments", "[oracle]") {
    auto vac = oracle::tabulate_marginal(make_photon_vacuum_mixture(0.0));
    CHECK(oracle::numeric_moment(vac, 2) == Approx(0.25).margin(1e-9));
    CHECK(oracle::numeric_moment(vac, 1) == Approx(0.0).margin(1e-10));
    auto best = oracle::tabulate_marginal(make_photon_vacuum_mixture(0.61));
    CHECK(oracle::numeric_moment(best, 2) == Approx(0.555).margin(1e-9));
    CHECK_THROWS_AS(oracle::numeric_moment(vac, 9), std::invalid_argument);
}

TEST_CASE("every constructed state integrates to one", "[oracle]") {
    std::mt19937_64 eng(7);
    std::vector<FockDiagonalState> states = {make_photon_vacuum_mixture(0.0),
                                             make_photon_vacuum_mixture(0.19),
                                             make_photon_vacuum_mixture(0.61),
                                             make_photon_vacuum_mixture(1.0),
                                             make_diosi_state(3),
                                             make_diosi_state(30),
                                             FockDiagonalState(testsupport::random_weights(eng, 25)),
                                             FockDiagonalState(testsupport::random_weights(eng, 50))};
    for (const auto& s : states) {
        auto d = oracle::tabulate_marginal(s);
        for (double v : d.values) CHECK(v >= -1e-15);
        CHECK(oracle::numeric_moment(d, 0) == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("second moment follows 1/4 + eta/2", "[oracle]") {
    for (double eta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        auto d = oracle::tabulate_marginal(make_photon_vacuum_mixture(eta));
        CHECK(oracle::numeric_moment(d, 2) == Approx(0.25 + 0.5 * eta).margin(1e-9));
    }
}

TEST_CASE("closed-form transform agrees with the numeric one across the grid", "[oracle]") {
    std::mt19937_64 eng(13);
    std::vector<FockDiagonalState> states = {make_photon_vacuum_mixture(0.0),
                                             make_photon_vacuum_mixture(0.19),
                                             make_photon_vacuum_mixture(0.5),
                                             make_photon_vacuum_mixture(1.0),
                                             make_diosi_state(40),
                                             FockDiagonalState(testsupport::random_weights(eng, 15))};
    for (const auto& s : states) {
        auto d = oracle::tabulate_marginal(s);
        for (double nu = 0.0; nu <= 12.0; nu += 0.25) {
            const auto numeric = oracle::numeric_char_fn(d, nu);
            CHECK(numeric.real() == Approx(char_fn(s, nu).real()).margin(1e-8));
            CHECK(std::abs(numeric.imag()) < 1e-9);
        }
    }
}

TEST_CASE("laguerre series matches the diosi closed form near the origin", "[oracle]") {
    // same weights, one evaluated through the series, one through Eq.-style
    // closed form dispatch
    FockDiagonalState series(make_diosi_state(40).weights());
    auto closed = make_diosi_state(40);
    for (double x : {0.0, 0.5, 1.0, 2.0, 3.0})
        for (double p : {0.0, 0.7, 2.1})
            if (x * x + p * p <= 9.0)
                CHECK(wigner(series, x, p) == Approx(wigner(closed, x, p)).margin(1e-6));
}

TEST_CASE("grid halving leaves oracle outputs unchanged", "[oracle]") {
    auto s = make_photon_vacuum_mixture(0.61);
    auto coarse = oracle::tabulate_marginal(s, 8.0, 512);
    auto fine = oracle::tabulate_marginal(s, 8.0, 1024);
    for (double nu : {0.0, 2.0, 6.0, 11.5})
        CHECK(oracle::numeric_char_fn(coarse, nu).real() ==
              Approx(oracle::numeric_char_fn(fine, nu).real()).margin(1e-9));
    for (int order : {0, 2, 4})
        CHECK(oracle::numeric_moment(coarse, order) == Approx(oracle::numeric_moment(fine, order)).margin(1e-9));
    CHECK(oracle::numeric_marginal_from_wigner(s, 0.5, 1.0 / 512) ==
          Approx(oracle::numeric_marginal_from_wigner(s, 0.5, 1.0 / 1024)).margin(1e-9));
}
