#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "test_support.hpp"
#include "vogellab/analysis.hpp"
#include "vogellab/homodyne.hpp"

using namespace vogellab;
using Catch::Approx;

TEST_CASE("generation is deterministic in the seed", "[homodyne]") {
    auto s = make_photon_vacuum_mixture(0.4);
    auto a = sample_quadratures(s, 10000, 42);
    auto b = sample_quadratures(s, 10000, 42);
    CHECK(a.samples == b.samples);
    auto c = sample_quadratures(s, 10000, 43);
    CHECK(a.samples != c.samples);
    CHECK(a.meta.at("phase_policy") == kPhasePolicy);
    CHECK(a.meta.at("rng") == kRngName);
    CHECK(a.meta.at("state") == "mix:0.40000000000000002");
}

TEST_CASE("thread count never changes the record", "[homodyne]") {
    auto s = make_diosi_state(8);
    std::vector<double> reference;
    {
        testsupport::ScopedEnv env("VOGELLAB_THREADS", "1");
        reference = sample_quadratures(s, 12345, 7).samples;
    }
    for (const char* threads : {"2", "5"}) {
        testsupport::ScopedEnv env("VOGELLAB_THREADS", threads);
        CHECK(sample_quadratures(s, 12345, 7).samples == reference);
    }
}

TEST_CASE("sample variance follows the variance law", "[homodyne]") {
    auto vac = sample_quadratures(make_photon_vacuum_mixture(0.0), 200000, 101);
    CHECK(detail::moments(vac.samples).variance == Approx(0.25).margin(0.002));

    auto best = sample_quadratures(make_photon_vacuum_mixture(0.61), 100000, 102);
    CHECK(detail::moments(best.samples).variance == Approx(0.555).margin(0.005));
}

TEST_CASE("variance error shrinks like n^-1/2", "[homodyne]") {
    // |s^2 - (1/4 + eta/2)| sqrt(n) stays below 3 sd(x^2) for growing n
    const double sd_x2 = std::sqrt(0.5625 - 0.25);  // mixture(0.5)
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        auto ds = sample_quadratures(make_photon_vacuum_mixture(0.5), n, 7000 + n);
        const double err = std::abs(detail::moments(ds.samples).variance - 0.5);
        CHECK(err * std::sqrt(double(n)) < 3.0 * sd_x2);
    }
}

TEST_CASE("single-photon marginal has a node at the origin", "[homodyne]") {
    auto ds = sample_quadratures(make_photon_vacuum_mixture(1.0), 1000000, 103);
    std::size_t near_zero = 0;
    for (double x : ds.samples) near_zero += std::abs(x) < 0.05;
    // expected fraction ~ 2.7e-4; a flat-top density would give ~8e-2
    CHECK(double(near_zero) / double(ds.count()) < 1e-3);
}

TEST_CASE("detector loss equals the loss channel in distribution", "[homodyne]") {
    DetectorConfig det{0.61, 0.0, 1e6, 501};
    auto via_detector = simulate_homodyne(make_photon_vacuum_mixture(1.0), det, 100000);
    auto via_channel = sample_quadratures(make_photon_vacuum_mixture(0.61), 100000, 502);
    const double d = testsupport::ks_statistic(via_detector.samples, via_channel.samples);
    CHECK(d < testsupport::ks_critical_1pct(100000, 100000));
}

TEST_CASE("noiseless detector run is bit-identical to the loss channel", "[homodyne]") {
    DetectorConfig det{0.37, 0.0, 1e6, 99};
    auto a = simulate_homodyne(make_diosi_state(10), det, 20000);
    auto b = sample_quadratures(apply_loss(make_diosi_state(10), 0.37), 20000, 99);
    CHECK(a.samples == b.samples);
}

TEST_CASE("raw vacuum record sits at the shot-noise level", "[homodyne]") {
    DetectorConfig det{0.8, 0.0, 1e6, 77};
    auto raw = simulate_homodyne(make_photon_vacuum_mixture(0.0), det, 100000, Units::raw_photoelectrons);
    CHECK(raw.units == Units::raw_photoelectrons);
    CHECK(raw.meta.at("lo_mean_count") == "1000000");
    double ms = 0.0;
    for (double x : raw.samples) ms += x * x;
    ms /= double(raw.count());
    CHECK(ms == Approx(1e6).epsilon(0.01));
}

TEST_CASE("electronic noise adds variance", "[homodyne]") {
    DetectorConfig det{1.0, 0.05, 1e6, 321};
    auto ds = simulate_homodyne(make_photon_vacuum_mixture(0.0), det, 200000);
    CHECK(detail::moments(ds.samples).variance == Approx(0.25 + 0.0025).margin(0.003));
}

TEST_CASE("electronic noise multiplies the characteristic function", "[homodyne]") {
    const double sigma = 0.2;
    const std::size_t n = 200000;
    DetectorConfig noisy{1.0, sigma, 1e6, 610};
    DetectorConfig clean{1.0, 0.0, 1e6, 611};
    auto state = make_photon_vacuum_mixture(0.5);
    auto noisy_ds = simulate_homodyne(state, noisy, n);
    auto clean_ds = simulate_homodyne(state, clean, n);
    const std::vector<double> grid{2.0, 4.0, 6.0};
    auto fn = empirical_char_fn(noisy_ds, grid);
    auto fc = empirical_char_fn(clean_ds, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double damp = std::exp(-sigma * sigma * grid[i] * grid[i] / 2.0);
        const double tol =
            3.0 * std::sqrt(fn.std_errors[i] * fn.std_errors[i] +
                            damp * damp * fc.std_errors[i] * fc.std_errors[i]);
        CHECK(std::abs(fn.estimates[i] - fc.estimates[i] * damp) < tol);
    }
}

TEST_CASE("calibration maps the vacuum reference to variance 1/4", "[homodyne]") {
    DetectorConfig det{1.0, 0.0, 1e6, 900};
    auto vac_raw = simulate_homodyne(make_photon_vacuum_mixture(0.0), det, 100000, Units::raw_photoelectrons);

    auto self = calibrate(vac_raw, vac_raw);
    CHECK(self.units == Units::normalized);
    CHECK(detail::moments(self.samples).variance == Approx(0.25).margin(1e-12));

    DetectorConfig det2{1.0, 0.0, 1e6, 901};
    auto sig_raw = simulate_homodyne(make_photon_vacuum_mixture(0.5), det2, 100000, Units::raw_photoelectrons);
    auto sig = calibrate(sig_raw, vac_raw);
    CHECK(detail::moments(sig.samples).variance == Approx(0.5).epsilon(0.01));
    CHECK(sig.meta.count("calibration_scale") == 1);

    // constant offset propagates linearly; no silent mean removal
    auto offset_raw = sig_raw;
    for (double& x : offset_raw.samples) x += 500.0;
    auto offset = calibrate(offset_raw, vac_raw);
    const double scale = std::stod(offset.meta.at("calibration_scale"));
    CHECK(detail::moments(offset.samples).mean ==
          Approx((detail::moments(sig_raw.samples).mean + 500.0) * scale).margin(1e-9));
    CHECK(std::stod(offset.meta.at("raw_mean")) ==
          Approx(detail::moments(offset_raw.samples).mean).margin(1e-9));
}

TEST_CASE("calibration rejects bad inputs", "[homodyne]") {
    DetectorConfig det{1.0, 0.0, 1e6, 910};
    auto raw = simulate_homodyne(make_photon_vacuum_mixture(0.0), det, 2000, Units::raw_photoelectrons);
    auto normalized = simulate_homodyne(make_photon_vacuum_mixture(0.0), det, 2000);
    CHECK_THROWS_AS(calibrate(normalized, raw), UnitsError);
    CHECK_THROWS_AS(calibrate(raw, normalized), UnitsError);

    auto small = raw;
    small.samples.resize(500);
    CHECK_THROWS_AS(calibrate(raw, small), std::invalid_argument);

    QuadratureDataset flat;
    flat.units = Units::raw_photoelectrons;
    flat.samples.assign(2000, 3.0);
    CHECK_THROWS_AS(calibrate(raw, flat), CalibrationError);
}

TEST_CASE("configuration is validated", "[homodyne]") {
    CHECK_THROWS_AS(sample_quadratures(make_photon_vacuum_mixture(0.5), 0, 1), std::invalid_argument);
    DetectorConfig bad_eff{1.2, 0.0, 1e6, 0};
    CHECK_THROWS_AS(simulate_homodyne(make_photon_vacuum_mixture(0.5), bad_eff, 10), std::invalid_argument);
    DetectorConfig bad_sigma{1.0, -0.1, 1e6, 0};
    CHECK_THROWS_AS(simulate_homodyne(make_photon_vacuum_mixture(0.5), bad_sigma, 10), std::invalid_argument);
    DetectorConfig bad_lo{1.0, 0.0, 0.0, 0};
    CHECK_THROWS_AS(simulate_homodyne(make_photon_vacuum_mixture(0.5), bad_lo, 10), std::invalid_argument);
}

TEST_CASE("dataset text format round-trips bit-exactly", "[homodyne]") {
    auto ds = sample_quadratures(make_diosi_state(6), 5000, 77);
    ds.meta["note"] = "value with spaces and = signs kept";
    std::ostringstream os;
    write_dataset(ds, os);
    std::istringstream is(os.str());
    auto back = read_dataset(is, "mem");
    REQUIRE(back.count() == ds.count());
    CHECK(back.samples == ds.samples);  // bitwise, thanks to %.17g
    CHECK(back.units == ds.units);
    CHECK(back.meta.at("note") == ds.meta.at("note"));
    CHECK(back.meta.at("phase_policy") == kPhasePolicy);

    // second round trip is byte-identical
    std::ostringstream os2;
    write_dataset(back, os2);
    CHECK(os2.str() == os.str());
}

TEST_CASE("dataset parser reports offending lines", "[homodyne]") {
    {
        std::istringstream is("# units=normalized\n0.5\nnot_a_number\n");
        try {
            read_dataset(is, "bad.qdat");
            FAIL("expected DatasetParseError");
        } catch (const DatasetParseError& e) {
            CHECK(std::string(e.what()).find("bad.qdat:3") != std::string::npos);
        }
    }
    {
        std::istringstream is("# units=normalized\n# count=3\n0.5\n");
        CHECK_THROWS_AS(read_dataset(is, "short.qdat"), DatasetParseError);
    }
    {
        std::istringstream is("# units=furlongs\n0.5\n");
        CHECK_THROWS_AS(read_dataset(is, "odd.qdat"), DatasetParseError);
    }
    {
        std::istringstream is("0.5\n1.5\n");
        CHECK_THROWS_AS(read_dataset(is, "unitless.qdat"), DatasetParseError);
    }
}
