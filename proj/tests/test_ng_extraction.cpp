#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "dualring/spectrum.hpp"
#include "helpers.hpp"

using namespace dualring;

namespace {

// Least-squares slope of n_g vs lambda.
double fitted_slope(const std::vector<GroupIndexPoint>& curve) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(curve.size());
    for (const auto& p : curve) {
        sx += p.lambda_nm;
        sy += p.ng;
        sxx += p.lambda_nm * p.lambda_nm;
        sxy += p.lambda_nm * p.ng;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("group-index round trip recovers the generating dispersion") {
    auto config = testing::reference_config();
    const DualRingDevice dev = config.device();
    const auto spec = generate_spectrum(dev, 1500.0, 1600.0, 200001);
    const auto curve = extract_group_index_curve(spec, config.ring_one_length_um, 3);
    REQUIRE(curve.size() >= 20);

    SUBCASE("pointwise within 1 percent") {
        for (const auto& p : curve) {
            const double expected = dev.dispersion.group_index_at(p.lambda_nm);
            CHECK(std::abs(p.ng - expected) / expected < 0.01);
        }
    }

    SUBCASE("slope reproduces D within 5 percent") {
        const double slope = fitted_slope(curve);
        const double d_recovered = slope / (kSpeedOfLight * 1e-15);
        CHECK(d_recovered == doctest::Approx(-32000.0).epsilon(0.05));
    }
}

TEST_CASE("dispersionless device gives a flat curve") {
    auto config = testing::reference_config();
    config.d_ps_nm_km = 0.0;
    const auto spec = generate_spectrum(config.device(), 1500.0, 1600.0, 200001);
    const auto curve = extract_group_index_curve(spec, config.ring_one_length_um, 3);
    REQUIRE(curve.size() >= 20);
    for (const auto& p : curve) CHECK(p.ng == doctest::Approx(4.3).epsilon(0.001));
}

TEST_CASE("smoothing window of 1 is a no-op") {
    auto config = testing::reference_config();
    const auto spec = generate_spectrum(config.device(), 1540.0, 1570.0, 60001);
    const auto raw = extract_group_index_curve(spec, config.ring_one_length_um, 1);

    const auto dips = find_dip_centers_nm(spec);
    REQUIRE(dips.size() >= 3);
    REQUIRE(raw.size() == dips.size() - 1);
    for (std::size_t i = 0; i + 1 < dips.size(); ++i) {
        const double fsr = dips[i + 1] - dips[i];
        const double mid = 0.5 * (dips[i] + dips[i + 1]);
        CHECK(raw[i].lambda_nm == mid);
        CHECK(raw[i].ng == group_index(mid, fsr, config.ring_one_length_um));
    }
}

TEST_CASE("too few dips is an error") {
    auto config = testing::reference_config();
    // ~1.5 FSR of span: at most two dips
    const auto spec = generate_spectrum(config.device(), 1549.0, 1555.0, 20001);
    CHECK_THROWS_AS(extract_group_index_curve(spec, config.ring_one_length_um, 3),
                    std::runtime_error);
}

TEST_CASE("spectrum CSV round trip") {
    auto config = testing::reference_config();
    const auto spec = generate_spectrum(config.device(), 1549.0, 1551.0, 2001);
    const auto path = std::filesystem::temp_directory_path() / "dualring_spec_test.csv";
    write_spectrum_csv(spec, path.string());
    const auto back = read_spectrum_csv(path.string());
    REQUIRE(back.size() == spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        CHECK(back.wavelengths_nm[i] ==
              doctest::Approx(spec.wavelengths_nm[i]).epsilon(1e-11));
        CHECK(back.through_db[i] == doctest::Approx(spec.through_db[i]).epsilon(1e-9));
        CHECK(back.drop_db[i] == doctest::Approx(spec.drop_db[i]).epsilon(1e-9));
    }
    std::filesystem::remove(path);
}

TEST_CASE("spectrum validation") {
    TransmissionSpectrum bad;
    bad.wavelengths_nm = {1550.0, 1551.0};
    bad.through_db = {0.0};
    bad.drop_db = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad.through_db = {0.0, 1.0};  // above 0 dB
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
