#include <doctest.h>

#include <cmath>

#include "dualring/fitting.hpp"
#include "dualring/sfwm.hpp"
#include "helpers.hpp"

using namespace dualring;

namespace {

SfwmEngine reference_engine() { return testing::reference_config().engine(); }

}  // namespace

TEST_CASE("phase mismatch") {
    CHECK(phase_mismatch(-32000.0, 1550.0, 0.0) == 0.0);

    // oracle: beta2 * Omega^2 at Omega = 2*pi*1.553 THz -> 3886.1 rad/m
    const double omega = 2.0 * kPi * 1.553e12;
    const double delta = phase_mismatch(-32000.0, 1550.0, omega);
    CHECK(delta == doctest::Approx(3886.1).epsilon(1e-4));
    CHECK(delta == doctest::Approx(3.9e3).epsilon(0.03));

    // quadratic in the detuning
    CHECK(phase_mismatch(-32000.0, 1550.0, omega / 2.0) ==
          doctest::Approx(delta / 4.0).epsilon(1e-12));
}

TEST_CASE("phase matching efficiency") {
    CHECK(phase_matching_efficiency(0.0, 18.0) == 1.0);
    CHECK(phase_matching_efficiency(3886.1, 18.0) >= 0.999);

    // first sinc null at delta*L/2 = pi
    const double delta_null = 2.0 * kPi / 18.0e-6;
    CHECK(phase_matching_efficiency(delta_null, 18.0) < 1e-25);

    // bounded in [0,1]
    for (double delta = 0.0; delta < 1e6; delta += 1.7e4) {
        const double eff = phase_matching_efficiency(delta, 18.0);
        CHECK(eff >= 0.0);
        CHECK(eff <= 1.0);
    }
    CHECK_THROWS_AS(phase_matching_efficiency(1.0, 0.0), std::domain_error);
}

TEST_CASE("TE/TM detuning-range ratio") {
    CHECK(te_tm_detuning_ratio(-32000.0, -1064.0) ==
          doctest::Approx(5.484).epsilon(1e-3));
    CHECK(te_tm_detuning_ratio(-32000.0, -1064.0) == doctest::Approx(5.48).epsilon(0.02));
    CHECK(te_tm_detuning_ratio(-5.0, 5.0) == 1.0);
    CHECK(te_tm_detuning_ratio(-120.0, -30.0) == 2.0);
    CHECK_THROWS_AS(te_tm_detuning_ratio(0.0, -5.0), std::domain_error);
}

TEST_CASE("energy mismatch") {
    CHECK(energy_mismatch_ghz(193.9, 192.9, 193.4) == doctest::Approx(0.0).epsilon(1e-9));
    // linear in each argument: shifting both outer lines by +delta adds 2*delta
    const double base = energy_mismatch_ghz(193.9, 192.9, 193.4);
    const double shifted = energy_mismatch_ghz(193.9 + 1e-3, 192.9 + 1e-3, 193.4);
    CHECK(shifted - base == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(energy_mismatch_ghz(-1.0, 192.9, 193.4), std::domain_error);
}

TEST_CASE("resonant enhancement") {
    const auto config = testing::reference_config();
    const auto dev = config.device();
    const auto comb = resonator_comb(dev.resonator_two, dev.dispersion, 1545.0, 1555.0);
    REQUIRE(!comb.empty());
    const CombLine line = comb[comb.size() / 2];

    const double peak = resonant_enhancement(dev.resonator_two, dev.dispersion,
                                             line.center_thz);
    CHECK(peak == doctest::Approx(dev.resonator_two.peak_enhancement()).epsilon(1e-9));
    CHECK(peak > 100.0);  // strongly resonant device

    // half the peak at half a linewidth off resonance
    const double half_off = line.center_thz + 0.5 * line.linewidth_ghz * 1e-3;
    CHECK(resonant_enhancement(dev.resonator_two, dev.dispersion, half_off) ==
          doctest::Approx(peak / 2.0).epsilon(1e-6));
}

TEST_CASE("pair generation rate at the calibrated reference point") {
    const auto config = testing::reference_config();
    const SfwmEngine engine = reference_engine();
    const PumpConfig pump = config.pump();

    const auto p = engine.pair_generation_rate(pump, 3, -3);
    CHECK(p.generation_rate_hz == doctest::Approx(1.3e5).epsilon(1e-9));
    CHECK(p.reduction_factor == doctest::Approx(18.0 / 552.0).epsilon(1e-15));
    CHECK(std::abs(p.energy_mismatch_ghz) < 1e-6);
    CHECK(p.phase_factor >= 0.999);
    CHECK(p.energy_factor == doctest::Approx(1.0).epsilon(1e-9));

    SUBCASE("zero power, zero rate") {
        PumpConfig off = pump;
        off.power_mw = 0.0;
        CHECK(engine.pair_generation_rate(off, 3, -3).generation_rate_hz == 0.0);
    }

    SUBCASE("exactly quadratic in pump power") {
        for (double a : {0.25, 0.5, 2.0, 3.7}) {
            PumpConfig scaled = pump;
            scaled.power_mw = a * pump.power_mw;
            CHECK(engine.pair_generation_rate(scaled, 3, -3).generation_rate_hz ==
                  doctest::Approx(a * a * p.generation_rate_hz).epsilon(1e-12));
        }
    }

    SUBCASE("signal/idler swap symmetry") {
        const auto swapped = engine.pair_generation_rate(pump, -3, 3);
        CHECK(swapped.generation_rate_hz ==
              doctest::Approx(p.generation_rate_hz).epsilon(1e-12));
    }

    SUBCASE("single-ring counterfactual") {
        const auto single = engine.single_ring_counterfactual(pump, 3, -3);
        CHECK(single.reduction_factor == 1.0);
        CHECK(single.generation_rate_hz == doctest::Approx(4.0e6).epsilon(0.05));
    }

    SUBCASE("strict mode rejects misaligned lines") {
        const SfwmEngine strict(apply_heater(engine.device(), 2, 25.0),
                                engine.kappa_cal(), true);
        CHECK_THROWS_AS(strict.pair_generation_rate(pump, 3, -3),
                        std::invalid_argument);
        // non-strict returns a suppressed rate instead
        const SfwmEngine relaxed(apply_heater(engine.device(), 2, 25.0),
                                 engine.kappa_cal(), false);
        const auto suppressed = relaxed.pair_generation_rate(pump, 3, -3);
        CHECK(suppressed.generation_rate_hz < 0.01 * p.generation_rate_hz);
    }
}

TEST_CASE("heater scan") {
    const auto config = testing::reference_config();
    const SfwmEngine engine = reference_engine();
    const PumpConfig pump = config.pump();

    std::vector<double> shifts;
    for (double s = -8.0; s <= 8.0 + 1e-9; s += 0.125) shifts.push_back(s);
    const auto scan = heater_scan(engine, pump, shifts, 3, 9.0, 5.7);
    REQUIRE(scan.size() == shifts.size());

    SUBCASE("peak at zero shift, even in the shift") {
        const std::size_t mid = scan.size() / 2;
        CHECK(scan[mid].shift_ghz == doctest::Approx(0.0));
        for (const auto& pt : scan) CHECK(pt.pair_rate_hz <= scan[mid].pair_rate_hz);
        for (std::size_t i = 0; i < scan.size(); ++i)
            CHECK(scan[i].pair_rate_hz ==
                  doctest::Approx(scan[scan.size() - 1 - i].pair_rate_hz).epsilon(1e-9));
    }

    SUBCASE("width matches the alignment penalty FWHM") {
        Curve curve;
        for (const auto& pt : scan) {
            curve.x.push_back(pt.shift_ghz);
            curve.y.push_back(pt.coincidence_rate_hz);
        }
        const FitResult fit = fit_lorentzian(curve);
        REQUIRE(fit.converged);

        const auto p = engine.pair_generation_rate(pump, 3, -3);
        const double expected = engine.energy_penalty_fwhm_ghz(
            p.pump_frequency_thz, p.signal_frequency_thz, p.idler_frequency_thz);
        CHECK(fit.fwhm == doctest::Approx(expected).epsilon(0.02));
        CHECK(expected == doctest::Approx(1.99).epsilon(0.02));  // reference Qs
    }

    SUBCASE("far tail below 1 percent of peak") {
        const auto far = heater_scan(engine, pump, {-10.0, 10.0}, 3, 9.0, 5.7);
        const auto peak = heater_scan(engine, pump, {0.0}, 3, 9.0, 5.7);
        CHECK(far[0].pair_rate_hz < 0.01 * peak[0].pair_rate_hz);
        CHECK(far[1].pair_rate_hz < 0.01 * peak[0].pair_rate_hz);
    }

    CHECK_THROWS_AS(heater_scan(engine, pump, {1.0, -1.0}, 3, 9.0, 5.7),
                    std::invalid_argument);
}

TEST_CASE("power scan is exactly quadratic") {
    const auto config = testing::reference_config();
    const SfwmEngine engine = reference_engine();

    std::vector<double> powers;
    for (double p = 0.05; p <= 0.5 + 1e-9; p += 0.05) powers.push_back(p);
    const auto scan = power_scan(engine, config.pump(), powers, 3, 9.0, 5.7);

    Curve curve;
    for (const auto& pt : scan) {
        curve.x.push_back(pt.power_mw);
        curve.y.push_back(pt.coincidence_rate_hz);
    }
    const FitResult fit = fit_power_law(curve);
    CHECK(fit.exponent() == doctest::Approx(2.0).epsilon(1e-9));

    // doubling the power quadruples the rate
    const auto doubled = power_scan(engine, config.pump(), {0.2, 0.4}, 3, 9.0, 5.7);
    CHECK(doubled[1].coincidence_rate_hz ==
          doctest::Approx(4.0 * doubled[0].coincidence_rate_hz).epsilon(1e-12));
}

TEST_CASE("detected rates") {
    PairRatePrediction p;
    p.generation_rate_hz = 1.3e5;

    SUBCASE("lossless and dark-free") {
        const auto det = detected_rates(p, 0.0, 0.0);
        CHECK(det.singles_signal_hz == doctest::Approx(1.3e5));
        CHECK(det.singles_idler_hz == doctest::Approx(1.3e5));
        CHECK(det.coincidences_hz == doctest::Approx(1.3e5));
    }

    SUBCASE("reference losses") {
        const auto det = detected_rates(p, 9.0, 5.7);
        // 1.3e5 * 10^-0.9 * 10^-0.57 = 4405
        CHECK(det.coincidences_hz == doctest::Approx(4404.97).epsilon(1e-4));
        CHECK(det.coincidences_hz == doctest::Approx(4.4e3).epsilon(0.01));
        // Klyshko from signal heralds estimates the idler-arm efficiency
        CHECK(det.klyshko_from_signal == doctest::Approx(0.26915).epsilon(1e-4));
    }

    SUBCASE("dark counts dilute the heralding efficiency") {
        const auto det = detected_rates(p, 9.0, 5.7, 5000.0, 5000.0);
        CHECK(det.klyshko_from_signal < 0.26915);
        CHECK(det.singles_signal_hz ==
              doctest::Approx(1.3e5 * std::pow(10.0, -0.9) + 5000.0));
    }

    CHECK_THROWS_AS(detected_rates(p, -1.0, 0.0), std::invalid_argument);
}
