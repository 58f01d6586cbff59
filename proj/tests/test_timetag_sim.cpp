#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dualring/correlator.hpp"
#include "dualring/fitting.hpp"
#include "dualring/sim.hpp"
#include "helpers.hpp"

using namespace dualring;

namespace {

SimConfig clean_config(double rate_hz, double duration_s, std::uint64_t seed) {
    SimConfig c;
    c.pair_rate_hz = rate_hz;
    c.duration_s = duration_s;
    c.seed = seed;
    c.signal_chain = {0.0, 0.0, 0.0, 0.0};
    c.idler_chain = {0.0, 0.0, 0.0, 0.0};
    return c;
}

}  // namespace

TEST_CASE("simulation determinism") {
    SimConfig c = clean_config(5e4, 0.5, 42);
    c.signal_chain = {9.0, 68.2, 200.0, 0.0};
    c.idler_chain = {5.7, 68.2, 200.0, 0.0};
    const auto s1 = simulate_pair_streams(c);
    const auto s2 = simulate_pair_streams(c);
    REQUIRE(s1.size() == 2);
    CHECK(s1.at(0).tags == s2.at(0).tags);
    CHECK(s1.at(1).tags == s2.at(1).tags);

    SimConfig other = c;
    other.seed = 43;
    CHECK(simulate_pair_streams(other).at(0).tags != s1.at(0).tags);
}

TEST_CASE("degenerate configs yield empty streams") {
    const auto streams = simulate_pair_streams(clean_config(0.0, 1.0, 7));
    CHECK(streams.at(kChannelSignal).tags.empty());
    CHECK(streams.at(kChannelIdler).tags.empty());
}

TEST_CASE("lossless jitterless pairs are perfectly correlated") {
    const auto streams = simulate_pair_streams(clean_config(1e5, 10.0, 11));
    const auto& s = streams.at(kChannelSignal);
    const auto& i = streams.at(kChannelIdler);
    CHECK(s.tags == i.tags);
    CHECK(std::abs(double(s.count()) - 1e6) < 4.0 * std::sqrt(1e6));
    s.validate();
}

TEST_CASE("per-channel counts are Poisson across seeds") {
    // 30 independent runs; chi-square statistic against the expected mean,
    // accepted inside the [0.5%, 99.5%] band of chi2(30): [13.787, 53.672].
    const double rate = 5e4, duration = 2.0;
    const double eta_s = std::pow(10.0, -0.9), eta_i = std::pow(10.0, -0.57);
    const double mu_s = rate * duration * eta_s + 200.0 * duration;
    const double mu_i = rate * duration * eta_i + 200.0 * duration;

    double chi_s = 0.0, chi_i = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        SimConfig c = clean_config(rate, duration, seed);
        c.signal_chain = {9.0, 68.2, 200.0, 0.0};
        c.idler_chain = {5.7, 68.2, 200.0, 0.0};
        const auto streams = simulate_pair_streams(c);
        const double ns = static_cast<double>(streams.at(0).count());
        const double ni = static_cast<double>(streams.at(1).count());
        chi_s += (ns - mu_s) * (ns - mu_s) / mu_s;
        chi_i += (ni - mu_i) * (ni - mu_i) / mu_i;
    }
    CHECK(chi_s > 13.787);
    CHECK(chi_s < 53.672);
    CHECK(chi_i > 13.787);
    CHECK(chi_i < 53.672);
}

TEST_CASE("coincidence peak width set by the jitter convolution") {
    SimConfig c = clean_config(1e5, 20.0, 99);
    c.signal_chain.jitter_sigma_ps = 68.2;
    c.idler_chain.jitter_sigma_ps = 68.2;
    const auto streams = simulate_pair_streams(c);
    const auto hist = cross_correlation_histogram(streams.at(0), streams.at(1), 16,
                                                  -1024, 1024);
    Curve curve;
    for (std::size_t i = 0; i < hist.n_bins(); ++i) {
        curve.x.push_back(hist.bin_center_ps(i));
        curve.y.push_back(static_cast<double>(hist.counts[i]));
    }
    const FitResult fit = fit_gaussian(curve);
    REQUIRE(fit.converged);
    // sqrt(2) * 2.3548 * 68.2 = 227.1 ps
    CHECK(fit.fwhm == doctest::Approx(227.1).epsilon(0.05));
}

TEST_CASE("splitter routes every tag") {
    const auto streams = simulate_pair_streams(clean_config(2e5, 5.0, 3));
    const auto& input = streams.at(kChannelSignal);

    SUBCASE("ratio 1 sends everything to arm A") {
        const auto [a, b] = split_stream(input, 1.0, 17, 2, 3);
        CHECK(a.tags == input.tags);
        CHECK(b.tags.empty());
    }

    SUBCASE("balanced split, multiset preserved, binomial bound") {
        const auto [a, b] = split_stream(input, 0.5, 17, 2, 3);
        CHECK(a.count() + b.count() == input.count());
        const auto merged = merge_streams({a, b});
        CHECK(merged.tags == input.tags);
        const double n = static_cast<double>(input.count());
        CHECK(std::abs(double(a.count()) - n / 2.0) < 4.0 * std::sqrt(n / 4.0));
    }

    SUBCASE("deterministic given the seed") {
        const auto [a1, b1] = split_stream(input, 0.5, 17, 2, 3);
        const auto [a2, b2] = split_stream(input, 0.5, 17, 2, 3);
        CHECK(a1.tags == a2.tags);
        CHECK(b1.tags == b2.tags);
    }

    CHECK_THROWS_AS(split_stream(input, 1.5, 17, 2, 3), std::invalid_argument);
}

TEST_CASE("merge keeps sorted order") {
    TimeTagStream empty;
    empty.duration_ps = 1000000;
    auto x = testing::random_stream(5, 0, 1000, 1000000);
    CHECK(merge_streams({x, empty}).tags == x.tags);

    const auto y = testing::random_stream(5, 1, 1500, 1000000);
    const auto z = testing::random_stream(5, 2, 700, 1000000);
    const auto merged = merge_streams({x, y, z});
    CHECK(merged.count() == x.count() + y.count() + z.count());

    // oracle: concatenate and sort
    std::vector<std::uint64_t> expected = x.tags;
    expected.insert(expected.end(), y.tags.begin(), y.tags.end());
    expected.insert(expected.end(), z.tags.begin(), z.tags.end());
    std::sort(expected.begin(), expected.end());
    CHECK(merged.tags == expected);

    TimeTagStream wrong;
    wrong.duration_ps = 5;
    CHECK_THROWS_AS(merge_streams({x, wrong}), std::invalid_argument);
}

TEST_CASE("dead time pruning") {
    SimConfig c = clean_config(5e6, 0.2, 31);
    SimConfig pruned = c;
    pruned.signal_chain.dead_time_ps = 50000.0;
    const auto raw = simulate_pair_streams(c);
    const auto cut = simulate_pair_streams(pruned);

    CHECK(cut.at(0).count() <= raw.at(0).count());
    CHECK(cut.at(0).count() > 0);
    const auto& tags = cut.at(0).tags;
    for (std::size_t i = 1; i < tags.size(); ++i)
        CHECK(tags[i] - tags[i - 1] >= 50000);
    // idler chain untouched
    CHECK(cut.at(1).tags == raw.at(1).tags);
}

TEST_CASE("chunked generation equals the monolithic run") {
    SimConfig c = clean_config(8e4, 2.0, 77);
    c.signal_chain = {6.0, 68.2, 500.0, 20000.0};
    c.idler_chain = {3.0, 96.0, 300.0, 0.0};
    c.splitter_ratio = 0.5;

    const auto whole = simulate_pair_streams(c);

    StreamingSimulator sim(c);
    std::map<std::uint32_t, std::vector<std::uint64_t>> collected;
    std::uint64_t t = 0;
    while (!sim.finished()) {
        t += 137000000;  // 137 us chunks
        for (auto& [ch, tags] : sim.next_chunk(t)) {
            auto& dst = collected[ch];
            // chunks arrive in time order
            if (!dst.empty() && !tags.empty()) CHECK(dst.back() <= tags.front());
            dst.insert(dst.end(), tags.begin(), tags.end());
        }
    }
    REQUIRE(collected.size() == whole.size());
    for (const auto& [ch, stream] : whole) CHECK(collected.at(ch) == stream.tags);
}

TEST_CASE("binary time-tag file round trip") {
    SimConfig c = clean_config(1e5, 1.0, 5);
    c.signal_chain = {2.0, 68.2, 100.0, 0.0};
    c.idler_chain = {1.0, 68.2, 100.0, 0.0};
    const auto streams = simulate_pair_streams(c);

    const auto path = std::filesystem::temp_directory_path() / "dualring_tags_test.bin";
    write_timetag_file(path.string(), streams);

    // header: 8-byte magic + count + duration; 16 bytes per record
    std::uint64_t total = 0;
    for (const auto& [ch, s] : streams) total += s.count();
    CHECK(std::filesystem::file_size(path) == 24 + 16 * total);

    const auto back = read_timetag_file(path.string());
    REQUIRE(back.size() == streams.size());
    for (const auto& [ch, s] : streams) {
        CHECK(back.at(ch).tags == s.tags);
        CHECK(back.at(ch).duration_ps == s.duration_ps);
    }
    std::filesystem::remove(path);
}

TEST_CASE("corrupt time-tag files are rejected") {
    const auto path = std::filesystem::temp_directory_path() / "dualring_bad_tags.bin";
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOTTAGS!" << std::string(16, '\0');
    }
    CHECK_THROWS_AS(read_timetag_file(path.string()), std::runtime_error);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_timetag_file(path.string()), std::runtime_error);
}

TEST_CASE("time-tag CSV import") {
    const auto path = std::filesystem::temp_directory_path() / "dualring_tags_test.csv";
    {
        std::ofstream out(path);
        out << "channel,timestamp_ps\n1,500\n0,100\n0,300\n1,200\n";
    }
    const auto streams = read_timetag_csv(path.string());
    REQUIRE(streams.size() == 2);
    CHECK(streams.at(0).tags == std::vector<std::uint64_t>{100, 300});
    CHECK(streams.at(1).tags == std::vector<std::uint64_t>{200, 500});
    CHECK(streams.at(0).duration_ps == 501);
    std::filesystem::remove(path);
}

TEST_CASE("stream validation") {
    TimeTagStream s;
    s.duration_ps = 100;
    s.tags = {10, 5};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.tags = {10, 100};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.tags = {10, 99};
    s.validate();
}
