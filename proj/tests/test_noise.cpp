#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "djsim/noise.hpp"
#include "djsim/state_vector.hpp"
#include "test_support.hpp"

using djsim::NoiseModel;
using djsim::parse_noise_config;
using djsim::sample_shots;
using djsim::sample_with_noise;
using djsim::ShotHistogram;
using djsim::StateVector;

namespace {

std::uint64_t count_of(const ShotHistogram& h, const std::string& key) {
    const auto it = h.counts.find(key);
    return it == h.counts.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("noise config parsing") {
    const NoiseModel m = parse_noise_config(R"({"readout_flip": 0.017, "depolarizing": 0.5})");
    CHECK(m.readout_flip == 0.017);
    CHECK(m.depolarizing == 0.5);

    const NoiseModel defaults = parse_noise_config("{}");
    CHECK(defaults.is_zero());

    CHECK_THROWS_AS(parse_noise_config("not json"), djsim::Error);
    CHECK_THROWS_AS(parse_noise_config(R"([1, 2])"), djsim::Error);
    CHECK_THROWS_AS(parse_noise_config(R"({"readout_flip": 1.5})"), djsim::Error);
    CHECK_THROWS_AS(parse_noise_config(R"({"readout": 0.1})"), djsim::Error);
}

TEST_CASE("model range validation") {
    CHECK_THROWS_AS((NoiseModel{-0.1, 0.0}.validate()), djsim::Error);
    CHECK_THROWS_AS((NoiseModel{0.0, 2.0}.validate()), djsim::Error);
    CHECK_NOTHROW((NoiseModel{1.0, 1.0}.validate()));
}

TEST_CASE("zero-noise model reduces to the ideal sampler bit for bit") {
    djsim::SplitMix64 gen(606);
    const StateVector s = test_support::random_state(3, gen);
    for (const std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
        const ShotHistogram ideal = sample_shots(s, 4000, seed);
        const ShotHistogram noisy = sample_with_noise(s, NoiseModel{0.0, 0.0}, 4000, seed);
        CHECK(ideal.counts == noisy.counts);
    }
}

TEST_CASE("readout flips hit a deterministic outcome at the analytic rate") {
    const StateVector zero3(3);  // deterministic outcome "000"
    struct Case {
        double flip;
        double dominant;  // (1 - flip)^3
    };
    const Case cases[] = {
        {0.017, 0.949862},        // (1 - 0.017)^3
        {0.024, 0.929714176},     // (1 - 0.024)^3
        {1.0 - std::pow(0.93, 1.0 / 3.0), 0.93},
    };
    for (const Case& c : cases) {
        const ShotHistogram h = sample_with_noise(zero3, NoiseModel{c.flip, 0.0}, 8000, 1);
        const double sigma = std::sqrt(8000.0 * c.dominant * (1.0 - c.dominant));
        const double expected = 8000.0 * c.dominant;
        CHECK(std::abs(static_cast<double>(count_of(h, "000")) - expected) < 5.0 * sigma);
        CHECK(h.shots == 8000);
        std::uint64_t total = 0;
        for (const auto& [key, n] : h.counts) total += n;
        CHECK(total == 8000);
    }
}

TEST_CASE("dominant-outcome frequency is non-increasing in the flip rate") {
    const StateVector zero3(3);
    std::uint64_t previous = 8001;
    for (const double p : {0.0, 0.01, 0.02, 0.05}) {
        const ShotHistogram h = sample_with_noise(zero3, NoiseModel{p, 0.0}, 8000, 99);
        const std::uint64_t dominant = count_of(h, "000");
        const double mean = 8000.0 * std::pow(1.0 - p, 3);
        const double sigma = std::sqrt(std::max(1.0, 8000.0 * std::pow(1.0 - p, 3) *
                                                         (1.0 - std::pow(1.0 - p, 3))));
        CHECK(std::abs(static_cast<double>(dominant) - mean) <= 5.0 * sigma);
        CHECK(dominant <= previous);
        previous = dominant;
    }
}

TEST_CASE("flip statistics are symmetric under relabeling 0 and 1") {
    const int n = 3;
    const StateVector all_zero(n);
    const StateVector all_one = StateVector::basis(n, 7);
    const NoiseModel model{0.05, 0.0};
    const ShotHistogram a = sample_with_noise(all_zero, model, 8000, 4242);
    const ShotHistogram b = sample_with_noise(all_one, model, 8000, 4242);

    // identical seed stream => complementing every reported bit maps one
    // histogram onto the other exactly
    std::map<std::string, std::uint64_t> mirrored;
    for (const auto& [key, count] : b.counts) {
        std::string m = key;
        for (char& ch : m) ch = (ch == '0') ? '1' : '0';
        mirrored[m] = count;
    }
    CHECK(a.counts == mirrored);
}

TEST_CASE("noise sampler validates arguments") {
    const StateVector s(1);
    CHECK_THROWS_AS(sample_with_noise(s, NoiseModel{2.0, 0.0}, 10, 0), djsim::Error);
    CHECK_THROWS_AS(sample_with_noise(s, NoiseModel{0.0, 0.0}, 0, 0), djsim::Error);
}
