#include <cmath>

#include "doctest.h"

#include "cfgates/noise.hpp"

using namespace cfgates;

TEST_SUITE("noise") {

TEST_CASE("gamma zero reproduces the noiseless run bit for bit") {
    GateConfig cfg{GateKind::nor, 8, 70, 2};
    GateResult exact = simulate_gate(cfg, {1, 0});
    NoiseModel model{0.0, 5, 123};
    EffectiveProbabilities noisy = run_noisy(cfg, {1, 0}, model);
    CHECK(noisy.mean_p_d0 == exact.distribution.p_d0());
    CHECK(noisy.mean_p_d1 == exact.distribution.p_d1());
}

TEST_CASE("all-blocked inputs are untouched by channel noise") {
    GateConfig cfg{GateKind::nor, 8, 70, 2};
    EffectiveProbabilities base = run_noisy(cfg, {0, 0}, {0.0, 3, 7});
    for (double gamma : {0.01, 0.02, 0.03}) {
        EffectiveProbabilities e = run_noisy(cfg, {0, 0}, {gamma, 3, 7});
        CHECK(e.e_d1 == base.e_d1);
        CHECK(e.mean_p_d0 == base.mean_p_d0);
        CHECK(e.mean_p_d1 == base.mean_p_d1);
    }
    // The quoted operating point.
    CHECK(std::abs(base.e_d1 - 0.915) < 0.005);
}

TEST_CASE("XOR all-blocked effective probability at the quoted point") {
    EffectiveProbabilities e = run_noisy({GateKind::xor_, 10, 50, 2}, {0, 0}, {0.05, 4, 99});
    CHECK(std::abs(e.e_d0 - 0.944) < 0.005);
}

TEST_CASE("same seed gives identical results") {
    GateConfig cfg{GateKind::xor_, 6, 30, 2};
    NoiseModel model{0.05, 50, 2024};
    EffectiveProbabilities a = run_noisy(cfg, {1, 1}, model);
    EffectiveProbabilities b = run_noisy(cfg, {1, 1}, model);
    CHECK(a.e_d0 == b.e_d0);
    CHECK(a.mean_p_d0 == b.mean_p_d0);
    CHECK(a.stderr_e_d0 == b.stderr_e_d0);
}

TEST_CASE("effective probabilities stay in [0, 1]") {
    GateConfig cfg{GateKind::nor, 6, 40, 2};
    for (double gamma : {0.0, 0.05, 0.5, 1.0}) {
        for (PartyInputs inputs : {PartyInputs{0, 0}, {0, 1}, {1, 1}}) {
            EffectiveProbabilities e = run_noisy(cfg, inputs, {gamma, 40, 5});
            if (!e.defined) continue;
            CHECK(e.e_d0 >= 0.0);
            CHECK(e.e_d0 <= 1.0);
            CHECK(e.e_d1 >= 0.0);
            CHECK(e.e_d1 <= 1.0);
            CHECK(e.e_d0 + e.e_d1 == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("correct-detector E decreases with gamma within two standard errors") {
    GateConfig cfg{GateKind::nor, 8, 70, 2};
    NoiseModel model{0.0, 400, 31};
    std::vector<double> grid{0.0, 0.01, 0.02, 0.03};
    auto rows = noise_sweep(cfg, {1, 1}, grid, model);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& prev = rows[i - 1].values;
        const auto& cur = rows[i].values;
        CHECK(cur.e_d0 <= prev.e_d0 + 2.0 * (cur.stderr_e_d0 + prev.stderr_e_d0));
    }
    // gamma = 0 row equals the exact run.
    GateResult exact = simulate_gate(cfg, {1, 1});
    const double e0 = exact.distribution.p_d0() /
                      (exact.distribution.p_d0() + exact.distribution.p_d1());
    CHECK(rows[0].values.e_d0 == e0);
}

TEST_CASE("doubling the samples shrinks the standard error by about 1/sqrt(2)") {
    GateConfig cfg{GateKind::xor_, 8, 40, 2};
    EffectiveProbabilities half = run_noisy(cfg, {1, 1}, {0.04, 400, 11});
    EffectiveProbabilities full = run_noisy(cfg, {1, 1}, {0.04, 800, 11});
    const double ratio = full.stderr_e_d0 / half.stderr_e_d0;
    CHECK(ratio > 0.5);
    CHECK(ratio < 0.95);
}

TEST_CASE("mixed XOR inputs give matching effective probabilities") {
    GateConfig cfg{GateKind::xor_, 10, 50, 2};
    NoiseModel model{0.03, 600, 77};
    EffectiveProbabilities e01 = run_noisy(cfg, {0, 1}, model);
    EffectiveProbabilities e10 = run_noisy(cfg, {1, 0}, model);
    CHECK(std::abs(e01.e_d1 - e10.e_d1) <=
          2.0 * (e01.stderr_e_d1 + e10.stderr_e_d1) + 1e-3);
}

TEST_CASE("per-run policy blocks everything or nothing") {
    GateConfig cfg{GateKind::nand2, 6, 36, 2};
    // gamma = 1: every sample fully blocked; equals the fully-blocked case
    // for the noise sink + switch behavior of an unblocked pattern.
    NoiseModel model{1.0, 3, 5, NoiseModel::Policy::per_run};
    EffectiveProbabilities e = run_noisy(cfg, {1, 1}, model);
    GateResult blocked = simulate_gate(cfg, {0, 0});
    // All channel absorption lands in the noise sink instead of the switches,
    // but D0/D1 must match the blocked run exactly.
    CHECK(e.mean_p_d0 == blocked.distribution.p_d0());
    CHECK(e.mean_p_d1 == blocked.distribution.p_d1());
}

TEST_CASE("parameter validation") {
    GateConfig cfg{GateKind::nand2, 4, 16, 2};
    CHECK_THROWS_AS(run_noisy(cfg, {1, 1}, {-0.1, 10, 0}), std::invalid_argument);
    CHECK_THROWS_AS(run_noisy(cfg, {1, 1}, {0.1, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(noise_sweep(cfg, {1, 1}, {}, {0.1, 10, 0}), std::invalid_argument);
}

}  // TEST_SUITE
