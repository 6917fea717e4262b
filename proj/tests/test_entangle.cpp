#include <cmath>

#include "doctest.h"

#include "cfgates/entangle.hpp"

using namespace cfgates;

namespace {

double amp_at(const PipelineResult& r, const std::string& config) {
    auto it = r.postselected_amplitudes.find(config);
    return it == r.postselected_amplitudes.end() ? 0.0 : it->second.real();
}

}  // namespace

TEST_SUITE("entangle") {

TEST_CASE("atom preparation validation") {
    CHECK_NOTHROW(atom_superposition({M_SQRT1_2, 0}, {M_SQRT1_2, 0}));
    CHECK_THROWS_AS(atom_superposition({1.0, 0}, {0.5, 0}), std::invalid_argument);
}

TEST_CASE("quantum branches match the classical runs bit for bit") {
    for (GateKind kind : {GateKind::nand2, GateKind::nor, GateKind::xor_}) {
        GateConfig cfg{kind, 6, 42, 2};
        BranchEnsemble ensemble = run_gate_quantum(cfg, {atom_plus(), atom_plus()});
        REQUIRE(ensemble.branches.size() == 4);
        GateNetwork net = build_gate_network(cfg);
        for (const Branch& branch : ensemble.branches) {
            PartyInputs inputs{static_cast<int>(branch.config & 1),
                               static_cast<int>((branch.config >> 1) & 1)};
            GateResult classical = simulate_gate(net, inputs);
            CHECK(branch.photon.distribution.probabilities ==
                  classical.distribution.probabilities);
            CHECK(branch.photon.amp_d0 == classical.amp_d0);
            CHECK(branch.photon.amp_d1 == classical.amp_d1);
        }
        CHECK(std::abs(ensemble.total_probability() - 1.0) < 1e-12);
    }

    GateConfig nand3{GateKind::nand_multi, 6, 42, 3};
    BranchEnsemble ensemble = run_gate_quantum(nand3, {atom_plus(), atom_plus(), atom_plus()});
    REQUIRE(ensemble.branches.size() == 8);
    GateNetwork net = build_gate_network(nand3);
    for (const Branch& branch : ensemble.branches) {
        PartyInputs inputs{static_cast<int>(branch.config & 1),
                           static_cast<int>((branch.config >> 1) & 1),
                           static_cast<int>((branch.config >> 2) & 1)};
        GateResult classical = simulate_gate(net, inputs);
        CHECK(branch.photon.distribution.probabilities == classical.distribution.probabilities);
    }
    CHECK(std::abs(ensemble.total_probability() - 1.0) < 1e-12);
}

TEST_CASE("NOR branch outputs follow the four-term mapping") {
    BranchEnsemble ensemble =
        run_gate_quantum({GateKind::nor, 16, 600, 2}, {atom_plus(), atom_plus()});
    for (const Branch& branch : ensemble.branches) {
        const bool both_ground = branch.config == 0;
        const int winner =
            branch.photon.distribution.p_d0() >= branch.photon.distribution.p_d1() ? 0 : 1;
        CHECK(winner == (both_ground ? 1 : 0));
        CHECK(branch.weight.real() == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("XOR branch outputs follow the parity mapping") {
    BranchEnsemble ensemble =
        run_gate_quantum({GateKind::xor_, 16, 600, 2}, {atom_plus(), atom_plus()});
    for (const Branch& branch : ensemble.branches) {
        const int parity = ((branch.config & 1) + ((branch.config >> 1) & 1)) % 2;
        const int winner =
            branch.photon.distribution.p_d0() >= branch.photon.distribution.p_d1() ? 0 : 1;
        CHECK(winner == parity);
    }
}

TEST_CASE("pure excited atoms give the single classical branch") {
    GateConfig cfg{GateKind::xor_, 8, 64, 2};
    BranchEnsemble ensemble = run_gate_quantum(cfg, {atom_excited(), atom_excited()});
    double live = 0.0;
    for (const Branch& branch : ensemble.branches) live += std::norm(branch.weight);
    CHECK(live == 1.0);
    const Branch& ee = ensemble.branches[3];
    CHECK(ee.config == 3);
    CHECK(std::norm(ee.weight) == 1.0);
    GateResult classical = simulate_gate(cfg, {1, 1});
    CHECK(ee.photon.distribution.probabilities == classical.distribution.probabilities);
}

TEST_CASE("ideal GHZ pipeline") {
    PipelineResult r = ideal_oracle(PipelineKind::ghz);
    CHECK(r.success_probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.designated_port == StagePort::output0);
    // (1/2sqrt2)(|ggg> + |eee>)
    CHECK(amp_at(r, "ggg") == doctest::Approx(1.0 / (2.0 * M_SQRT2)).epsilon(1e-12));
    CHECK(amp_at(r, "eee") == doctest::Approx(1.0 / (2.0 * M_SQRT2)).epsilon(1e-12));
    CHECK(r.postselected_amplitudes.size() == 2);
    // Failure: the stage-1 reject plus the terminal D1 port.
    CHECK(r.failure_breakdown.at("D_F") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.failure_breakdown.at("D1") == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("ideal W pipeline") {
    PipelineResult r = ideal_oracle(PipelineKind::w);
    CHECK(r.success_probability == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.designated_port == StagePort::output1);
    // After the bit flip: (1/2sqrt2)(|egg> + |geg> + |gge>).
    for (const char* config : {"egg", "geg", "gge"})
        CHECK(amp_at(r, config) == doctest::Approx(1.0 / (2.0 * M_SQRT2)).epsilon(1e-12));
    CHECK(r.postselected_amplitudes.size() == 3);
}

TEST_CASE("ideal W pipeline intermediate state after three NOR stages") {
    // Truncate the W pipeline after its three postselections; the surviving
    // branch amplitudes must be the five-term 1/(2 sqrt 2) pattern, with
    // (e,g,g) on the rejected port of the third stage.
    PipelineSpec spec = w_spec(8, 64);
    spec.stages.pop_back();
    spec.stages.back().postselect = std::nullopt;  // measure after stage 3
    PipelineResult r = run_pipeline(spec, true);
    CHECK(r.designated_port == StagePort::output0);
    const double a = 1.0 / (2.0 * M_SQRT2);
    for (const char* config : {"gee", "ege", "eeg", "eee"})
        CHECK(amp_at(r, config) == doctest::Approx(a).epsilon(1e-12));
    CHECK(r.postselected_amplitudes.size() == 4);
    CHECK(r.failure_breakdown.at("D1") == doctest::Approx(a * a).epsilon(1e-12));
    CHECK(r.success_probability == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("all-ground atoms make the W pipeline fail at stage one") {
    PipelineResult r =
        ideal_oracle(PipelineKind::w, {atom_ground(), atom_ground(), atom_ground()});
    CHECK(r.success_probability == 0.0);
    CHECK(r.failure_breakdown.at("D_F1") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("GHZ with two excited atoms postselects a separable state") {
    PipelineResult r =
        ideal_oracle(PipelineKind::ghz, {atom_excited(), atom_excited(), atom_plus()});
    CHECK(r.success_probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.postselected_amplitudes.size() == 1);
    CHECK(amp_at(r, "eee") == doctest::Approx(M_SQRT1_2).epsilon(1e-12));
}

TEST_CASE("finite pipelines stay below the ideal and converge") {
    PipelineResult g = ghz_pipeline(16, 256);
    CHECK(g.success_probability < 0.25);
    CHECK(g.fidelity < 1.0);
    CHECK(g.success_probability > 0.16);
    CHECK(g.fidelity > 0.97);

    PipelineResult w = w_pipeline(16, 256);
    CHECK(w.success_probability < 0.375);
    CHECK(w.fidelity > 0.97);

    // Phase coherence: all surviving GHZ amplitudes real positive.
    for (const auto& [name, amp] : g.postselected_amplitudes) {
        if (name == "ggg" || name == "eee") {
            CHECK(amp.real() > 0.0);
            CHECK(std::abs(amp.imag()) < 1e-12);
        }
    }

    // Conservation: success + all failures account for everything.
    double total = g.success_probability;
    for (const auto& [label, p] : g.failure_breakdown) total += p;
    CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("pipeline spec validation") {
    PipelineSpec spec = ghz_spec(8, 64);
    spec.stages[0].bindings = {party_bob};
    CHECK_THROWS_AS(run_pipeline(spec, true), std::invalid_argument);

    spec = ghz_spec(8, 64);
    spec.stages[0].postselect = std::nullopt;  // measure before the end
    CHECK_THROWS_AS(run_pipeline(spec, true), std::invalid_argument);

    CHECK_THROWS_AS(run_gate_quantum({GateKind::nor, 8, 64, 2}, {atom_plus()}),
                    std::invalid_argument);
}

}  // TEST_SUITE
