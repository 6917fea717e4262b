#include <cmath>

#include "doctest.h"

#include "cfgates/components.hpp"

using namespace cfgates;

namespace {

// Exact chain run with every channel arm blocked/unblocked by one party.
struct ChainRun {
    double left;
    double right;
    PhotonState state;
};

ChainRun run_plain_chain(const ChainSpec& spec, bool blocked) {
    Netlist net;
    net.add_sink(sw_sink_label(party_bob));
    SinkId exit_sink = net.add_sink("chain_exit");
    SinkId left_sink = net.add_sink("chain_left");
    ModeId rail = net.add_mode("rail");
    net.set_input(rail);
    ChainPorts ports = build_chain(net, spec, rail);
    net.terminal(ports.left_exit, left_sink);
    net.terminal(ports.right_exit, exit_sink);

    RunOptions opt;
    opt.block_mask = blocked ? party_bit(party_bob) : 0;
    RunOutcome out = run_netlist(net, opt);
    return {out.terminal_amplitudes[0].real(), out.terminal_amplitudes[1].real(),
            std::move(out.state)};
}

}  // namespace

TEST_SUITE("components") {

TEST_CASE("bs_angle") {
    CHECK(bs_angle(BsKind::half, 2, 2) == M_PI / 4.0);
    CHECK(bs_angle(BsKind::outer_m, 30, 2) == doctest::Approx(M_PI / 60.0).epsilon(1e-15));
    CHECK(bs_angle(BsKind::inner_n, 2, 100) == doctest::Approx(M_PI / 200.0).epsilon(1e-15));

    // Att1: sin(theta) = cos^{2N}(pi/2N).
    const int n = 2500;
    const double t1 = std::pow(std::cos(M_PI / (2.0 * n)), 2.0 * n);
    CHECK(bs_angle(BsKind::att1, 2, n) == doctest::Approx(std::asin(t1)).epsilon(1e-15));
    CHECK(t1 == doctest::Approx(0.999013526).epsilon(1e-9));

    const double t2 = std::pow(std::cos(M_PI / (2.0 * n)), 6.0 * n);
    CHECK(bs_angle(BsKind::att2, 2, n) == doctest::Approx(std::asin(t2)).epsilon(1e-15));

    CHECK_THROWS_AS(bs_angle(BsKind::outer_m, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(bs_angle(BsKind::inner_n, 2, 0), std::invalid_argument);
}

TEST_CASE("predict_mode1") {
    CHECK(predict_mode1(0, 8) == 1.0);
    CHECK(predict_mode1(60, 30) ==
          doctest::Approx(std::pow(std::cos(M_PI / 60.0), 60)).epsilon(1e-15));
    // Blocked-chain survival improves with the chain order at fixed k.
    double prev = 0.0;
    for (int big_k : {8, 16, 32, 64, 128}) {
        const double survive = predict_mode1(8, big_k);
        CHECK(survive > prev);
        prev = survive;
    }
    CHECK(prev > 0.999);  // K^2 >> 2k regime approaches 1
}

TEST_CASE("predict_mode2 closed form and exact simulation") {
    CHECK(predict_mode2(2).left_residual == 0.0);
    CHECK(predict_mode2(2).right == 1.0);
    for (int big_k : {2, 50}) {
        ChainRun run = run_plain_chain({big_k, big_k, std::nullopt, party_bit(party_bob)}, false);
        CHECK(std::abs(run.left - predict_mode2(big_k).left_residual) < 1e-12);
        CHECK(std::abs(run.right - predict_mode2(big_k).right) < 1e-12);
    }
}

TEST_CASE("predict_mode3 closed form and exact simulation") {
    CHECK(predict_mode3(17) == -1.0);
    for (int m : {2, 8, 30}) {
        ChainRun run = run_plain_chain({m, 2 * m, std::nullopt, party_bit(party_bob)}, false);
        CHECK(std::abs(run.left - (-1.0)) < 1e-12);
        CHECK(std::abs(run.right) < 1e-12);
    }
    // Applying the mode-3 chain twice restores the sign.
    CHECK(predict_mode3(8) * predict_mode3(8) == 1.0);
}

TEST_CASE("predict_mode4 closed form") {
    const int n = 2500;
    CHECK(predict_mode4(n) ==
          doctest::Approx(-std::pow(std::cos(M_PI / (2.0 * n)), 2.0 * n)).epsilon(1e-15));
    CHECK(predict_mode4(n) == doctest::Approx(-0.999013526).epsilon(1e-9));
    // Monotone toward -1; the gap closes as pi^2/4N.
    CHECK(predict_mode4(100) < predict_mode4(50));
    CHECK(predict_mode4(100000) > -1.0);
    CHECK(std::abs(predict_mode4(100000) + 1.0) < 5e-5);
}

TEST_CASE("blocked chains follow the mode-1 amplitude for every k") {
    for (int big_k : {8, 30, 100}) {
        for (int k = 1; k <= 2 * big_k; ++k) {
            ChainRun run = run_plain_chain({big_k, k, std::nullopt, party_bit(party_bob)}, true);
            CHECK(std::abs(run.left - predict_mode1(k, big_k)) < 1e-12);
        }
    }
}

TEST_CASE("CGU_N: unblocked routes everything to exit 2") {
    Netlist net;
    net.add_sink(sw_sink_label(party_bob));
    SinkId d2 = net.add_sink(sink_d2);
    SinkId left_sink = net.add_sink("exit1");
    ModeId rail = net.add_mode("rail");
    net.set_input(rail);
    CguPorts ports = build_cgu(net, {CguVariant::cgu_n, 40, party_bit(party_bob)}, rail);
    net.terminal(ports.exit1, left_sink);
    net.terminal(ports.exit2, d2);

    RunOutcome out = run_netlist(net, {});
    CHECK(std::abs(out.terminal_amplitudes[0]) < 1e-12);           // exit 1 empty
    CHECK(std::abs(out.terminal_amplitudes[1].real() - 1.0) < 1e-12);  // all at exit 2
}

TEST_CASE("CGU_2N blocked vs unblocked exit-1 amplitudes") {
    for (int n : {70, 500}) {
        Netlist net;
        net.add_sink(sw_sink_label(party_bob));
        SinkId d2 = net.add_sink(sink_d2);
        SinkId left_sink = net.add_sink("exit1");
        ModeId rail = net.add_mode("rail");
        net.set_input(rail);
        CguPorts ports = build_cgu(net, {CguVariant::cgu_2n, n, party_bit(party_bob)}, rail);
        net.terminal(ports.exit1, left_sink);
        net.terminal(ports.exit2, d2);

        RunOptions blocked;
        blocked.block_mask = party_bit(party_bob);
        const double amp_blocked = run_netlist(net, blocked).terminal_amplitudes[0].real();
        const double amp_open = run_netlist(net, {}).terminal_amplitudes[0].real();

        const double expected = std::pow(std::cos(M_PI / (2.0 * n)), 2.0 * n);
        CHECK(std::abs(amp_blocked - expected) < 1e-12);   // mode 1 through 2N splitters
        CHECK(std::abs(amp_open - predict_mode4(n)) < 1e-12);
        // Same magnitude, opposite sign.
        CHECK(std::abs(std::abs(amp_open) - amp_blocked) < 1e-12);
        CHECK(amp_open < 0.0);
        CHECK(amp_blocked > 0.0);
    }
}

TEST_CASE("shared ownership blocks when any owner blocks") {
    const PartyMask both = party_bit(party_bob) | party_bit(party_charlie);
    for (int bob = 0; bob <= 1; ++bob) {
        for (int charlie = 0; charlie <= 1; ++charlie) {
            Netlist net;
            net.add_sink(sw_sink_label(party_bob));
            net.add_sink(sw_sink_label(party_charlie));
            SinkId d2 = net.add_sink(sink_d2);
            SinkId left_sink = net.add_sink("exit1");
            ModeId rail = net.add_mode("rail");
            net.set_input(rail);
            CguPorts ports = build_cgu(net, {CguVariant::cgu_n, 25, both}, rail);
            net.terminal(ports.exit1, left_sink);
            net.terminal(ports.exit2, d2);

            RunOptions opt;
            if (bob == 0) opt.block_mask |= party_bit(party_bob);
            if (charlie == 0) opt.block_mask |= party_bit(party_charlie);
            RunOutcome out = run_netlist(net, opt);

            const bool arm_blocked = bob == 0 || charlie == 0;
            const double left = out.terminal_amplitudes[0].real();
            if (arm_blocked) {
                CHECK(std::abs(left - predict_mode1(25, 25)) < 1e-12);
            } else {
                CHECK(std::abs(left) < 1e-12);
            }
            // Absorption lands at the first blocking switch along the arm.
            const double sw_b = out.state.sink_probability(net.sink(sw_sink_label(party_bob)));
            const double sw_c = out.state.sink_probability(net.sink(sw_sink_label(party_charlie)));
            if (bob == 0) CHECK(sw_b > 0.0);
            if (bob == 1 && charlie == 0) {
                CHECK(sw_b == 0.0);
                CHECK(sw_c > 0.0);
            }
            if (bob == 1 && charlie == 1) CHECK(sw_b + sw_c == 0.0);
        }
    }
}

TEST_CASE("chain spec validation") {
    Netlist net;
    ModeId rail = net.add_mode("rail");
    net.set_input(rail);
    CHECK_THROWS_AS(build_chain(net, {1, 4, std::nullopt, 1}, rail), std::invalid_argument);
    CHECK_THROWS_AS(build_chain(net, {4, 8, 8, 1}, rail), std::invalid_argument);
    CHECK_THROWS_AS(build_chain(net, {4, 8, std::nullopt, 0}, rail), std::invalid_argument);
}

}  // TEST_SUITE
