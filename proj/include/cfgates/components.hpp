#pragma once

#include <functional>
#include <optional>

#include "cfgates/netlist.hpp"

namespace cfgates {

// The five beam-splitter types. Half/OuterM/InnerN have transmissivity angle
// pi/2K with K = 2, M, N; Att1/Att2 are the attenuator splitters with
// sin(theta) = cos^{2N}(pi/2N) and cos^{6N}(pi/2N).
enum class BsKind { half, outer_m, inner_n, att1, att2 };

double bs_angle(BsKind kind, int m, int n);

// Attenuator through-amplitudes (the probability of surviving is the square).
double att1_transmission(int n);  // cos^{2N}(pi/2N)
double att2_transmission(int n);  // cos^{6N}(pi/2N)

// Closed-form chain behaviors ("working modes"), used as oracles against the
// exact simulation.
//
// Mode 1 (blocked arms): left amplitude after k splitters is cos^k(pi/2K).
double predict_mode1(int k, int big_k);

// Mode 2 (K splitters, unblocked): full left-to-right transfer.
struct Mode2Prediction {
    double left_residual;
    double right;
};
Mode2Prediction predict_mode2(int big_k);

// Mode 3 (2M splitters, unblocked, no attenuator): stay left with a pi phase.
double predict_mode3(int m);

// Mode 4 (2N splitters, Attenuator 1 in the middle, unblocked):
// stay left with amplitude -cos^{2N}(pi/2N).
double predict_mode4(int n);

// Builds `bs_count` splitters of angle theta along `left_rail`. The right arm
// of every interferometer gets a fresh mode; `segment` is invoked for each
// inner arm and may emit extra elements, returning the (possibly relabeled)
// arm continuation. Returns the right-exit mode after the last splitter.
using SegmentBuilder = std::function<ModeId(int segment_index, ModeId arm)>;
ModeId chain_with_segments(Netlist& net, int bs_count, double theta, ModeId left_rail,
                           const SegmentBuilder& segment);

// Interferometer chain with party-controlled channel arms, optionally with
// Attenuator 1 after the given splitter index.
struct ChainSpec {
    int order = 2;                         // K: splitter angle is pi/2K
    int bs_count = 2;
    std::optional<int> attenuator_after;   // typically == order
    PartyMask owners = party_bit(party_bob);
};

struct ChainPorts {
    ModeId left_exit;   // the rail passed in
    ModeId right_exit;  // right port after the last splitter
};

ChainPorts build_chain(Netlist& net, const ChainSpec& spec, ModeId left_rail);

// Counterfactual logic gate unit: an N- or 2N-splitter chain with one
// entrance and two exits. CGU_2N embeds Attenuator 1 between splitters N and
// N+1. The caller wires exit2 (normally to a D2 detector).
enum class CguVariant { cgu_n, cgu_2n };

struct CguSpec {
    CguVariant variant = CguVariant::cgu_n;
    int n = 2;
    PartyMask owners = party_bit(party_bob);
};

struct CguPorts {
    ModeId exit1;  // left rail after the final splitter (same mode as the entrance)
    ModeId exit2;  // right port after the final splitter
};

CguPorts build_cgu(Netlist& net, const CguSpec& spec, ModeId entrance);

}  // namespace cfgates
