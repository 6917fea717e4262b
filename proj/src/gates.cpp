#include "cfgates/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfgates {

int gate_arity(GateKind kind, int parties) {
    switch (kind) {
        case GateKind::nand2:
        case GateKind::nor:
        case GateKind::xor_: return 2;
        case GateKind::nand_multi: return parties;
    }
    throw std::invalid_argument("unknown gate kind");
}

std::string gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::nand2: return "nand";
        case GateKind::nand_multi: return "nand-multi";
        case GateKind::nor: return "nor";
        case GateKind::xor_: return "xor";
    }
    return "?";
}

void validate_gate_config(const GateConfig& cfg) {
    if (cfg.m < 2 || cfg.n < 2) throw std::invalid_argument("gate config: M and N must be >= 2");
    if (cfg.parties < 2) throw std::invalid_argument("gate config: need at least two parties");
    if (cfg.kind != GateKind::nand_multi && cfg.parties != 2)
        throw std::invalid_argument("gate config: only the multi-party NAND takes more than two parties");
}

double OutcomeDistribution::at_or_zero(const std::string& key) const {
    auto it = probabilities.find(key);
    return it == probabilities.end() ? 0.0 : it->second;
}

double OutcomeDistribution::total() const {
    double t = 0.0;
    for (const auto& [k, v] : probabilities) t += v;
    return t;
}

PartyMask block_mask_from_inputs(const PartyInputs& inputs) {
    PartyMask mask = 0;
    for (std::size_t p = 0; p < inputs.size(); ++p) {
        if (inputs[p] != 0 && inputs[p] != 1)
            throw std::invalid_argument("party inputs must be 0 (block) or 1 (unblock)");
        if (inputs[p] == 0) mask |= party_bit(static_cast<int>(p));
    }
    return mask;
}

namespace {

PartyMask all_parties_mask(int parties) {
    PartyMask m = 0;
    for (int p = 0; p < parties; ++p) m |= party_bit(p);
    return m;
}

// True when the channels guarded by `owners` stay open under `inputs`
// (every owner unblocks).
bool channels_open(PartyMask owners, const PartyInputs& inputs) {
    return (owners & block_mask_from_inputs(inputs)) == 0;
}

void register_common_sinks(Netlist& net, int parties) {
    net.add_sink(sink_d0);
    net.add_sink(sink_d1);
    net.add_sink(sink_d2);
    net.add_sink(sink_noise);
    for (int p = 0; p < parties; ++p) net.add_sink(sw_sink_label(p));
}

// Emits a CGU whose exit 2 feeds a D2 detector and whose residual stays on
// `rail`. When `substitute` is set the whole unit is replaced by a perfect
// absorber (the combined-detector picture used by the audit).
void emit_cgu(Netlist& net, ModeId rail, const CguSpec& spec, bool substitute) {
    if (substitute) {
        net.absorb(rail, net.sink(sink_combined));
        return;
    }
    CguPorts ports = build_cgu(net, spec, rail);
    net.absorb(ports.exit2, net.sink(sink_d2));
}

// --- NAND (two parties sharing the channel, or the multi-party variant) ---
//
// Outer chain of M BS(M); the right arm of every outer interferometer holds
// an inner chain of N BS(N) whose arms form the shared transmission channel.
// Inner right exits go to D2; outer left/right exits are D0/D1.
GateNetwork build_nand(const GateConfig& cfg, bool substitute_inner) {
    GateNetwork g;
    Netlist& net = g.net;
    register_common_sinks(net, cfg.parties);
    if (substitute_inner) net.add_sink(sink_combined);

    const PartyMask owners = all_parties_mask(cfg.parties);
    ModeId zone1 = net.add_mode("zone1");
    net.set_input(zone1);

    auto outer_segment = [&](int, ModeId arm) {
        emit_cgu(net, arm, {CguVariant::cgu_n, cfg.n, owners}, substitute_inner);
        return arm;
    };
    ModeId right_exit =
        chain_with_segments(net, cfg.m, M_PI / (2.0 * cfg.m), zone1, outer_segment);

    g.d0_terminal = net.terminal(zone1, net.sink(sink_d0));
    g.d1_terminal = net.terminal(right_exit, net.sink(sink_d1));
    return g;
}

// --- NOR ---
//
// Outer chain of M BS(M). Each outer arm carries a middle interferometer of
// two half splitters: Attenuator 2 on the |010> arm, three CGU_2N in series
// (owned by Bob, Charlie, both) plus a pi phase shifter on the |001> arm.
// The recombined |010> port rejoins the outer chain, the |001> port is
// measured by D3.
GateNetwork build_nor(const GateConfig& cfg, bool substitute_middle) {
    GateNetwork g;
    Netlist& net = g.net;
    register_common_sinks(net, cfg.parties);
    net.add_sink(sink_d3);
    net.add_sink(sink_att1);
    net.add_sink(sink_att2);
    if (substitute_middle) net.add_sink(sink_combined);

    const double att2 = att2_transmission(cfg.n);
    ModeId zone1 = net.add_mode("zone1");
    net.set_input(zone1);

    auto outer_segment = [&](int index, ModeId arm) {
        if (substitute_middle) {
            net.absorb(arm, net.sink(sink_combined));
            return arm;
        }
        ModeId mid_right = net.add_mode();
        net.beam_splitter(M_PI / 4.0, arm, mid_right);
        ModeId mid_left = net.attenuator(arm, att2, net.sink(sink_att2));
        emit_cgu(net, mid_right, {CguVariant::cgu_2n, cfg.n, party_bit(party_bob)}, false);
        emit_cgu(net, mid_right, {CguVariant::cgu_2n, cfg.n, party_bit(party_charlie)}, false);
        emit_cgu(net, mid_right,
                 {CguVariant::cgu_2n, cfg.n, party_bit(party_bob) | party_bit(party_charlie)},
                 false);
        net.phase_shift(mid_right, M_PI);
        net.beam_splitter(M_PI / 4.0, mid_left, mid_right);
        net.probe(net.add_probe_tag("recombined_010[" + std::to_string(index) + "]"), mid_left);
        ModeId out = net.add_mode();
        net.route(mid_left, out);
        net.absorb(mid_right, net.sink(sink_d3));
        return out;
    };
    ModeId right_exit =
        chain_with_segments(net, cfg.m, M_PI / (2.0 * cfg.m), zone1, outer_segment);

    g.d0_terminal = net.terminal(zone1, net.sink(sink_d0));
    g.d1_terminal = net.terminal(right_exit, net.sink(sink_d1));
    return g;
}

// --- XOR ---
//
// Outer interferometer of two half splitters around a middle chain of 4M
// BS(M). The first 2M-1 middle arms hold Bob's CGU_N, the last 2M-1 hold
// Charlie's, and a pi phase shifter sits on the middle-chain left rail
// between the two half-chains. D0 is the |100> port, D1 the |010> port.
//
// `substitute` decides per CGU whether to absorb instead (audit mode):
// substitute[0] applies to Bob's half, substitute[1] to Charlie's.
GateNetwork build_xor(const GateConfig& cfg, bool substitute_bob, bool substitute_charlie) {
    GateNetwork g;
    Netlist& net = g.net;
    register_common_sinks(net, cfg.parties);
    net.add_sink(sink_d3);
    if (substitute_bob || substitute_charlie) net.add_sink(sink_combined);

    ModeId zone1 = net.add_mode("zone1");
    net.set_input(zone1);
    ModeId mid = net.add_mode("zone2");
    net.beam_splitter(M_PI / 4.0, zone1, mid);

    auto mid_segment = [&](int k, ModeId arm) {
        if (k == 2 * cfg.m) {
            net.phase_shift(mid, M_PI);
        } else {
            const bool upper = k < 2 * cfg.m;
            const int owner = upper ? party_bob : party_charlie;
            emit_cgu(net, arm, {CguVariant::cgu_n, cfg.n, party_bit(owner)},
                     upper ? substitute_bob : substitute_charlie);
        }
        return arm;
    };
    ModeId mid_right_exit =
        chain_with_segments(net, 4 * cfg.m, M_PI / (2.0 * cfg.m), mid, mid_segment);
    net.absorb(mid_right_exit, net.sink(sink_d3));

    net.beam_splitter(M_PI / 4.0, zone1, mid);
    g.d0_terminal = net.terminal(zone1, net.sink(sink_d0));
    g.d1_terminal = net.terminal(mid, net.sink(sink_d1));
    return g;
}

}  // namespace

GateNetwork build_gate_network(const GateConfig& cfg) {
    validate_gate_config(cfg);
    switch (cfg.kind) {
        case GateKind::nand2:
        case GateKind::nand_multi: return build_nand(cfg, false);
        case GateKind::nor: return build_nor(cfg, false);
        case GateKind::xor_: return build_xor(cfg, false, false);
    }
    throw std::invalid_argument("unknown gate kind");
}

GateNetwork build_audit_network(const GateConfig& cfg, const PartyInputs& inputs) {
    validate_gate_config(cfg);
    if (static_cast<int>(inputs.size()) != gate_arity(cfg.kind, cfg.parties))
        throw std::invalid_argument("audit: wrong number of inputs");
    switch (cfg.kind) {
        case GateKind::nand2:
        case GateKind::nand_multi:
            // The shared channel is open only when everyone unblocks; only
            // then do the inner chains act as combined detectors.
            return build_nand(cfg, channels_open(all_parties_mask(cfg.parties), inputs));
        case GateKind::nor: {
            // With any input 1 the middle interferometers dump everything to
            // D3 and their attenuators; they are combined detectors then.
            const bool any_open = inputs[party_bob] == 1 || inputs[party_charlie] == 1;
            return build_nor(cfg, any_open);
        }
        case GateKind::xor_:
            return build_xor(cfg, inputs[party_bob] == 1, inputs[party_charlie] == 1);
    }
    throw std::invalid_argument("unknown gate kind");
}

GateResult simulate_gate(const GateNetwork& network, const PartyInputs& inputs,
                         const std::function<bool()>& noise_block) {
    RunOptions options;
    options.block_mask = block_mask_from_inputs(inputs);
    options.noise_block = noise_block;
    std::vector<ProbeSample> probes;
    options.probes = &probes;

    RunOutcome outcome = run_netlist(network.net, options);

    GateResult result;
    result.amp_d0 = outcome.terminal_amplitudes.at(network.d0_terminal);
    result.amp_d1 = outcome.terminal_amplitudes.at(network.d1_terminal);
    for (const auto& sample : probes)
        result.recombination_residuals.push_back(std::abs(sample.amplitude));
    for (std::size_t s = 0; s < network.net.sink_table_size(); ++s)
        result.distribution.probabilities[network.net.sink_label(SinkId{static_cast<std::int32_t>(s)})] = 0.0;
    outcome.state.for_each_sink([&](SinkId sink, double p) {
        result.distribution.probabilities[network.net.sink_label(sink)] = p;
    });
    return result;
}

GateResult simulate_gate(const GateConfig& cfg, const PartyInputs& inputs) {
    validate_gate_config(cfg);
    if (static_cast<int>(inputs.size()) != gate_arity(cfg.kind, cfg.parties))
        throw std::invalid_argument("wrong number of party inputs");
    GateNetwork network = build_gate_network(cfg);
    return simulate_gate(network, inputs);
}

namespace {

OutcomeDistribution run_kind(GateKind kind, const GateConfig& cfg, const PartyInputs& inputs) {
    if (cfg.kind != kind) throw std::invalid_argument("gate config kind mismatch");
    return simulate_gate(cfg, inputs).distribution;
}

}  // namespace

OutcomeDistribution run_nand2(const GateConfig& cfg, const PartyInputs& inputs) {
    return run_kind(GateKind::nand2, cfg, inputs);
}
OutcomeDistribution run_nand_multi(const GateConfig& cfg, const PartyInputs& inputs) {
    if (static_cast<int>(inputs.size()) < 2)
        throw std::invalid_argument("multi-party NAND needs at least two parties");
    return run_kind(GateKind::nand_multi, cfg, inputs);
}
OutcomeDistribution run_nor(const GateConfig& cfg, const PartyInputs& inputs) {
    return run_kind(GateKind::nor, cfg, inputs);
}
OutcomeDistribution run_xor(const GateConfig& cfg, const PartyInputs& inputs) {
    return run_kind(GateKind::xor_, cfg, inputs);
}

int truth_table_output(GateKind kind, const PartyInputs& inputs) {
    const bool all_one = std::all_of(inputs.begin(), inputs.end(), [](int b) { return b == 1; });
    const bool all_zero = std::all_of(inputs.begin(), inputs.end(), [](int b) { return b == 0; });
    switch (kind) {
        case GateKind::nand2:
        case GateKind::nand_multi: return all_one ? 0 : 1;
        case GateKind::nor: return all_zero ? 1 : 0;
        case GateKind::xor_: return (inputs.at(0) + inputs.at(1)) % 2;
    }
    throw std::invalid_argument("unknown gate kind");
}

namespace theory {

double channel_leak_sum(int bs_count, int m, int n) {
    const double arm_loss = 1.0 - std::pow(std::cos(M_PI / (2.0 * n)), 2.0 * n);
    double sum = 0.0;
    for (int k = 1; k <= bs_count; ++k) {
        const double s = std::sin(k * M_PI / (2.0 * m));
        sum += s * s * arm_loss;
    }
    return sum;
}

double nand_unblocked_d0(int m) { return std::pow(std::cos(M_PI / (2.0 * m)), 2.0 * m); }

double nand_blocked_d1(int m, int n) { return 1.0 - m * M_PI * M_PI / (8.0 * n); }

double nor_all_blocked_d1(int m, int n) { return 1.0 - 3.0 * M_PI * M_PI * m / (4.0 * n); }

double nor_unblocked_d0(int m) { return 1.0 - M_PI * M_PI / (4.0 * m); }

double xor_loss_blocked(int m, int n) { return channel_leak_sum(2 * m, m, n); }

double xor_loss_unblocked(int m) { return 1.0 - std::pow(std::cos(M_PI / (2.0 * m)), 4.0 * m); }

}  // namespace theory

TheoryPrediction theory_prediction(const GateConfig& cfg, const PartyInputs& inputs) {
    validate_gate_config(cfg);
    const double pi2 = M_PI * M_PI;
    switch (cfg.kind) {
        case GateKind::nand2:
        case GateKind::nand_multi: {
            const bool all_one =
                std::all_of(inputs.begin(), inputs.end(), [](int b) { return b == 1; });
            if (all_one) return {theory::nand_unblocked_d0(cfg.m), 0.0};
            return {0.0, theory::nand_blocked_d1(cfg.m, cfg.n)};
        }
        case GateKind::nor: {
            if (inputs.at(0) == 0 && inputs.at(1) == 0)
                return {0.0, theory::nor_all_blocked_d1(cfg.m, cfg.n)};
            return {theory::nor_unblocked_d0(cfg.m), 0.0};
        }
        case GateKind::xor_: {
            const int j = inputs.at(0), jp = inputs.at(1);
            if (j == jp) {
                // Same inputs: half-chain losses are P0 ~ pi^2 M / 4N each
                // (blocked) or P1 ~ pi^2 / 2M each (unblocked).
                const double p =
                    j == 0 ? 1.0 - pi2 * cfg.m / (4.0 * cfg.n) : 1.0 - pi2 / (2.0 * cfg.m);
                return {p, 0.0};
            }
            return {0.0, 1.0 - pi2 * cfg.m / (8.0 * cfg.n) - pi2 / (4.0 * cfg.m)};
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

AuditReport counterfactual_audit(const GateConfig& cfg, const PartyInputs& inputs) {
    GateNetwork normal = build_gate_network(cfg);
    GateNetwork substituted = build_audit_network(cfg, inputs);

    GateResult base = simulate_gate(normal, inputs);
    GateResult sub = simulate_gate(substituted, inputs);

    AuditReport report;
    report.per_detector_deviation["D0"] = std::abs(base.amp_d0 - sub.amp_d0);
    report.per_detector_deviation["D1"] = std::abs(base.amp_d1 - sub.amp_d1);

    switch (cfg.kind) {
        case GateKind::nand2:
        case GateKind::nand_multi:
        case GateKind::nor: {
            const int winner = truth_table_output(cfg.kind, inputs);
            report.max_deviation =
                report.per_detector_deviation[winner == 0 ? "D0" : "D1"];
            break;
        }
        case GateKind::xor_:
            report.max_deviation = std::max(report.per_detector_deviation["D0"],
                                            report.per_detector_deviation["D1"]);
            break;
    }

    if (cfg.kind == GateKind::nor &&
        (inputs.at(0) == 1 || inputs.at(1) == 1)) {
        for (double r : base.recombination_residuals)
            report.max_recombination_residual = std::max(report.max_recombination_residual, r);
    }
    return report;
}

}  // namespace cfgates
