#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "cfgates/components.hpp"
#include "cfgates/netlist.hpp"

namespace cfgates {

enum class GateKind { nand2, nand_multi, nor, xor_ };

struct GateConfig {
    GateKind kind = GateKind::nand2;
    int m = 8;        // outer-chain order M
    int n = 64;       // inner-chain order N
    int parties = 2;  // controllers; > 2 only for nand_multi

    friend auto operator<=>(const GateConfig&, const GateConfig&) = default;
};

// Per-party inputs, indexed bob=0, charlie=1, david=2, ...
// 0 = block the channel, 1 = unblock.
using PartyInputs = std::vector<int>;

int gate_arity(GateKind kind, int parties = 2);
std::string gate_kind_name(GateKind kind);
void validate_gate_config(const GateConfig& cfg);

// Detector-name -> probability. Covers the output detectors and every
// internal sink, so the values total 1.
struct OutcomeDistribution {
    std::map<std::string, double> probabilities;

    double p_d0() const { return at_or_zero("D0"); }
    double p_d1() const { return at_or_zero("D1"); }
    double at_or_zero(const std::string& key) const;
    double total() const;
};

struct GateResult {
    OutcomeDistribution distribution;
    std::complex<double> amp_d0{};  // output-port amplitudes before detection
    std::complex<double> amp_d1{};
    // NOR only: |010> amplitude right after each middle-interferometer
    // recombination (must vanish whenever any input is 1).
    std::vector<double> recombination_residuals;
};

// A gate network plus the location of its output ports. Build once per
// configuration; the block pattern is applied at run time.
struct GateNetwork {
    Netlist net;
    std::size_t d0_terminal = 0;
    std::size_t d1_terminal = 0;
};

GateNetwork build_gate_network(const GateConfig& cfg);

// Variant for the counterfactuality audit: every channel-carrying subunit
// whose channels are unblocked under `inputs` is replaced by a perfect
// absorber (blocked channels already absorb, so they are left untouched).
GateNetwork build_audit_network(const GateConfig& cfg, const PartyInputs& inputs);

PartyMask block_mask_from_inputs(const PartyInputs& inputs);

GateResult simulate_gate(const GateNetwork& network, const PartyInputs& inputs,
                         const std::function<bool()>& noise_block = {});
GateResult simulate_gate(const GateConfig& cfg, const PartyInputs& inputs);

// Spec-facing wrappers.
OutcomeDistribution run_nand2(const GateConfig& cfg, const PartyInputs& inputs);
OutcomeDistribution run_nand_multi(const GateConfig& cfg, const PartyInputs& inputs);
OutcomeDistribution run_nor(const GateConfig& cfg, const PartyInputs& inputs);
OutcomeDistribution run_xor(const GateConfig& cfg, const PartyInputs& inputs);

// Expected output bit per the gate truth table.
int truth_table_output(GateKind kind, const PartyInputs& inputs);

// Leading-order closed-form predictions for the output detectors. These are
// the quantities the exact simulation is compared against; the losing
// detector is 0 in this limit.
struct TheoryPrediction {
    double p_d0 = 0.0;
    double p_d1 = 0.0;
};
TheoryPrediction theory_prediction(const GateConfig& cfg, const PartyInputs& inputs);

namespace theory {

// Probability of losing the photon into the channel arms of a chain of
// `bs_count` splitters of order M when each visit costs 1 - cos^{2N}(pi/2N):
// sum_k sin^2(k pi / 2M) (1 - cos^{2N}(pi/2N)).
double channel_leak_sum(int bs_count, int m, int n);

double nand_unblocked_d0(int m);          // cos^{2M}(pi/2M), exact
double nand_blocked_d1(int m, int n);     // 1 - M pi^2 / 8N
double nor_all_blocked_d1(int m, int n);  // 1 - 3 pi^2 M / 4N
double nor_unblocked_d0(int m);           // 1 - pi^2 / 4M
double xor_loss_blocked(int m, int n);    // P0, sum form
double xor_loss_unblocked(int m);         // P1 = 1 - cos^{4M}(pi/2M)

}  // namespace theory

// Runs the gate normally and with the absorber substitution and reports the
// largest output-amplitude difference over the detectors for which the
// protocol claims counterfactuality, plus the worst NOR recombination
// residual when any input is 1.
struct AuditReport {
    double max_deviation = 0.0;
    double max_recombination_residual = 0.0;
    std::map<std::string, double> per_detector_deviation;
};
AuditReport counterfactual_audit(const GateConfig& cfg, const PartyInputs& inputs);

}  // namespace cfgates
