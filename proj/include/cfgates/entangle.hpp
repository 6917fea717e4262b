#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfgates/gates.hpp"

namespace cfgates {

// Quantum channel controller: a V-type three-level atom. |g> absorbs the
// photon (blocking, heralded by a D_u click), |e> is transparent
// (unblocking). Amplitudes must be normalized.
struct AtomState {
    std::complex<double> c_g{1.0, 0.0};
    std::complex<double> c_e{0.0, 0.0};
};

AtomState atom_ground();
AtomState atom_excited();
AtomState atom_plus();  // (|g> + |e>)/sqrt(2)
AtomState atom_superposition(std::complex<double> c_g, std::complex<double> c_e);

// One classical branch of a quantum-controlled run: the controllers'
// configuration (bit set = |e>, unblock), the product of atom amplitudes,
// and the photon outcome under the induced block pattern.
struct Branch {
    std::uint32_t config = 0;
    std::complex<double> weight{};
    GateResult photon;
};

struct BranchEnsemble {
    int controllers = 0;
    std::vector<Branch> branches;

    // sum over branches of |weight|^2 (live + sinks); must equal 1.
    double total_probability() const;
};

// Enumerates all 2^k controller configurations and runs the exact gate for
// each. Branches never interfere: distinct atomic configurations stay
// orthogonal through the whole evolution.
BranchEnsemble run_gate_quantum(const GateConfig& cfg, const std::vector<AtomState>& controllers);

enum class StagePort { output0, output1 };

struct PipelineStage {
    GateConfig gate;
    std::vector<int> bindings;             // global party index per gate role
    std::optional<StagePort> postselect;   // empty = terminal measure
    std::string reject_label;              // failure sink name for postselection
};

struct PipelineSpec {
    int parties = 0;
    std::vector<AtomState> preparations;   // indexed by global party
    std::vector<PipelineStage> stages;
};

struct PipelineResult {
    double success_probability = 0.0;
    // Joint controller configuration ("gge", ...) -> unnormalized amplitude.
    std::map<std::string, std::complex<double>> postselected_amplitudes;
    double fidelity = 0.0;                 // vs the ideal-limit postselected state
    std::map<std::string, double> failure_breakdown;
    StagePort designated_port = StagePort::output0;
};

// Runs the postselection pipeline branch by branch. `ideal` replaces the
// exact gate simulation with the ideal-limit maps (unit transfer onto the
// truth-table port).
PipelineResult run_pipeline(const PipelineSpec& spec, bool ideal);

enum class PipelineKind { ghz, w };

PipelineSpec ghz_spec(int m, int n);
PipelineSpec w_spec(int m, int n);

std::array<AtomState, 3> default_preparation();

// GHZ: XOR(Bob,Charlie) postselected on output 0, then XOR(Charlie,David)
// measured; D0 heralds (|ggg> + |eee>)/sqrt(2) with ideal success 1/4.
PipelineResult ghz_pipeline(int m, int n,
                            const std::array<AtomState, 3>& preparation = default_preparation());

// W: NOR(B,C), NOR(B,D), NOR(C,D) each postselected on output 0, then a
// three-party NAND measured; D1 heralds the W state (after the bit-flip
// relabeling |e> <-> |g|) with ideal success 3/8.
PipelineResult w_pipeline(int m, int n,
                          const std::array<AtomState, 3>& preparation = default_preparation());

// The pipelines evaluated with the ideal gate maps instead of finite (M, N).
PipelineResult ideal_oracle(PipelineKind kind,
                            const std::array<AtomState, 3>& preparation = default_preparation());

std::string config_name(std::uint32_t config, int parties);  // e.g. "gge"

}  // namespace cfgates
