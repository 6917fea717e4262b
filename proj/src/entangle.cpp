#include "cfgates/entangle.hpp"

#include <cmath>
#include <stdexcept>

namespace cfgates {

namespace {

constexpr double norm_tolerance = 1e-9;

void check_normalized(const AtomState& atom) {
    const double n = std::norm(atom.c_g) + std::norm(atom.c_e);
    if (std::abs(n - 1.0) > norm_tolerance)
        throw std::invalid_argument("atom state is not normalized");
}

PartyInputs inputs_from_config(std::uint32_t config, int k) {
    PartyInputs inputs(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) inputs[static_cast<std::size_t>(i)] = (config >> i) & 1;
    return inputs;
}

}  // namespace

AtomState atom_ground() { return {{1.0, 0.0}, {0.0, 0.0}}; }
AtomState atom_excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }
AtomState atom_plus() { return {{M_SQRT1_2, 0.0}, {M_SQRT1_2, 0.0}}; }

AtomState atom_superposition(std::complex<double> c_g, std::complex<double> c_e) {
    AtomState atom{c_g, c_e};
    check_normalized(atom);
    return atom;
}

std::array<AtomState, 3> default_preparation() {
    return {atom_plus(), atom_plus(), atom_plus()};
}

std::string config_name(std::uint32_t config, int parties) {
    std::string name(static_cast<std::size_t>(parties), 'g');
    for (int i = 0; i < parties; ++i)
        if ((config >> i) & 1) name[static_cast<std::size_t>(i)] = 'e';
    return name;
}

double BranchEnsemble::total_probability() const {
    double total = 0.0;
    for (const Branch& b : branches)
        total += std::norm(b.weight) * b.photon.distribution.total();
    return total;
}

BranchEnsemble run_gate_quantum(const GateConfig& cfg, const std::vector<AtomState>& controllers) {
    const int k = gate_arity(cfg.kind, cfg.parties);
    if (static_cast<int>(controllers.size()) != k)
        throw std::invalid_argument("run_gate_quantum: one atom per controlling party required");
    for (const AtomState& atom : controllers) check_normalized(atom);

    GateNetwork network = build_gate_network(cfg);

    BranchEnsemble ensemble;
    ensemble.controllers = k;
    ensemble.branches.reserve(std::size_t{1} << k);
    for (std::uint32_t config = 0; config < (1u << k); ++config) {
        Branch branch;
        branch.config = config;
        branch.weight = {1.0, 0.0};
        for (int i = 0; i < k; ++i)
            branch.weight *= ((config >> i) & 1) ? controllers[static_cast<std::size_t>(i)].c_e
                                                 : controllers[static_cast<std::size_t>(i)].c_g;
        branch.photon = simulate_gate(network, inputs_from_config(config, k));
        ensemble.branches.push_back(std::move(branch));
    }
    return ensemble;
}

namespace {

// Ideal-limit gate map: the photon leaves on the truth-table port with unit
// amplitude; nothing is lost.
GateResult ideal_gate_result(GateKind kind, const PartyInputs& inputs) {
    GateResult r;
    const int out = truth_table_output(kind, inputs);
    (out == 0 ? r.amp_d0 : r.amp_d1) = 1.0;
    r.distribution.probabilities["D0"] = out == 0 ? 1.0 : 0.0;
    r.distribution.probabilities["D1"] = out == 1 ? 1.0 : 0.0;
    return r;
}

// Failure keys: switchable-detector absorption while the controller atom is
// in |g> is a heralded D_u event for that party.
std::string failure_key(const std::string& sink_label, const std::vector<int>& bindings) {
    for (std::size_t role = 0; role < bindings.size(); ++role) {
        if (sink_label == sw_sink_label(static_cast<int>(role)))
            return "D_u_" + party_name(bindings[role]);
    }
    return sink_label;
}

struct BranchAmp {
    std::uint32_t config;
    std::complex<double> amp;
};

struct PipelineEvaluation {
    std::vector<BranchAmp> final_amps;  // amplitude on the designated port
    std::map<std::string, double> failures;
    StagePort designated = StagePort::output0;
    double success = 0.0;
};

PipelineEvaluation evaluate_pipeline(const PipelineSpec& spec, bool ideal,
                                     std::optional<StagePort> designated_override) {
    if (spec.stages.empty()) throw std::invalid_argument("pipeline: no stages");
    if (static_cast<int>(spec.preparations.size()) != spec.parties)
        throw std::invalid_argument("pipeline: one preparation per party required");
    for (const AtomState& atom : spec.preparations) check_normalized(atom);
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const PipelineStage& stage = spec.stages[i];
        const int arity = gate_arity(stage.gate.kind, stage.gate.parties);
        if (static_cast<int>(stage.bindings.size()) != arity)
            throw std::invalid_argument("pipeline: stage binding arity mismatch");
        for (int party : stage.bindings)
            if (party < 0 || party >= spec.parties)
                throw std::invalid_argument("pipeline: stage binds unknown party");
        if (!stage.postselect && i + 1 != spec.stages.size())
            throw std::invalid_argument("pipeline: measure stage must be terminal");
    }

    // Branch amplitudes over all controller configurations.
    const int parties = spec.parties;
    std::vector<BranchAmp> branches;
    branches.reserve(std::size_t{1} << parties);
    for (std::uint32_t config = 0; config < (1u << parties); ++config) {
        std::complex<double> w{1.0, 0.0};
        for (int p = 0; p < parties; ++p)
            w *= ((config >> p) & 1) ? spec.preparations[static_cast<std::size_t>(p)].c_e
                                     : spec.preparations[static_cast<std::size_t>(p)].c_g;
        branches.push_back({config, w});
    }

    PipelineEvaluation eval;
    std::map<std::string, double>& failures = eval.failures;

    // Exact gate networks and per-pattern results, shared across stages.
    std::map<GateConfig, GateNetwork> networks;
    auto gate_result = [&](const PipelineStage& stage,
                           const PartyInputs& pattern) -> GateResult {
        if (ideal) return ideal_gate_result(stage.gate.kind, pattern);
        auto it = networks.find(stage.gate);
        if (it == networks.end())
            it = networks.emplace(stage.gate, build_gate_network(stage.gate)).first;
        return simulate_gate(it->second, pattern);
    };

    for (std::size_t si = 0; si < spec.stages.size(); ++si) {
        const PipelineStage& stage = spec.stages[si];
        const int arity = static_cast<int>(stage.bindings.size());

        // The photon dynamics depend only on the bound parties' levels, so
        // each block pattern runs at most once per stage, on demand.
        std::map<std::uint32_t, GateResult> pattern_results;
        auto result_for = [&](std::uint32_t pat) -> const GateResult& {
            auto it = pattern_results.find(pat);
            if (it == pattern_results.end())
                it = pattern_results
                         .emplace(pat, gate_result(stage, inputs_from_config(pat, arity)))
                         .first;
            return it->second;
        };

        const bool terminal = !stage.postselect.has_value();
        StagePort port = stage.postselect.value_or(StagePort::output0);
        if (terminal) {
            // A measure stage reports the port with the larger ideal-limit
            // success probability (ties go to output 0).
            double p0 = 0.0, p1 = 0.0;
            for (const BranchAmp& b : branches) {
                std::uint32_t pat = 0;
                for (int r = 0; r < arity; ++r)
                    pat |= ((b.config >> stage.bindings[static_cast<std::size_t>(r)]) & 1u) << r;
                const int out = truth_table_output(stage.gate.kind, inputs_from_config(pat, arity));
                (out == 0 ? p0 : p1) += std::norm(b.amp);
            }
            port = p1 > p0 ? StagePort::output1 : StagePort::output0;
            if (designated_override) port = *designated_override;
            eval.designated = port;
        }

        for (BranchAmp& b : branches) {
            if (b.amp == std::complex<double>{}) continue;
            std::uint32_t pat = 0;
            for (int r = 0; r < arity; ++r)
                pat |= ((b.config >> stage.bindings[static_cast<std::size_t>(r)]) & 1u) << r;
            const GateResult& r = result_for(pat);
            const double weight2 = std::norm(b.amp);

            // Everything the gate absorbed internally is a pipeline failure.
            for (const auto& [label, p] : r.distribution.probabilities) {
                if (label == "D0" || label == "D1") continue;
                if (p != 0.0) failures[failure_key(label, stage.bindings)] += weight2 * p;
            }
            const std::complex<double> keep =
                port == StagePort::output0 ? r.amp_d0 : r.amp_d1;
            const std::complex<double> reject =
                port == StagePort::output0 ? r.amp_d1 : r.amp_d0;
            if (std::norm(reject) != 0.0) {
                const std::string label = terminal
                                              ? (port == StagePort::output0 ? "D1" : "D0")
                                              : stage.reject_label;
                failures[label] += weight2 * std::norm(reject);
            }
            b.amp *= keep;
        }
    }

    for (const BranchAmp& b : branches) eval.success += std::norm(b.amp);
    eval.final_amps = std::move(branches);
    return eval;
}

}  // namespace

PipelineResult run_pipeline(const PipelineSpec& spec, bool ideal) {
    // The designated measurement port and the fidelity target both come from
    // the ideal-limit evaluation.
    PipelineEvaluation target = evaluate_pipeline(spec, true, std::nullopt);
    PipelineEvaluation eval =
        ideal ? target : evaluate_pipeline(spec, false, target.designated);

    PipelineResult result;
    result.designated_port = target.designated;
    result.success_probability = eval.success;
    for (const auto& [label, p] : eval.failures) result.failure_breakdown[label] = p;
    for (const BranchAmp& b : eval.final_amps) {
        if (b.amp != std::complex<double>{})
            result.postselected_amplitudes[config_name(b.config, spec.parties)] = b.amp;
    }

    // Pure-state overlap with the renormalized ideal-limit postselection.
    if (eval.success > 0.0 && target.success > 0.0) {
        std::complex<double> overlap{};
        for (std::size_t i = 0; i < eval.final_amps.size(); ++i)
            overlap += std::conj(target.final_amps[i].amp) * eval.final_amps[i].amp;
        result.fidelity = std::norm(overlap) / (eval.success * target.success);
    }
    return result;
}

PipelineSpec ghz_spec(int m, int n) {
    PipelineSpec spec;
    spec.parties = 3;
    spec.preparations = {atom_plus(), atom_plus(), atom_plus()};
    GateConfig xg{GateKind::xor_, m, n, 2};
    spec.stages.push_back({xg, {party_bob, party_charlie}, StagePort::output0, "D_F"});
    spec.stages.push_back({xg, {party_charlie, party_david}, std::nullopt, ""});
    return spec;
}

PipelineSpec w_spec(int m, int n) {
    PipelineSpec spec;
    spec.parties = 3;
    spec.preparations = {atom_plus(), atom_plus(), atom_plus()};
    GateConfig nor{GateKind::nor, m, n, 2};
    GateConfig nand3{GateKind::nand_multi, m, n, 3};
    spec.stages.push_back({nor, {party_bob, party_charlie}, StagePort::output0, "D_F1"});
    spec.stages.push_back({nor, {party_bob, party_david}, StagePort::output0, "D_F2"});
    spec.stages.push_back({nor, {party_charlie, party_david}, StagePort::output0, "D_F3"});
    spec.stages.push_back({nand3, {party_bob, party_charlie, party_david}, std::nullopt, ""});
    return spec;
}

namespace {

PipelineResult run_three_party(PipelineSpec spec, const std::array<AtomState, 3>& preparation,
                               bool ideal) {
    spec.preparations = {preparation[0], preparation[1], preparation[2]};
    return run_pipeline(spec, ideal);
}

// The W protocol ends with every party flipping |e> <-> |g>; the flip is a
// relabeling of the reported state, not a simulated operation.
void apply_bit_flip(PipelineResult& result) {
    std::map<std::string, std::complex<double>> flipped;
    for (const auto& [name, amp] : result.postselected_amplitudes) {
        std::string f = name;
        for (char& c : f) c = (c == 'g') ? 'e' : 'g';
        flipped[f] = amp;
    }
    result.postselected_amplitudes = std::move(flipped);
}

}  // namespace

PipelineResult ghz_pipeline(int m, int n, const std::array<AtomState, 3>& preparation) {
    return run_three_party(ghz_spec(m, n), preparation, false);
}

PipelineResult w_pipeline(int m, int n, const std::array<AtomState, 3>& preparation) {
    PipelineResult result = run_three_party(w_spec(m, n), preparation, false);
    apply_bit_flip(result);
    return result;
}

PipelineResult ideal_oracle(PipelineKind kind, const std::array<AtomState, 3>& preparation) {
    if (kind == PipelineKind::ghz) return run_three_party(ghz_spec(8, 64), preparation, true);
    PipelineResult result = run_three_party(w_spec(8, 64), preparation, true);
    apply_bit_flip(result);
    return result;
}

}  // namespace cfgates
