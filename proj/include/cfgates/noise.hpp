#pragma once

#include <cstdint>
#include <vector>

#include "cfgates/gates.hpp"

namespace cfgates {

// Channel-noise model: every transmission-channel segment whose owners all
// unblock is independently replaced by an absorber with probability gamma.
// `per_run` instead draws once per sample and blocks the whole channel.
struct NoiseModel {
    double gamma = 0.0;
    int samples = 1;
    std::uint64_t seed = 0;
    enum class Policy { per_segment, per_run } policy = Policy::per_segment;
};

struct EffectiveProbabilities {
    double mean_p_d0 = 0.0;  // sample mean of P(D0)
    double mean_p_d1 = 0.0;
    double e_d0 = 0.0;       // mean_p_d0 / (mean_p_d0 + mean_p_d1)
    double e_d1 = 0.0;
    double stderr_e_d0 = 0.0;
    double stderr_e_d1 = 0.0;
    int samples = 0;
    bool defined = true;     // false when no sample produced any output
};

// Deterministic stream derivation so grid points and samples are
// independent and reproducible regardless of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c);

EffectiveProbabilities run_noisy(const GateConfig& cfg, const PartyInputs& inputs,
                                 const NoiseModel& model);

struct NoiseSweepRow {
    double gamma = 0.0;
    EffectiveProbabilities values;
};

std::vector<NoiseSweepRow> noise_sweep(const GateConfig& cfg, const PartyInputs& inputs,
                                       const std::vector<double>& gamma_grid,
                                       const NoiseModel& model);

}  // namespace cfgates
