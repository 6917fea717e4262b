#include "cfgates/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cfgates {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform [0, 1) built from the top 53 bits; identical across standard
// libraries, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t x = seed;
    std::uint64_t h = splitmix64(x);
    x ^= a * 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(x);
    x ^= b * 0xff51afd7ed558ccdULL;
    h ^= splitmix64(x);
    x ^= c * 0xc4ceb9fe1a85ec53ULL;
    h ^= splitmix64(x);
    return h;
}

EffectiveProbabilities run_noisy(const GateConfig& cfg, const PartyInputs& inputs,
                                 const NoiseModel& model) {
    if (model.samples < 1) throw std::invalid_argument("noise: samples must be >= 1");
    if (model.gamma < 0.0 || model.gamma > 1.0)
        throw std::invalid_argument("noise: gamma must be in [0, 1]");

    GateNetwork network = build_gate_network(cfg);

    std::uint64_t input_code = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        input_code |= static_cast<std::uint64_t>(inputs[i] & 1) << i;

    long double sum0 = 0.0L, sum1 = 0.0L;
    long double sum00 = 0.0L, sum11 = 0.0L, sum01 = 0.0L;

    for (int s = 0; s < model.samples; ++s) {
        std::mt19937_64 rng(derive_seed(model.seed, static_cast<std::uint64_t>(s), input_code,
                                        static_cast<std::uint64_t>(model.policy)));
        std::function<bool()> noise_block;
        if (model.gamma > 0.0) {
            if (model.policy == NoiseModel::Policy::per_segment) {
                noise_block = [&rng, g = model.gamma]() { return uniform01(rng) < g; };
            } else {
                const bool blocked = uniform01(rng) < model.gamma;
                noise_block = [blocked]() { return blocked; };
            }
        }
        GateResult r = simulate_gate(network, inputs, noise_block);
        const double p0 = r.distribution.p_d0();
        const double p1 = r.distribution.p_d1();
        sum0 += p0;
        sum1 += p1;
        sum00 += static_cast<long double>(p0) * p0;
        sum11 += static_cast<long double>(p1) * p1;
        sum01 += static_cast<long double>(p0) * p1;
    }

    const double n = model.samples;
    EffectiveProbabilities out;
    out.samples = model.samples;
    out.mean_p_d0 = static_cast<double>(sum0 / n);
    out.mean_p_d1 = static_cast<double>(sum1 / n);
    const double denom = out.mean_p_d0 + out.mean_p_d1;
    if (denom <= 0.0) {
        out.defined = false;
        out.e_d0 = out.e_d1 = std::nan("");
        out.stderr_e_d0 = out.stderr_e_d1 = std::nan("");
        return out;
    }
    out.e_d0 = out.mean_p_d0 / denom;
    out.e_d1 = out.mean_p_d1 / denom;

    // Delta-method standard error of A/(A+B) from the sample covariance of
    // the per-sample (P0, P1).
    const double a = out.mean_p_d0, b = out.mean_p_d1;
    const double var0 = std::max(0.0, static_cast<double>(sum00 / n) - a * a);
    const double var1 = std::max(0.0, static_cast<double>(sum11 / n) - b * b);
    const double cov = static_cast<double>(sum01 / n) - a * b;
    const double d4 = denom * denom * denom * denom;
    const double var_e = (b * b * var0 + a * a * var1 - 2.0 * a * b * cov) / d4;
    const double se = std::sqrt(std::max(0.0, var_e) / n);
    out.stderr_e_d0 = se;
    out.stderr_e_d1 = se;  // E_D1 = 1 - E_D0
    return out;
}

std::vector<NoiseSweepRow> noise_sweep(const GateConfig& cfg, const PartyInputs& inputs,
                                       const std::vector<double>& gamma_grid,
                                       const NoiseModel& model) {
    if (gamma_grid.empty()) throw std::invalid_argument("noise sweep: empty gamma grid");
    std::vector<NoiseSweepRow> rows;
    rows.reserve(gamma_grid.size());
    for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
        NoiseModel point = model;
        point.gamma = gamma_grid[g];
        point.seed = derive_seed(model.seed, 0x67726964ULL, g, 0);  // per grid point stream
        rows.push_back({gamma_grid[g], run_noisy(cfg, inputs, point)});
    }
    return rows;
}

}  // namespace cfgates
