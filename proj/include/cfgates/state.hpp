#pragma once

#include <complex>
#include <cstdint>
#include <unordered_map>

namespace cfgates {

// Spatial mode of the single photon. Ids are handed out by a Netlist; the
// value itself is just an opaque handle.
struct ModeId {
    std::int32_t value = -1;
    friend bool operator==(ModeId, ModeId) = default;
};

// Probability sink: a detector or absorber name. Once probability lands in a
// sink it never interferes again.
struct SinkId {
    std::int32_t value = -1;
    friend bool operator==(SinkId, SinkId) = default;
};

struct ModeIdHash {
    std::size_t operator()(ModeId m) const noexcept { return std::hash<std::int32_t>{}(m.value); }
};
struct SinkIdHash {
    std::size_t operator()(SinkId s) const noexcept { return std::hash<std::int32_t>{}(s.value); }
};

// Unnormalized single-photon state: complex amplitudes over live spatial
// modes plus accumulated detection probabilities per sink. Amplitudes are
// never renormalized mid-run, so live_norm() + sink_total() must stay at 1.
//
// Internally amplitudes and sinks are kept in extended precision; the public
// surface is double. Networks apply millions of rotations and the 1e-12
// conservation budget does not survive plain double accumulation.
class PhotonState {
public:
    using Amplitude = std::complex<double>;

    PhotonState() = default;

    // State with unit amplitude on a single mode and empty sinks.
    static PhotonState at(ModeId initial);

    Amplitude amplitude(ModeId m) const;
    double mode_probability(ModeId m) const;
    double sink_probability(SinkId s) const;

    double live_norm() const;
    double sink_total() const;

    // Rotation on the (left, right) subspace:
    //   a_L -> a_L cos(theta) - a_R sin(theta)
    //   a_R -> a_L sin(theta) + a_R cos(theta)
    // The sign convention (minus on the right-to-left reflection) is fixed
    // here once; builders orient each physical splitter against it.
    void apply_beam_splitter(double theta, ModeId left, ModeId right);
    void apply_rotation(long double c, long double s, ModeId left, ModeId right);

    // Multiplies the amplitude at `mode` by e^{i phase}. Phases of exactly
    // +/-pi multiply by -1 so real networks stay exactly real.
    void apply_phase_shift(ModeId mode, double phase);

    // Moves |amplitude|^2 into the sink and clears the mode.
    void absorb_mode(ModeId mode, SinkId sink);

    // Lossless transfer of amplitude from one mode to another (mirror/wire).
    void route(ModeId from, ModeId to);

    std::size_t live_mode_count() const { return amps_.size(); }
    std::size_t sink_count() const { return sinks_.size(); }

    template <typename F>
    void for_each_sink(F&& f) const {
        for (const auto& [sink, p] : sinks_) f(sink, static_cast<double>(p));
    }
    template <typename F>
    void for_each_amplitude(F&& f) const {
        for (const auto& [mode, a] : amps_) f(mode, Amplitude(static_cast<double>(a.real()), static_cast<double>(a.imag())));
    }

    friend bool operator==(const PhotonState&, const PhotonState&);

private:
    std::unordered_map<ModeId, std::complex<long double>, ModeIdHash> amps_;
    std::unordered_map<SinkId, long double, SinkIdHash> sinks_;
};

}  // namespace cfgates
