#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfgates/state.hpp"

namespace cfgates {

// Parties that can control transmission-channel arms. Channel ownership is a
// bitmask so a shared arm can be guarded by several switchable detectors in
// series.
enum Party : int { party_bob = 0, party_charlie = 1, party_david = 2 };
using PartyMask = std::uint32_t;

constexpr PartyMask party_bit(int party) { return PartyMask{1} << party; }

std::string party_name(int party);

enum class ElementKind : std::uint8_t {
    beam_splitter,  // a = left mode, b = right mode, param = theta
    phase_shift,    // a = mode, param = phase
    absorb,         // a = mode, b = sink
    channel,        // a = mode, b = owner mask; blocked/unblocked at run time
    route,          // a = from, b = to (mirror / waveguide relabeling)
    probe,          // a = mode, b = probe tag index; diagnostic only
};

struct Element {
    ElementKind kind;
    ModeId a;
    std::int32_t b = -1;
    double param = 0.0;
};

struct ProbeSample {
    std::int32_t tag = -1;
    std::complex<double> amplitude;
};

// Temporally ordered list of primitive optical elements plus the mode/sink
// name tables. A netlist is built once per gate configuration; the party
// block pattern is resolved at run time, so one netlist serves classical
// runs, quantum branches, and noise samples alike.
class Netlist {
public:
    ModeId add_mode();
    ModeId add_mode(const std::string& label);
    SinkId add_sink(const std::string& label);   // label must be unique
    SinkId sink(const std::string& label) const; // throws if missing
    bool has_sink(const std::string& label) const;

    std::int32_t add_probe_tag(const std::string& tag);

    void beam_splitter(double theta, ModeId left, ModeId right);
    void phase_shift(ModeId mode, double phase);
    void absorb(ModeId mode, SinkId sink);
    void channel(ModeId mode, PartyMask owners);
    void route(ModeId from, ModeId to);
    void probe(std::int32_t tag, ModeId mode);

    // Attenuator: beam splitter that transmits `through_amplitude` of the
    // incoming amplitude into a fresh continuation mode and dumps the rest
    // into `loss`. Returns the continuation mode.
    ModeId attenuator(ModeId arm, double through_amplitude, SinkId loss);

    void set_input(ModeId m) { input_ = m; }
    ModeId input() const { return input_; }

    // Terminal ports: modes read out (amplitude) and then absorbed after all
    // elements ran. Returns the terminal index.
    std::size_t terminal(ModeId mode, SinkId sink);

    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<std::pair<ModeId, SinkId>>& terminals() const { return terminals_; }
    std::size_t terminal_count() const { return terminals_.size(); }

    int mode_count() const { return next_mode_; }
    std::string mode_label(ModeId m) const;
    std::string sink_label(SinkId s) const;
    std::string probe_tag(std::int32_t idx) const { return probe_tags_.at(static_cast<std::size_t>(idx)); }
    std::size_t sink_table_size() const { return sink_labels_.size(); }

    // Parties whose switchable detectors appear anywhere in the netlist.
    PartyMask parties() const { return parties_; }

private:
    void check_mode(ModeId m, const char* what) const;

    std::vector<Element> elements_;
    std::vector<std::pair<ModeId, SinkId>> terminals_;
    std::int32_t next_mode_ = 0;
    std::unordered_map<std::string, std::int32_t> sink_index_;
    std::vector<std::string> sink_labels_;
    std::unordered_map<std::int32_t, std::string> mode_names_;
    std::unordered_map<std::string, std::int32_t> mode_index_;
    std::vector<std::string> probe_tags_;
    ModeId input_{};
    PartyMask parties_ = 0;
};

PhotonState new_state(const Netlist& net, ModeId initial);

struct RunOptions {
    // Bit set => that party blocks (input 0). Unset => unblock (input 1).
    PartyMask block_mask = 0;
    // Called for channel segments left unblocked by their owners; returning
    // true absorbs the segment into the noise sink (unexpected blocking).
    std::function<bool()> noise_block;
    // When set, probe samples are appended here.
    std::vector<ProbeSample>* probes = nullptr;
};

struct RunOutcome {
    PhotonState state;  // after terminal absorption
    std::vector<std::complex<double>> terminal_amplitudes;
};

// Evaluates the element list in order on a fresh photon at the input mode.
RunOutcome run_netlist(const Netlist& net, const RunOptions& options = {});

// Sink labels used by the builders.
inline constexpr const char* sink_d0 = "D0";
inline constexpr const char* sink_d1 = "D1";
inline constexpr const char* sink_d2 = "D2";
inline constexpr const char* sink_d3 = "D3";
inline constexpr const char* sink_att1 = "D_A1";
inline constexpr const char* sink_att2 = "D_A2";
inline constexpr const char* sink_noise = "noise";
inline constexpr const char* sink_combined = "D_combined";

std::string sw_sink_label(int party);  // "SW_B", "SW_C", ...

}  // namespace cfgates
