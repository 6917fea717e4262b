#include "cfgates/netlist.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace cfgates {

std::string party_name(int party) {
    switch (party) {
        case party_bob: return "bob";
        case party_charlie: return "charlie";
        case party_david: return "david";
        default: return "party" + std::to_string(party);
    }
}

std::string sw_sink_label(int party) {
    switch (party) {
        case party_bob: return "SW_B";
        case party_charlie: return "SW_C";
        case party_david: return "SW_D";
        default: return "SW_" + std::to_string(party);
    }
}

ModeId Netlist::add_mode() { return ModeId{next_mode_++}; }

ModeId Netlist::add_mode(const std::string& label) {
    if (mode_index_.contains(label)) throw std::invalid_argument("duplicate mode label: " + label);
    ModeId m{next_mode_++};
    mode_index_.emplace(label, m.value);
    mode_names_.emplace(m.value, label);
    return m;
}

SinkId Netlist::add_sink(const std::string& label) {
    auto it = sink_index_.find(label);
    if (it != sink_index_.end()) return SinkId{it->second};
    SinkId s{static_cast<std::int32_t>(sink_labels_.size())};
    sink_labels_.push_back(label);
    sink_index_.emplace(label, s.value);
    return s;
}

SinkId Netlist::sink(const std::string& label) const {
    auto it = sink_index_.find(label);
    if (it == sink_index_.end()) throw std::invalid_argument("unknown sink: " + label);
    return SinkId{it->second};
}

bool Netlist::has_sink(const std::string& label) const { return sink_index_.contains(label); }

std::int32_t Netlist::add_probe_tag(const std::string& tag) {
    probe_tags_.push_back(tag);
    return static_cast<std::int32_t>(probe_tags_.size() - 1);
}

void Netlist::check_mode(ModeId m, const char* what) const {
    if (m.value < 0 || m.value >= next_mode_)
        throw std::invalid_argument(std::string(what) + ": unknown mode");
}

void Netlist::beam_splitter(double theta, ModeId left, ModeId right) {
    check_mode(left, "beam splitter");
    check_mode(right, "beam splitter");
    if (left == right) throw std::invalid_argument("beam splitter: left == right");
    elements_.push_back({ElementKind::beam_splitter, left, right.value, theta});
}

void Netlist::phase_shift(ModeId mode, double phase) {
    check_mode(mode, "phase shift");
    elements_.push_back({ElementKind::phase_shift, mode, -1, phase});
}

void Netlist::absorb(ModeId mode, SinkId sink) {
    check_mode(mode, "absorb");
    elements_.push_back({ElementKind::absorb, mode, sink.value, 0.0});
}

void Netlist::channel(ModeId mode, PartyMask owners) {
    check_mode(mode, "channel");
    if (owners == 0) throw std::invalid_argument("channel: empty owner mask");
    parties_ |= owners;
    for (int p = 0; p < 32; ++p)
        if ((owners & party_bit(p)) != 0) add_sink(sw_sink_label(p));
    add_sink(sink_noise);
    elements_.push_back({ElementKind::channel, mode, static_cast<std::int32_t>(owners), 0.0});
}

void Netlist::route(ModeId from, ModeId to) {
    check_mode(from, "route");
    check_mode(to, "route");
    elements_.push_back({ElementKind::route, from, to.value, 0.0});
}

void Netlist::probe(std::int32_t tag, ModeId mode) {
    check_mode(mode, "probe");
    elements_.push_back({ElementKind::probe, mode, tag, 0.0});
}

ModeId Netlist::attenuator(ModeId arm, double through_amplitude, SinkId loss) {
    if (!(through_amplitude > 0.0 && through_amplitude <= 1.0))
        throw std::invalid_argument("attenuator: through amplitude must be in (0, 1]");
    ModeId cont = add_mode();
    beam_splitter(std::asin(through_amplitude), arm, cont);
    absorb(arm, loss);
    return cont;
}

std::size_t Netlist::terminal(ModeId mode, SinkId sink) {
    check_mode(mode, "terminal");
    terminals_.emplace_back(mode, sink);
    return terminals_.size() - 1;
}

std::string Netlist::mode_label(ModeId m) const {
    auto it = mode_names_.find(m.value);
    if (it != mode_names_.end()) return it->second;
    return "mode#" + std::to_string(m.value);
}

std::string Netlist::sink_label(SinkId s) const {
    return sink_labels_.at(static_cast<std::size_t>(s.value));
}

PhotonState new_state(const Netlist& net, ModeId initial) {
    if (initial.value < 0 || initial.value >= net.mode_count())
        throw std::invalid_argument("new_state: mode not part of this netlist");
    return PhotonState::at(initial);
}

namespace {

// Rotation coefficients in extended precision, cached per angle. Gate
// networks reuse a handful of angles across millions of elements.
class RotationCache {
public:
    std::pair<long double, long double> get(double theta) {
        for (const auto& e : entries_)
            if (e.theta == theta) return {e.c, e.s};
        const long double t = theta;
        entries_.push_back({theta, std::cos(t), std::sin(t)});
        const auto& e = entries_.back();
        return {e.c, e.s};
    }

private:
    struct Entry {
        double theta;
        long double c, s;
    };
    std::vector<Entry> entries_;
};

}  // namespace

RunOutcome run_netlist(const Netlist& net, const RunOptions& options) {
    if (net.input().value < 0) throw std::logic_error("run_netlist: netlist has no input mode");

    RunOutcome out{new_state(net, net.input()), {}};
    PhotonState& st = out.state;
    RotationCache rotations;

    const bool has_noise = static_cast<bool>(options.noise_block);
    const SinkId noise_sink = net.has_sink(sink_noise) ? net.sink(sink_noise) : SinkId{};

    std::array<SinkId, 32> party_sink{};
    for (int p = 0; p < 32; ++p) {
        if ((net.parties() & party_bit(p)) != 0) party_sink[p] = net.sink(sw_sink_label(p));
    }

    for (const Element& e : net.elements()) {
        switch (e.kind) {
            case ElementKind::beam_splitter: {
                auto [c, s] = rotations.get(e.param);
                st.apply_rotation(c, s, e.a, ModeId{e.b});
                break;
            }
            case ElementKind::phase_shift:
                st.apply_phase_shift(e.a, e.param);
                break;
            case ElementKind::absorb:
                st.absorb_mode(e.a, SinkId{e.b});
                break;
            case ElementKind::channel: {
                const PartyMask owners = static_cast<PartyMask>(e.b);
                const PartyMask blockers = owners & options.block_mask;
                if (blockers != 0) {
                    // The photon is caught by the first switchable detector
                    // along the arm (lowest party index).
                    st.absorb_mode(e.a, party_sink[std::countr_zero(blockers)]);
                } else if (has_noise && options.noise_block()) {
                    st.absorb_mode(e.a, noise_sink);
                }
                break;
            }
            case ElementKind::route:
                st.route(e.a, ModeId{e.b});
                break;
            case ElementKind::probe:
                if (options.probes) options.probes->push_back({e.b, st.amplitude(e.a)});
                break;
        }
    }

    out.terminal_amplitudes.reserve(net.terminal_count());
    for (const auto& [mode, sink] : net.terminals()) {
        out.terminal_amplitudes.push_back(st.amplitude(mode));
        st.absorb_mode(mode, sink);
    }
    return out;
}

}  // namespace cfgates
