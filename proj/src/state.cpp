#include "cfgates/state.hpp"

#include <cmath>
#include <stdexcept>

namespace cfgates {

PhotonState PhotonState::at(ModeId initial) {
    if (initial.value < 0) throw std::invalid_argument("photon state: invalid initial mode");
    PhotonState st;
    st.amps_[initial] = {1.0L, 0.0L};
    return st;
}

PhotonState::Amplitude PhotonState::amplitude(ModeId m) const {
    auto it = amps_.find(m);
    if (it == amps_.end()) return {};
    return {static_cast<double>(it->second.real()), static_cast<double>(it->second.imag())};
}

double PhotonState::mode_probability(ModeId m) const {
    auto it = amps_.find(m);
    if (it == amps_.end()) return 0.0;
    return static_cast<double>(std::norm(it->second));
}

double PhotonState::sink_probability(SinkId s) const {
    auto it = sinks_.find(s);
    return it == sinks_.end() ? 0.0 : static_cast<double>(it->second);
}

double PhotonState::live_norm() const {
    long double total = 0.0L;
    for (const auto& [mode, a] : amps_) total += std::norm(a);
    return static_cast<double>(total);
}

double PhotonState::sink_total() const {
    long double total = 0.0L;
    for (const auto& [sink, p] : sinks_) total += p;
    return static_cast<double>(total);
}

void PhotonState::apply_beam_splitter(double theta, ModeId left, ModeId right) {
    apply_rotation(std::cos(static_cast<long double>(theta)),
                   std::sin(static_cast<long double>(theta)), left, right);
}

void PhotonState::apply_rotation(long double c, long double s, ModeId left, ModeId right) {
    if (left == right) throw std::invalid_argument("beam splitter: left and right modes must differ");
    auto li = amps_.find(left);
    auto ri = amps_.find(right);
    const bool has_l = li != amps_.end();
    const bool has_r = ri != amps_.end();
    if (!has_l && !has_r) return;
    const std::complex<long double> al = has_l ? li->second : std::complex<long double>{};
    const std::complex<long double> ar = has_r ? ri->second : std::complex<long double>{};
    amps_[left] = c * al - s * ar;
    amps_[right] = s * al + c * ar;
}

void PhotonState::apply_phase_shift(ModeId mode, double phase) {
    if (phase == 0.0) return;
    auto it = amps_.find(mode);
    if (it == amps_.end()) return;
    if (phase == M_PI || phase == -M_PI) {
        it->second = -it->second;
        return;
    }
    const long double p = phase;
    it->second *= std::complex<long double>(std::cos(p), std::sin(p));
}

void PhotonState::absorb_mode(ModeId mode, SinkId sink) {
    if (sink.value < 0) throw std::invalid_argument("absorb: invalid sink");
    auto it = amps_.find(mode);
    if (it == amps_.end()) {
        sinks_.try_emplace(sink, 0.0L);
        return;
    }
    sinks_[sink] += std::norm(it->second);
    amps_.erase(it);
}

void PhotonState::route(ModeId from, ModeId to) {
    if (from == to) return;
    auto it = amps_.find(from);
    if (it == amps_.end()) return;
    auto dst = amps_.find(to);
    if (dst != amps_.end() && dst->second != std::complex<long double>{})
        throw std::logic_error("route: destination mode already carries amplitude");
    const auto a = it->second;
    amps_.erase(it);
    if (a != std::complex<long double>{}) amps_[to] = a;
}

bool operator==(const PhotonState& a, const PhotonState& b) {
    return a.amps_ == b.amps_ && a.sinks_ == b.sinks_;
}

}  // namespace cfgates
