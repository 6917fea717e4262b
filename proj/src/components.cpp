#include "cfgates/components.hpp"

#include <cmath>
#include <stdexcept>

namespace cfgates {

namespace {

void require_order(int value, const char* name) {
    if (value < 2) throw std::invalid_argument(std::string(name) + " must be >= 2");
}

}  // namespace

double att1_transmission(int n) {
    require_order(n, "N");
    return std::pow(std::cos(M_PI / (2.0 * n)), 2.0 * n);
}

double att2_transmission(int n) {
    require_order(n, "N");
    return std::pow(std::cos(M_PI / (2.0 * n)), 6.0 * n);
}

double bs_angle(BsKind kind, int m, int n) {
    switch (kind) {
        case BsKind::half: return M_PI / 4.0;
        case BsKind::outer_m:
            require_order(m, "M");
            return M_PI / (2.0 * m);
        case BsKind::inner_n:
            require_order(n, "N");
            return M_PI / (2.0 * n);
        case BsKind::att1: return std::asin(att1_transmission(n));
        case BsKind::att2: return std::asin(att2_transmission(n));
    }
    throw std::invalid_argument("bs_angle: unknown kind");
}

double predict_mode1(int k, int big_k) {
    require_order(big_k, "K");
    if (k < 0) throw std::invalid_argument("predict_mode1: k must be >= 0");
    return std::pow(std::cos(M_PI / (2.0 * big_k)), k);
}

Mode2Prediction predict_mode2(int big_k) {
    require_order(big_k, "K");
    return {0.0, 1.0};
}

double predict_mode3(int m) {
    require_order(m, "M");
    return -1.0;
}

double predict_mode4(int n) {
    return -att1_transmission(n);
}

ModeId chain_with_segments(Netlist& net, int bs_count, double theta, ModeId left_rail,
                           const SegmentBuilder& segment) {
    if (bs_count < 1) throw std::invalid_argument("chain: need at least one beam splitter");
    ModeId arm = net.add_mode();
    for (int k = 1; k <= bs_count; ++k) {
        if (k > 1) {
            // Mirror pair guiding the previous arm's return into the next
            // splitter; every interferometer keeps its own arm mode.
            ModeId next = net.add_mode();
            net.route(arm, next);
            arm = next;
        }
        net.beam_splitter(theta, left_rail, arm);
        if (k < bs_count && segment) arm = segment(k, arm);
    }
    return arm;
}

ChainPorts build_chain(Netlist& net, const ChainSpec& spec, ModeId left_rail) {
    require_order(spec.order, "chain order");
    if (spec.bs_count < 1) throw std::invalid_argument("chain: bs_count must be >= 1");
    if (spec.attenuator_after &&
        (*spec.attenuator_after < 1 || *spec.attenuator_after >= spec.bs_count))
        throw std::invalid_argument("chain: attenuator position outside the chain");
    if (spec.owners == 0) throw std::invalid_argument("chain: empty owner mask");

    const double theta = M_PI / (2.0 * spec.order);
    const double att = spec.attenuator_after ? att1_transmission(spec.order) : 0.0;
    const SinkId att_sink = spec.attenuator_after ? net.add_sink(sink_att1) : SinkId{};

    auto segment = [&](int k, ModeId arm) {
        if (spec.attenuator_after && k == *spec.attenuator_after)
            arm = net.attenuator(arm, att, att_sink);
        net.channel(arm, spec.owners);
        return arm;
    };
    ModeId right_exit = chain_with_segments(net, spec.bs_count, theta, left_rail, segment);
    return {left_rail, right_exit};
}

CguPorts build_cgu(Netlist& net, const CguSpec& spec, ModeId entrance) {
    ChainSpec chain;
    chain.order = spec.n;
    chain.owners = spec.owners;
    if (spec.variant == CguVariant::cgu_n) {
        chain.bs_count = spec.n;
    } else {
        chain.bs_count = 2 * spec.n;
        chain.attenuator_after = spec.n;
    }
    ChainPorts ports = build_chain(net, chain, entrance);
    return {ports.left_exit, ports.right_exit};
}

}  // namespace cfgates
