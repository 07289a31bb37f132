#include "swfc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace swfc {

double collision_loss_prob(uint32_t devices, uint32_t slots) {
    if (slots < 1) throw std::invalid_argument("slots must be >= 1");
    return 1.0 - std::exp(-static_cast<double>(devices) / slots);
}

double expanded_loss_prob(double loss_prob, double rate) {
    if (loss_prob < 0.0 || loss_prob > 1.0) {
        throw std::invalid_argument("loss probability out of [0, 1]");
    }
    if (!(rate > 0.0) || rate > 1.0) {
        throw std::invalid_argument("rate must be in (0, 1]");
    }
    return 1.0 - std::pow(1.0 - loss_prob, 1.0 / rate);
}

double ChannelConfig::effective_loss_prob() const {
    if (const auto* b = std::get_if<BernoulliChannel>(&model)) {
        return b->loss_prob;
    }
    const auto& a = std::get<SlottedAlohaChannel>(model);
    double base = collision_loss_prob(a.devices, a.slots);
    if (a.expansion_rate < 1.0) {
        return expanded_loss_prob(base, a.expansion_rate);
    }
    return base;
}

void ChannelConfig::validate() const {
    if (const auto* b = std::get_if<BernoulliChannel>(&model)) {
        if (b->loss_prob < 0.0 || b->loss_prob > 1.0) {
            throw std::invalid_argument("loss_prob out of [0, 1]");
        }
        return;
    }
    const auto& a = std::get<SlottedAlohaChannel>(model);
    if (a.slots < 1) throw std::invalid_argument("slots must be >= 1");
    if (!(a.expansion_rate > 0.0) || a.expansion_rate > 1.0) {
        throw std::invalid_argument("expansion_rate must be in (0, 1]");
    }
}

Channel::Channel(const ChannelConfig& cfg, uint64_t seed) : rng_{seed} {
    cfg.validate();
    loss_prob_ = cfg.effective_loss_prob();
}

bool Channel::transmit() {
    // prng_unit is in [0, 1), so loss_prob 0 never drops and 1 always does.
    return prng_unit(rng_) >= loss_prob_;
}

}  // namespace swfc
