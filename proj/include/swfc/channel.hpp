#pragma once

#include <cstdint>
#include <variant>

#include "swfc/prng.hpp"

namespace swfc {

// Memoryless per-packet erasure.
struct BernoulliChannel {
    double loss_prob = 0.0;
};

// Random-access collisions folded into an equivalent per-packet loss rate:
// `devices` transmitters sharing `slots` slots lose a packet with probability
// 1 - exp(-devices/slots). When expansion_rate is set (in (0, 1]), the extra
// airtime of coding at rate R inflates the load and the loss becomes
// 1 - (1 - p)^(1/R). Collisions stay independent across packets; no slot
// timeline is simulated.
struct SlottedAlohaChannel {
    uint32_t devices = 0;
    uint32_t slots = 1;
    double expansion_rate = 1.0;
};

double collision_loss_prob(uint32_t devices, uint32_t slots);
double expanded_loss_prob(double loss_prob, double rate);

struct ChannelConfig {
    std::variant<BernoulliChannel, SlottedAlohaChannel> model = BernoulliChannel{};

    // The per-packet loss probability the model reduces to.
    double effective_loss_prob() const;
    void validate() const;
};

class Channel {
public:
    Channel(const ChannelConfig& cfg, uint64_t seed);

    // True when the packet survives.
    bool transmit();

    double loss_prob() const { return loss_prob_; }

private:
    double loss_prob_ = 0.0;
    PrngState rng_;
};

}  // namespace swfc
