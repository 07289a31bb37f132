#include "swfc/experiment_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace swfc {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

uint64_t parse_count(const std::string& v, int line) {
    uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ExperimentParseError(line, "expected a whole number, got '" + v + "'");
    }
    return out;
}

double parse_real(const std::string& v, int line) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ExperimentParseError(line, "expected a number, got '" + v + "'");
    }
    return out;
}

bool parse_flag(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ExperimentParseError(line, "expected true or false, got '" + v + "'");
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& v, int line, Fn one) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ExperimentParseError(line, "empty element in list '" + v + "'");
        }
        out.push_back(one(item, line));
    }
    if (out.empty()) throw ExperimentParseError(line, "empty list");
    return out;
}

}  // namespace

ExperimentFile parse_experiment(const std::string& text) {
    // First pass: collect raw pairs with their lines, rejecting unknown and
    // duplicate keys outright.
    static const char* kKnown[] = {
        "channel_model",    "loss_prob",        "devices",
        "slots",            "expansion_rate",   "window_symbols",
        "degree_symbols",   "parity_density",   "segments_per_packet",
        "parities_per_packet", "payload_bits",  "decoder",
        "d_max_packets",    "run_packets",      "seeds",
        "seed_count",       "exclude_warmup",   "sweep_axis",
        "sweep_values",
    };

    std::map<std::string, std::pair<std::string, int>> kv;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ExperimentParseError(line, "expected key = value");
        }
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw ExperimentParseError(line, "missing key");
        if (val.empty()) throw ExperimentParseError(line, "missing value for '" + key + "'");
        bool known = false;
        for (const char* k : kKnown) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) throw ExperimentParseError(line, "unknown key '" + key + "'");
        if (kv.contains(key)) {
            throw ExperimentParseError(line, "duplicate key '" + key + "'");
        }
        kv.emplace(key, std::make_pair(val, line));
    }

    auto has = [&](const char* k) { return kv.contains(k); };
    auto at = [&](const char* k) -> const std::pair<std::string, int>& {
        return kv.at(k);
    };

    ExperimentFile f;
    ExperimentSpec& spec = f.spec;

    // Channel.
    std::string model = has("channel_model") ? at("channel_model").first : "bernoulli";
    if (model == "bernoulli") {
        BernoulliChannel b;
        if (has("loss_prob")) {
            auto& [v, ln] = at("loss_prob");
            b.loss_prob = parse_real(v, ln);
        }
        for (const char* k : {"devices", "slots", "expansion_rate"}) {
            if (has(k)) {
                throw ExperimentParseError(at(k).second,
                                           std::string("'") + k +
                                               "' needs channel_model = slotted_aloha");
            }
        }
        spec.channel.model = b;
    } else if (model == "slotted_aloha") {
        SlottedAlohaChannel a;
        if (has("loss_prob")) {
            throw ExperimentParseError(at("loss_prob").second,
                                       "'loss_prob' needs channel_model = bernoulli");
        }
        if (has("devices")) {
            auto& [v, ln] = at("devices");
            a.devices = static_cast<uint32_t>(parse_count(v, ln));
        }
        if (has("slots")) {
            auto& [v, ln] = at("slots");
            a.slots = static_cast<uint32_t>(parse_count(v, ln));
        }
        if (has("expansion_rate")) {
            auto& [v, ln] = at("expansion_rate");
            a.expansion_rate = parse_real(v, ln);
        }
        spec.channel.model = a;
    } else {
        throw ExperimentParseError(at("channel_model").second,
                                   "channel_model must be bernoulli or slotted_aloha");
    }

    // Codec.
    if (has("window_symbols")) {
        auto& [v, ln] = at("window_symbols");
        spec.codec.window_symbols = static_cast<uint32_t>(parse_count(v, ln));
    }
    if (has("degree_symbols") && has("parity_density")) {
        throw ExperimentParseError(at("parity_density").second,
                                   "give degree_symbols or parity_density, not both");
    }
    if (has("degree_symbols")) {
        auto& [v, ln] = at("degree_symbols");
        spec.codec.degree = static_cast<uint32_t>(parse_count(v, ln));
    }
    if (has("parity_density")) {
        auto& [v, ln] = at("parity_density");
        spec.parity_density = parse_real(v, ln);
    } else if (!has("degree_symbols")) {
        // Neither given: keep the density of the defaults across window edits.
        spec.parity_density = 0.5;
    }
    if (has("segments_per_packet")) {
        auto& [v, ln] = at("segments_per_packet");
        spec.codec.segments_per_packet = static_cast<uint32_t>(parse_count(v, ln));
    }
    if (has("parities_per_packet")) {
        auto& [v, ln] = at("parities_per_packet");
        spec.codec.parities_per_packet = static_cast<uint32_t>(parse_count(v, ln));
    }
    if (has("payload_bits")) {
        auto& [v, ln] = at("payload_bits");
        spec.codec.payload_bits = static_cast<uint32_t>(parse_count(v, ln));
    }

    // Decoder.
    std::string dec = has("decoder") ? at("decoder").first : "ge";
    if (dec == "ge") {
        spec.decoder = DecoderVariant::GaussianElimination;
    } else if (dec == "peeling") {
        spec.decoder = DecoderVariant::Peeling;
    } else if (dec == "inactivation") {
        spec.decoder = DecoderVariant::Inactivation;
    } else if (dec == "truncated_ge") {
        spec.decoder = DecoderVariant::TruncatedGe;
    } else {
        throw ExperimentParseError(at("decoder").second,
                                   "decoder must be ge, peeling, inactivation or truncated_ge");
    }
    if (has("d_max_packets")) {
        if (spec.decoder != DecoderVariant::TruncatedGe) {
            throw ExperimentParseError(at("d_max_packets").second,
                                       "'d_max_packets' needs decoder = truncated_ge");
        }
        auto& [v, ln] = at("d_max_packets");
        spec.d_max_packets = parse_count(v, ln);
    }

    // Run shape.
    if (has("run_packets")) {
        auto& [v, ln] = at("run_packets");
        spec.run_packets = parse_count(v, ln);
    }
    if (has("seeds") && has("seed_count")) {
        throw ExperimentParseError(at("seed_count").second,
                                   "give seeds or seed_count, not both");
    }
    if (has("seeds")) {
        auto& [v, ln] = at("seeds");
        spec.seeds = parse_list<uint64_t>(v, ln, parse_count);
    } else if (has("seed_count")) {
        auto& [v, ln] = at("seed_count");
        uint64_t n = parse_count(v, ln);
        if (n == 0) throw ExperimentParseError(ln, "seed_count must be >= 1");
        spec.seeds.clear();
        for (uint64_t i = 1; i <= n; ++i) spec.seeds.push_back(i);
    }
    if (has("exclude_warmup")) {
        auto& [v, ln] = at("exclude_warmup");
        spec.exclude_warmup = parse_flag(v, ln);
    }

    // Sweep.
    if (has("sweep_axis") != has("sweep_values")) {
        int ln = has("sweep_axis") ? at("sweep_axis").second : at("sweep_values").second;
        throw ExperimentParseError(ln, "sweep_axis and sweep_values go together");
    }
    if (has("sweep_axis")) {
        f.sweep_axis = at("sweep_axis").first;
        auto& [v, ln] = at("sweep_values");
        f.sweep_values = parse_list<double>(v, ln, parse_real);
    }

    return f;
}

ExperimentFile parse_experiment_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ExperimentParseError(0, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment(buf.str());
}

std::string experiment_to_text(const ExperimentFile& f) {
    std::ostringstream out;
    out.precision(17);
    const ExperimentSpec& s = f.spec;
    if (const auto* b = std::get_if<BernoulliChannel>(&s.channel.model)) {
        out << "channel_model = bernoulli\n";
        out << "loss_prob = " << b->loss_prob << "\n";
    } else {
        const auto& a = std::get<SlottedAlohaChannel>(s.channel.model);
        out << "channel_model = slotted_aloha\n";
        out << "devices = " << a.devices << "\n";
        out << "slots = " << a.slots << "\n";
        out << "expansion_rate = " << a.expansion_rate << "\n";
    }
    out << "window_symbols = " << s.codec.window_symbols << "\n";
    if (s.parity_density) {
        out << "parity_density = " << *s.parity_density << "\n";
    } else {
        out << "degree_symbols = " << s.codec.degree << "\n";
    }
    out << "segments_per_packet = " << s.codec.segments_per_packet << "\n";
    out << "parities_per_packet = " << s.codec.parities_per_packet << "\n";
    out << "payload_bits = " << s.codec.payload_bits << "\n";
    switch (s.decoder) {
        case DecoderVariant::GaussianElimination:
            out << "decoder = ge\n";
            break;
        case DecoderVariant::Peeling:
            out << "decoder = peeling\n";
            break;
        case DecoderVariant::Inactivation:
            out << "decoder = inactivation\n";
            break;
        case DecoderVariant::TruncatedGe:
            out << "decoder = truncated_ge\n";
            out << "d_max_packets = " << s.d_max_packets << "\n";
            break;
    }
    out << "run_packets = " << s.run_packets << "\n";
    out << "seeds = ";
    for (size_t i = 0; i < s.seeds.size(); ++i) {
        if (i) out << ",";
        out << s.seeds[i];
    }
    out << "\n";
    out << "exclude_warmup = " << (s.exclude_warmup ? "true" : "false") << "\n";
    if (f.has_sweep()) {
        out << "sweep_axis = " << f.sweep_axis << "\n";
        out << "sweep_values = ";
        for (size_t i = 0; i < f.sweep_values.size(); ++i) {
            if (i) out << ",";
            out << f.sweep_values[i];
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace swfc
