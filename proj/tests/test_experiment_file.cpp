#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "swfc/experiment_file.hpp"

using namespace swfc;

namespace {

// The line the parse fails on, or -1 when it succeeds.
int fail_line(const std::string& text) {
    try {
        parse_experiment(text);
    } catch (const ExperimentParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("empty file yields the defaults") {
    for (const char* text : {"", "\n\n", "# only a comment\n  \n# another\n"}) {
        ExperimentFile f = parse_experiment(text);
        const ExperimentSpec& s = f.spec;
        const auto* b = std::get_if<BernoulliChannel>(&s.channel.model);
        REQUIRE(b != nullptr);
        CHECK(b->loss_prob == 0.0);
        CHECK(s.codec.window_symbols == 50);
        REQUIRE(s.parity_density.has_value());
        CHECK(*s.parity_density == 0.5);
        CHECK(s.codec.segments_per_packet == 1);
        CHECK(s.codec.parities_per_packet == 1);
        CHECK(s.codec.payload_bits == 64);
        CHECK(s.decoder == DecoderVariant::GaussianElimination);
        CHECK(s.run_packets == 100000);
        CHECK(s.seeds == std::vector<uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        CHECK(s.exclude_warmup == false);
        CHECK(!f.has_sweep());
        CHECK_NOTHROW(s.validate());
    }
}

TEST_CASE("every key lands in its field") {
    ExperimentFile f = parse_experiment(
        "channel_model = bernoulli\n"
        "loss_prob = 0.25\n"
        "window_symbols = 80\n"
        "degree_symbols = 12\n"
        "segments_per_packet = 2\n"
        "parities_per_packet = 3\n"
        "payload_bits = 32\n"
        "decoder = truncated_ge\n"
        "d_max_packets = 40\n"
        "run_packets = 5000\n"
        "seeds = 7, 9, 11\n"
        "exclude_warmup = true\n"
        "sweep_axis = loss_prob\n"
        "sweep_values = 0.1, 0.2, 0.3\n");
    const ExperimentSpec& s = f.spec;
    CHECK(std::get<BernoulliChannel>(s.channel.model).loss_prob == 0.25);
    CHECK(s.codec.window_symbols == 80);
    CHECK(s.codec.degree == 12);
    CHECK(!s.parity_density.has_value());
    CHECK(s.codec.segments_per_packet == 2);
    CHECK(s.codec.parities_per_packet == 3);
    CHECK(s.codec.payload_bits == 32);
    CHECK(s.decoder == DecoderVariant::TruncatedGe);
    CHECK(s.d_max_packets == 40);
    CHECK(s.run_packets == 5000);
    CHECK(s.seeds == std::vector<uint64_t>{7, 9, 11});
    CHECK(s.exclude_warmup == true);
    REQUIRE(f.has_sweep());
    CHECK(f.sweep_axis == "loss_prob");
    CHECK(f.sweep_values == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("collision channel keys") {
    ExperimentFile f = parse_experiment(
        "channel_model = slotted_aloha\n"
        "devices = 120\n"
        "slots = 1000\n"
        "expansion_rate = 0.5\n");
    const auto& a = std::get<SlottedAlohaChannel>(f.spec.channel.model);
    CHECK(a.devices == 120);
    CHECK(a.slots == 1000);
    CHECK(a.expansion_rate == 0.5);
}

TEST_CASE("whitespace, comments and CRLF are tolerated") {
    ExperimentFile f = parse_experiment(
        "\r\n"
        "   # indented comment\r\n"
        "  loss_prob   =   0.125  \r\n"
        "\tseed_count\t=\t3\r\n");
    CHECK(std::get<BernoulliChannel>(f.spec.channel.model).loss_prob == 0.125);
    CHECK(f.spec.seeds == std::vector<uint64_t>{1, 2, 3});
}

TEST_CASE("seed_count expands to 1..n") {
    ExperimentFile f = parse_experiment("seed_count = 4\n");
    CHECK(f.spec.seeds == std::vector<uint64_t>{1, 2, 3, 4});
    CHECK(fail_line("seed_count = 0\n") == 1);
}

TEST_CASE("syntax errors carry the offending line") {
    CHECK(fail_line("loss_prob = 0.1\nnot a pair\n") == 2);
    CHECK(fail_line("= 5\n") == 1);
    CHECK(fail_line("loss_prob =\n") == 1);
    CHECK(fail_line("\n\nbogus_key = 1\n") == 3);
    CHECK(fail_line("run_packets = many\n") == 1);
    CHECK(fail_line("run_packets = 12x\n") == 1);
    CHECK(fail_line("loss_prob = zero\n") == 1);
    CHECK(fail_line("exclude_warmup = yes\n") == 1);
    CHECK(fail_line("seeds = 1,,3\n") == 1);
    CHECK(fail_line("seeds = 1\nloss_prob = 0.2\nseeds = 2\n") == 3);
    CHECK(fail_line("channel_model = fancy\n") == 1);
    CHECK(fail_line("decoder = viterbi\n") == 1);
    // The what() text leads with the same line number.
    try {
        parse_experiment("\nwat = 1\n");
        FAIL("expected a parse error");
    } catch (const ExperimentParseError& e) {
        CHECK(std::string(e.what()).starts_with("line 2:"));
    }
}

TEST_CASE("mutually exclusive keys are rejected") {
    CHECK(fail_line("degree_symbols = 10\nparity_density = 0.4\n") == 2);
    CHECK(fail_line("seeds = 1,2\nseed_count = 5\n") == 2);
    CHECK(fail_line("decoder = ge\nd_max_packets = 10\n") == 2);
    CHECK(fail_line("d_max_packets = 10\n") == 1);  // default decoder is ge
    CHECK(fail_line("sweep_axis = loss_prob\n") == 1);
    CHECK(fail_line("sweep_values = 0.1, 0.2\n") == 1);
    // Channel keys must match the selected model.
    CHECK(fail_line("channel_model = slotted_aloha\nloss_prob = 0.1\n") == 2);
    CHECK(fail_line("devices = 10\n") == 1);
    CHECK(fail_line("slots = 10\n") == 1);
    CHECK(fail_line("channel_model = bernoulli\nexpansion_rate = 0.5\n") == 2);
}

TEST_CASE("density and degree stay distinct") {
    ExperimentFile by_density = parse_experiment("parity_density = 0.3\n");
    REQUIRE(by_density.spec.parity_density.has_value());
    CHECK(*by_density.spec.parity_density == 0.3);

    ExperimentFile by_degree = parse_experiment("degree_symbols = 10\n");
    CHECK(!by_degree.spec.parity_density.has_value());
    CHECK(by_degree.spec.codec.degree == 10);
}

TEST_CASE("canonical text survives a round trip") {
    const char* files[] = {
        "",
        "loss_prob = 0.3\nwindow_symbols = 20\ndegree_symbols = 5\n",
        "channel_model = slotted_aloha\ndevices = 50\nslots = 400\n"
        "decoder = truncated_ge\nd_max_packets = 25\nseeds = 4,2\n",
        "parity_density = 0.75\nsweep_axis = window_symbols\n"
        "sweep_values = 10, 20, 50\nexclude_warmup = true\n",
    };
    for (const char* text : files) {
        ExperimentFile f = parse_experiment(text);
        std::string canon = experiment_to_text(f);
        // Reparsing the dump reproduces it byte for byte.
        CHECK(experiment_to_text(parse_experiment(canon)) == canon);
    }
}

TEST_CASE("canonical text spells out the defaults") {
    std::string canon = experiment_to_text(parse_experiment(""));
    CHECK(canon.find("channel_model = bernoulli\n") != std::string::npos);
    CHECK(canon.find("loss_prob = 0\n") != std::string::npos);
    CHECK(canon.find("window_symbols = 50\n") != std::string::npos);
    CHECK(canon.find("parity_density = 0.5\n") != std::string::npos);
    CHECK(canon.find("decoder = ge\n") != std::string::npos);
    CHECK(canon.find("seeds = 1,2,3,4,5,6,7,8,9,10\n") != std::string::npos);
    // d_max_packets only appears for the truncated decoder.
    CHECK(canon.find("d_max_packets") == std::string::npos);
    std::string trunc = experiment_to_text(
        parse_experiment("decoder = truncated_ge\nd_max_packets = 30\n"));
    CHECK(trunc.find("d_max_packets = 30\n") != std::string::npos);
}

TEST_CASE("file loading matches in-memory parsing") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "swfc_experiment_file_test.txt";
    const std::string text = "loss_prob = 0.2\nseed_count = 2\nrun_packets = 123\n";
    {
        std::ofstream out(path, std::ios::binary);
        out << text;
    }
    ExperimentFile from_file = parse_experiment_file(path.string());
    CHECK(experiment_to_text(from_file) == experiment_to_text(parse_experiment(text)));
    std::remove(path.string().c_str());

    try {
        parse_experiment_file((fs::temp_directory_path() / "swfc_no_such_file").string());
        FAIL("expected a parse error");
    } catch (const ExperimentParseError& e) {
        CHECK(e.line() == 0);
    }
}
