#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "swfc/simcore.hpp"

namespace swfc {

class ExperimentParseError : public std::runtime_error {
public:
    ExperimentParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// A parsed experiment file: the run spec plus an optional sweep axis.
struct ExperimentFile {
    ExperimentSpec spec;
    std::string sweep_axis;  // empty for single-point files
    std::vector<double> sweep_values;

    bool has_sweep() const { return !sweep_axis.empty(); }
};

// Parses the key = value experiment format. Lines are independent; blank
// lines and lines starting with '#' are skipped. Unknown keys, duplicate
// keys, malformed values and inconsistent combinations all throw
// ExperimentParseError carrying the offending line number. An empty file is
// valid and yields the defaults (lossless channel, full elimination decoder).
ExperimentFile parse_experiment(const std::string& text);
ExperimentFile parse_experiment_file(const std::string& path);

// The canonical text form of a spec, also used for config hashing.
std::string experiment_to_text(const ExperimentFile& f);

}  // namespace swfc
