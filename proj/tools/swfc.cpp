// Command line front end: run experiment files, sweep parameters, evaluate
// the closed-form rate limits, and regenerate the standard study figures.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "swfc/analysis.hpp"
#include "swfc/experiment_file.hpp"
#include "swfc/report.hpp"
#include "swfc/simcore.hpp"

namespace {

using namespace swfc;

struct CommonOpts {
    std::optional<uint64_t> packets;
    std::optional<uint64_t> seed_count;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void apply_overrides(ExperimentFile& f, const CommonOpts& o) {
    if (o.packets) f.spec.run_packets = *o.packets;
    if (o.seed_count) {
        f.spec.seeds.clear();
        for (uint64_t i = 1; i <= *o.seed_count; ++i) f.spec.seeds.push_back(i);
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

int cmd_simulate(const std::string& file, const CommonOpts& o,
                 const std::string& trace_out, bool require_sweep) {
    ExperimentFile f = parse_experiment_file(file);
    apply_overrides(f, o);
    if (require_sweep && !f.has_sweep()) {
        throw std::invalid_argument("experiment file has no sweep_axis; use simulate");
    }

    if (!trace_out.empty()) {
        if (f.has_sweep() || f.spec.seeds.size() != 1) {
            throw std::invalid_argument(
                "--trace-out needs a single-point experiment with exactly one seed");
        }
        std::vector<uint8_t> trace;
        run_once_traced(f.spec, f.spec.seeds[0], trace);
        write_file(trace_out, trace);
    }

    SweepResult r = f.has_sweep()
                        ? sweep(f.spec, f.sweep_axis, f.sweep_values, o.threads)
                        : single_point(f.spec, o.threads);
    std::cout << report::sweep_csv(f, r);
    return 0;
}

int cmd_analyze(std::vector<double> pes) {
    if (pes.empty()) {
        for (int i = 0; i <= 40; ++i) pes.push_back(i / 100.0);
    }
    std::vector<analysis::FeasibilityResult> rows;
    rows.reserve(pes.size());
    for (double p : pes) rows.push_back(analysis::max_effective_rate(p));
    std::cout << report::analyze_csv(rows);
    return 0;
}

// ---------------------------------------------------------------------------
// Figure recipes. Each figure is one CSV (stable schema) and one SVG in the
// output directory; defaults are sized to finish in minutes and can be scaled
// up with --packets / --seeds.

struct SeriesRun {
    std::string label;
    SweepResult result;
};

ExperimentSpec base_spec(uint64_t packets, uint64_t seed_count) {
    ExperimentSpec s;
    s.codec.window_symbols = 50;
    s.parity_density = 0.5;
    s.run_packets = packets;
    s.seeds.clear();
    for (uint64_t i = 1; i <= seed_count; ++i) s.seeds.push_back(i);
    return s;
}

int cmd_reproduce(const std::string& figure, const std::string& out_dir,
                  const CommonOpts& o) {
    uint64_t packets = o.packets.value_or(20000);
    uint64_t seed_count = o.seed_count.value_or(5);
    std::filesystem::create_directories(out_dir);
    std::string csv_path = out_dir + "/" + figure + ".csv";
    std::string svg_path = out_dir + "/" + figure + ".svg";

    auto pe_grid = [](double lo, double hi, double step) {
        std::vector<double> v;
        for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
        return v;
    };
    auto fmt2 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return std::string(buf);
    };

    std::vector<SeriesRun> runs;
    report::PlotSpec plot;
    std::string y_metric = "drr";

    if (figure == "max_code_rate") {
        // Closed form only: the loss-rate limit of coding, with and without
        // counting the airtime expansion against the channel.
        std::vector<analysis::FeasibilityResult> rows;
        report::PlotSeries no_exp{"1 - p_e", {}, {}};
        report::PlotSeries with_exp{"max rate with expansion", {}, {}};
        for (double p : pe_grid(0.0, 0.32, 0.005)) {
            analysis::FeasibilityResult r = analysis::max_effective_rate(p);
            rows.push_back(r);
            no_exp.x.push_back(p);
            no_exp.y.push_back(1.0 - p);
            if (r.feasible()) {
                with_exp.x.push_back(p);
                with_exp.y.push_back(*r.r_max);
            }
        }
        write_file(csv_path, report::analyze_csv(rows));
        plot.title = "Highest sustainable code rate vs loss";
        plot.x_label = "p_e";
        plot.y_label = "code rate";
        plot.y_from_zero = true;
        plot.series = {no_exp, with_exp};
        write_file(svg_path, report::svg_line_plot(plot));
        std::cout << csv_path << "\n" << svg_path << "\n";
        return 0;
    }

    if (figure == "memory") {
        for (uint32_t w : {10u, 20u, 50u, 100u}) {
            ExperimentSpec s = base_spec(packets, seed_count);
            s.codec.window_symbols = w;
            runs.push_back({"W = " + std::to_string(w),
                            sweep(s, "loss_prob", pe_grid(0.05, 0.5, 0.05), o.threads)});
        }
        plot.title = "Delivery ratio vs loss for varying window";
        plot.x_label = "p_e";
        plot.y_label = "drr";
    } else if (figure == "delta") {
        std::vector<double> densities = {0.1, 0.2, 0.3, 0.4, 0.5,
                                         0.6, 0.7, 0.8, 0.9, 1.0};
        for (double pe : {0.1, 0.2, 0.3}) {
            ExperimentSpec s = base_spec(packets, seed_count);
            s.channel.model = BernoulliChannel{pe};
            runs.push_back({"p_e = " + fmt2(pe),
                            sweep(s, "parity_density", densities, o.threads)});
        }
        plot.title = "Recovery latency vs parity density";
        plot.x_label = "parity density";
        plot.y_label = "normalized latency";
        y_metric = "latency_norm";
    } else if (figure == "code_rate") {
        for (uint32_t m : {1u, 2u, 3u}) {
            ExperimentSpec s = base_spec(packets, seed_count);
            s.codec.parities_per_packet = m;
            runs.push_back({"rate 1/" + std::to_string(m + 1),
                            sweep(s, "loss_prob", pe_grid(0.05, 0.6, 0.05), o.threads)});
        }
        plot.title = "Delivery ratio vs loss for varying code rate";
        plot.x_label = "p_e";
        plot.y_label = "drr";
    } else if (figure == "truncated_drr") {
        for (double pe : {0.1, 0.2, 0.3}) {
            ExperimentSpec s = base_spec(packets, seed_count);
            s.channel.model = BernoulliChannel{pe};
            s.decoder = DecoderVariant::TruncatedGe;
            s.d_max_packets = 10;
            runs.push_back({"p_e = " + fmt2(pe),
                            sweep(s, "d_max_packets", {10, 25, 50, 100, 200}, o.threads)});
        }
        plot.title = "Delivery ratio vs delay budget";
        plot.x_label = "d_max (packets)";
        plot.y_label = "drr";
    } else if (figure == "latency") {
        auto grid = pe_grid(0.05, 0.5, 0.05);
        {
            ExperimentSpec s = base_spec(packets, seed_count);
            runs.push_back({"unbounded", sweep(s, "loss_prob", grid, o.threads)});
        }
        for (uint64_t d : {100ull, 25ull}) {
            ExperimentSpec s = base_spec(packets, seed_count);
            s.decoder = DecoderVariant::TruncatedGe;
            s.d_max_packets = d;
            runs.push_back({"d_max = " + std::to_string(d),
                            sweep(s, "loss_prob", grid, o.threads)});
        }
        plot.title = "Recovery latency vs loss";
        plot.x_label = "p_e";
        plot.y_label = "latency (packets)";
        y_metric = "latency_mean";
    } else if (figure == "buffer") {
        auto grid = pe_grid(0.05, 0.55, 0.05);
        {
            ExperimentSpec s = base_spec(packets, seed_count);
            SweepResult r = sweep(s, "loss_prob", grid, o.threads);
            runs.push_back({"unbounded", std::move(r)});
        }
        {
            ExperimentSpec s = base_spec(packets, seed_count);
            s.decoder = DecoderVariant::TruncatedGe;
            s.d_max_packets = 50;
            runs.push_back({"d_max = 50", sweep(s, "loss_prob", grid, o.threads)});
        }
        plot.title = "Pending unknowns vs loss";
        plot.x_label = "p_e";
        plot.y_label = "buffer (symbols)";
        y_metric = "buffer_mean";
    } else {
        throw std::invalid_argument(
            "unknown figure '" + figure +
            "' (memory, delta, code_rate, max_code_rate, truncated_drr, latency, buffer)");
    }

    // CSV: shared header from the first series' spec, then all series rows.
    ExperimentFile hdr;
    hdr.spec = runs.front().result.points.front().spec;
    hdr.sweep_axis = runs.front().result.axis;
    for (const SweepPointResult& p : runs.front().result.points) {
        hdr.sweep_values.push_back(p.axis_value);
    }
    std::string csv = report::sweep_csv_header(hdr);
    for (const SeriesRun& sr : runs) {
        csv += report::sweep_csv_rows(sr.result, sr.label);
    }
    write_file(csv_path, csv);

    for (const SeriesRun& sr : runs) {
        report::PlotSeries series;
        series.label = sr.label;
        std::vector<LatencyPoint> lat;
        for (const SweepPointResult& p : sr.result.points) {
            lat.push_back({p.axis_value, p.latency_mean.mean});
        }
        std::vector<LatencyPoint> norm = normalize_latency(lat);
        for (size_t i = 0; i < sr.result.points.size(); ++i) {
            const SweepPointResult& p = sr.result.points[i];
            double y = 0.0;
            if (y_metric == "drr") {
                y = p.drr.mean;
            } else if (y_metric == "latency_mean") {
                y = p.latency_mean.mean;
            } else if (y_metric == "latency_norm") {
                y = norm[i].value;
            } else if (y_metric == "buffer_mean") {
                y = p.buffer_mean.mean;
            }
            series.x.push_back(p.axis_value);
            series.y.push_back(y);
        }
        plot.series.push_back(std::move(series));
    }
    if (y_metric == "drr") plot.y_from_zero = true;
    write_file(svg_path, report::svg_line_plot(plot));
    std::cout << csv_path << "\n" << svg_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sliding-window fountain code simulator"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string experiment;
    std::string trace_out;
    std::string figure;
    std::string out_dir = ".";
    std::vector<double> pes;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--packets", common.packets, "Override run_packets");
        cmd->add_option("--seeds", common.seed_count, "Override: use seeds 1..N");
        cmd->add_option("--threads", common.threads, "Worker threads");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Run one experiment file");
    sim->add_option("file", experiment, "Experiment file")->required();
    sim->add_option("--trace-out", trace_out, "Write the packet trace here");
    add_common(sim);

    CLI::App* swp = app.add_subcommand("sweep", "Run a sweep experiment file");
    swp->add_option("file", experiment, "Experiment file with sweep_axis")->required();
    add_common(swp);

    CLI::App* ana = app.add_subcommand("analyze", "Closed-form rate feasibility");
    ana->add_option("--pe", pes, "Loss probabilities (default: 0..0.4 step 0.01)");

    CLI::App* rep = app.add_subcommand("reproduce", "Regenerate a standard figure");
    rep->add_option("figure", figure,
                    "memory | delta | code_rate | max_code_rate | truncated_drr | "
                    "latency | buffer")
        ->required();
    rep->add_option("--out-dir", out_dir, "Output directory");
    add_common(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate(experiment, common, trace_out, false);
        if (swp->parsed()) return cmd_simulate(experiment, common, "", true);
        if (ana->parsed()) return cmd_analyze(pes);
        if (rep->parsed()) return cmd_reproduce(figure, out_dir, common);
    } catch (const ExperimentParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
