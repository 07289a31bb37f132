#include "swfc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace swfc::report {

const char* const kToolVersion = "0.1.0";

namespace {

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_fixed(double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

const char* decoder_name(DecoderVariant v) {
    switch (v) {
        case DecoderVariant::GaussianElimination:
            return "ge";
        case DecoderVariant::Peeling:
            return "peeling";
        case DecoderVariant::Inactivation:
            return "inactivation";
        case DecoderVariant::TruncatedGe:
            return "truncated_ge";
    }
    return "?";
}

struct PointShape {
    std::string channel;
    std::string loss_prob;
    std::string devices;
    std::string slots;
    uint32_t window_symbols = 0;
    uint32_t degree_symbols = 0;
    double parity_density = 0.0;
    uint32_t segments = 0;
    uint32_t parities = 0;
    double code_rate = 0.0;
    std::string decoder;
    uint64_t d_max = 0;
    uint64_t run_packets = 0;
};

PointShape shape_of(const ExperimentSpec& s) {
    PointShape p;
    if (const auto* b = std::get_if<BernoulliChannel>(&s.channel.model)) {
        p.channel = "bernoulli";
        p.loss_prob = fmt_g(b->loss_prob);
    } else {
        const auto& a = std::get<SlottedAlohaChannel>(s.channel.model);
        p.channel = "slotted_aloha";
        p.loss_prob = fmt_g(s.channel.effective_loss_prob());
        p.devices = std::to_string(a.devices);
        p.slots = std::to_string(a.slots);
    }
    p.window_symbols = s.codec.window_symbols;
    p.degree_symbols =
        s.parity_density
            ? CodecConfig::degree_from_density(*s.parity_density, s.codec.window_symbols)
            : s.codec.degree;
    p.parity_density = static_cast<double>(p.degree_symbols) / p.window_symbols;
    p.segments = s.codec.segments_per_packet;
    p.parities = s.codec.parities_per_packet;
    p.code_rate = s.codec.rate();
    p.decoder = decoder_name(s.decoder);
    p.d_max = s.decoder == DecoderVariant::TruncatedGe ? s.d_max_packets : 0;
    p.run_packets = s.run_packets;
    return p;
}

void point_prefix(std::ostringstream& out, const std::string& axis, double axis_value,
                  const std::string& series, const PointShape& p) {
    out << (axis.empty() ? "none" : axis) << ',' << fmt_g(axis_value) << ',' << series
        << ',' << p.channel << ',' << p.loss_prob << ',' << p.devices << ',' << p.slots
        << ',' << p.window_symbols << ',' << p.degree_symbols << ','
        << fmt_g(p.parity_density) << ',' << p.segments << ',' << p.parities << ','
        << fmt_g(p.code_rate) << ',' << p.decoder << ',' << p.d_max << ','
        << p.run_packets << ',';
}

}  // namespace

uint64_t config_hash(const ExperimentFile& f) {
    return fnv1a(experiment_to_text(f));
}

std::string sweep_csv_header(const ExperimentFile& cfg) {
    std::ostringstream out;
    out << "# swfc " << kToolVersion << "\n";
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    out << "# config_hash " << hex << "\n";
    out << "# sweep_axis " << (cfg.has_sweep() ? cfg.sweep_axis : "none") << "\n";
    out << "# seeds ";
    for (size_t i = 0; i < cfg.spec.seeds.size(); ++i) {
        if (i) out << ',';
        out << cfg.spec.seeds[i];
    }
    out << "\n";
    out << "# run_packets " << cfg.spec.run_packets << "\n";
    out << "axis,axis_value,series,channel,loss_prob,devices,slots,window_symbols,"
           "degree_symbols,parity_density,segments_per_packet,parities_per_packet,"
           "code_rate,decoder,d_max_packets,run_packets,seed,transmitted,"
           "delivered_direct,recovered,drr,drr_recovery_only,latency_mean,"
           "latency_p95,latency_norm,buffer_mean,buffer_max\n";
    return out.str();
}

std::string sweep_csv_rows(const SweepResult& result, const std::string& series) {
    // Normalized latency is relative to the smallest positive mean latency
    // within this sweep, on the mean rows only.
    std::vector<LatencyPoint> lat;
    lat.reserve(result.points.size());
    for (const SweepPointResult& p : result.points) {
        lat.push_back({p.axis_value, p.latency_mean.mean});
    }
    std::vector<LatencyPoint> norm = normalize_latency(lat);

    std::ostringstream out;
    for (size_t pi = 0; pi < result.points.size(); ++pi) {
        const SweepPointResult& p = result.points[pi];
        PointShape shape = shape_of(p.spec);
        for (size_t si = 0; si < p.per_seed.size(); ++si) {
            const RunMetrics& m = p.per_seed[si];
            point_prefix(out, result.axis, p.axis_value, series, shape);
            out << p.spec.seeds[si] << ',' << m.transmitted << ',' << m.delivered_direct
                << ',' << m.recovered << ',' << fmt_g(m.drr) << ','
                << fmt_g(m.drr_recovery_only()) << ',' << fmt_g(m.latency_mean) << ','
                << fmt_g(m.latency_p95()) << ",," << fmt_g(m.buffer_mean) << ','
                << m.buffer_max << "\n";
        }
        point_prefix(out, result.axis, p.axis_value, series, shape);
        out << "mean,,,," << fmt_g(p.drr.mean) << ',' << fmt_g(p.drr_recovery_only.mean)
            << ',' << fmt_g(p.latency_mean.mean) << ',' << fmt_g(p.latency_p95.mean)
            << ',' << fmt_g(norm[pi].value) << ',' << fmt_g(p.buffer_mean.mean) << ','
            << fmt_g(p.buffer_max.mean) << "\n";
        point_prefix(out, result.axis, p.axis_value, series, shape);
        out << "stderr,,,," << fmt_g(p.drr.stderr_of_mean) << ','
            << fmt_g(p.drr_recovery_only.stderr_of_mean) << ','
            << fmt_g(p.latency_mean.stderr_of_mean) << ','
            << fmt_g(p.latency_p95.stderr_of_mean) << ",,"
            << fmt_g(p.buffer_mean.stderr_of_mean) << ','
            << fmt_g(p.buffer_max.stderr_of_mean) << "\n";
    }
    return out.str();
}

std::string sweep_csv(const ExperimentFile& cfg, const SweepResult& result,
                      const std::string& series) {
    return sweep_csv_header(cfg) + sweep_csv_rows(result, series);
}

std::string analyze_csv(const std::vector<analysis::FeasibilityResult>& rows) {
    std::ostringstream out;
    out << "# swfc " << kToolVersion << "\n";
    out << "# feasibility_threshold " << fmt_g(analysis::feasibility_threshold())
        << "\n";
    out << "p_e,rate_no_expansion,max_rate_with_expansion,feasible\n";
    for (const analysis::FeasibilityResult& r : rows) {
        out << fmt_g(r.p_e) << ',' << fmt_g(1.0 - r.p_e) << ',';
        if (r.feasible()) out << fmt_g(*r.r_max);
        out << ',' << (r.feasible() ? "yes" : "no") << "\n";
    }
    return out.str();
}

std::string svg_line_plot(const PlotSpec& spec) {
    constexpr double kWidth = 880, kHeight = 560;
    constexpr double kLeft = 78, kRight = 700, kTop = 56, kBottom = 500;
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const PlotSeries& s : spec.series) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (spec.y_from_zero) ymin = std::min(ymin, 0.0);
    if (xmax - xmin < 1e-12) {
        xmin -= 1;
        xmax += 1;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 1;
        ymax += 1;
    }
    double ypad = 0.05 * (ymax - ymin);
    ymax += ypad;
    if (!spec.y_from_zero || ymin != 0.0) ymin -= ypad;

    auto sx = [&](double x) {
        return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
    };
    auto sy = [&](double y) {
        return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" font-size=\"17\" "
           "font-family=\"sans-serif\" text-anchor=\"middle\">"
        << spec.title << "</text>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        double fx = xmin + (xmax - xmin) * i / kTicks;
        double fy = ymin + (ymax - ymin) * i / kTicks;
        double px = sx(fx), py = sy(fy);
        out << "<line x1=\"" << fmt_fixed(px, 2) << "\" y1=\"" << kTop << "\" x2=\""
            << fmt_fixed(px, 2) << "\" y2=\"" << kBottom
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt_fixed(py, 2) << "\" x2=\""
            << kRight << "\" y2=\"" << fmt_fixed(py, 2)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt_fixed(px, 2) << "\" y=\"" << kBottom + 22
            << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">"
            << fmt_g(fx) << "</text>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt_fixed(py + 4, 2)
            << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"end\">"
            << fmt_g(fy) << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << kRight - kLeft << "\" height=\"" << kBottom - kTop
        << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 44
        << "\" font-size=\"14\" font-family=\"sans-serif\" text-anchor=\"middle\">"
        << spec.x_label << "</text>\n";
    out << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
        << "\" font-size=\"14\" font-family=\"sans-serif\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 20 "
        << (kTop + kBottom) / 2 << ")\">" << spec.y_label << "</text>\n";

    for (size_t si = 0; si < spec.series.size(); ++si) {
        const PlotSeries& s = spec.series[si];
        const char* color = kPalette[si % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << fmt_fixed(sx(s.x[i]), 2) << ',' << fmt_fixed(sy(s.y[i]), 2);
        }
        out << "\"/>\n";
        for (size_t i = 0; i < s.x.size(); ++i) {
            out << "<circle cx=\"" << fmt_fixed(sx(s.x[i]), 2) << "\" cy=\""
                << fmt_fixed(sy(s.y[i]), 2) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        }
        double ly = kTop + 16 + 22 * static_cast<double>(si);
        out << "<line x1=\"" << kRight + 14 << "\" y1=\"" << fmt_fixed(ly - 4, 2)
            << "\" x2=\"" << kRight + 44 << "\" y2=\"" << fmt_fixed(ly - 4, 2)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kRight + 50 << "\" y=\"" << fmt_fixed(ly, 2)
            << "\" font-size=\"13\" font-family=\"sans-serif\">" << s.label
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace swfc::report
