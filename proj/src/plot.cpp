#include "vaceuler/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "vaceuler/config.hpp"
#include "vaceuler/errors.hpp"

namespace vaceuler {

namespace {

constexpr double W = 640, H = 400;
constexpr double ML = 70, MR = 20, MT = 36, MB = 46;

struct Series {
    std::string label;
    std::string color;
    std::vector<double> y;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(5);
    ss << v;
    return ss.str();
}

// minimal line plot with optional horizontal reference line, horizontal band
// and shaded x-regions
std::string render_svg(const std::string& title, const std::vector<double>& x,
                       const std::vector<Series>& series, double refline, bool has_ref,
                       double band_lo, double band_hi, bool has_band,
                       const std::vector<std::pair<double, double>>& shaded_x) {
    double xmin = x.front(), xmax = x.back();
    if (xmax <= xmin) xmax = xmin + 1.0;
    double ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
        for (double v : s.y)
            if (std::isfinite(v)) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
    if (!std::isfinite(ymin)) { ymin = 0.0; ymax = 1.0; }
    if (has_ref) {
        ymin = std::min(ymin, refline);
        ymax = std::max(ymax, refline);
    }
    if (has_band) {
        ymin = std::min(ymin, band_lo);
        ymax = std::max(ymax, band_hi);
    }
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double pad = 0.06 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double v) { return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='15' "
           "font-family='sans-serif'>" << title << "</text>\n";

    if (has_band) {
        out << "<rect x='" << ML << "' y='" << py(band_hi) << "' width='" << W - ML - MR
            << "' height='" << py(band_lo) - py(band_hi)
            << "' fill='#d8eed8' stroke='none'/>\n";
    }
    for (const auto& [a, b] : shaded_x) {
        out << "<rect x='" << px(a) << "' y='" << MT << "' width='"
            << std::max(px(b) - px(a), 1.0) << "' height='" << H - MT - MB
            << "' fill='#f6caca' stroke='none'/>\n";
    }

    // axes + ticks
    out << "<rect x='" << ML << "' y='" << MT << "' width='" << W - ML - MR << "' height='"
        << H - MT - MB << "' fill='none' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double tx = xmin + (xmax - xmin) * i / 4.0;
        const double ty = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x='" << px(tx) << "' y='" << H - MB + 16
            << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << fmt(tx)
            << "</text>\n";
        out << "<text x='" << ML - 6 << "' y='" << py(ty) + 4
            << "' text-anchor='end' font-size='11' font-family='sans-serif'>" << fmt(ty)
            << "</text>\n";
        out << "<line x1='" << ML << "' y1='" << py(ty) << "' x2='" << W - MR << "' y2='"
            << py(ty) << "' stroke='#eeeeee'/>\n";
    }
    out << "<text x='" << W / 2 << "' y='" << H - 10
        << "' text-anchor='middle' font-size='12' font-family='sans-serif'>t</text>\n";

    if (has_ref) {
        out << "<line x1='" << ML << "' y1='" << py(refline) << "' x2='" << W - MR << "' y2='"
            << py(refline) << "' stroke='#b02020' stroke-dasharray='6,4'/>\n";
    }

    double ly = MT + 14;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.6' points='";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            out << px(x[i]) << "," << py(s.y[i]) << " ";
        }
        out << "'/>\n";
        out << "<text x='" << W - MR - 8 << "' y='" << ly
            << "' text-anchor='end' font-size='12' font-family='sans-serif' fill='" << s.color
            << "'>" << s.label << "</text>\n";
        ly += 15;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace

PlotResult plot_run_record(const std::string& csv_path, const std::string& out_dir) {
    const std::string text = read_text_file(csv_path);
    std::vector<RunRow> rows = parse_run_record_csv(text);
    if (rows.empty()) throw IoError("run record has no rows");

    std::filesystem::create_directories(out_dir);
    std::string stem = std::filesystem::path(csv_path).stem().string();
    const std::string suffix = "_series";
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
        stem = stem.substr(0, stem.size() - suffix.size());

    std::vector<double> t;
    for (const auto& r : rows) t.push_back(r.t);
    if (t.size() == 1) t.push_back(t.front() + 1e-12); // single-point plots

    auto col = [&](auto getter) {
        std::vector<double> y;
        for (const auto& r : rows) y.push_back(getter(r));
        while (y.size() < t.size()) y.push_back(y.back());
        return y;
    };

    PlotResult res;

    // E(t) against 2 M0
    {
        std::vector<double> e = col([](const RunRow& r) { return r.e_total; });
        const double m0 = e.front();
        const double cap = 2.0 * m0;
        std::vector<std::pair<double, double>> bad;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (std::isfinite(e[i]) && e[i] > cap) {
                res.bound_violated = true;
                const double a = i > 0 ? 0.5 * (t[i - 1] + t[i]) : t[i];
                const double b = i + 1 < t.size() ? 0.5 * (t[i] + t[i + 1]) : t[i];
                bad.emplace_back(a, b);
            }
        }
        const std::string path = out_dir + "/" + stem + "_energy.svg";
        write_text_file(path, render_svg("higher-order energy E(t) vs 2 M0", t,
                                         {{"E(t)", "#1f4e9c", e}}, cap, std::isfinite(cap),
                                         0, 0, false, bad));
        res.paths.push_back(path);
    }
    // physical-energy drift
    {
        const std::string path = out_dir + "/" + stem + "_pe_drift.svg";
        write_text_file(path, render_svg("relative physical-energy drift", t,
                                         {{"|PE-PE0|/PE0", "#1f4e9c",
                                           col([](const RunRow& r) { return r.pe_drift_rel; })}},
                                         0, false, 0, 0, false, {}));
        res.paths.push_back(path);
    }
    // Jacobian band
    {
        const std::string path = out_dir + "/" + stem + "_jacobian.svg";
        write_text_file(path,
                        render_svg("Jacobian range vs the [1/2, 3/2] band", t,
                                   {{"J_min", "#1f4e9c",
                                     col([](const RunRow& r) { return r.j_min; })},
                                    {"J_max", "#c06010",
                                     col([](const RunRow& r) { return r.j_max; })}},
                                   0, false, 0.5, 1.5, true, {}));
        res.paths.push_back(path);
    }
    // boundary trajectory
    {
        const std::string path = out_dir + "/" + stem + "_boundary.svg";
        write_text_file(path,
                        render_svg("vacuum boundary trajectory eta(Gamma, t)", t,
                                   {{"mean", "#1f4e9c",
                                     col([](const RunRow& r) { return r.eta_top_mean; })},
                                    {"min", "#409040",
                                     col([](const RunRow& r) { return r.eta_top_min; })},
                                    {"max", "#c06010",
                                     col([](const RunRow& r) { return r.eta_top_max; })}},
                                   0, false, 0, 0, false, {}));
        res.paths.push_back(path);
    }
    return res;
}

} // namespace vaceuler
