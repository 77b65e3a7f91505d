#pragma once

// Minimal self-contained SVG line charts (no external assets): axes with tick
// labels, one polyline per series, inline legend. Log axes take log10 of the
// data before mapping.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclab {

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string tick_label(double v, bool log_axis) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", log_axis ? std::pow(10.0, v) : v);
    return buf;
}

}  // namespace detail

inline void write_line_chart(const std::string& path, const std::string& title,
                             const std::string& xlabel, const std::string& ylabel,
                             const std::vector<SvgSeries>& series, bool logx = false,
                             bool logy = false) {
    static const char* colors[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#e67e22", "#16a085"};
    const double W = 720, H = 480, ml = 80, mr = 150, mt = 50, mb = 60;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    std::vector<SvgSeries> data = series;
    for (auto& s : data)
        for (auto& p : s.points) {
            if (logx) {
                if (!(p.first > 0.0)) throw std::invalid_argument("write_line_chart: log axis needs positive x");
                p.first = std::log10(p.first);
            }
            if (logy) {
                if (!(p.second > 0.0)) throw std::invalid_argument("write_line_chart: log axis needs positive y");
                p.second = std::log10(p.second);
            }
            xmin = std::min(xmin, p.first);
            xmax = std::max(xmax, p.first);
            ymin = std::min(ymin, p.second);
            ymax = std::max(ymax, p.second);
        }
    if (xmin > xmax) throw std::invalid_argument("write_line_chart: no data");
    if (xmax - xmin < 1e-12) { xmax += 0.5; xmin -= 0.5; }
    if (ymax - ymin < 1e-12) { ymax += 0.5; ymin -= 0.5; }
    const double padx = 0.04 * (xmax - xmin), pady = 0.06 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_line_chart: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";

    const int nticks = 5;
    for (int i = 0; i <= nticks; ++i) {
        const double tx = xmin + (xmax - xmin) * i / nticks;
        const double ty = ymin + (ymax - ymin) * i / nticks;
        out << "<line x1=\"" << detail::svg_num(px(tx)) << "\" y1=\"" << H - mb << "\" x2=\""
            << detail::svg_num(px(tx)) << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::svg_num(px(tx)) << "\" y=\"" << H - mb + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::tick_label(tx, logx) << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::svg_num(py(ty)) << "\" x2=\"" << ml
            << "\" y2=\"" << detail::svg_num(py(ty)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(py(ty) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::tick_label(ty, logy) << "</text>\n";
    }
    out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
        << (logx ? " (log)" : "") << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
        << (mt + H - mb) / 2 << ")\">" << ylabel << (logy ? " (log)" : "") << "</text>\n";

    for (std::size_t s = 0; s < data.size(); ++s) {
        const char* color = colors[s % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (auto& p : data[s].points)
            out << detail::svg_num(px(p.first)) << "," << detail::svg_num(py(p.second)) << " ";
        out << "\"/>\n";
        for (auto& p : data[s].points)
            out << "<circle cx=\"" << detail::svg_num(px(p.first)) << "\" cy=\""
                << detail::svg_num(py(p.second)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        const double ly = mt + 18.0 * static_cast<double>(s);
        out << "<line x1=\"" << W - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - mr + 30
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
        out << "<text x=\"" << W - mr + 35 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << data[s].label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fraclab
