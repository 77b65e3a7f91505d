#pragma once

// CSV emission for estimate reports. The schema is fixed and documented in
// the README: one header row, comma separators, LF line endings, floats with
// 17 significant digits, at most four named right-hand-side factors per row.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclab/estimates.hpp"

namespace fraclab {

inline std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* report_csv_header() {
    return "check,kind,alpha,beta,aux,grid_n,y_layers,corpus_id,level,lhs,rhs,ratio,"
           "factor1_name,factor1,factor2_name,factor2,factor3_name,factor3,factor4_name,factor4,flag";
}

inline std::string report_csv_row(const EstimateReport& r) {
    std::string row;
    row += r.check + "," + r.kind + ",";
    row += format_float(r.alpha) + "," + format_float(r.beta) + "," + format_float(r.aux) + ",";
    row += std::to_string(r.grid_n) + "," + std::to_string(r.y_layers) + ",";
    row += std::to_string(r.corpus_id) + "," + std::to_string(r.level) + ",";
    row += format_float(r.lhs) + "," + format_float(r.rhs) + "," + format_float(r.ratio);
    for (std::size_t i = 0; i < 4; ++i) {
        if (i < r.rhs_factors.size())
            row += "," + r.rhs_factors[i].first + "," + format_float(r.rhs_factors[i].second);
        else
            row += ",,";
    }
    row += "," + r.flag;
    return row;
}

inline void write_reports_csv(const std::string& path, const std::vector<EstimateReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_reports_csv: cannot open " + path);
    out << report_csv_header() << "\n";
    for (const auto& r : reports) out << report_csv_row(r) << "\n";
}

// grid functions and extension fields serialize to CSV with the same float
// formatting: coordinates first, then the value
inline void write_grid_function_csv(const std::string& path, const GridFunction& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_grid_function_csv: cannot open " + path);
    const bool two_d = f.grid->domain.dim == 2;
    out << (two_d ? "x,y,value\n" : "x,value\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (two_d)
            out << format_float(f.grid->nodes[i].x) << "," << format_float(f.grid->nodes[i].y)
                << "," << format_float(f.values[i]) << "\n";
        else
            out << format_float(f.grid->nodes[i].x) << "," << format_float(f.values[i]) << "\n";
    }
}

inline void write_extension_field_csv(const std::string& path, const ExtensionField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_extension_field_csv: cannot open " + path);
    out << "x,y,value\n";
    for (int k = 0; k <= f.ygrid.K; ++k)
        for (std::size_t i = 0; i < f.nx(); ++i)
            out << format_float(f.xgrid->nodes[i].x) << ","
                << format_float(f.ygrid.y[static_cast<std::size_t>(k)]) << ","
                << format_float(f.at(i, k)) << "\n";
}

}  // namespace fraclab
