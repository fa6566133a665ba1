#pragma once

#include <sstream>
#include <string>

#include "fanocool/sweep.hpp"

namespace fanocool {

/// Rendering style for emitted plot scripts.
enum class PlotStyle { Auto, Lines, HeatMap };

namespace detail {

/// True when at least one cell carries the given report field.
inline bool column_has_values(const SweepTable& t, const std::string& field) {
    for (const auto& c : t.cells)
        if (c.report && report_field(*c.report, field)) return true;
    return false;
}

} // namespace detail

/// Emit a standalone gnuplot script that renders the CSV written by
/// write_csv(): a log-scale line plot for 1-axis tables, a heat map
/// with unstable (empty) cells left blank for 2-axis tables.  Series
/// whose column is entirely empty are omitted.
inline std::string emit_plot_script(const SweepTable& table,
                                    const std::string& csv_path,
                                    PlotStyle style = PlotStyle::Auto) {
    if (style == PlotStyle::Auto)
        style = table.axis2_values.empty() ? PlotStyle::Lines : PlotStyle::HeatMap;

    std::ostringstream os;
    os << "#!/usr/bin/env gnuplot\n"
       << "# Generated by fano-cool v" << table.version << "\n"
       << "set datafile separator ','\n"
       << "set datafile missing ''\n"
       << "set termoption noenhanced\n"
       << "set terminal pngcairo size 900,640\n"
       << "set output '" << csv_path << ".png'\n"
       << "set xlabel '" << table.spec.axes[0].param_path << "'\n";

    if (style == PlotStyle::Lines) {
        // Column layout of write_csv: 3 = n_fin, 6 = equip_dev, 8 = kappa_minus.
        struct Series { int column; const char* field; const char* label; };
        const Series candidates[] = {{3, "n_fin", "n_fin"},
                                     {6, "equip_dev", "equip_dev"},
                                     {8, "kappa_minus", "kappa_minus"}};
        std::string plots;
        for (const auto& s : candidates) {
            if (!detail::column_has_values(table, s.field)) continue;
            if (!plots.empty()) plots += ", ";
            plots += "'" + csv_path + "' skip 2 using 1:" +
                     std::to_string(s.column) + " with lines lw 2 title '" +
                     s.label + "'";
        }
        os << "set logscale y\n";
        if (plots.empty())
            os << "# no plottable series: every value column is empty\n";
        else
            os << "plot " << plots << "\n";
    } else {
        os << "set ylabel '" << table.spec.axes[1].param_path << "'\n"
           << "set view map\n"
           << "set logscale cb\n"
           << "set cblabel 'n_fin'\n";
        if (!detail::column_has_values(table, "n_fin"))
            os << "# no plottable cells: n_fin column is empty\n";
        else
            os << "splot '" << csv_path
               << "' skip 2 using 1:2:3 with points pointtype 5 pointsize 1.5 "
                  "palette notitle\n";
    }
    return os.str();
}

} // namespace fanocool
