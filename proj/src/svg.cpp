#include "whittle/svg.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "whittle/csv.hpp"

namespace whittle {

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series) {
    const double width = 860, height = 480;
    const double ml = 70, mr = 160, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    std::size_t steps = 0;
    double ymax = 1e-9;
    for (const auto& s : series) {
        steps = std::max(steps, s.values.size());
        for (double v : s.values) ymax = std::max(ymax, v);
    }
    if (steps < 2) steps = 2;

    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);

    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    for (int g = 0; g <= 4; ++g) {
        const double fy = mt + ph - ph * g / 4.0;
        out << "<line x1=\"" << ml << "\" y1=\"" << fy << "\" x2=\"" << ml + pw << "\" y2=\"" << fy
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << fy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << csv_number(ymax * g / 4.0) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">step</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        if (s.values.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << palette[k % 6]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t t = 0; t < s.values.size(); ++t) {
            const double x = ml + pw * static_cast<double>(t) / static_cast<double>(steps - 1);
            const double y = mt + ph - ph * (s.values[t] / ymax);
            out << x << ',' << y << ' ';
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + pw + 34
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << palette[k % 6]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace whittle
