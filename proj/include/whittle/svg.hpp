#pragma once

#include <string>
#include <vector>

namespace whittle {

struct SvgSeries {
    std::string label;
    std::vector<double> values;  // one point per step
};

// Best-effort line chart of per-step series (cumulative reward curves). The
// CSV files are the contract; this exists so comparison figures can be
// produced without external tooling.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series);

}  // namespace whittle
