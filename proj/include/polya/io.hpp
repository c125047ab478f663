// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polya/errors.hpp"

namespace polya {

// Plot-ready output: bare two-column ASCII files ("x y" per line, no
// header), the format gnuplot and friends consume directly, plus a flat
// key-value manifest that pins down how to regenerate every file.

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // x strictly increasing
};

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_series(const std::filesystem::path& path, const PlotSeries& series) {
    for (std::size_t i = 1; i < series.points.size(); ++i)
        if (!(series.points[i].first > series.points[i - 1].first))
            throw std::invalid_argument("series '" + series.label +
                                        "' must have strictly increasing x");
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    for (const auto& [x, y] : series.points)
        out << format_number(x) << ' ' << format_number(y) << '\n';
    out.flush();
    if (!out) throw io_error("failed writing " + path.string());
}

/// Ordered key-value record of one CLI run; enough to reproduce its data
/// files byte for byte.
struct RunManifest {
    std::vector<std::pair<std::string, std::string>> fields;

    void add(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
    }
};

inline void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    for (const auto& [key, value] : manifest.fields) out << key << " = " << value << '\n';
    out.flush();
    if (!out) throw io_error("failed writing " + path.string());
}

}  // namespace polya
