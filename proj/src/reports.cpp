#include "projangles/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "projangles/formats.hpp"

namespace pa {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

void append_json(std::string& out, const nlohmann::json& j) {
    using nlohmann::json;
    switch (j.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v))
                out += "null";
            else
                out += format_double(v);
            break;
        }
        case json::value_t::string:
            out += json(j.get<std::string>()).dump();
            break;
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ',';
                append_json(out, el);
                first = false;
            }
            out += ']';
            break;
        }
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                out += nlohmann::json(it.key()).dump();
                out += ':';
                append_json(out, it.value());
                first = false;
            }
            out += '}';
            break;
        }
        default:
            out += "null";
            break;
    }
}

}  // namespace

std::string json_to_text(const nlohmann::json& j) {
    std::string out;
    append_json(out, j);
    return out;
}

std::string emit_plot(const std::vector<std::pair<double, double>>& series,
                      const std::string& x_label, const std::string& y_label) {
    if (series.size() < 2) raise_domain("emit_plot: at least two points required");
    for (const auto& [x, y] : series)
        if (!std::isfinite(x) || !std::isfinite(y)) raise_domain("emit_plot: non-finite point");

    const double width = 640.0, height = 480.0;
    const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;
    double xmin = series[0].first, xmax = series[0].first;
    double ymin = series[0].second, ymax = series[0].second;
    for (const auto& [x, y] : series) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };
    auto num = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(height - mb) + "\" x2=\"" +
           num(width - mr) + "\" y2=\"" + num(height - mb) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
           num(height - mb) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        svg += "<line x1=\"" + num(sx(fx)) + "\" y1=\"" + num(height - mb) + "\" x2=\"" +
               num(sx(fx)) + "\" y2=\"" + num(height - mb + 5.0) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(height - mb + 18.0) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + num(fx) + "</text>\n";
        svg += "<line x1=\"" + num(ml - 5.0) + "\" y1=\"" + num(sy(fy)) + "\" x2=\"" + num(ml) +
               "\" y2=\"" + num(sy(fy)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(ml - 8.0) + "\" y=\"" + num(sy(fy) + 4.0) +
               "\" font-size=\"11\" text-anchor=\"end\">" + num(fy) + "</text>\n";
    }
    svg += "<text x=\"" + num((ml + width - mr) / 2.0) + "\" y=\"" + num(height - 12.0) +
           "\" font-size=\"13\" text-anchor=\"middle\">" + x_label + "</text>\n";
    svg += "<text x=\"16\" y=\"" + num((mt + height - mb) / 2.0) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num((mt + height - mb) / 2.0) + ")\">" + y_label + "</text>\n";
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) svg += ' ';
        svg += num(sx(series[i].first)) + "," + num(sy(series[i].second));
    }
    svg += "\"/>\n</svg>\n";
    return svg;
}

}  // namespace pa
