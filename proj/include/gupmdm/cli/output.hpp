#pragma once

// Tables rendered as CSV or JSON, and single-polyline SVG plots.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gupmdm/cli/config.hpp"

namespace gupmdm::cli {

using Cell = std::variant<long, double, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string
csv_cell(Cell const& c)
{
    if (auto const* i = std::get_if<long>(&c)) {
        return std::to_string(*i);
    }
    if (auto const* d = std::get_if<double>(&c)) {
        return format_real(*d);
    }
    auto const& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char ch : s) {
        quoted += ch;
        if (ch == '"') {
            quoted += '"';
        }
    }
    return quoted + "\"";
}

inline std::string
to_csv(Table const& t)
{
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        out += (j ? "," : "") + t.columns[j];
    }
    out += "\n";
    for (auto const& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out += (j ? "," : "") + csv_cell(row[j]);
        }
        out += "\n";
    }
    return out;
}

inline std::string const&
version()
{
    static std::string const v = "1.0.0";
    return v;
}

/// {meta: {command, version, config}, rows: [{column: value, ...}]}
inline std::string
to_json(Table const& t, std::string const& command, std::vector<std::pair<std::string, std::string>> const& config)
{
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["version"] = version();
    nlohmann::ordered_json echo = nlohmann::ordered_json::object();
    for (auto const& [k, v] : config) {
        echo[k] = v;
    }
    meta["config"] = echo;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (auto const& row : t.rows) {
        nlohmann::ordered_json r;
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::visit([&](auto const& v) { r[t.columns[j]] = v; }, row[j]);
        }
        rows.push_back(std::move(r));
    }
    nlohmann::ordered_json doc;
    doc["meta"] = std::move(meta);
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

inline std::string
render(Table const& t,
       OutputFormat format,
       std::string const& command,
       std::vector<std::pair<std::string, std::string>> const& config)
{
    return format == OutputFormat::csv ? to_csv(t) : to_json(t, command, config);
}

namespace detail {

/// Roughly five "nice" tick positions covering [lo, hi].
inline std::vector<double>
ticks(double lo, double hi)
{
    double const span = hi - lo;
    double const raw = span / 5.0;
    double const mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 5.0, 10.0}) {
        step = f * mag;
        if (raw <= step) {
            break;
        }
    }
    std::vector<double> out;
    for (double x = std::ceil(lo / step) * step; x <= hi + 1e-9 * span; x += step) {
        out.push_back(std::abs(x) < 1e-12 * span ? 0.0 : x);
    }
    return out;
}

inline std::string
tick_label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace detail

/// Static SVG 1.1 document: one polyline, linear axes with tick labels.
inline std::string
svg_line_plot(std::vector<double> const& x,
              std::vector<double> const& y,
              std::string const& x_label,
              std::string const& y_label)
{
    double const width = 640, height = 400, left = 70, right = 20, top = 20, bottom = 50;
    double const pw = width - left - right, ph = height - top - bottom;

    double xlo = *std::min_element(x.begin(), x.end()), xhi = *std::max_element(x.begin(), x.end());
    double ylo = 0.0, yhi = 0.0;
    bool any = false;
    for (double v : y) {
        if (std::isfinite(v)) {
            ylo = any ? std::min(ylo, v) : v;
            yhi = any ? std::max(yhi, v) : v;
            any = true;
        }
    }
    if (xhi <= xlo) {
        xhi = xlo + 1.0;
    }
    if (yhi <= ylo) {
        double const pad = std::max(1.0, std::abs(ylo)) * 0.5;
        ylo -= pad;
        yhi += pad;
    }
    auto sx = [&](double v) { return left + (v - xlo) / (xhi - xlo) * pw; };
    auto sy = [&](double v) { return top + (yhi - v) / (yhi - ylo) * ph; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" +
           num(top + ph) + "\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) +
           "\"/>\n";
    svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double t : detail::ticks(xlo, xhi)) {
        svg += "<line x1=\"" + num(sx(t)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(sx(t)) + "\" y2=\"" +
               num(top + ph + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(sx(t)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" +
               detail::tick_label(t) + "</text>\n";
    }
    for (double t : detail::ticks(ylo, yhi)) {
        svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(sy(t)) + "\" x2=\"" + num(left) + "\" y2=\"" +
               num(sy(t)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(t) + 4) + "\" text-anchor=\"end\">" +
               detail::tick_label(t) + "</text>\n";
    }
    svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 10) + "\" text-anchor=\"middle\">" + x_label +
           "</text>\n";
    svg += "<text x=\"15\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
           num(top + ph / 2) + ")\">" + y_label + "</text>\n";
    svg += "</g>\n<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!std::isfinite(y[i])) {
            continue;
        }
        svg += (first ? "" : " ") + num(sx(x[i])) + "," + num(sy(y[i]));
        first = false;
    }
    svg += "\"/>\n</svg>\n";
    return svg;
}

inline void
write_file(std::string const& path, std::string const& content)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    os << content;
    if (!os) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

/// Sibling path with the extension replaced, e.g. out.csv -> out.svg.
inline std::string
with_extension(std::string const& path, std::string const& ext)
{
    auto const slash = path.find_last_of('/');
    auto const dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + ext;
    }
    return path.substr(0, dot) + ext;
}

} // namespace gupmdm::cli
