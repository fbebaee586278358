#include "featkit/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "featkit/error.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace featkit {

namespace {

constexpr const char* kToolkitVersion = "1.0.0";

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        raise(ErrorCode::io, path.string() + ": cannot open for writing");
    out << content;
    if (!out)
        raise(ErrorCode::io, path.string() + ": write failed");
}

// ---- SVG chart -------------------------------------------------------

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

const char* kPalette[16] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#003f5c", "#bc5090",
                            "#58508d", "#ffa600", "#2f4b7c", "#665191"};

// label part after "<image>:" — the condition parameter shared across images
std::string condition_label(const std::string& parameter) {
    size_t colon = parameter.find(':');
    return colon == std::string::npos ? parameter : parameter.substr(colon + 1);
}

// numeric-aware ordering so "-7ev" < "-4ev" < "+4ev" and "15deg" < "90deg"
bool label_less(const std::string& a, const std::string& b) {
    char* ea = nullptr;
    char* eb = nullptr;
    double va = std::strtod(a.c_str(), &ea);
    double vb = std::strtod(b.c_str(), &eb);
    bool na = ea != a.c_str();
    bool nb = eb != b.c_str();
    if (na && nb && va != vb)
        return va < vb;
    if (na != nb)
        return na; // numbers before plain labels
    return a < b;
}

struct ChartData {
    std::vector<std::string> labels; // x categories, plot order
    // series name -> label -> mean y (aggregated over images/resolutions)
    std::map<std::string, std::map<std::string, double>> series;
    std::string title, y_title;
    double y_max = 1.0;
};

std::string render_chart(const ChartData& d) {
    const double W = 900, H = 520;
    const double L = 70, R = 240, T = 56, B = 64; // margins; legend lives right
    const double pw = W - L - R, ph = H - T - B;
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << L << "\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(d.title) << "</text>\n";
    s << "<text x=\"" << L << "\" y=\"46\" font-family=\"sans-serif\" font-size=\"11\" "
         "fill=\"#555\">mean over images and resolutions; y: "
      << escape_xml(d.y_title) << "</text>\n";

    // axes
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph
      << "\" stroke=\"#333\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
      << "\" stroke=\"#333\"/>\n";

    auto xpos = [&](size_t i) {
        if (d.labels.size() <= 1)
            return L + pw / 2;
        return L + pw * static_cast<double>(i) / (d.labels.size() - 1);
    };
    auto ypos = [&](double v) { return T + ph * (1.0 - v / d.y_max); };

    for (int t = 0; t <= 5; ++t) {
        double v = d.y_max * t / 5.0;
        double y = ypos(v);
        s << "<line x1=\"" << L - 4 << "\" y1=\"" << fmt("%.1f", y) << "\" x2=\"" << L + pw
          << "\" y2=\"" << fmt("%.1f", y) << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << L - 8 << "\" y=\"" << fmt("%.1f", y + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
          << fmt(d.y_max <= 1.0 ? "%.1f" : "%.0f", v) << "</text>\n";
    }
    for (size_t i = 0; i < d.labels.size(); ++i) {
        double x = xpos(i);
        s << "<text x=\"" << fmt("%.1f", x) << "\" y=\"" << T + ph + 20
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
          << escape_xml(d.labels[i]) << "</text>\n";
    }

    size_t si = 0;
    for (const auto& [name, points] : d.series) {
        const char* color = kPalette[si % 16];
        std::ostringstream pts;
        for (size_t i = 0; i < d.labels.size(); ++i) {
            auto it = points.find(d.labels[i]);
            if (it == points.end())
                continue;
            pts << fmt("%.1f", xpos(i)) << "," << fmt("%.1f", ypos(it->second)) << " ";
        }
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
          << pts.str() << "\"/>\n";
        double ly = T + 14 + 15.0 * si;
        s << "<line x1=\"" << L + pw + 16 << "\" y1=\"" << fmt("%.1f", ly - 4) << "\" x2=\""
          << L + pw + 40 << "\" y2=\"" << fmt("%.1f", ly - 4) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << L + pw + 46 << "\" y=\"" << fmt("%.1f", ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(name) << "</text>\n";
        ++si;
    }
    s << "</svg>\n";
    return s.str();
}

// aggregate one family's cells into a chart; pick = repeatability or matches
ChartData build_chart(const std::vector<const CellResult*>& cells, const std::string& family,
                      bool use_repeatability) {
    ChartData d;
    d.title = family + (use_repeatability ? " repeatability" : " correct matches");
    d.y_title = use_repeatability ? "repeatability" : "correct matches";
    std::set<std::string> labels;
    std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;
    for (const CellResult* c : cells) {
        std::string label = condition_label(c->parameter);
        labels.insert(label);
        double y = use_repeatability ? c->repeatability : static_cast<double>(c->n_correct);
        auto& slot = acc[c->detector + "+" + c->descriptor][label];
        slot.first += y;
        slot.second += 1;
    }
    d.labels.assign(labels.begin(), labels.end());
    std::sort(d.labels.begin(), d.labels.end(), label_less);
    double y_max = use_repeatability ? 1.0 : 0.0;
    for (auto& [name, points] : acc)
        for (auto& [label, sum] : points) {
            double mean = sum.first / sum.second;
            d.series[name][label] = mean;
            y_max = std::max(y_max, mean);
        }
    d.y_max = y_max > 0 ? y_max : 1.0;
    return d;
}

} // namespace

std::string results_csv(const BenchmarkReport& report) {
    std::ostringstream out;
    out << "family,parameter,detector,descriptor,resolution,n_kp_ref,n_kp_test,"
           "n_correspondences,repeatability,n_matches,n_correct,runtime_ms\n";
    for (const CellResult& c : report.cells) {
        out << c.family << "," << c.parameter << "," << c.detector << "," << c.descriptor << ","
            << fmt("%g", c.resolution) << "," << c.n_kp_ref << "," << c.n_kp_test << ","
            << c.n_correspondences << ",";
        if (c.has_repeatability && !c.failed)
            out << fmt("%.6g", c.repeatability);
        out << "," << c.n_matches << "," << c.n_correct << ",";
        out << "\n"; // runtime_ms deliberately empty
    }
    return out.str();
}

std::vector<std::string> write_report(const BenchmarkReport& report, const std::string& out_dir) {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        raise(ErrorCode::io, out_dir + ": cannot create directory: " + ec.message());

    std::vector<std::string> written;
    write_file(dir / "results.csv", results_csv(report));
    written.push_back("results.csv");

    nlohmann::json meta;
    meta["version"] = kToolkitVersion;
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(report.config_digest));
    meta["config_digest"] = digest;
    meta["threads"] = report.threads_used;
    meta["total_wall_ms"] = report.total_wall_ms;
    meta["failed_cells"] = report.failed_cells();
    nlohmann::json cells = nlohmann::json::array();
    for (const CellResult& c : report.cells) {
        nlohmann::json j;
        j["key"] = c.family + "/" + c.parameter + "/" + c.detector + "/" + c.descriptor + "/" +
                   fmt("%g", c.resolution);
        j["wall_ms"] = c.wall_ms;
        if (c.failed)
            j["error"] = c.note;
        cells.push_back(std::move(j));
    }
    meta["cells"] = std::move(cells);
    write_file(dir / "run_meta.json", meta.dump(2) + "\n");
    written.push_back("run_meta.json");

    // family charts: repeatability-bearing cells on one, the rest on another
    std::map<std::string, std::vector<const CellResult*>> with_rep, without_rep;
    for (const CellResult& c : report.cells) {
        if (c.failed)
            continue;
        (c.has_repeatability ? with_rep : without_rep)[c.family].push_back(&c);
    }
    for (const auto& [family, cells_of] : with_rep) {
        std::string name = family + "_repeatability.svg";
        write_file(dir / name, render_chart(build_chart(cells_of, family, true)));
        written.push_back(name);
    }
    for (const auto& [family, cells_of] : without_rep) {
        std::string name = family + "_matches.svg";
        write_file(dir / name, render_chart(build_chart(cells_of, family, false)));
        written.push_back(name);
    }
    return written;
}

} // namespace featkit
