#include "svg_overlay.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <vector>

namespace edgematch {

namespace {

constexpr double kHalfLength = 3.0;

std::string num(double v) {
    std::array<char, 48> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 3);
    std::string s(buf.data(), res.ptr);
    return s == "-0.000" ? "0.000" : s;
}

void segment(std::string& out, double x, double y, double theta, const char* cls) {
    const double dx = kHalfLength * std::cos(theta);
    const double dy = kHalfLength * std::sin(theta);
    out += "  <line class=\"";
    out += cls;
    out += "\" x1=\"" + num(x - dx) + "\" y1=\"" + num(y - dy) + "\" x2=\"" + num(x + dx) + "\" y2=\"" +
           num(y + dy) + "\"/>\n";
}

} // namespace

std::string render_overlay(const EdgeSet& a, const EdgeSet& n, const MatchResult& result) {
    const Transform t = result.transform.value_or(Transform{});
    std::vector<char> a_matched(a.size(), 0), n_matched(n.size(), 0);
    for (const auto& [ia, in] : result.matched_pairs) {
        if (ia < a.size()) a_matched[ia] = 1;
        if (in < n.size()) n_matched[in] = 1;
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(a.width) + "\" height=\"" +
           std::to_string(a.height) + "\" viewBox=\"0 0 " + std::to_string(a.width) + " " +
           std::to_string(a.height) + "\">\n";
    out += "  <style>line{stroke-width:1;stroke-linecap:round}"
           ".ref{stroke:#1f77b4}.probe{stroke:#d62728}.match{stroke:#2ca02c}"
           ".basis{stroke:#ff7f0e;stroke-width:2.5}.frame{fill:none;stroke:#000}</style>\n";
    out += "  <rect class=\"frame\" x=\"0\" y=\"0\" width=\"" + std::to_string(a.width) + "\" height=\"" +
           std::to_string(a.height) + "\"/>\n";

    for (std::size_t i = 0; i < a.size(); ++i) {
        const Edge& e = a.edges[i];
        segment(out, e.x, e.y, e.theta, a_matched[i] ? "match" : "ref");
    }
    for (std::size_t k = 0; k < n.size(); ++k) {
        const Edge& e = n.edges[k];
        segment(out, t.map_x(e.x), t.map_y(e.y), e.theta, n_matched[k] ? "match" : "probe");
    }
    if (result.basis_a) {
        for (std::size_t i : {result.basis_a->first, result.basis_a->second}) {
            if (i < a.size()) segment(out, a.edges[i].x, a.edges[i].y, a.edges[i].theta, "basis");
        }
    }
    if (result.basis_n) {
        for (std::size_t k : {result.basis_n->first, result.basis_n->second}) {
            if (k < n.size()) segment(out, t.map_x(n.edges[k].x), t.map_y(n.edges[k].y), n.edges[k].theta, "basis");
        }
    }
    out += "</svg>\n";
    return out;
}

} // namespace edgematch
