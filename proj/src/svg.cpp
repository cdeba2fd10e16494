#include "sandwich/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace sandwich {

namespace {

constexpr double kUnit = 40.0;
constexpr double kMargin = 30.0;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

struct Canvas {
    int n;
    std::ostringstream body;

    double y(int pos) const { return kMargin + (n - pos) * kUnit; }
    static double x(double col) { return kMargin + col * kUnit; }

    void line(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
        body << "<polyline class=\"strand\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (size_t k = 0; k < pts.size(); ++k) body << (k ? " " : "") << num(pts[k].first) << "," << num(pts[k].second);
        body << "\"/>\n";
    }
};

}  // namespace

std::string render_svg(const WiringDiagram& w) {
    auto tr = strand_components(w);
    std::map<std::string, std::string> color;
    for (auto& c : w.initialComponents)
        if (!color.count(c)) color[c] = kPalette[color.size() % 8];

    Canvas cv{w.n, {}};
    std::vector<std::string> label = w.initialComponents;
    int col = 0;
    auto straight = [&](int c, int except_lo, int except_hi) {
        for (int p = 1; p <= w.n; ++p)
            if (p < except_lo || p > except_hi)
                cv.line({{Canvas::x(c), cv.y(p)}, {Canvas::x(c + 1), cv.y(p)}}, color[label[p - 1]]);
    };
    auto braid = [&](const BraidWord& b) {
        if (b.letters.empty()) {
            straight(col++, 1, 0);
            return;
        }
        for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it, ++col) {
            const int i = it->i;
            straight(col, i, i + 1);
            const double x0 = Canvas::x(col), x1 = Canvas::x(col + 1), xm = (x0 + x1) / 2;
            const double ylo = cv.y(i), yhi = cv.y(i + 1), ym = (ylo + yhi) / 2;
            // positive letters carry the lower strand over
            const bool lowerOver = it->sign > 0;
            const auto& cUp = color[label[i - 1]];
            const auto& cDown = color[label[i]];
            const double gap = 0.18;
            auto broken = [&](double ax, double ay, double bx, double by, const std::string& c) {
                cv.line({{ax, ay}, {ax + (bx - ax) * (0.5 - gap), ay + (by - ay) * (0.5 - gap)}}, c);
                cv.line({{ax + (bx - ax) * (0.5 + gap), ay + (by - ay) * (0.5 + gap)}, {bx, by}}, c);
            };
            if (lowerOver) {
                broken(x0, yhi, x1, ylo, cDown);
                cv.line({{x0, ylo}, {xm, ym}, {x1, yhi}}, cUp);
            } else {
                broken(x0, ylo, x1, yhi, cUp);
                cv.line({{x0, yhi}, {xm, ym}, {x1, ylo}}, cDown);
            }
            std::swap(label[i - 1], label[i]);
        }
    };
    for (size_t k = 0; k < w.sings.size(); ++k) {
        braid(w.braids[k]);
        const auto& s = w.sings[k];
        const double x0 = Canvas::x(col), x1 = Canvas::x(col + 1), xm = (x0 + x1) / 2;
        const double ym = (cv.y(s.lo) + cv.y(s.hi)) / 2;
        straight(col, s.lo, s.hi);
        for (int p = s.lo; p <= s.hi; ++p)
            cv.line({{x0, cv.y(p)}, {xm, ym}, {x1, cv.y(p)}}, color[label[p - 1]]);
        if (s.kind == SingKind::Tangency) {
            const double r = 6;
            cv.body << "<polygon class=\"tangency\" fill=\"black\" points=\"" << num(xm) << "," << num(ym - r) << " " << num(xm + r) << ","
                    << num(ym) << " " << num(xm) << "," << num(ym + r) << " " << num(xm - r) << "," << num(ym)
                    << "\"/>\n";
        } else if (s.kind == SingKind::Intersection) {
            cv.body << "<circle class=\"intersection\" fill=\"black\" cx=\"" << num(xm) << "\" cy=\"" << num(ym) << "\" r=\""
                    << num(2.0 + 1.5 * (s.hi - s.lo + 1)) << "\"/>\n";
        } else {
            cv.body << "<circle class=\"free\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\" cx=\"" << num(xm) << "\" cy=\""
                    << num(ym) << "\" r=\"5.0\"/>\n";
        }
        ++col;
    }
    braid(w.braids.back());

    std::ostringstream out;
    const double width = 2 * kMargin + col * kUnit;
    const double height = 2 * kMargin + (w.n - 1) * kUnit;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << cv.body.str();
    for (int p = 1; p <= w.n; ++p)
        out << "<text x=\"4\" y=\"" << num(cv.y(p) + 4) << "\" font-size=\"11\">" << p << "</text>\n";
    out << "</svg>\n";
    (void)tr;
    return out.str();
}

}  // namespace sandwich
