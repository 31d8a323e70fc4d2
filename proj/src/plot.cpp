#include "polyel/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace polyel {

namespace {

struct Box {
    double xlo, xhi, ylo, yhi;
    void grow(double x, double y) {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

std::string render_levelset_svg(const Instance& inst, Span x, double r, std::size_t resolution) {
    if (inst.dim() != 2) throw std::invalid_argument("plot: only d = 2 instances can be rendered");
    if (resolution < 8) resolution = 8;
    const std::size_t res = resolution;

    // phi over the plotting plane: the covering level of location z.
    Vec v(2);
    auto phi_at = [&](double zx, double zy) {
        double s = 0.0;
        for (std::size_t j = 0; j < inst.k(); ++j) {
            v[0] = zx - inst.foci()(j, 0) - x[0];
            v[1] = zy - inst.foci()(j, 1) - x[1];
            s += inst.foci_weights()[j] * inst.norm().eval(v);
        }
        return s;
    };

    // Norm-to-Euclidean lower constant, to bound the contour's extent.
    double mdir = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 64; ++i) {
        const double t = 2.0 * M_PI * i / 64.0;
        Vec dir = {std::cos(t), std::sin(t)};
        mdir = std::min(mdir, inst.norm().eval(dir));
    }
    mdir = std::max(mdir, 1e-9);

    const Vec um = inst.foci_mean();
    const double cx = um[0] + x[0], cy = um[1] + x[1];
    Box box{cx, cx, cy, cy};
    box.grow(cx - r / mdir, cy - r / mdir);
    box.grow(cx + r / mdir, cy + r / mdir);
    for (std::size_t i = 0; i < inst.n(); ++i) box.grow(inst.demand()(i, 0), inst.demand()(i, 1));
    for (std::size_t j = 0; j < inst.k(); ++j)
        box.grow(inst.foci()(j, 0) + x[0], inst.foci()(j, 1) + x[1]);
    {
        const double padx = 0.05 * std::max(box.xhi - box.xlo, 1e-9);
        const double pady = 0.05 * std::max(box.yhi - box.ylo, 1e-9);
        box.xlo -= padx;
        box.xhi += padx;
        box.ylo -= pady;
        box.yhi += pady;
    }

    const double hx = (box.xhi - box.xlo) / static_cast<double>(res - 1);
    const double hy = (box.yhi - box.ylo) / static_cast<double>(res - 1);
    const double cell_diag = std::sqrt(hx * hx + hy * hy);

    std::vector<double> grid(res * res);
    for (std::size_t iy = 0; iy < res; ++iy)
        for (std::size_t ix = 0; ix < res; ++ix)
            grid[iy * res + ix] = phi_at(box.xlo + hx * ix, box.ylo + hy * iy) - r;

    // Crossing on the segment between two grid nodes, bisected until the
    // phi defect is within the cell-diagonal bound.
    auto crossing = [&](double x1, double y1, double f1, double x2, double y2, double f2) {
        double t = f1 / (f1 - f2);
        double px = x1 + t * (x2 - x1), py = y1 + t * (y2 - y1);
        double a = 0.0, b = 1.0, fa = f1;
        for (int it = 0; it < 40; ++it) {
            const double f = phi_at(px, py) - r;
            if (std::abs(f) <= 0.9 * cell_diag) break;
            if ((f > 0) == (fa > 0)) {
                a = t;
                fa = f;
            } else {
                b = t;
            }
            t = 0.5 * (a + b);
            px = x1 + t * (x2 - x1);
            py = y1 + t * (y2 - y1);
        }
        return std::pair<double, double>(px, py);
    };

    // Marching squares: collect contour segments cell by cell.
    std::vector<std::array<double, 4>> segments;
    for (std::size_t iy = 0; iy + 1 < res; ++iy) {
        for (std::size_t ix = 0; ix + 1 < res; ++ix) {
            const double x0 = box.xlo + hx * ix, y0 = box.ylo + hy * iy;
            const double x1 = x0 + hx, y1 = y0 + hy;
            const double f00 = grid[iy * res + ix], f10 = grid[iy * res + ix + 1];
            const double f01 = grid[(iy + 1) * res + ix], f11 = grid[(iy + 1) * res + ix + 1];
            const int code = (f00 > 0 ? 1 : 0) | (f10 > 0 ? 2 : 0) | (f11 > 0 ? 4 : 0) | (f01 > 0 ? 8 : 0);
            if (code == 0 || code == 15) continue;

            std::vector<std::pair<double, double>> pts;
            auto edge = [&](int e) {
                switch (e) {
                    case 0: return crossing(x0, y0, f00, x1, y0, f10);  // bottom
                    case 1: return crossing(x1, y0, f10, x1, y1, f11);  // right
                    case 2: return crossing(x0, y1, f01, x1, y1, f11);  // top
                    default: return crossing(x0, y0, f00, x0, y1, f01);  // left
                }
            };
            static const int table[16][4] = {
                {-1, -1, -1, -1}, {0, 3, -1, -1}, {0, 1, -1, -1}, {1, 3, -1, -1},
                {1, 2, -1, -1},   {0, 1, 2, 3},   {0, 2, -1, -1}, {2, 3, -1, -1},
                {2, 3, -1, -1},   {0, 2, -1, -1}, {0, 3, 1, 2},   {1, 2, -1, -1},
                {1, 3, -1, -1},   {0, 1, -1, -1}, {0, 3, -1, -1}, {-1, -1, -1, -1}};
            const int* t = table[code];
            for (int s = 0; s < 4 && t[s] >= 0; s += 2) {
                auto [ax, ay] = edge(t[s]);
                auto [bx, by] = edge(t[s + 1]);
                segments.push_back({ax, ay, bx, by});
            }
        }
    }

    // Data -> viewport mapping: uniform scale into [20, 980]^2, y up.
    const double spanx = std::max(box.xhi - box.xlo, 1e-12);
    const double spany = std::max(box.yhi - box.ylo, 1e-12);
    const double scale = 960.0 / std::max(spanx, spany);
    const double offx = 20.0 + 0.5 * (960.0 - spanx * scale);
    const double offy = 20.0 + 0.5 * (960.0 - spany * scale);
    auto mapx = [&](double zx) { return offx + (zx - box.xlo) * scale; };
    auto mapy = [&](double zy) { return 1000.0 - (offy + (zy - box.ylo) * scale); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n";

    svg += "<path fill=\"none\" stroke=\"#2a7d4f\" stroke-width=\"2\" d=\"";
    for (const auto& s : segments) {
        svg += "M" + fmt(mapx(s[0])) + " " + fmt(mapy(s[1])) + "L" + fmt(mapx(s[2])) + " " +
               fmt(mapy(s[3]));
    }
    svg += "\"/>\n";

    for (std::size_t i = 0; i < inst.n(); ++i) {
        svg += "<circle cx=\"" + fmt(mapx(inst.demand()(i, 0))) + "\" cy=\"" +
               fmt(mapy(inst.demand()(i, 1))) + "\" r=\"4\" fill=\"#1f4e8c\"/>\n";
    }
    for (std::size_t j = 0; j < inst.k(); ++j) {
        const double fx = mapx(inst.foci()(j, 0) + x[0]);
        const double fy = mapy(inst.foci()(j, 1) + x[1]);
        svg += "<path fill=\"#b03030\" d=\"M" + fmt(fx) + " " + fmt(fy - 6.0) + "L" + fmt(fx - 5.5) +
               " " + fmt(fy + 4.5) + "L" + fmt(fx + 5.5) + " " + fmt(fy + 4.5) + "Z\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void plot_levelset(const Instance& inst, Span x, double r, const std::string& out_path,
                   std::size_t resolution) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("plot: cannot open output file '" + out_path + "'");
    out << render_levelset_svg(inst, x, r, resolution);
}

}  // namespace polyel
