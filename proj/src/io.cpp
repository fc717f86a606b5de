#include "annlab/io.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>

namespace annlab {
namespace {

void appendf(std::string& out, const char* fmt, ...) {
    char buf[320];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    out += buf;
}

}  // namespace

std::string render_svg(const LevelSetComplex& complex, const SvgStyle& style) {
    const double r_out = std::exp(complex.s_max);
    const double r_in = std::exp(complex.s_min);
    const double ext = r_out * (1.0 + style.pad);
    const double scale = style.canvas / (2.0 * ext);
    auto px = [&](double x) { return (x + ext) * scale; };
    auto py = [&](double y) { return (ext - y) * scale; };  // y up in the z chart

    std::string out;
    appendf(out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
            "viewBox=\"0 0 %.0f %.0f\" data-format_version=\"1\">\n",
            style.canvas, style.canvas, style.canvas, style.canvas);
    appendf(out,
            "  <circle cx=\"%.5f\" cy=\"%.5f\" r=\"%.5f\" fill=\"none\" "
            "stroke=\"#999999\" stroke-width=\"1\"/>\n",
            px(0.0), py(0.0), r_out * scale);
    appendf(out,
            "  <circle cx=\"%.5f\" cy=\"%.5f\" r=\"%.5f\" fill=\"none\" "
            "stroke=\"#999999\" stroke-width=\"1\"/>\n",
            px(0.0), py(0.0), r_in * scale);

    for (const auto& arc : complex.arcs) {
        out += "  <polyline fill=\"none\" stroke=\"#245a8c\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < arc.pts.size(); ++k) {
            cplx z = arc.point(k);
            appendf(out, k + 1 < arc.pts.size() ? "%.5f,%.5f " : "%.5f,%.5f",
                    px(z.real()), py(z.imag()));
        }
        out += "\"/>\n";
    }

    // inward arrow on every germ that reaches the inner limit
    auto arrow = [&](cplx p) {
        double len = 0.06 * r_out, wid = 0.025 * r_out;
        cplx u = std::abs(p) > 0.0 ? -p / std::abs(p) : cplx(1.0, 0.0);
        cplx n(-u.imag(), u.real());
        cplx tip = p + len * u, b1 = p + wid * n, b2 = p - wid * n;
        appendf(out,
                "  <path class=\"end-arrow\" d=\"M %.5f %.5f L %.5f %.5f L %.5f %.5f Z\" "
                "fill=\"#b3332a\"/>\n",
                px(tip.real()), py(tip.imag()), px(b1.real()), py(b1.imag()),
                px(b2.real()), py(b2.imag()));
    };
    for (const auto& arc : complex.arcs) {
        if (arc.closed || arc.pts.empty()) continue;
        if (arc.start.kind == EndpointKind::InnerLimit) arrow(arc.point(0));
        if (arc.finish.kind == EndpointKind::InnerLimit) arrow(arc.point(arc.pts.size() - 1));
    }

    for (const auto& node : complex.nodes) {
        double r = std::exp(node.s);
        appendf(out,
                "  <circle class=\"crossing\" cx=\"%.5f\" cy=\"%.5f\" r=\"%.5f\" "
                "fill=\"#b3332a\"/>\n",
                px(r * std::cos(node.theta)), py(r * std::sin(node.theta)),
                0.012 * r_out * scale);
    }

    out += "</svg>\n";
    return out;
}

std::string arc_csv(const LevelSetComplex& complex) {
    std::string out = "# format_version 1\narc_id,vertex_index,re,im,r,theta\n";
    for (const auto& arc : complex.arcs)
        for (std::size_t k = 0; k < arc.pts.size(); ++k) {
            double r = std::exp(arc.pts[k][0]);
            double th = arc.pts[k][1];
            appendf(out, "%d,%zu,%.17g,%.17g,%.17g,%.17g\n", arc.id, k,
                    r * std::cos(th), r * std::sin(th), r, th);
        }
    return out;
}

std::string mesh_text(const MinimalImmersion& immersion) {
    const PolarGrid& g = immersion.grid;
    const int nr = g.n_radial, na = g.n_angular;
    std::string out = "# format_version 1\n";
    appendf(out, "# vertices %d quads %d\n", nr * na, (nr - 1) * na);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < na; ++j) {
            const auto& p = immersion.at(i, j);
            appendf(out, "v %.10g %.10g %.10g\n", p[0], p[1], p[2]);
        }
    for (int i = 0; i + 1 < nr; ++i)
        for (int j = 0; j < na; ++j) {
            int jp = (j + 1) % na;
            appendf(out, "f %d %d %d %d\n", g.index(i, j) + 1, g.index(i + 1, j) + 1,
                    g.index(i + 1, jp) + 1, g.index(i, jp) + 1);
        }
    return out;
}

}  // namespace annlab
