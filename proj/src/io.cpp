#include "gribov/io.hpp"

#include "gribov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gribov {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json to_json(const CoefficientVector& v) {
    Json re = Json::array(), im = Json::array();
    for (const cplx& c : v.entries()) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    return Json{{"basis", v.basis() == Basis::e ? "e" : "u"},
                {"start", v.start()},
                {"re", re},
                {"im", im}};
}

CoefficientVector coefficient_vector_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw DomainError("coefficient vector must be a JSON object");
        std::string b = j.at("basis").get<std::string>();
        Basis basis;
        if (b == "e")
            basis = Basis::e;
        else if (b == "u")
            basis = Basis::u;
        else
            throw DomainError("basis must be \"e\" or \"u\"");
        long start = j.at("start").get<long>();
        if (start < 0) throw DomainError("start must be >= 0");
        const Json& re = j.at("re");
        if (!re.is_array()) throw DomainError("\"re\" must be an array");
        std::vector<cplx> entries(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) entries[i] = re[i].get<double>();
        if (j.contains("im")) {
            const Json& im = j.at("im");
            if (!im.is_array() || im.size() != re.size())
                throw DomainError("\"im\" must be an array as long as \"re\"");
            for (std::size_t i = 0; i < im.size(); ++i)
                entries[i] = cplx(entries[i].real(), im[i].get<double>());
        }
        return CoefficientVector(basis, std::size_t(start), std::move(entries));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed coefficient vector: ") + e.what());
    }
}

Json to_json(const SpectrumResult& r) {
    Json re = Json::array(), im = Json::array(), res = Json::array(), ok = Json::array();
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        re.push_back(r.eigenvalues[i].real());
        im.push_back(r.eigenvalues[i].imag());
        res.push_back(r.residuals[i]);
        ok.push_back(bool(r.resolved[i]));
    }
    return Json{{"n", r.n},      {"mu", r.mu},        {"lambda", r.lambda}, {"eig_re", re},
                {"eig_im", im},  {"residual", res},   {"resolved", ok}};
}

Json to_json(const DeficiencyReport& r) {
    Json j{{"p", r.p},
           {"m", r.m},
           {"criterion", r.criterion},
           {"tail_even", r.tail_even},
           {"tail_odd", r.tail_odd},
           {"decay_fit", r.decay_fit},
           {"verdict", to_string(r.verdict)}};
    j["n_plus"] = r.n_plus ? Json(*r.n_plus) : Json(nullptr);
    j["n_minus"] = r.n_minus ? Json(*r.n_minus) : Json(nullptr);
    return j;
}

Json to_json(const PolySeq& p) {
    Json coeffs = Json::array();
    for (const BigInt& c : p.coeffs) coeffs.push_back(Json::array({c.str(), "1"}));
    return Json{{"kind", to_string(p.kind)}, {"n", p.n}, {"coeffs", coeffs}};
}

void CsvTable::write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

CsvTable spectrum_csv(const SpectrumResult& r) {
    CsvTable t{{"index", "eig_re", "eig_im", "residual", "resolved"}, {}};
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
        t.add_row({std::to_string(i + 1), format_double(r.eigenvalues[i].real()),
                   format_double(r.eigenvalues[i].imag()), format_double(r.residuals[i]),
                   r.resolved[i] ? "1" : "0"});
    return t;
}

CsvTable sigma0_csv(const std::vector<Sigma0Point>& curve) {
    CsvTable t{{"mu", "sigma0_re", "sigma0_im", "residual"}, {}};
    for (const auto& p : curve)
        t.add_row({format_double(p.mu), format_double(p.sigma0.real()), format_double(p.sigma0.imag()),
                   format_double(p.residual)});
    return t;
}

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

} // namespace

void write_svg(std::ostream& os, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<SvgSeries>& series) {
    const double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x), x1 = std::max(x1, x);
            y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape_xml(title) << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\""
       << H - bottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
        os << "<text x=\"" << px(fx) << "\" y=\"" << H - bottom + 16
           << "\" text-anchor=\"middle\" font-size=\"11\">" << short_num(fx) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(fy) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << short_num(fy) << "</text>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
       << escape_xml(x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << H / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = colors[k % 5];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& [x, y] : series[k].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            os << (first ? "" : " ") << short_num(px(x)) << ',' << short_num(py(y));
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - right - 4 << "\" y=\"" << top + 14 * (k + 1)
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">"
           << escape_xml(series[k].label) << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace gribov
