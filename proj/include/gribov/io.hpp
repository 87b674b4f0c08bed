#pragma once

#include "gribov/basis_ops.hpp"
#include "gribov/deficiency.hpp"
#include "gribov/jacobi.hpp"
#include "gribov/ortho_poly.hpp"

#include "json.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace gribov {

using Json = nlohmann::json;

// %.17g, locale independent; -0 prints as 0.
std::string format_double(double x);

Json to_json(const CoefficientVector& v);
// Expects {"basis": "e"|"u", "start": int, "re": [..], "im": [..]}; "im" may be omitted.
// Throws DomainError on malformed input.
CoefficientVector coefficient_vector_from_json(const Json& j);

Json to_json(const SpectrumResult& r);
Json to_json(const DeficiencyReport& r);
// Exact families: coefficients as [numerator, denominator] string pairs.
Json to_json(const PolySeq& p);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    void write(std::ostream& os) const;
};

CsvTable spectrum_csv(const SpectrumResult& r);
CsvTable sigma0_csv(const std::vector<Sigma0Point>& curve);

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// One polyline per series over shared linear axes.
void write_svg(std::ostream& os, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<SvgSeries>& series);

} // namespace gribov
