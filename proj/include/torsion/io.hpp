#pragma once

// JSON documents for the input types. Matrices are row-major lists of rows;
// an entry is a number or [re, im]. Every loader throws Error(Schema) with
// the JSON pointer of the offending value; mathematical invariants are
// checked by the module validators afterwards (Data / Dimension errors).

#include <string>

#include "json.hpp"
#include "torsion/analytic.hpp"
#include "torsion/glue.hpp"
#include "torsion/metric_complex.hpp"
#include "torsion/morse.hpp"
#include "torsion/spectral.hpp"

namespace torsion::io {

using Json = nlohmann::ordered_json;

Json to_json(const Mat& m);
Mat matrix_from_json(const Json& j, const std::string& where);

// {dims, v, h, base: {kind: point | formal | circle, ...}}
Json to_json(const MetricComplex& e);
MetricComplex complex_from_json(const Json& j);

// {rank, points: [{id, index, on_boundary, region, cell_length?, orientation?}],
//  instantons: [{from, to, sign, transport?}]}
Json to_json(const morse::MorseData& m);
morse::MorseData morse_from_json(const Json& j);

// {dims: [[...] per column], h, d, v: [[matrix per row] per column]}
Json to_json(const spectral::DoubleComplexData& dc);
spectral::DoubleComplexData double_from_json(const Json& j);

// {kind: circle, L, holonomy} | {kind: interval, L, bc: abs | rel | [left, right], rank}
Json to_json(const analytic::ModelGeometry& g);
analytic::ModelGeometry geometry_from_json(const Json& j);

// {circle: {L, holonomy}, split} | {interval: {L}, split, rank}
Json to_json(const glue::GluingScenario& sc);
glue::GluingScenario scenario_from_json(const Json& j);

// Parse text; syntax errors become Schema errors.
Json parse(const std::string& text);
std::string read_file(const std::string& path);

}  // namespace torsion::io
