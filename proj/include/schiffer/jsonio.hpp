#pragma once

// JSON readers and writers for the two on-disk object kinds (boundary
// curves and wave fields) plus small CSV helpers shared by the tools.

#include <string>
#include <vector>

#include "schiffer/geom2d.hpp"
#include "schiffer/wavefield.hpp"

#include <json.hpp>

namespace schiffer::io {

using geom2d::Point;

// Curve files look like
//   {"kind": "polar", "center": [0, 0], "r0": 1.0,
//    "coeffs": [{"k": 6, "a": 0.05, "b": 0.0}]}
// or, with complex Fourier modes indexed by signed k,
//   {"kind": "direct", "center": [0, 0],
//    "coeffs": [{"k": 1, "a": 1.5, "b": 0.0}, {"k": -1, "a": 0.5, "b": 0.0}]}
// Unknown keys and missing required keys raise ValidationError.
geom2d::BoundaryCurve load_curve(const std::string& path);
geom2d::BoundaryCurve curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const geom2d::BoundaryCurve& curve);
void save_curve(const geom2d::BoundaryCurve& curve, const std::string& path);

// Field files look like
//   {"k": 1.8412, "origin": [0, 0],
//    "coeffs": [{"n": 1, "alpha": 0.3, "beta": 0.0}]}
// Orders absent from "coeffs" are zero; the largest n sets the truncation.
wavefield::WaveField load_field(const std::string& path);
wavefield::WaveField field_from_json(const nlohmann::json& j);
nlohmann::json field_to_json(const wavefield::WaveField& f);
void save_field(const wavefield::WaveField& f, const std::string& path);

// CSV with a header row; every number is rendered with %.17g so files
// round-trip bit for bit.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

std::string format_g17(double v);

} // namespace schiffer::io
