#pragma once

// Nodal-set analysis: local vanishing degree measured on shrinking
// rings, the jet-based vertex classifier for the rotation derivative of
// a wave field, and a marching-squares tracer that assembles the zero
// set into a graph of edges and even-degree vertices.

#include <functional>
#include <string>
#include <vector>

#include "schiffer/geom2d.hpp"
#include "schiffer/wavefield.hpp"

namespace schiffer::nodal {

using geom2d::Point;
using wavefield::TaylorJet;
using wavefield::WaveField;

// Sign changes of f around the circle of radius eps about p, with a
// relative deadband of 1e-12. The count is recomputed at eps/2 and
// eps/4 and must agree all three times (UnstableCountError otherwise).
// A field that is zero on all three rings reports 0.
int ring_degree(const std::function<double(Point)>& f, Point p, double eps,
                int n_samples = 512);

enum class DegreeClass { two, four, six_or_more };

std::string to_string(DegreeClass c);

struct VertexClassification {
    DegreeClass cls;
    double margin; // |x_q| off the normal, else |2 w02 - 6 y_q w03|
    double tol;    // threshold the margin was compared against
};

// Local degree of the zero set of R_q(w) at the jet base, for a jet in
// the adapted frame (base at the origin, tangent along x) satisfying
// w10 = w01 = w20 = w11 = w30 = 0 with w00, w02, w03 != 0. q is given in
// the same adapted coordinates. The trichotomy:
//   off the normal (x_q != 0)            -> two
//   on the normal, 2 w02 - 6 y_q w03 != 0 -> four
//   on the normal at y_q = w02 / (3 w03)  -> six_or_more
VertexClassification classify_vertex(const TaylorJet& jet, Point q);

// Independent check: build the degree-4 polynomial from the jet, apply
// the rotation derivative symbolically, and measure ring counts at
// eps = 1e-2 and 1e-3. True iff both counts match the class.
bool classify_vs_ring_oracle(const TaylorJet& jet, Point q);

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

struct NodalGraph {
    struct Vertex {
        Point pos;
        int degree = 0;
        bool shallow_angle = false; // incident edges meet below 5 degrees
    };
    struct Edge {
        std::vector<Point> pts;
        bool closed = false;
        int v_start = -1; // vertex index, -1 for a loop or a window end
        int v_end = -1;
    };
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    Rect bbox;
    double cell_w = 0.0, cell_h = 0.0;
    bool nonzero_warning = false; // the field vanished on the whole grid
};

// Marching squares on a cells x cells grid (cells >= 64), saddle cells
// resolved by the field value at the cell center. Vertices are
// registered where crossing-rich cells cluster and the ring count
// exceeds 2, with the degree taken from ring_degree at twice the cell
// diagonal.
NodalGraph trace_nodal(const WaveField& f, Rect bbox, int cells);

void write_nodal_svg(const NodalGraph& g, const std::string& path);
void write_nodal_csv(const NodalGraph& g, const std::string& path);

} // namespace schiffer::nodal
