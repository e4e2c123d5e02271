#include "schiffer/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "schiffer/poly2.hpp"
#include "schiffer/verify.hpp"

namespace schiffer::nodal {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

int count_on_ring(const std::function<double(Point)>& f, Point p, double eps,
                  int n) {
    std::vector<double> vals(n);
    double mx = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = kTwoPi * i / n;
        vals[i] = f({p.x + eps * std::cos(a), p.y + eps * std::sin(a)});
        mx = std::max(mx, std::abs(vals[i]));
    }
    if (mx == 0.0) return 0;
    try {
        return verify::sign_changes(vals, 1e-12 * mx, true);
    } catch (const AllBelowFloorError&) {
        return 0;
    }
}

} // namespace

int ring_degree(const std::function<double(Point)>& f, Point p, double eps,
                int n_samples) {
    if (n_samples < 256)
        throw PreconditionError("ring_degree needs n_samples >= 256");
    if (!(eps > 0.0)) throw PreconditionError("ring_degree needs eps > 0");
    int c1 = count_on_ring(f, p, eps, n_samples);
    int c2 = count_on_ring(f, p, eps * 0.5, n_samples);
    int c3 = count_on_ring(f, p, eps * 0.25, n_samples);
    if (c1 != c2 || c2 != c3)
        throw UnstableCountError("ring counts did not stabilize");
    return c1;
}

std::string to_string(DegreeClass c) {
    switch (c) {
        case DegreeClass::two:
            return "two";
        case DegreeClass::four:
            return "four";
        case DegreeClass::six_or_more:
            return "six_or_more";
    }
    return "unknown";
}

VertexClassification classify_vertex(const TaylorJet& jet, Point q) {
    double scale = 0.0;
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4 - i; ++j)
            scale = std::max(scale, std::abs(jet.coeff(i, j)));
    if (scale == 0.0) throw NormalFormError("jet is identically zero");

    auto small = [&](double v) { return std::abs(v) <= 1e-8 * scale; };
    if (!small(jet.coeff(1, 0)) || !small(jet.coeff(0, 1)) ||
        !small(jet.coeff(2, 0)) || !small(jet.coeff(1, 1)) ||
        !small(jet.coeff(3, 0)))
        throw NormalFormError(
            "jet violates w10 = w01 = w20 = w11 = w30 = 0");
    if (small(jet.coeff(0, 0)))
        throw NormalFormError("normal form needs w00 != 0");
    const double w02 = jet.coeff(0, 2);
    if (small(w02)) throw NormalFormError("normal form needs w02 != 0");
    // the cubic part must be the harmonic pair fixed by the constraints
    if (std::abs(jet.coeff(1, 2)) > 1e-6 * scale ||
        std::abs(jet.coeff(2, 1) + 3.0 * jet.coeff(0, 3)) > 1e-6 * scale)
        throw NormalFormError("cubic part is not in normal form");

    VertexClassification out{DegreeClass::two, 0.0, 0.0};
    double qscale = std::max(1.0, std::hypot(q.x, q.y));
    if (std::abs(q.x) > 1e-12 * qscale) {
        out.cls = DegreeClass::two;
        out.margin = std::abs(q.x);
        out.tol = 1e-12 * qscale;
        return out;
    }
    const double w03 = jet.coeff(0, 3);
    if (std::abs(w03) <= 1e-12 * scale)
        throw FlatError("cubic coefficient w03 vanishes on the normal");
    double lead = 2.0 * w02 - 6.0 * q.y * w03;
    double tol = 1e-6 * (std::abs(2.0 * w02) + std::abs(6.0 * q.y * w03));
    out.margin = std::abs(lead);
    out.tol = tol;
    out.cls = std::abs(lead) > tol ? DegreeClass::four
                                   : DegreeClass::six_or_more;
    return out;
}

bool classify_vs_ring_oracle(const TaylorJet& jet, Point q) {
    auto cls = classify_vertex(jet, q);
    Poly2 rq = rotational_derivative(poly_from_jet(jet), q);
    auto f = [&](Point p) { return rq.eval(p.x, p.y); };
    for (double eps : {1e-2, 1e-3}) {
        int count = ring_degree(f, {0.0, 0.0}, eps);
        bool ok = false;
        switch (cls.cls) {
            case DegreeClass::two:
                ok = count == 2;
                break;
            case DegreeClass::four:
                ok = count == 4;
                break;
            case DegreeClass::six_or_more:
                ok = count >= 6;
                break;
        }
        if (!ok) return false;
    }
    return true;
}

namespace {

struct Chain {
    std::vector<Point> pts;
    bool closed = false;
};

struct MarchOut {
    std::vector<Chain> chains;
    std::vector<Point> candidates; // centers of crossing-rich cells
};

MarchOut march(const std::vector<double>& vals, int cells, Rect bbox) {
    const int nx = cells + 1;
    const double cw = (bbox.x1 - bbox.x0) / cells;
    const double ch = (bbox.y1 - bbox.y0) / cells;

    auto node = [&](int ix, int iy) {
        return Point{bbox.x0 + ix * cw, bbox.y0 + iy * ch};
    };
    // edge ids: 2 * node + 0 for the edge to the right, + 1 for the edge
    // upward
    auto hedge = [&](int ix, int iy) {
        return 2 * (static_cast<std::int64_t>(iy) * nx + ix);
    };
    auto vedge = [&](int ix, int iy) {
        return 2 * (static_cast<std::int64_t>(iy) * nx + ix) + 1;
    };
    auto crossing = [&](std::int64_t id) {
        std::int64_t base = id / 2;
        int iy = static_cast<int>(base / nx);
        int ix = static_cast<int>(base % nx);
        Point a = node(ix, iy);
        Point b = (id % 2 == 0) ? node(ix + 1, iy) : node(ix, iy + 1);
        double va = vals[iy * nx + ix];
        double vb = (id % 2 == 0) ? vals[iy * nx + ix + 1]
                                  : vals[(iy + 1) * nx + ix];
        double t = va / (va - vb);
        return Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    };

    struct Seg {
        std::int64_t e0, e1;
    };
    std::vector<Seg> segs;
    MarchOut out;

    std::vector<double> center_vals; // reserved for saddle resolution
    (void)center_vals;

    for (int cy = 0; cy < cells; ++cy) {
        for (int cx = 0; cx < cells; ++cx) {
            double v00 = vals[cy * nx + cx];
            double v10 = vals[cy * nx + cx + 1];
            double v11 = vals[(cy + 1) * nx + cx + 1];
            double v01 = vals[(cy + 1) * nx + cx];
            int c = (v00 > 0.0) | ((v10 > 0.0) << 1) | ((v11 > 0.0) << 2) |
                    ((v01 > 0.0) << 3);
            if (c == 0 || c == 15) continue;
            std::int64_t bottom = hedge(cx, cy);
            std::int64_t right = vedge(cx + 1, cy);
            std::int64_t top = hedge(cx, cy + 1);
            std::int64_t left = vedge(cx, cy);
            auto emit = [&](std::int64_t a, std::int64_t b) {
                segs.push_back({a, b});
            };
            switch (c) {
                case 1: case 14: emit(bottom, left); break;
                case 2: case 13: emit(bottom, right); break;
                case 4: case 11: emit(right, top); break;
                case 8: case 7: emit(top, left); break;
                case 3: case 12: emit(left, right); break;
                case 6: case 9: emit(bottom, top); break;
                case 5: case 10: {
                    // saddle: center sign picks the pairing
                    double vc = 0.25 * (v00 + v10 + v11 + v01);
                    bool center_pos = vc > 0.0;
                    bool diag00 = (c == 5); // v00 and v11 positive
                    if (diag00 == center_pos) {
                        emit(bottom, right);
                        emit(top, left);
                    } else {
                        emit(bottom, left);
                        emit(right, top);
                    }
                    Point cc{bbox.x0 + (cx + 0.5) * cw,
                             bbox.y0 + (cy + 0.5) * ch};
                    out.candidates.push_back(cc);
                    break;
                }
                default: break;
            }
        }
    }

    // chain segments by shared grid edges
    std::map<std::int64_t, std::vector<int>> incident;
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
        incident[segs[i].e0].push_back(i);
        incident[segs[i].e1].push_back(i);
    }
    std::vector<char> used(segs.size(), 0);
    auto other_end = [&](int si, std::int64_t e) {
        return segs[si].e0 == e ? segs[si].e1 : segs[si].e0;
    };
    auto next_seg = [&](std::int64_t e, int prev) -> int {
        const auto& inc = incident[e];
        for (int si : inc)
            if (si != prev && !used[si]) return si;
        return -1;
    };

    for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
        if (used[s0]) continue;
        // walk backward to an open start if there is one
        std::int64_t start_edge = segs[s0].e0;
        int cur = s0;
        std::int64_t e = start_edge;
        while (true) {
            int nxt = next_seg(e, cur);
            if (nxt < 0) break;
            cur = nxt;
            e = other_end(cur, e);
            if (cur == s0) break; // loop
        }
        // now (cur, e) is an endpoint of the component (or s0 again)
        Chain chain;
        std::int64_t walk_edge = e;
        int walk = cur;
        chain.pts.push_back(crossing(walk_edge));
        std::int64_t first_edge = walk_edge;
        while (true) {
            used[walk] = 1;
            walk_edge = other_end(walk, walk_edge);
            chain.pts.push_back(crossing(walk_edge));
            int nxt = next_seg(walk_edge, walk);
            if (nxt < 0) break;
            walk = nxt;
        }
        if (walk_edge == first_edge && chain.pts.size() > 2) {
            chain.closed = true;
            chain.pts.pop_back(); // drop the duplicated closing point
        }
        out.chains.push_back(std::move(chain));
    }
    return out;
}

} // namespace

NodalGraph trace_nodal(const WaveField& f, Rect bbox, int cells) {
    if (cells < 64) throw PreconditionError("trace_nodal needs cells >= 64");
    if (!(bbox.x1 > bbox.x0) || !(bbox.y1 > bbox.y0))
        throw PreconditionError("empty bounding box");
    double corner_r = 0.0;
    for (Point corner : {Point{bbox.x0, bbox.y0}, Point{bbox.x1, bbox.y0},
                         Point{bbox.x0, bbox.y1}, Point{bbox.x1, bbox.y1}})
        corner_r = std::max(corner_r, geom2d::norm(corner - f.origin()));
    if (f.k() * corner_r > 500.0)
        throw RangeError("bounding box exceeds the trusted field radius");

    NodalGraph g;
    g.bbox = bbox;
    g.cell_w = (bbox.x1 - bbox.x0) / cells;
    g.cell_h = (bbox.y1 - bbox.y0) / cells;

    const int nx = cells + 1;
    std::vector<double> vals(static_cast<size_t>(nx) * nx);
    double mx = 0.0;
    for (int iy = 0; iy < nx; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            Point p{bbox.x0 + ix * g.cell_w, bbox.y0 + iy * g.cell_h};
            double v = f.eval(p);
            vals[iy * nx + ix] = v;
            mx = std::max(mx, std::abs(v));
        }
    if (mx == 0.0) {
        g.nonzero_warning = true;
        return g;
    }
    // nudge exact zeros off the lattice so every node has a sign
    for (auto& v : vals)
        if (v == 0.0) v = 1e-14 * mx;

    auto marched = march(vals, cells, bbox);
    const double diag = std::hypot(g.cell_w, g.cell_h);

    // A crossing that sits exactly on a grid line never yields a saddle
    // cell, but the arcs passing through it come within a cell of each
    // other; near-approaches between distinct arcs (or distant parts of
    // one arc) are therefore candidates too.
    {
        const double prox = 1.2 * diag;
        struct PtRef {
            int chain, idx;
            Point p;
        };
        std::vector<PtRef> refs;
        for (int ci = 0; ci < static_cast<int>(marched.chains.size()); ++ci)
            for (int pi = 0;
                 pi < static_cast<int>(marched.chains[ci].pts.size()); ++pi)
                refs.push_back({ci, pi, marched.chains[ci].pts[pi]});
        auto bucket_of = [&](Point p) {
            return std::pair<long, long>{
                static_cast<long>(std::floor(p.x / prox)),
                static_cast<long>(std::floor(p.y / prox))};
        };
        std::map<std::pair<long, long>, std::vector<int>> buckets;
        for (int i = 0; i < static_cast<int>(refs.size()); ++i)
            buckets[bucket_of(refs[i].p)].push_back(i);
        for (int i = 0; i < static_cast<int>(refs.size()); ++i) {
            auto [bx, by] = bucket_of(refs[i].p);
            for (long ox = -1; ox <= 1; ++ox)
                for (long oy = -1; oy <= 1; ++oy) {
                    auto it = buckets.find({bx + ox, by + oy});
                    if (it == buckets.end()) continue;
                    for (int j : it->second) {
                        if (j <= i) continue;
                        const auto& a = refs[i];
                        const auto& b = refs[j];
                        if (a.chain == b.chain) {
                            int n = static_cast<int>(
                                marched.chains[a.chain].pts.size());
                            int d = std::abs(a.idx - b.idx);
                            if (marched.chains[a.chain].closed)
                                d = std::min(d, n - d);
                            if (d <= 5) continue;
                        }
                        if (geom2d::norm(a.p - b.p) < prox)
                            marched.candidates.push_back(
                                0.5 * (a.p + b.p));
                    }
                }
        }
    }

    // cluster the candidates and confirm each cluster on rings
    std::vector<std::vector<Point>> clusters;
    for (Point c : marched.candidates) {
        bool placed = false;
        for (auto& cl : clusters) {
            for (Point p : cl)
                if (geom2d::norm(p - c) < 3.0 * diag) {
                    cl.push_back(c);
                    placed = true;
                    break;
                }
            if (placed) break;
        }
        if (!placed) clusters.push_back({c});
    }
    auto field_eval = [&f](Point p) { return f.eval(p); };
    for (const auto& cl : clusters) {
        Point mean{0.0, 0.0};
        for (Point p : cl) {
            mean.x += p.x;
            mean.y += p.y;
        }
        mean.x /= cl.size();
        mean.y /= cl.size();
        // ring probes need a margin inside the window (and inside the
        // trusted field radius)
        if (mean.x - bbox.x0 < 2.5 * diag || bbox.x1 - mean.x < 2.5 * diag ||
            mean.y - bbox.y0 < 2.5 * diag || bbox.y1 - mean.y < 2.5 * diag)
            continue;
        int deg = 0;
        try {
            deg = ring_degree(field_eval, mean, 2.0 * diag);
        } catch (const UnstableCountError&) {
            continue;
        } catch (const RangeError&) {
            continue;
        }
        if (deg > 2) g.vertices.push_back({mean, deg, false});
    }

    // split chains at the registered vertices
    const double snap = 2.0 * diag;
    auto nearest_vertex = [&](Point p) -> int {
        int best = -1;
        double bd = snap;
        for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
            double d = geom2d::norm(p - g.vertices[v].pos);
            if (d < bd) {
                bd = d;
                best = v;
            }
        }
        return best;
    };

    for (auto& chain : marched.chains) {
        auto& pts = chain.pts;
        const int n = static_cast<int>(pts.size());
        if (n < 2) continue;
        std::vector<int> label(n);
        for (int i = 0; i < n; ++i) label[i] = nearest_vertex(pts[i]);

        // cut indices: per contiguous run with one label, the closest point
        std::vector<std::pair<int, int>> cuts; // (index, vertex)
        int i = 0;
        int start_offset = 0;
        if (chain.closed) {
            // rotate so the chain does not start inside a labeled run
            while (start_offset < n && label[start_offset] >= 0) ++start_offset;
            if (start_offset == n) continue; // chain swallowed by a vertex
            std::rotate(pts.begin(), pts.begin() + start_offset, pts.end());
            std::rotate(label.begin(), label.begin() + start_offset,
                        label.end());
        }
        while (i < n) {
            if (label[i] < 0) {
                ++i;
                continue;
            }
            int v = label[i];
            int j = i;
            int best = i;
            double bd = geom2d::norm(pts[i] - g.vertices[v].pos);
            while (j + 1 < n && label[j + 1] == v) {
                ++j;
                double d = geom2d::norm(pts[j] - g.vertices[v].pos);
                if (d < bd) {
                    bd = d;
                    best = j;
                }
            }
            cuts.push_back({best, v});
            i = j + 1;
        }

        if (cuts.empty()) {
            NodalGraph::Edge e;
            e.pts = pts;
            e.closed = chain.closed;
            if (chain.closed) e.pts.push_back(e.pts.front());
            g.edges.push_back(std::move(e));
            continue;
        }

        auto snap_pt = [&](int idx, int v) { pts[idx] = g.vertices[v].pos; };
        for (auto [idx, v] : cuts) snap_pt(idx, v);

        if (!chain.closed) {
            int prev = 0, prev_v = -1;
            for (auto [idx, v] : cuts) {
                if (idx > prev || prev_v >= 0) {
                    NodalGraph::Edge e;
                    e.pts.assign(pts.begin() + prev, pts.begin() + idx + 1);
                    e.v_start = prev_v;
                    e.v_end = v;
                    if (e.pts.size() >= 2) g.edges.push_back(std::move(e));
                }
                prev = idx;
                prev_v = v;
            }
            NodalGraph::Edge e;
            e.pts.assign(pts.begin() + prev, pts.end());
            e.v_start = prev_v;
            if (e.pts.size() >= 2) g.edges.push_back(std::move(e));
        } else {
            const int m = static_cast<int>(cuts.size());
            for (int ci = 0; ci < m; ++ci) {
                auto [ia, va] = cuts[ci];
                auto [ib, vb] = cuts[(ci + 1) % m];
                NodalGraph::Edge e;
                if (ci + 1 < m) {
                    e.pts.assign(pts.begin() + ia, pts.begin() + ib + 1);
                } else {
                    e.pts.assign(pts.begin() + ia, pts.end());
                    for (int t = 0; t <= ib; ++t) e.pts.push_back(pts[t]);
                }
                e.v_start = va;
                e.v_end = vb;
                if (e.pts.size() >= 2) g.edges.push_back(std::move(e));
            }
        }
    }

    // flag vertices whose outgoing arms are nearly parallel
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
        std::vector<Point> dirs;
        for (const auto& e : g.edges) {
            if (e.pts.size() < 2) continue;
            if (e.v_start == v) {
                Point d = e.pts[1] - e.pts[0];
                double nn = geom2d::norm(d);
                if (nn > 0.0) dirs.push_back({d.x / nn, d.y / nn});
            }
            if (e.v_end == v) {
                Point d = e.pts[e.pts.size() - 2] - e.pts.back();
                double nn = geom2d::norm(d);
                if (nn > 0.0) dirs.push_back({d.x / nn, d.y / nn});
            }
        }
        const double cos5 = std::cos(5.0 * 3.141592653589793 / 180.0);
        for (size_t a = 0; a < dirs.size() && !g.vertices[v].shallow_angle;
             ++a)
            for (size_t b = a + 1; b < dirs.size(); ++b)
                if (dot(dirs[a], dirs[b]) > cos5) {
                    g.vertices[v].shallow_angle = true;
                    break;
                }
    }
    return g;
}

namespace {

std::string fmt(double v, const char* spec = "%.8g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

void write_nodal_svg(const NodalGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    double w = g.bbox.x1 - g.bbox.x0, h = g.bbox.y1 - g.bbox.y0;
    double stroke = 0.004 * std::max(w, h);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
        << fmt(g.bbox.x0) << " " << fmt(-g.bbox.y1) << " " << fmt(w) << " "
        << fmt(h) << "\">\n";
    out << "<g transform=\"scale(1,-1)\" fill=\"none\">\n";
    for (const auto& e : g.edges) {
        out << "<polyline stroke=\"#20609f\" stroke-width=\"" << fmt(stroke)
            << "\" points=\"";
        for (const auto& p : e.pts)
            out << fmt(p.x) << "," << fmt(p.y) << " ";
        out << "\"/>\n";
    }
    for (const auto& v : g.vertices) {
        out << "<circle cx=\"" << fmt(v.pos.x) << "\" cy=\"" << fmt(v.pos.y)
            << "\" r=\"" << fmt(2.0 * stroke) << "\" fill=\""
            << (v.shallow_angle ? "#d0a020" : "#c03020") << "\"/>\n";
        out << "<text x=\"" << fmt(v.pos.x + 3.0 * stroke) << "\" y=\""
            << fmt(v.pos.y) << "\" font-size=\"" << fmt(10.0 * stroke)
            << "\" fill=\"#c03020\" transform=\"scale(1,-1) translate(0,"
            << fmt(-2.0 * v.pos.y) << ")\">" << v.degree << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

void write_nodal_csv(const NodalGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "x1,y1,x2,y2\n";
    for (const auto& e : g.edges)
        for (size_t i = 0; i + 1 < e.pts.size(); ++i)
            out << fmt(e.pts[i].x, "%.17g") << ","
                << fmt(e.pts[i].y, "%.17g") << ","
                << fmt(e.pts[i + 1].x, "%.17g") << ","
                << fmt(e.pts[i + 1].y, "%.17g") << "\n";
}

} // namespace schiffer::nodal
