// Command-line front end. Subcommands wrap the library modules into
// reproducible file-producing runs:
//
//   tau       normal-line count through a probe point
//   certify   central symmetry + normal count, combined verdict
//   eigs      sigma_min scan and refined Neumann eigenvalues
//   schiffer  boundary defect curve for { d_nu u = 0, u = 1 }
//   verify    identity battery for an accepted solution
//   nodal     traced zero set of a field (optionally of Xu)
//   sturm     sign-change lower bound for high-pass trig polynomials
//
// Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 degenerate
// configuration. Every run writes <cmd>.manifest.json next to its
// outputs echoing the configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schiffer/errors.hpp"
#include "schiffer/geom2d.hpp"
#include "schiffer/helmholtz.hpp"
#include "schiffer/jsonio.hpp"
#include "schiffer/nodal.hpp"
#include "schiffer/verify.hpp"
#include "schiffer/wavefield.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schiffer;
using geom2d::Point;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunContext {
    std::string name;
    std::string out_dir = ".";
    json config = json::object();
};

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

void emit_report(const RunContext& ctx, const json& report) {
    std::cout << report.dump(2) << "\n";
    write_json_file(fs::path(ctx.out_dir) / (ctx.name + ".json"), report);
}

json point_json(Point p) { return json::array({p.x, p.y}); }

wavefield::KillingField parse_killing(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError("--killing expects rot:PX,PY or const:A,B");
    std::string kind = text.substr(0, colon);
    double a = 0.0, b = 0.0;
    if (std::sscanf(text.c_str() + colon + 1, "%lf,%lf", &a, &b) != 2)
        throw ValidationError("--killing expects two comma-separated numbers");
    if (kind == "rot") return wavefield::KillingField::rotation({a, b});
    if (kind == "const") return wavefield::KillingField::constant(a, b);
    throw ValidationError("--killing kind must be rot or const");
}

int run_tau(RunContext& ctx, const std::string& domain,
            const std::vector<double>& probe) {
    auto curve = io::load_curve(domain);
    Point p = probe.empty() ? curve.center() : Point{probe[0], probe[1]};
    auto rep = geom2d::normal_count(curve, p);
    json j;
    j["probe"] = point_json(rep.probe);
    j["count"] = rep.count;
    j["roots"] = rep.roots;
    j["tangency_warning"] = rep.tangency_warning;
    j["grid_size"] = rep.grid_size;
    emit_report(ctx, j);
    return 0;
}

int run_certify(RunContext& ctx, const std::string& domain) {
    auto curve = io::load_curve(domain);
    auto rep = helmholtz::certificate(curve, domain);
    json j;
    j["domain_id"] = rep.domain_id;
    j["centrally_symmetric"] = rep.centrally_symmetric;
    if (rep.tau_count)
        j["tau"] = *rep.tau_count;
    else
        j["tau"] = nullptr;
    j["degenerate"] = rep.degenerate;
    j["conclusion"] = helmholtz::to_string(rep.conclusion);
    emit_report(ctx, j);
    switch (rep.conclusion) {
        case helmholtz::Conclusion::theorem_applies:
            return 0;
        case helmholtz::Conclusion::hypothesis_fails:
            return 1;
        case helmholtz::Conclusion::degenerate:
            return 3;
    }
    return 1;
}

int run_eigs(RunContext& ctx, const std::string& domain, double kmin,
             double kmax, double step, int order, std::uint64_t seed) {
    auto curve = io::load_curve(domain);
    helmholtz::CollocationOptions opts;
    opts.seed = seed;
    // the scan curve, written alongside the refined dips
    std::vector<std::vector<double>> rows;
    for (double k = kmin; k <= kmax + 1e-12 * (kmax - kmin); k += step)
        rows.push_back({k, helmholtz::sigma_min(curve, k, order, opts).sigma});
    io::write_csv(fs::path(ctx.out_dir) / "eigs_scan.csv", "k,sigma_min",
                  rows);
    auto eigs = helmholtz::scan_neumann_eigs(curve, kmin, kmax, step, order,
                                             opts);
    json j;
    j["count"] = eigs.size();
    j["eigenvalues"] = json::array();
    for (const auto& e : eigs)
        j["eigenvalues"].push_back({{"k", e.k_star},
                                    {"mu", e.mu},
                                    {"sigma", e.sigma},
                                    {"neumann_residual", e.neumann_residual},
                                    {"ill_conditioned", e.ill_conditioned}});
    emit_report(ctx, j);
    return 0;
}

int run_schiffer(RunContext& ctx, const std::string& domain, double kmin,
                 double kmax, double step, int order, std::uint64_t seed) {
    if (!(kmin > 0.0) || kmax < kmin || !(step > 0.0))
        throw PreconditionError("need 0 < kmin <= kmax and step > 0");
    auto curve = io::load_curve(domain);
    helmholtz::CollocationOptions opts;
    opts.seed = seed;
    std::vector<std::vector<double>> rows;
    std::optional<helmholtz::SchifferResult> best;
    bool any_ill = false;
    for (double k = kmin; k <= kmax + 1e-12 * std::max(kmax - kmin, 1.0);
         k += step) {
        auto r = helmholtz::schiffer_residual(curve, k, order, opts);
        rows.push_back({k, r.defect});
        any_ill = any_ill || r.ill_conditioned;
        if (!best || r.defect < best->defect) best = std::move(r);
        if (kmin == kmax) break;
    }
    io::write_csv(fs::path(ctx.out_dir) / "schiffer_scan.csv", "k,defect",
                  rows);
    io::save_field(best->field,
                   (fs::path(ctx.out_dir) / "schiffer_field.json").string());
    json j;
    j["k_at_min"] = best->k;
    j["min_defect"] = best->defect;
    j["samples"] = rows.size();
    j["ill_conditioned_any"] = any_ill;
    j["field_file"] = "schiffer_field.json";
    emit_report(ctx, j);
    return 0;
}

int run_verify(RunContext& ctx, const std::string& domain, double k,
               int order, std::uint64_t seed) {
    auto curve = io::load_curve(domain);
    helmholtz::CollocationOptions opts;
    opts.seed = seed;
    auto sol = helmholtz::schiffer_residual(curve, k, order, opts);
    bool symmetric = geom2d::check_central_symmetry(curve);
    json j;
    j["k"] = k;
    j["order"] = order;
    j["defect"] = sol.defect;
    j["centrally_symmetric"] = symmetric;
    bool accepted = sol.defect < 1e-6;
    j["accepted"] = accepted;
    if (!accepted) {
        j["pass"] = false;
        emit_report(ctx, j);
        return 1;
    }
    bool pass = true;

    double bd2 = verify::boundary_second_derivative_check(sol.field, curve);
    j["boundary_second_derivative_max_error"] = bd2;
    pass = pass && bd2 < 1e-7;

    Point c = curve.center();
    auto killing_entry = [&](const wavefield::KillingField& K) {
        auto v = verify::vanishing_integrals(sol.field, curve, K);
        for (double x : v) pass = pass && x < 1e-8;
        return json::array({v[0], v[1], v[2]});
    };
    j["vanishing_integrals"] = {
        {"constant_1_0", killing_entry(wavefield::KillingField::constant(1, 0))},
        {"constant_0_1", killing_entry(wavefield::KillingField::constant(0, 1))},
        {"rotation_center", killing_entry(wavefield::KillingField::rotation(c))},
        {"rotation_offset",
         killing_entry(wavefield::KillingField::rotation(
             {c.x + 0.3, c.y + 0.4}))},
    };

    auto rot = wavefield::KillingField::rotation(c);
    auto ru = wavefield::apply_killing(sol.field, rot);
    auto trace = verify::normal_derivative_trace(ru, curve, 2048,
                                                 "d_nu of rotation field");
    auto hc = verify::tangent_harmonic_coeffs(trace, 3);
    j["harmonic_coeffs"] = {{"c", hc.c}, {"s", hc.s}};
    try {
        // floor at the natural boundary-Hessian scale of the solution, so
        // an identically-zero trace reads as degenerate instead of
        // counting noise wiggles
        double floor = 1e-9 * k * k * curve.scale();
        j["sign_changes"] = verify::sign_changes(trace, floor);
    } catch (const AllBelowFloorError&) {
        j["sign_changes"] = nullptr;
        j["sign_changes_note"] = "trace below noise floor";
    }

    if (symmetric) {
        double iota = verify::iota_symmetry_defect(sol.field, curve);
        j["iota_symmetry_defect"] = iota;
        pass = pass && iota < 1e-6;
    }
    j["pass"] = pass;
    emit_report(ctx, j);
    return pass ? 0 : 1;
}

int run_nodal(RunContext& ctx, const std::string& field_file,
              const std::vector<double>& bbox, int cells,
              const std::string& killing) {
    auto f = io::load_field(field_file);
    wavefield::WaveField g = f;
    if (!killing.empty())
        g = wavefield::apply_killing(f, parse_killing(killing));
    nodal::Rect rect{bbox[0], bbox[1], bbox[2], bbox[3]};
    auto graph = nodal::trace_nodal(g, rect, cells);
    nodal::write_nodal_svg(graph, (fs::path(ctx.out_dir) / "nodal.svg").string());
    nodal::write_nodal_csv(graph, (fs::path(ctx.out_dir) / "nodal.csv").string());
    json j;
    j["vertices"] = json::array();
    for (const auto& v : graph.vertices)
        j["vertices"].push_back({{"x", v.pos.x},
                                 {"y", v.pos.y},
                                 {"degree", v.degree},
                                 {"shallow_angle", v.shallow_angle}});
    j["edge_count"] = graph.edges.size();
    j["nonzero_warning"] = graph.nonzero_warning;
    emit_report(ctx, j);
    return 0;
}

int run_sturm(RunContext& ctx, int mlow, int trials, std::uint64_t seed) {
    auto rep = verify::sturm_bound_check(mlow, trials, seed);
    json j;
    j["pass"] = rep.pass;
    j["trials"] = rep.trials;
    j["min_count"] = rep.min_count;
    j["bound"] = rep.bound;
    emit_report(ctx, j);
    return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"collocation laboratory for planar Fourier domains"};
    app.require_subcommand(1);

    RunContext ctx;
    std::string domain, field_file, killing;
    std::vector<double> probe, bbox;
    double kmin = 0.0, kmax = 0.0, step = 0.0, kval = 0.0;
    int order = 16, cells = 256, mlow = 4, trials = 1000;
    std::uint64_t seed = helmholtz::CollocationOptions{}.seed;

    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", ctx.out_dir, "output directory")
            ->capture_default_str();
    };

    auto* tau = app.add_subcommand("tau", "count boundary normals through a probe");
    tau->add_option("--domain", domain, "curve JSON file")->required();
    tau->add_option("--probe", probe, "probe point (default: curve center)")
        ->expected(2);
    add_out(tau);

    auto* certify = app.add_subcommand("certify", "symmetry + normal-count verdict");
    certify->add_option("--domain", domain)->required();
    add_out(certify);

    auto* eigs = app.add_subcommand("eigs", "scan for Neumann eigenvalues");
    eigs->add_option("--domain", domain)->required();
    eigs->add_option("--kmin", kmin)->required();
    eigs->add_option("--kmax", kmax)->required();
    eigs->add_option("--step", step)->required();
    eigs->add_option("--order", order)->capture_default_str();
    eigs->add_option("--seed", seed)->capture_default_str();
    add_out(eigs);

    auto* schiffer = app.add_subcommand("schiffer", "boundary defect curve");
    schiffer->add_option("--domain", domain)->required();
    schiffer->add_option("--kmin", kmin)->required();
    schiffer->add_option("--kmax", kmax)->required();
    schiffer->add_option("--step", step)->required();
    schiffer->add_option("--order", order)->capture_default_str();
    schiffer->add_option("--seed", seed)->capture_default_str();
    add_out(schiffer);

    auto* verify_cmd = app.add_subcommand("verify", "identity battery at fixed k");
    verify_cmd->add_option("--domain", domain)->required();
    verify_cmd->add_option("--k", kval)->required();
    verify_cmd->add_option("--order", order)->capture_default_str();
    verify_cmd->add_option("--seed", seed)->capture_default_str();
    add_out(verify_cmd);

    auto* nodal_cmd = app.add_subcommand("nodal", "trace the zero set of a field");
    nodal_cmd->add_option("--field", field_file, "field JSON file")->required();
    nodal_cmd->add_option("--bbox", bbox, "x0 y0 x1 y1")->expected(4)->required();
    nodal_cmd->add_option("--cells", cells)->capture_default_str();
    nodal_cmd->add_option("--killing", killing, "rot:PX,PY or const:A,B");
    add_out(nodal_cmd);

    auto* sturm = app.add_subcommand("sturm", "sign-change lower bound trials");
    sturm->add_option("--mlow", mlow)->capture_default_str();
    sturm->add_option("--trials", trials)->capture_default_str();
    sturm->add_option("--seed", seed)->capture_default_str();
    add_out(sturm);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto* sub = app.get_subcommands().front();
    ctx.name = sub->get_name();
    for (const auto* opt : sub->get_options()) {
        if (opt->get_name() == "--help") continue;
        if (!opt->results().empty())
            ctx.config[opt->get_name()] = opt->results().size() == 1
                                              ? json(opt->results().front())
                                              : json(opt->results());
        else
            ctx.config[opt->get_name()] = json(opt->get_default_str());
    }

    auto t0 = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec)
            throw ValidationError("cannot create output directory " +
                                  ctx.out_dir);
        if (sub == tau)
            rc = run_tau(ctx, domain, probe);
        else if (sub == certify)
            rc = run_certify(ctx, domain);
        else if (sub == eigs)
            rc = run_eigs(ctx, domain, kmin, kmax, step, order, seed);
        else if (sub == schiffer)
            rc = run_schiffer(ctx, domain, kmin, kmax, step, order, seed);
        else if (sub == verify_cmd)
            rc = run_verify(ctx, domain, kval, order, seed);
        else if (sub == nodal_cmd)
            rc = run_nodal(ctx, field_file, bbox, cells, killing);
        else if (sub == sturm)
            rc = run_sturm(ctx, mlow, trials, seed);
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
    } catch (const DegenerateError& e) {
        json j;
        j["degenerate"] = true;
        j["message"] = e.what();
        std::cout << j.dump(2) << "\n";
        std::cerr << "degenerate: " << e.what() << "\n";
        rc = 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 1;
    }

    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    try {
        json manifest;
        manifest["command"] = ctx.name;
        manifest["version"] = kVersion;
        manifest["config"] = ctx.config;
        manifest["wall_time_seconds"] = dt;
        write_json_file(fs::path(ctx.out_dir) / (ctx.name + ".manifest.json"),
                        manifest);
    } catch (const std::exception& e) {
        std::cerr << "warning: manifest not written: " << e.what() << "\n";
    }
    return rc;
}
