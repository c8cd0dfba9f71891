// Command-line interface: evaluation, verification and export of the kinetic
// fractional kernel quantities. Exit codes: 0 ok, 1 domain error,
// 2 convergence failure, 3 verification failure, 64 bad usage.

#include "kinkernel/asymptotics.hpp"
#include "kinkernel/bounds.hpp"
#include "kinkernel/closed_half.hpp"
#include "kinkernel/fourier_kernel.hpp"
#include "kinkernel/parallel.hpp"
#include "kinkernel/path_reps.hpp"
#include "kinkernel/symbol.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
using namespace kinkernel;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct GridAxis {
    double lo, hi, step;
};

GridAxis parse_grid(const std::string& spec) {
    GridAxis g{};
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':')
        throw CLI::ValidationError("grid", "expected lo:hi:step, got '" + spec + "'");
    if (!(g.step > 0.0) || !(g.hi >= g.lo))
        throw CLI::ValidationError("grid", "degenerate grid '" + spec + "'");
    return g;
}

std::vector<double> axis_points(const GridAxis& g) {
    std::vector<double> pts;
    long n = (long)std::floor((g.hi - g.lo) / g.step + 0.5);
    for (long i = 0; i <= n; ++i) pts.push_back(g.lo + (double)i * g.step);
    return pts;
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    f << content;
}

std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

json meta_for(const std::string& command, const json& config) {
    return json{{"command", command}, {"version", kVersion}, {"config", config}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinetic fractional kernel toolkit"};
    app.require_subcommand(1);

    // common options live per-subcommand to keep --help readable
    double s = 0.5, t = 1.0, x = 0.0, v = 0.0;
    double kappa = 0.0, tol = 1e-5;
    std::string iotaStr;
    std::string gridSpec = "-4:4:0.5", xgridSpec, vgridSpec;
    std::string output = "json", outPath, routeStr = "auto", kindStr = "velocity";
    std::string radiiStr = "25,50,100,200";
    double absTol = 1e-10, relTol = 1e-9;

    auto add_common = [&](CLI::App* sub, bool needsS = true) {
        if (needsS) sub->add_option("--s", s, "diffusion order in (0,1)");
        sub->add_option("--output", output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", outPath, "output file (stdout when omitted)");
        sub->add_option("--abs-tol", absTol, "quadrature absolute tolerance");
        sub->add_option("--rel-tol", relTol, "quadrature relative tolerance");
    };

    auto* cEval = app.add_subcommand("eval", "evaluate p_s(t,x,v)");
    add_common(cEval);
    cEval->add_option("--t", t, "time > 0");
    cEval->add_option("--x", x, "position");
    cEval->add_option("--v", v, "velocity");

    auto* cGrid = app.add_subcommand("grid", "evaluate k_s on a grid");
    add_common(cGrid);
    cGrid->add_option("--grid", gridSpec, "lo:hi:step for both axes");
    cGrid->add_option("--xgrid", xgridSpec, "override x axis");
    cGrid->add_option("--vgrid", vgridSpec, "override v axis");
    cGrid->add_option("--t", t, "time > 0");

    auto* cMass = app.add_subcommand("mass", "total mass of k_s");
    add_common(cMass);

    auto* cBounds = app.add_subcommand("verify-bounds", "two-sided bound ratio sweep");
    add_common(cBounds);
    cBounds->add_option("--grid", gridSpec, "lo:hi:step for both axes");

    auto* cRay = app.add_subcommand("ray-limit", "j_s*k_s along a ray");
    add_common(cRay);
    cRay->add_option("--kind", kindStr, "velocity | spatial | diagonal")
        ->check(CLI::IsMember({"velocity", "spatial", "diagonal"}));
    cRay->add_option("--kappa", kappa, "ray slope parameter");
    cRay->add_option("--iota", iotaStr, "offset parameter (diagonal rays)");
    cRay->add_option("--radii", radiiStr, "comma-separated radii");

    auto* cAsym = app.add_subcommand("asymptotics", "C_{s,1} / C_{s,3} constants");
    add_common(cAsym);
    cAsym->add_option("--kappa", kappa, "ray parameter");
    cAsym->add_option("--iota", iotaStr, "velocity-regime offset (inf, -inf allowed)");
    cAsym->add_option("--route", routeStr, "auto | pv | hyp | special")
        ->check(CLI::IsMember({"auto", "pv", "hyp", "special"}));

    auto* cClosed = app.add_subcommand("closed-form-check", "s=1/2 closed form vs Fourier");
    add_common(cClosed, false);
    cClosed->add_option("--grid", gridSpec, "lo:hi:step for both axes");
    cClosed->add_option("--tol", tol, "relative tolerance gate");

    auto* cIdent = app.add_subcommand("verify-identities", "ray-integral identities");
    add_common(cIdent);
    double theta = 0.1;
    cIdent->add_option("--theta", theta, "ray angle fraction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 64;
    }

    QuadSpec q;
    q.absTol = absTol;
    q.relTol = relTol;

    try {
        if (cEval->parsed()) {
            FracOrder order(s);
            KernelValue kv;
            if (s == 0.5) {
                auto red = scaling_reduce(order, PhasePoint(t, x, v));
                double val = red.prefactor * closed_half::k_half(red.x1 - 0.5 * red.v1, red.v1);
                kv = {val, 1e-14 * std::fabs(val), Method::ClosedHalf};
            } else {
                kv = fourier::p_eval(order, PhasePoint(t, x, v), q);
            }
            json cfg{{"s", s}, {"t", t}, {"x", x}, {"v", v}};
            if (output == "json") {
                json out{{"meta", meta_for("eval", cfg)},
                         {"data", json::array({json{{"s", s},
                                                    {"t", t},
                                                    {"x", x},
                                                    {"v", v},
                                                    {"value", kv.value},
                                                    {"error", kv.errorEstimate},
                                                    {"method", method_name(kv.method)}}})}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                std::string csv = "s,t,x,v,value,error,method\n";
                csv += csv_join({fmt(s), fmt(t), fmt(x), fmt(v), fmt(kv.value),
                                 fmt(kv.errorEstimate), method_name(kv.method)});
                write_out(outPath, csv);
            }
            return 0;
        }

        if (cGrid->parsed()) {
            FracOrder order(s);
            GridAxis gx = parse_grid(xgridSpec.empty() ? gridSpec : xgridSpec);
            GridAxis gv = parse_grid(vgridSpec.empty() ? gridSpec : vgridSpec);
            auto xs = axis_points(gx);
            auto vs = axis_points(gv);
            struct Row {
                double x, v, value, error;
                Method m;
            };
            std::vector<Row> rows(xs.size() * vs.size());
            parallel_for(vs.size(), [&](size_t iv) {
                fourier::KernelContext ctx;
                for (size_t ix = 0; ix < xs.size(); ++ix) {
                    KernelValue kv;
                    if (s == 0.5) {
                        double val = closed_half::k_half(xs[ix], vs[iv]);
                        kv = {val, 1e-14 * std::fabs(val), Method::ClosedHalf};
                    } else {
                        kv = fourier::k_eval(order, xs[ix], vs[iv], q, ctx);
                    }
                    rows[iv * xs.size() + ix] = {xs[ix], vs[iv], kv.value, kv.errorEstimate,
                                                 kv.method};
                }
            });
            json cfg{{"s", s}, {"t", t}, {"grid", gridSpec}};
            if (output == "json") {
                json data = json::array();
                for (auto& r : rows)
                    data.push_back(json{{"s", s},
                                        {"t", t},
                                        {"x", r.x},
                                        {"v", r.v},
                                        {"value", r.value},
                                        {"error", r.error},
                                        {"method", method_name(r.m)}});
                json out{{"meta", meta_for("grid", cfg)}, {"data", data}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                std::string csv = "s,t,x,v,value,error,method\n";
                for (auto& r : rows)
                    csv += csv_join({fmt(s), fmt(t), fmt(r.x), fmt(r.v), fmt(r.value),
                                     fmt(r.error), method_name(r.m)});
                write_out(outPath, csv);
            }
            return 0;
        }

        if (cMass->parsed()) {
            FracOrder order(s);
            double m = fourier::mass(order, q);
            json cfg{{"s", s}};
            if (output == "json") {
                json out{{"meta", meta_for("mass", cfg)},
                         {"data", json::array({json{{"s", s}, {"value", m}}})}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                write_out(outPath, "s,value\n" + csv_join({fmt(s), fmt(m)}));
            }
            return 0;
        }

        if (cBounds->parsed()) {
            FracOrder order(s);
            GridAxis g = parse_grid(gridSpec);
            bounds::GridRect rect{g.lo, g.hi, g.lo, g.hi};
            auto rep = bounds::ratio_grid(order, rect, g.step, q);
            json cfg{{"s", s}, {"grid", gridSpec}};
            json data{{"s", s},
                      {"minRatio", rep.minRatio},
                      {"maxRatio", rep.maxRatio},
                      {"argmin", json::array({rep.argminX, rep.argminV})},
                      {"argmax", json::array({rep.argmaxX, rep.argmaxV})},
                      {"empiricalC", rep.empiricalC}};
            if (output == "json") {
                json out{{"meta", meta_for("verify-bounds", cfg)}, {"data", json::array({data})}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                std::string csv = "s,minRatio,maxRatio,argminX,argminV,argmaxX,argmaxV,empiricalC\n";
                csv += csv_join({fmt(s), fmt(rep.minRatio), fmt(rep.maxRatio), fmt(rep.argminX),
                                 fmt(rep.argminV), fmt(rep.argmaxX), fmt(rep.argmaxV),
                                 fmt(rep.empiricalC)});
                write_out(outPath, csv);
            }
            return (rep.minRatio > 0.0 && std::isfinite(rep.empiricalC)) ? 0 : 3;
        }

        if (cRay->parsed()) {
            FracOrder order(s);
            bounds::RaySpec ray;
            ray.kind = kindStr == "velocity"  ? bounds::RayKind::VelocityRay
                       : kindStr == "spatial" ? bounds::RayKind::SpatialRay
                                              : bounds::RayKind::DiagonalOffset;
            ray.kappa = kappa;
            if (!iotaStr.empty()) ray.iota = std::stod(iotaStr);
            ray.radii.clear();
            std::istringstream rs(radiiStr);
            std::string tok;
            while (std::getline(rs, tok, ',')) ray.radii.push_back(std::stod(tok));
            auto res = bounds::ray_limit(order, ray, q);
            json cfg{{"s", s}, {"kind", kindStr}, {"kappa", kappa}, {"iota", ray.iota},
                     {"radii", radiiStr}};
            if (output == "json") {
                json vals = json::array();
                for (auto& [R, val] : res.values) vals.push_back(json{{"radius", R}, {"value", val}});
                json out{{"meta", meta_for("ray-limit", cfg)},
                         {"data", json::array({json{{"s", s},
                                                    {"values", vals},
                                                    {"predicted", res.predicted},
                                                    {"extrapolated", res.extrapolated}}})}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                std::string csv = "s,radius,value,predicted,extrapolated\n";
                for (auto& [R, val] : res.values)
                    csv += csv_join({fmt(s), fmt(R), fmt(val), fmt(res.predicted),
                                     fmt(res.extrapolated)});
                write_out(outPath, csv);
            }
            return 0;
        }

        if (cAsym->parsed()) {
            FracOrder order(s);
            asymptotics::AsymptoticConstant ac{};
            double iotaVal = std::numeric_limits<double>::quiet_NaN();
            if (!iotaStr.empty()) {
                if (iotaStr == "inf" || iotaStr == "+inf")
                    iotaVal = std::numeric_limits<double>::infinity();
                else if (iotaStr == "-inf")
                    iotaVal = -std::numeric_limits<double>::infinity();
                else
                    iotaVal = std::stod(iotaStr);
                ac = asymptotics::c_s1(order, asymptotics::VelocityRegimeInput(kappa, iotaVal), q);
            } else {
                asymptotics::Route route = asymptotics::Route::Auto;
                if (routeStr == "pv") route = asymptotics::Route::PVQuadrature;
                else if (routeStr == "hyp") route = asymptotics::Route::Hypergeometric;
                else if (routeStr == "special") route = asymptotics::Route::DerivativeSpecial;
                ac = asymptotics::c_s3(order, asymptotics::SpatialRegimeInput(kappa), route, q);
            }
            json cfg{{"s", s}, {"kappa", kappa}, {"iota", iotaStr}, {"route", routeStr}};
            if (output == "json") {
                json rec{{"s", s}, {"kappa", kappa}, {"value", ac.value}, {"route", ac.route}};
                rec["iota"] = iotaStr.empty() ? json(nullptr) : json(iotaVal);
                json out{{"meta", meta_for("asymptotics", cfg)}, {"data", json::array({rec})}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                std::string csv = "s,kappa,iota,value,route\n";
                csv += csv_join({fmt(s), fmt(kappa), iotaStr.empty() ? "" : fmt(iotaVal),
                                 fmt(ac.value), ac.route});
                write_out(outPath, csv);
            }
            return 0;
        }

        if (cClosed->parsed()) {
            FracOrder order(0.5);
            GridAxis g = parse_grid(gridSpec);
            auto xs = axis_points(g);
            auto vs = axis_points(g);
            struct Row {
                double x, v, closed, fourier;
            };
            std::vector<Row> rows(xs.size() * vs.size());
            parallel_for(vs.size(), [&](size_t iv) {
                fourier::KernelContext ctx;
                for (size_t ix = 0; ix < xs.size(); ++ix) {
                    double cl = closed_half::k_half(xs[ix], vs[iv]);
                    double fo = fourier::k_eval(order, xs[ix], vs[iv], q, ctx).value;
                    rows[iv * xs.size() + ix] = {xs[ix], vs[iv], cl, fo};
                }
            });
            double worst = 0.0;
            std::string csv = "x,v,closed,fourier,absdiff\n";
            for (auto& r : rows) {
                double d = std::fabs(r.closed - r.fourier);
                worst = std::max(worst, d / std::fabs(r.closed));
                csv += csv_join({fmt(r.x), fmt(r.v), fmt(r.closed), fmt(r.fourier), fmt(d)});
            }
            if (output == "json") {
                json data = json::array();
                for (auto& r : rows)
                    data.push_back(json{{"x", r.x},
                                        {"v", r.v},
                                        {"closed", r.closed},
                                        {"fourier", r.fourier},
                                        {"absdiff", std::fabs(r.closed - r.fourier)}});
                json out{{"meta", meta_for("closed-form-check", json{{"grid", gridSpec}, {"tol", tol}})},
                         {"data", data}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                write_out(outPath, csv);
            }
            return worst <= tol ? 0 : 3;
        }

        if (cIdent->parsed()) {
            FracOrder order(s);
            path_reps::RayPath path(theta);
            std::string csv = "kind,s,param,c,numeric,closed,absdiff\n";
            bool ok = true;
            for (double a : {-0.5, 0.0, 1.0}) {
                auto [num, clo] = path_reps::ray_gamma_identity(order, a, path);
                double d = std::fabs(num - clo);
                ok = ok && d <= 1e-6 * (1.0 + std::fabs(clo));
                csv += csv_join({"gamma", fmt(s), fmt(a), "", fmt(num), fmt(clo), fmt(d)});
            }
            double kEq = 1.0 / order.twoS;
            double kUp = std::ceil(1.0 / order.twoS) + 1.0;
            for (double c : {1.0, 3.0}) {
                double closedEq = M_PI * order.s;
                double numEq = path_reps::cancellation_identity(order, kEq, c, path);
                double dEq = std::fabs(numEq - closedEq);
                ok = ok && dEq <= 1e-6 * (1.0 + closedEq);
                csv += csv_join({"cancel", fmt(s), fmt(kEq), fmt(c), fmt(numEq), fmt(closedEq),
                                 fmt(dEq)});
                double numUp = path_reps::cancellation_identity(order, kUp, c, path);
                ok = ok && std::fabs(numUp) <= 1e-6;
                csv += csv_join({"cancel", fmt(s), fmt(kUp), fmt(c), fmt(numUp), "0", fmt(std::fabs(numUp))});
            }
            if (output == "json") {
                // re-emit rows as records
                json data = json::array();
                std::istringstream is(csv);
                std::string line;
                std::getline(is, line);
                while (std::getline(is, line)) {
                    std::istringstream ls(line);
                    std::string kind, sv, pv, cv, nv, clv, dv;
                    std::getline(ls, kind, ','); std::getline(ls, sv, ',');
                    std::getline(ls, pv, ','); std::getline(ls, cv, ',');
                    std::getline(ls, nv, ','); std::getline(ls, clv, ',');
                    std::getline(ls, dv, ',');
                    data.push_back(json{{"kind", kind}, {"s", std::stod(sv)}, {"param", pv},
                                        {"c", cv}, {"numeric", std::stod(nv)},
                                        {"closed", std::stod(clv)}, {"absdiff", std::stod(dv)}});
                }
                json out{{"meta", meta_for("verify-identities", json{{"s", s}, {"theta", theta}})},
                         {"data", data}};
                write_out(outPath, out.dump(2) + "\n");
            } else {
                write_out(outPath, csv);
            }
            return ok ? 0 : 3;
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}
