#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sumapprox/bolts.hpp"
#include "sumapprox/diagnostics.hpp"
#include "sumapprox/expr.hpp"
#include "sumapprox/json_io.hpp"
#include "sumapprox/oracle.hpp"

using namespace sumapprox;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

/// Minimal SVG line chart: one polyline per series over a shared x axis.
std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::vector<double>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    double xmin = xs.front(), xmax = xs.back();
    double ymin = 0, ymax = 1e-12;
    for (const auto& [name, ys] : series)
        for (double y : ys) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
      << H - B << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
    for (double f : {0.0, 0.5, 1.0}) {
        const double xv = xmin + f * (xmax - xmin), yv = ymin + f * (ymax - ymin);
        s << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16
          << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xv) << "</text>\n";
        s << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4
          << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(yv) << "</text>\n";
    }
    int si = 0;
    for (const auto& [name, ys] : series) {
        const char* col = colors[si % 6];
        s << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < xs.size() && i < ys.size(); ++i)
            s << px(xs[i]) << "," << py(ys[i]) << " ";
        s << "\"/>\n";
        s << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (si + 1)
          << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << col << "\">" << name
          << "</text>\n";
        ++si;
    }
    s << "</svg>\n";
    return s.str();
}

struct FieldSource {
    std::string file;
    std::string expr;

    Field resolve(const Domain& d) const {
        if (!file.empty() && !expr.empty())
            throw std::invalid_argument("provide --field or --expr, not both");
        if (!file.empty()) return load_field(file, d.num_points());
        if (!expr.empty()) return Expr::parse(expr).eval_field(d);
        throw std::invalid_argument("a field is required (--field or --expr)");
    }
};

void add_field_flags(CLI::App* cmd, FieldSource& src) {
    cmd->add_option("--field", src.file, "field file (JSON array or id,value CSV)");
    cmd->add_option("--expr", src.expr, "field expression over point coordinates");
}

RegionSpec region_from_flags(const std::string& name, const std::vector<double>& params,
                             const std::vector<int>& dims) {
    RegionSpec spec = make_region(name, params);
    if (!dims.empty()) spec.dims = dims;
    return spec;
}

std::string run_log_csv(const LevellingState& st, double lower_bound, bool have_lb) {
    std::ostringstream csv;
    csv << "step,factor,norm,lower_bound\n";
    // norm_history[0] is the norm before any step; no factor applies to it.
    for (size_t k = 0; k < st.norm_history.size(); ++k) {
        csv << k << ",";
        if (k > 0) csv << st.schedule[(k - 1) % st.schedule.size()];
        csv << "," << fmt(st.norm_history[k]) << ",";
        if (have_lb) csv << fmt(lower_bound);
        csv << "\n";
    }
    return csv.str();
}

std::string sweep_render(const SweepReport& r, const std::string& format,
                         const std::string& title, const std::string& x_label) {
    if (format == "csv") return sweep_report_to_csv(r);
    if (format == "json") return sweep_report_to_json(r);
    if (format == "svg") {
        std::vector<double> xs(r.resolutions.begin(), r.resolutions.end());
        std::vector<std::pair<std::string, std::vector<double>>> series(
            r.metrics.begin(), r.metrics.end());
        return svg_chart(title, x_label, xs, series);
    }
    throw std::invalid_argument("unknown format: " + format);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform approximation by sums of partition-induced algebras"};
    app.require_subcommand(1);

    std::string domain_file, out, format = "csv", region, expr_text;
    std::vector<double> params;
    std::vector<int> dims, resolutions;
    FieldSource field;
    StopRule stop;
    long seed = 0;
    int resolution = 8;

    auto* gen = app.add_subcommand("gen", "generate a lattice domain file");
    gen->add_option("--region", region, "region name")->required();
    gen->add_option("--params", params, "region parameters")->delimiter(',');
    gen->add_option("--dims", dims, "product_grid points per axis")->delimiter(',');
    gen->add_option("--res", resolution, "lattice resolution N (step 1/N)");
    gen->add_option("--out", out, "output domain JSON")->required();

    auto* run = app.add_subcommand("run", "run the levelling iteration");
    run->add_option("--domain", domain_file)->required();
    add_field_flags(run, field);
    run->add_option("--tol", stop.tol);
    run->add_option("--window", stop.window);
    run->add_option("--max-steps", stop.max_steps);
    run->add_option("--seed", seed, "recorded for reproducibility");
    bool with_lb = false;
    run->add_flag("--lower-bound", with_lb, "append a closed-bolt lower bound");
    run->add_option("--out", out, "output prefix (<out>.csv, <out>.json)")->required();

    auto* oracle = app.add_subcommand("oracle", "exact best-approximation error");
    oracle->add_option("--domain", domain_file)->required();
    add_field_flags(oracle, field);
    oracle->add_option("--out", out, "output JSON (default stdout)");

    auto* bolts = app.add_subcommand("bolts", "bolt searches");
    bolts->require_subcommand(1);
    auto* b_lb = bolts->add_subcommand("lower-bound", "best closed-bolt lower bound");
    b_lb->add_option("--domain", domain_file)->required();
    add_field_flags(b_lb, field);
    b_lb->add_option("--out", out);
    auto* b_sh = bolts->add_subcommand("shortest", "shortest bolt between two points");
    int from = 0, to = 0;
    b_sh->add_option("--domain", domain_file)->required();
    b_sh->add_option("--from", from)->required();
    b_sh->add_option("--to", to)->required();
    b_sh->add_option("--out", out);
    auto* b_en = bolts->add_subcommand("enumerate", "closed bolts up to a length");
    int max_len = 6;
    b_en->add_option("--domain", domain_file)->required();
    b_en->add_option("--max-len", max_len);
    b_en->add_option("--out", out);
    auto* b_ir = bolts->add_subcommand("irreducible-max", "max irreducible bolt length");
    int cap = 64;
    b_ir->add_option("--domain", domain_file)->required();
    b_ir->add_option("--cap", cap);
    b_ir->add_option("--out", out);

    auto* diag = app.add_subcommand("diagnose", "diagnostic experiments");
    diag->require_subcommand(1);
    auto* d_cp = diag->add_subcommand("cproperty", "component jump sweep");
    d_cp->add_option("--region", region)->required();
    d_cp->add_option("--params", params)->delimiter(',');
    d_cp->add_option("--expr", expr_text, "field expression")->required();
    d_cp->add_option("--res", resolutions, "resolutions")->delimiter(',')->required();
    d_cp->add_option("--out", out);
    d_cp->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "svg"}));
    auto* d_md = diag->add_subcommand("medvedev", "irreducible bolt length sweep");
    d_md->add_option("--region", region)->required();
    d_md->add_option("--params", params)->delimiter(',');
    d_md->add_option("--res", resolutions)->delimiter(',')->required();
    d_md->add_option("--cap", cap);
    d_md->add_option("--out", out);
    d_md->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "svg"}));
    auto* d_kc = diag->add_subcommand("kconst", "closedness constant estimate");
    d_kc->add_option("--domain", domain_file)->required();
    add_field_flags(d_kc, field);
    d_kc->add_option("--tol", stop.tol);
    d_kc->add_option("--max-steps", stop.max_steps);
    d_kc->add_option("--out", out);
    auto* d_sl = diag->add_subcommand("slices", "slice averaging comparison");
    int class_a = 0, class_b = 1;
    d_sl->add_option("--domain", domain_file)->required();
    add_field_flags(d_sl, field);
    d_sl->add_option("--class-a", class_a)->required();
    d_sl->add_option("--class-b", class_b)->required();
    d_sl->add_option("--out", out);
    auto* d_mf = diag->add_subcommand("multifactor", "cyclic levelling vs exact error");
    d_mf->add_option("--domain", domain_file)->required();
    add_field_flags(d_mf, field);
    d_mf->add_option("--tol", stop.tol);
    d_mf->add_option("--max-steps", stop.max_steps);
    d_mf->add_option("--out", out);

    auto* sweep = app.add_subcommand("sweep", "sweep charts (metric vs resolution, norm vs step)");
    std::string kind = "cproperty";
    sweep->add_option("--kind", kind)->check(CLI::IsMember({"cproperty", "medvedev", "norm"}));
    sweep->add_option("--region", region);
    sweep->add_option("--params", params)->delimiter(',');
    sweep->add_option("--res", resolutions)->delimiter(',');
    sweep->add_option("--cap", cap);
    sweep->add_option("--domain", domain_file);
    add_field_flags(sweep, field);
    sweep->add_option("--tol", stop.tol);
    sweep->add_option("--max-steps", stop.max_steps);
    sweep->add_option("--out", out)->required();
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "svg"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            save_domain(generate_domain(region_from_flags(region, params, dims), resolution),
                        out);
            return 0;
        }

        if (run->parsed()) {
            Domain d = load_domain(domain_file);
            Field h = field.resolve(d);
            RunOptions opts;
            opts.stop = stop;
            LevellingState st = run_levelling(d, h, opts);
            double lb = 0;
            if (with_lb && d.num_factors() >= 2) {
                LowerBoundBudget budget;
                budget.stop = stop;
                lb = best_lower_bound(d, h, budget).value;
            }
            write_text(out + ".csv", run_log_csv(st, lb, with_lb));
            write_text(out + ".json", levelling_state_to_json(st));
            return st.termination == Termination::max_steps_reached ? 2 : 0;
        }

        if (oracle->parsed()) {
            Domain d = load_domain(domain_file);
            OracleResult r = n_factor_error(d, field.resolve(d));
            write_text(out, oracle_result_to_json(r) + "\n");
            return 0;
        }

        if (b_lb->parsed()) {
            Domain d = load_domain(domain_file);
            LowerBound lb = best_lower_bound(d, field.resolve(d));
            std::ostringstream s;
            s << "{\"lower_bound\":" << fmt(lb.value);
            if (lb.witness) s << ",\"witness\":" << bolt_to_json(*lb.witness);
            s << "}\n";
            write_text(out, s.str());
            return 0;
        }
        if (b_sh->parsed()) {
            Domain d = load_domain(domain_file);
            ShortestBoltResult r = shortest_bolt(d, from, to);
            std::ostringstream s;
            switch (r.kind) {
                case ShortestBoltResult::Kind::found:
                    s << "{\"status\":\"found\",\"bolt\":" << bolt_to_json(r.bolt) << "}\n";
                    break;
                case ShortestBoltResult::Kind::same_point:
                    s << "{\"status\":\"same_point\"}\n";
                    break;
                case ShortestBoltResult::Kind::unreachable:
                    s << "{\"status\":\"unreachable\"}\n";
                    break;
            }
            write_text(out, s.str());
            return 0;
        }
        if (b_en->parsed()) {
            Domain d = load_domain(domain_file);
            std::ostringstream s;
            s << "[";
            bool first = true;
            for (const Bolt& b : enumerate_closed_bolts(d, max_len)) {
                if (!first) s << ",";
                s << bolt_to_json(b);
                first = false;
            }
            s << "]\n";
            write_text(out, s.str());
            return 0;
        }
        if (b_ir->parsed()) {
            Domain d = load_domain(domain_file);
            BoltLengthBound r = max_irreducible_bolt_length(d, cap);
            std::ostringstream s;
            s << "{\"exceeds_cap\":" << (r.exceeds_cap ? "true" : "false")
              << ",\"max_length\":" << r.max_length << "}\n";
            write_text(out, s.str());
            return 0;
        }

        if (d_cp->parsed() || d_md->parsed()) {
            RegionSpec spec = region_from_flags(region, params, dims);
            SweepReport r = d_cp->parsed()
                                ? cproperty_jump(spec, Expr::parse(expr_text), resolutions)
                                : medvedev_sweep(spec, resolutions, cap);
            const char* title =
                d_cp->parsed() ? "component jump vs resolution" : "irreducible bolt length";
            write_text(out, sweep_render(r, format, title, "resolution"));
            return 0;
        }
        if (d_kc->parsed()) {
            Domain d = load_domain(domain_file);
            RunOptions opts;
            opts.stop = stop;
            opts.track_closedness = true;
            ClosednessEstimate est = closedness_constant(run_levelling(d, field.resolve(d), opts));
            std::ostringstream s;
            s << "{\"k_lower_estimate\":" << fmt(est.k_lower_estimate)
              << ",\"max_sum_norm\":" << fmt(est.max_sum_norm)
              << ",\"h_norm\":" << fmt(est.h_norm)
              << ",\"sum_bound_holds\":" << (est.sum_bound_holds ? "true" : "false") << "}\n";
            write_text(out, s.str());
            return 0;
        }
        if (d_sl->parsed()) {
            Domain d = load_domain(domain_file);
            SliceComparison sc = slice_averaging_check(d, field.resolve(d), class_a, class_b);
            std::ostringstream s;
            s << "{\"comparable\":" << (sc.comparable ? "true" : "false")
              << ",\"lhs\":" << fmt(sc.lhs) << ",\"rhs\":" << fmt(sc.rhs)
              << ",\"holds\":" << (sc.holds ? "true" : "false") << "}\n";
            write_text(out, s.str());
            return 0;
        }
        if (d_mf->parsed()) {
            Domain d = load_domain(domain_file);
            MultiFactorGap g = multi_factor_gap(d, field.resolve(d), stop);
            std::ostringstream s;
            s << "{\"terminal_norm\":" << fmt(g.terminal_norm)
              << ",\"oracle_error\":" << fmt(g.oracle_error) << ",\"gap\":" << fmt(g.gap)
              << ",\"steps\":" << g.steps
              << ",\"stalled\":" << (g.stalled ? "true" : "false") << "}\n";
            write_text(out, s.str());
            return 0;
        }

        if (sweep->parsed()) {
            if (kind == "norm") {
                Domain d = load_domain(domain_file);
                RunOptions opts;
                opts.stop = stop;
                LevellingState st = run_levelling(d, field.resolve(d), opts);
                if (format == "svg") {
                    std::vector<double> xs(st.norm_history.size());
                    for (size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i + 1);
                    write_text(out, svg_chart("residual norm vs step", "step", xs,
                                              {{"norm", st.norm_history}}));
                } else {
                    write_text(out, run_log_csv(st, 0, false));
                }
                return 0;
            }
            if (resolutions.empty())
                throw std::invalid_argument("sweep needs --res resolutions");
            RegionSpec spec = region_from_flags(region, params, dims);
            SweepReport r = kind == "cproperty"
                                ? cproperty_jump(spec, Expr::parse(field.expr), resolutions)
                                : medvedev_sweep(spec, resolutions, cap);
            write_text(out, sweep_render(r, format,
                                         kind + " sweep: " + region, "resolution"));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
