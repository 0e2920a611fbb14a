// periodscope: analyze the center of x'' + f(x) x'^2 + g(x) = 0.
//
// Subcommands: system, period, monotonicity, isochrony, repro-km,
// repro-sect3. Emits CSV (17-significant-digit fixed formatting) or JSON
// ({config, rows, diagnostics}); exit codes: 0 ok, 2 expression parse error,
// 3 hypothesis violation, 4 numerical failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "periodscope/criteria.hpp"
#include "periodscope/period.hpp"
#include "periodscope/repro.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace pscope;

namespace {

struct RunConfig {
    std::string subcommand;
    std::string f_text;
    std::string g_text;
    std::vector<double> domain;    // LO HI
    std::vector<double> energies;  // explicit list
    std::vector<double> e_range;   // MIN MAX COUNT
    std::vector<double> a3_list{0.96, 0.999, 1.0, 1.001, 1.055};
    double tol_q = 1e-10;
    double tol_iso = 1e-9;
    int samples = 64;
    std::string format = "csv";
    std::string out_path;

    Interval interval() const {
        if (domain.size() == 2) return {domain[0], domain[1]};
        return {};
    }

    ordered_json to_json() const {
        ordered_json j;
        j["subcommand"] = subcommand;
        if (!f_text.empty()) j["f"] = f_text;
        if (!g_text.empty()) j["g"] = g_text;
        const Interval iv = interval();
        j["domain"] = {iv.lo, iv.hi};
        if (!energies.empty()) j["energies"] = energies;
        if (e_range.size() == 3) j["e_range"] = e_range;
        if (subcommand == "repro-km") j["a3"] = a3_list;
        j["tol_q"] = tol_q;
        j["tol_iso"] = tol_iso;
        j["samples"] = samples;
        j["format"] = format;
        return j;
    }
};

struct Output {
    std::vector<std::string> columns;
    std::vector<ordered_json> rows;
    ordered_json diagnostics = ordered_json::object();
};

std::string csv_cell(const ordered_json& v) {
    if (v.is_null()) return "nan";
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        for (char& c : s)
            if (c == ',' || c == '\n' || c == '\r') c = ';';
        return s;
    }
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    return buf;
}

void emit(const RunConfig& cfg, const Output& out, std::ostream& os) {
    if (cfg.format == "json") {
        ordered_json doc;
        doc["config"] = cfg.to_json();
        doc["rows"] = out.rows;
        doc["diagnostics"] = out.diagnostics;
        os << doc.dump(2) << "\n";
        return;
    }
    for (std::size_t i = 0; i < out.columns.size(); ++i)
        os << (i ? "," : "") << out.columns[i];
    os << "\n";
    for (const auto& row : out.rows) {
        for (std::size_t i = 0; i < out.columns.size(); ++i) {
            os << (i ? "," : "");
            const auto it = row.find(out.columns[i]);
            os << (it != row.end() ? csv_cell(*it) : "nan");
        }
        os << "\n";
    }
}

void write_output(const RunConfig& cfg, const Output& out) {
    if (cfg.out_path.empty()) {
        emit(cfg, out, std::cout);
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw Error("cannot open output file " + cfg.out_path);
        emit(cfg, out, f);
    }
}

LienardSystem build_from_config(const RunConfig& cfg) {
    return LienardSystem(parse(cfg.f_text), parse(cfg.g_text), cfg.interval(), cfg.tol_q);
}

// Explicit list, range sweep, or count points spread over
// [frac_lo, frac_hi] * E*.
std::vector<double> resolve_energies(const RunConfig& cfg, double e_star, int count,
                                     double frac_lo = 0.1, double frac_hi = 0.5) {
    if (!cfg.energies.empty()) return cfg.energies;
    if (cfg.e_range.size() == 3) {
        const double lo = cfg.e_range[0], hi = cfg.e_range[1];
        const int n = std::max(1, static_cast<int>(cfg.e_range[2]));
        std::vector<double> es;
        for (int i = 0; i < n; ++i)
            es.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
        return es;
    }
    std::vector<double> es;
    for (int i = 0; i < count; ++i)
        es.push_back(e_star *
                     (count == 1 ? frac_lo : frac_lo + (frac_hi - frac_lo) * i / (count - 1)));
    return es;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_system(const RunConfig& cfg) {
    const LienardSystem sys = build_from_config(cfg);
    Output out;
    out.columns = {"vpp_origin", "e_star", "domain_lo", "domain_hi", "mass_origin"};
    ordered_json row;
    row["vpp_origin"] = sys.v_second_at_origin();
    row["e_star"] = sys.energy_ceiling();
    row["domain_lo"] = sys.domain().lo;
    row["domain_hi"] = sys.domain().hi;
    row["mass_origin"] = sys.mass(0.0);
    out.rows.push_back(row);
    out.diagnostics["center_hypothesis"] = "satisfied";
    write_output(cfg, out);
    return 0;
}

int cmd_period(const RunConfig& cfg) {
    const LienardSystem sys = build_from_config(cfg);
    const std::vector<double> energies = resolve_energies(cfg, sys.energy_ceiling(), 5);
    Output out;
    out.columns = {"E",     "T_x",      "err_x", "T_theta", "err_theta",           "T_ode",
                   "err_ode", "dT_dE", "err_dT_dE", "max_pairwise_rel_diff", "status"};
    bool any_failed = false;
    for (double e : energies) {
        ordered_json row;
        row["E"] = e;
        try {
            const PeriodSample tx = period_x_quadrature(sys, e);
            const PeriodSample tt = period_theta_quadrature(sys, e);
            const PeriodSample to = period_ode_return(sys, e);
            const PeriodSample td = dT_dE(sys, e);
            row["T_x"] = tx.period;
            row["err_x"] = tx.est_error;
            row["T_theta"] = tt.period;
            row["err_theta"] = tt.est_error;
            row["T_ode"] = to.period;
            row["err_ode"] = to.est_error;
            row["dT_dE"] = td.dT_dE;
            row["err_dT_dE"] = td.est_error;
            const double tmax = std::max({tx.period, tt.period, to.period});
            const double tmin = std::min({tx.period, tt.period, to.period});
            row["max_pairwise_rel_diff"] = (tmax - tmin) / tmax;
            row["status"] = "ok";
        } catch (const Error& e2) {
            row["status"] = std::string("error: ") + e2.what();
            any_failed = true;
        }
        out.rows.push_back(row);
    }
    out.diagnostics["e_star"] = sys.energy_ceiling();
    out.diagnostics["methods"] = {to_string(PeriodMethod::XQuadrature),
                                  to_string(PeriodMethod::ThetaQuadrature),
                                  to_string(PeriodMethod::OdeReturn),
                                  to_string(PeriodMethod::DerivativeQuadrature)};
    write_output(cfg, out);
    return any_failed ? 4 : 0;
}

int cmd_monotonicity(const RunConfig& cfg) {
    const LienardSystem sys = build_from_config(cfg);
    const std::vector<double> energies = resolve_energies(cfg, sys.energy_ceiling(), 1, 0.2, 0.2);
    Output out;
    out.columns = {"E", "x", "N", "verdict"};
    ordered_json verdicts = ordered_json::array();
    for (double e : energies) {
        const MonotonicityReport rep = classify_monotonicity(sys, e, cfg.samples, cfg.tol_iso);
        for (const auto& [x, n] : rep.samples) {
            ordered_json row;
            row["E"] = e;
            row["x"] = x;
            row["N"] = n;
            row["verdict"] = to_string(rep.verdict);
            out.rows.push_back(row);
        }
        ordered_json d;
        d["E"] = e;
        d["verdict"] = to_string(rep.verdict);
        d["min_N"] = rep.min_N;
        d["max_N"] = rep.max_N;
        d["argmin_x"] = rep.argmin_x;
        d["argmax_x"] = rep.argmax_x;
        d["scale"] = rep.scale;
        d["tol_iso"] = rep.tol_iso;
        verdicts.push_back(d);
    }
    out.diagnostics["reports"] = verdicts;
    write_output(cfg, out);
    return 0;
}

int cmd_isochrony(const RunConfig& cfg) {
    const LienardSystem sys = build_from_config(cfg);
    const std::vector<double> energies = resolve_energies(cfg, sys.energy_ceiling(), 1, 0.2, 0.2);
    Output out;
    out.columns = {"E", "x", "R", "W", "guard2", "C", "D", "verdict"};
    ordered_json verdicts = ordered_json::array();
    for (double e : energies) {
        const IsochronyReport rep = isochrony_report(sys, e, cfg.samples, cfg.tol_iso);
        for (std::size_t i = 0; i < rep.residual_samples.size(); ++i) {
            ordered_json row;
            row["E"] = e;
            row["x"] = rep.residual_samples[i].first;
            row["R"] = rep.residual_samples[i].second;
            row["W"] = rep.guardW_samples[i].second;
            row["guard2"] = rep.guard2_samples[i].second;
            if (i < rep.C_samples.size()) {
                row["C"] = rep.C_samples[i].second;
                row["D"] = rep.D_samples[i].second;
            } else {
                row["C"] = nullptr;
                row["D"] = nullptr;
            }
            row["verdict"] = rep.verdict ? "isochronous" : "not-isochronous";
            out.rows.push_back(row);
        }
        ordered_json d;
        d["E"] = e;
        d["verdict"] = rep.verdict;
        d["max_abs_residual"] = rep.max_abs_residual;
        d["residual_scale"] = rep.residual_scale;
        d["min_abs_W"] = rep.min_abs_W;
        d["min_abs_guard2"] = rep.min_abs_guard2;
        d["C_spread"] = rep.C_spread;
        d["D_spread"] = rep.D_spread;
        d["summary"] = rep.diagnostics;
        verdicts.push_back(d);
    }
    out.diagnostics["reports"] = verdicts;
    write_output(cfg, out);
    return 0;
}

const char* poly_sign_summary(const repro::KMCoefficients& c, std::span<const double> grid) {
    bool any_pos = false, any_neg = false;
    for (double x : grid) {
        const double x2 = x * x;
        const double p = ((((c.c5 * x2 + c.c4) * x2 + c.c3) * x2 + c.c2) * x2 + c.c1) * x2 + c.c0;
        if (p > 1e-12) any_pos = true;
        if (p < -1e-12) any_neg = true;
    }
    if (any_pos && any_neg) return "mixed";
    if (any_pos) return "positive";
    if (any_neg) return "negative";
    return "zero";
}

int cmd_repro_km(const RunConfig& cfg) {
    Output out;
    out.columns = {"a3",      "C0",        "C1",          "C2",          "C3",
                   "C4",      "C5",        "poly_sign",   "prefactor",   "max_discrepancy",
                   "verdict", "T_first",   "T_last",      "T_direction", "status"};
    bool any_failed = false;
    for (double a3 : cfg.a3_list) {
        ordered_json row;
        row["a3"] = a3;
        try {
            const repro::KMCoefficients c = repro::km_coefficients(a3);
            row["C0"] = c.c0;
            row["C1"] = c.c1;
            row["C2"] = c.c2;
            row["C3"] = c.c3;
            row["C4"] = c.c4;
            row["C5"] = c.c5;
            const auto grid = repro::km_default_grid(a3);
            row["poly_sign"] = poly_sign_summary(c, grid);
            const repro::KMPolynomialCheck chk = repro::km_polynomial_check(a3, grid);
            row["prefactor"] = chk.prefactor;
            row["max_discrepancy"] = chk.max_abs_discrepancy;

            const LienardSystem sys = repro::km_system(a3, cfg.interval(), cfg.tol_q);
            const std::vector<double> energies =
                resolve_energies(cfg, sys.energy_ceiling(), 5);
            const MonotonicityReport rep =
                classify_monotonicity(sys, energies.back(), cfg.samples, cfg.tol_iso);
            row["verdict"] = to_string(rep.verdict);

            std::vector<double> periods;
            for (double e : energies)
                periods.push_back(period_theta_quadrature(sys, e).period);
            bool increasing = true, decreasing = true;
            for (std::size_t i = 1; i < periods.size(); ++i) {
                if (periods[i] <= periods[i - 1] * (1.0 + 1e-7)) increasing = false;
                if (periods[i] >= periods[i - 1] * (1.0 - 1e-7)) decreasing = false;
            }
            const double spread =
                (*std::max_element(periods.begin(), periods.end()) -
                 *std::min_element(periods.begin(), periods.end())) /
                periods.front();
            row["T_first"] = periods.front();
            row["T_last"] = periods.back();
            row["T_direction"] = increasing   ? "increasing"
                                 : decreasing ? "decreasing"
                                 : spread <= 1e-5 ? "constant"
                                                  : "mixed";
            row["status"] = "ok";
        } catch (const Error& e) {
            row["status"] = std::string("error: ") + e.what();
            any_failed = true;
        }
        out.rows.push_back(row);
    }
    write_output(cfg, out);
    return any_failed ? 4 : 0;
}

int cmd_repro_sect3(const RunConfig& cfg) {
    const LienardSystem sys = repro::sect3_family(parse(cfg.f_text), cfg.interval(), cfg.tol_q);
    const std::vector<double> energies = resolve_energies(cfg, sys.energy_ceiling(), 5);
    Output out;
    out.columns = {"E", "T_theta", "err_theta", "verdict"};
    const MonotonicityReport rep =
        classify_monotonicity(sys, energies.back(), cfg.samples, cfg.tol_iso);
    for (double e : energies) {
        const PeriodSample tt = period_theta_quadrature(sys, e);
        ordered_json row;
        row["E"] = e;
        row["T_theta"] = tt.period;
        row["err_theta"] = tt.est_error;
        row["verdict"] = to_string(rep.verdict);
        out.rows.push_back(row);
    }
    out.diagnostics["verdict"] = to_string(rep.verdict);
    out.diagnostics["max_abs_N"] = std::max(std::abs(rep.min_N), std::abs(rep.max_N));
    out.diagnostics["N_scale"] = rep.scale;
    write_output(cfg, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"period function analysis for x'' + f(x) x'^2 + g(x) = 0"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool needs_f, bool needs_g) {
        auto* f = sub->add_option("--f", cfg.f_text, "expression for f(x)");
        auto* g = sub->add_option("--g", cfg.g_text, "expression for g(x)");
        if (needs_f) f->required();
        if (needs_g) g->required();
        sub->add_option("--domain", cfg.domain, "working interval LO HI")->expected(2);
        sub->add_option("--energies", cfg.energies, "energy list E1,E2,...")->delimiter(',');
        sub->add_option("--e-range", cfg.e_range, "energy sweep MIN MAX N")->expected(3);
        sub->add_option("--tol-q", cfg.tol_q, "quadrature tolerance");
        sub->add_option("--tol-iso", cfg.tol_iso, "isochronicity tolerance");
        sub->add_option("--samples", cfg.samples, "sample count for criteria grids");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out_path, "output path (default stdout)");
    };

    auto* sys_cmd = app.add_subcommand("system", "validate and report the built system");
    add_common(sys_cmd, true, true);
    auto* period_cmd = app.add_subcommand("period", "T(E) by three methods plus dT/dE");
    add_common(period_cmd, true, true);
    auto* mono_cmd = app.add_subcommand("monotonicity", "N(x) sampling and verdict");
    add_common(mono_cmd, true, true);
    auto* iso_cmd = app.add_subcommand("isochrony", "residual, guards and verdict");
    add_common(iso_cmd, true, true);
    auto* km_cmd = app.add_subcommand("repro-km", "rational-mass family reproduction");
    add_common(km_cmd, false, false);
    km_cmd->add_option("--a3", cfg.a3_list, "a3 values")->delimiter(',');
    auto* s3_cmd = app.add_subcommand("repro-sect3", "even-mass isochronous family");
    add_common(s3_cmd, true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (sys_cmd->parsed()) { cfg.subcommand = "system"; return cmd_system(cfg); }
        if (period_cmd->parsed()) { cfg.subcommand = "period"; return cmd_period(cfg); }
        if (mono_cmd->parsed()) { cfg.subcommand = "monotonicity"; return cmd_monotonicity(cfg); }
        if (iso_cmd->parsed()) { cfg.subcommand = "isochrony"; return cmd_isochrony(cfg); }
        if (km_cmd->parsed()) { cfg.subcommand = "repro-km"; return cmd_repro_km(cfg); }
        if (s3_cmd->parsed()) { cfg.subcommand = "repro-sect3"; return cmd_repro_sect3(cfg); }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CenterHypothesisViolated& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 3;
    } catch (const NotEven& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 3;
    } catch (const NotPositive& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
    return 1;
}
