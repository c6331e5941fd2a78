#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "serlab/bounds.hpp"
#include "serlab/csv.hpp"
#include "serlab/fading.hpp"
#include "serlab/optimize.hpp"
#include "serlab/registry.hpp"
#include "serlab/special.hpp"
#include "serlab/sphere_oracle.hpp"
#include "serlab/version.hpp"

namespace {

using namespace serlab;

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    bool log_scale = true;  // snr-style axes default to log spacing

    std::vector<double> make() const { return make_grid(start, stop, count, log_scale); }
    std::string str() const {
        std::ostringstream os;
        os << start << ":" << stop << ":" << count << ":" << (log_scale ? "log" : "lin");
        return os.str();
    }
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    std::istringstream in(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4)
        throw CLI::ValidationError("grid", "expected start:stop:count[:lin|log]");
    g.start = std::stod(parts[0]);
    g.stop = std::stod(parts[1]);
    g.count = std::stoi(parts[2]);
    if (parts.size() == 4) {
        if (parts[3] == "lin")
            g.log_scale = false;
        else if (parts[3] == "log")
            g.log_scale = true;
        else
            throw CLI::ValidationError("grid", "scale must be lin or log");
    }
    return g;
}

Constellation load_constellation(const std::string& source) {
    if (source.size() > 5 && source.substr(source.size() - 5) == ".json")
        return load_constellation_json(source);
    return standard_constellation(source);
}

// Writes to the path or stdout for "-".
struct OutputSink {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutputSink(const std::string& path) {
        if (path != "-") {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

std::vector<std::string> config_header(const std::string& line) {
    return {std::string("serlab ") + kVersion, "config: " + line};
}

// --- ser -------------------------------------------------------------------

struct SerOptions {
    std::string constellation;
    std::string snr, noise;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 12345;
    std::string method = "mc";
    std::string quantity = "pe";
    unsigned threads = 0;
    std::string out = "-";
};

int run_ser(const SerOptions& o) {
    if (o.snr.empty() == o.noise.empty())
        throw CLI::ValidationError("ser", "exactly one of --snr/--noise is required");
    const Axis axis = o.snr.empty() ? Axis::Noise : Axis::Snr;
    GridSpec gs = parse_grid(o.snr.empty() ? o.noise : o.snr);
    if (gs.count < 2) throw CLI::ValidationError("ser", "grid count must be >= 2");
    const Method method = o.method == "quadrature" ? Method::Quadrature : Method::Mc;
    if (method == Method::Mc && o.samples < 1000)
        throw CLI::ValidationError("ser", "--samples must be >= 1000 for mc");

    Quantity q = Quantity::Pe;
    int point = 0;
    if (o.quantity == "pc")
        q = Quantity::Pc;
    else if (o.quantity.rfind("pei:", 0) == 0) {
        q = Quantity::Pei;
        point = std::stoi(o.quantity.substr(4));
    } else if (o.quantity != "pe")
        throw CLI::ValidationError("ser", "quantity must be pe, pc, or pei:<i>");

    auto c = load_constellation(o.constellation);
    auto ce = curve(c, axis, gs.make(), q, point, method, o.samples, o.seed, o.threads);

    std::ostringstream cfg;
    cfg << "ser constellation=" << o.constellation << " " << axis_name(axis) << "=" << gs.str()
        << " quantity=" << o.quantity << " method=" << o.method << " samples=" << o.samples
        << " seed=" << o.seed;
    OutputSink sink(o.out);
    write_curve_csv(sink.stream(), ce, config_header(cfg.str()));
    return 0;
}

// --- verify ------------------------------------------------------------------

struct VerifyOptions {
    std::string constellation;
    std::string snr = "0.01:20:40:log";
    std::string noise = "0.01:20:40:log";
    std::uint64_t samples = 200000;
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    std::string out = "-";
    std::string csv;
};

int run_verify(const VerifyOptions& o) {
    if (o.samples < 1000) throw CLI::ValidationError("verify", "--samples must be >= 1000");
    auto c = load_constellation(o.constellation);
    auto snr_grid = parse_grid(o.snr).make();
    auto noise_grid = parse_grid(o.noise).make();
    auto bs = coefficients(c.n);

    OutputSink sink(o.out);
    std::ostream& out = sink.stream();
    std::ostringstream cfg;
    cfg << "verify constellation=" << o.constellation << " snr=" << o.snr
        << " noise=" << o.noise << " samples=" << o.samples << " seed=" << o.seed;
    write_comments(out, config_header(cfg.str()));

    bool ok = true;
    out << "[coefficients] n=" << c.n << " c_n=" << fmt_g17(bs.c_n)
        << " beta_l=" << fmt_g17(bs.beta_l) << " beta_u=" << fmt_g17(bs.beta_u)
        << " b_l=" << fmt_g17(bs.b_l) << " b_u=" << fmt_g17(bs.b_u) << "\n";

    for (Axis axis : {Axis::Snr, Axis::Noise}) {
        auto rep = axis == Axis::Snr ? snr_regimes(c) : noise_regimes(c);
        out << "[regimes/" << axis_name(axis) << "] d_min=" << fmt_g17(rep.d_min)
            << " d_max=" << (std::isinf(rep.d_max) ? "inf" : fmt_g17(rep.d_max));
        if (rep.always_convex) out << " always-convex (n <= 2)";
        out << " large-mode-onset="
            << (rep.large_mode_empty ? "none" : fmt_g17(rep.large_mode_onset))
            << " small-mode-cutoff="
            << (rep.small_mode_empty ? "none" : fmt_g17(*rep.small_mode_cutoff)) << "\n";
        auto br = rep.inflection_bracket();
        out << "[regimes/" << axis_name(axis) << "] intermediate interval: ("
            << fmt_g17(br.first) << ", "
            << (std::isinf(br.second) ? "inf" : fmt_g17(br.second)) << "]\n";
    }

    std::vector<BoundCheckReport> reports;
    CurveEstimate snr_d2;
    for (Axis axis : {Axis::Snr, Axis::Noise}) {
        const auto& grid = axis == Axis::Snr ? snr_grid : noise_grid;
        for (int order : {1, 2}) {
            auto ce = curve(c, axis, grid, order == 1 ? Quantity::D1 : Quantity::D2, 0,
                            Method::Mc, o.samples, o.seed, o.threads);
            if (axis == Axis::Snr && order == 2) snr_d2 = ce;
            auto rep = check_derivative_bounds(ce, bs);
            reports.push_back(rep);
            ok = ok && rep.pass;
            out << "[check] " << rep.label << " bounds: " << (rep.pass ? "PASS" : "FAIL");
            if (rep.closest_index >= 0)
                out << " (closest margin " << fmt_g17(rep.rows[rep.closest_index].margin)
                    << " at " << fmt_g17(rep.rows[rep.closest_index].x) << ")";
            out << "\n";
        }
    }

    // log-concavity of P_c0 over the snr grid
    auto pei = curve(c, Axis::Snr, snr_grid, Quantity::Pei, 0, Method::Mc, o.samples, o.seed,
                     o.threads);
    CurveEstimate pci = pei;
    pci.quantity = "pci[0]";
    for (auto& v : pci.values) v = 1.0 - v;
    auto lc = log_concavity_check(pci);
    ok = ok && lc.pass;
    out << "[check] log-concavity of P_ci (i=0, snr): " << (lc.pass ? "PASS" : "FAIL")
        << " (worst margin " << fmt_g17(lc.worst_margin) << ")\n";

    // inflection scan inside the intermediate interval where the grid covers it
    auto bracket = snr_regimes(c).inflection_bracket();
    double lo = std::max(bracket.first, snr_grid.front());
    double hi = std::min(bracket.second, snr_grid.back());
    if (c.n > 2 && lo < hi) {
        auto scan = inflection_scan(snr_d2, lo, hi);
        out << "[scan] snr order-2 crossings in (" << fmt_g17(lo) << ", " << fmt_g17(hi)
            << "): " << scan.crossings.size() << " ("
            << (scan.odd_count() ? "odd" : "even") << ", unresolved " << scan.unresolved
            << ")\n";
    }

    if (c.n != 2) {
        out << "[eq14-note] oracle-consistent vs transcribed order-2 upper coefficient:\n";
        for (int n : {1, 3, 4})
            out << "  n=" << n << " oracle=" << fmt_g17(coefficients(n).beta_u)
                << " transcribed=" << fmt_g17(beta_u_transcribed(n)) << "\n";
    }

    if (!o.csv.empty()) {
        std::ofstream f(o.csv);
        if (!f) throw std::runtime_error("cannot open csv file: " + o.csv);
        write_comments(f, config_header(cfg.str()));
        f << "check,value,estimate,std_error,lower,upper,margin,pass\n";
        for (const auto& rep : reports)
            for (const auto& r : rep.rows)
                f << rep.label << "," << fmt_g17(r.x) << "," << fmt_g17(r.estimate) << ","
                  << fmt_g17(r.std_error) << "," << fmt_g17(r.lower) << ","
                  << fmt_g17(r.upper) << "," << fmt_g17(r.margin) << "," << (r.pass ? 1 : 0)
                  << "\n";
    }

    out << "RESULT: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

// --- sphere ------------------------------------------------------------------

struct SphereOptions {
    int n = 0;
    double radius = 0.0;
    std::string radius_rule;
    std::string snr, noise;
    std::string quantity = "d1";
    std::string out = "-";
};

int run_sphere(const SphereOptions& o) {
    if (o.snr.empty() == o.noise.empty())
        throw CLI::ValidationError("sphere", "exactly one of --snr/--noise is required");
    if ((o.radius > 0.0) == !o.radius_rule.empty())
        throw CLI::ValidationError("sphere", "pass exactly one of --radius/--radius-rule");
    const Axis axis = o.snr.empty() ? Axis::Noise : Axis::Snr;
    GridSpec gs = parse_grid(o.snr.empty() ? o.noise : o.snr);

    auto radius_at = [&](double value) {
        if (o.radius > 0.0) return o.radius;
        auto r = extremal_radii(o.n, axis, value);
        if (o.radius_rule == "first-order") return r.r_first_order;
        if (o.radius_rule == "lower") return r.r_lower;
        if (o.radius_rule == "upper") return r.r_upper;
        throw CLI::ValidationError("sphere", "radius rule must be first-order, lower, or upper");
    };

    CurveEstimate ce;
    ce.axis = axis;
    ce.quantity = o.quantity;
    ce.method = "closed-form";
    ce.order = o.quantity == "d1" ? 1 : o.quantity == "d2" ? 2 : 0;
    for (double v : gs.make()) {
        auto s = make_sphere(o.n, radius_at(v));
        const double tail_arg = 0.5 * s.radius * s.radius / v;
        double y = 0.0;
        if (o.quantity == "pc")
            y = axis == Axis::Snr ? sphere_pc(s, v) : gamma_p(0.5 * o.n, tail_arg);
        else if (o.quantity == "pe")
            y = axis == Axis::Snr ? 1.0 - sphere_pc(s, v) : 1.0 - gamma_p(0.5 * o.n, tail_arg);
        else if (o.quantity == "d1")
            y = axis == Axis::Snr ? -sphere_pc_d(s, v, 1) : sphere_pe_noise_d(s, v, 1);
        else if (o.quantity == "d2")
            y = axis == Axis::Snr ? -sphere_pc_d(s, v, 2) : sphere_pe_noise_d(s, v, 2);
        else
            throw CLI::ValidationError("sphere", "quantity must be pe, pc, d1, or d2");
        ce.grid.push_back(v);
        ce.values.push_back(y);
        ce.std_errors.push_back(0.0);
    }

    std::ostringstream cfg;
    cfg << "sphere n=" << o.n << " "
        << (o.radius > 0.0 ? "radius=" + fmt_g17(o.radius) : "radius-rule=" + o.radius_rule)
        << " " << axis_name(axis) << "=" << gs.str() << " quantity=" << o.quantity;
    OutputSink sink(o.out);
    write_curve_csv(sink.stream(), ce, config_header(cfg.str()));
    return 0;
}

// --- fade ----------------------------------------------------------------------

struct FadeOptions {
    std::string pe;
    std::string model;
    std::string mean_snr;
    std::string out = "-";
};

int run_fade(const FadeOptions& o) {
    auto pm = make_pe_model(o.pe);
    auto grid = parse_grid(o.mean_snr).make();
    auto probe = make_fading(o.model, grid.front());
    bool scale_ok = scale_family_check(probe);

    std::ostringstream cfg;
    cfg << "fade pe=" << o.pe << " model=" << o.model
        << " mean-snr=" << parse_grid(o.mean_snr).str()
        << " scale_family=" << (scale_ok ? "true" : "false");
    OutputSink sink(o.out);
    std::ostream& out = sink.stream();
    write_comments(out, config_header(cfg.str()));
    out << "mean_snr,avg_ser,pe_at_mean,jensen_gap\n";
    for (double g0 : grid) {
        auto f = make_fading(o.model, g0);
        auto j = jensen_check(pm.pe_snr, f);
        out << fmt_g17(g0) << "," << fmt_g17(j.average) << "," << fmt_g17(j.pe_at_mean) << ","
            << fmt_g17(j.gap) << "\n";
    }
    return 0;
}

// --- allocate ---------------------------------------------------------------------

struct AllocateOptions {
    std::string pe;
    std::string streams;
    std::string out = "-";
};

int run_allocate(const AllocateOptions& o) {
    auto pm = make_pe_model(o.pe);
    std::vector<double> snrs;
    std::istringstream in(o.streams);
    std::string part;
    while (std::getline(in, part, ',')) snrs.push_back(std::stod(part));
    if (snrs.empty()) throw CLI::ValidationError("allocate", "--streams must list snrs");

    auto res = blast_allocate(pm.pe_snr, pm.d1_snr, snrs);
    std::ostringstream cfg;
    cfg << "allocate pe=" << o.pe << " streams=" << o.streams;
    OutputSink sink(o.out);
    write_allocation_csv(sink.stream(), res, snrs, config_header(cfg.str()));
    return 0;
}

// --- jam ------------------------------------------------------------------------

struct JamOptions {
    std::string pe;
    double budget = 0.0;
    std::string mode = "optimal";
    std::string bracket;
    std::string out = "-";
};

int run_jam(const JamOptions& o) {
    auto pm = make_pe_model(o.pe);
    double lo = o.budget / 100.0, hi = o.budget * 100.0;
    if (!o.bracket.empty()) {
        auto colon = o.bracket.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("jam", "--bracket expects lo:hi");
        lo = std::stod(o.bracket.substr(0, colon));
        hi = std::stod(o.bracket.substr(colon + 1));
    }
    double p0 = find_inflection_noise(pm.d2_noise, lo, hi);
    SharingStrategy s = o.mode == "suboptimal"
                            ? jam_suboptimal(pm.pe_noise, p0, o.budget)
                            : jam_optimal(pm.pe_noise, pm.d1_noise, p0, o.budget);

    std::ostringstream cfg;
    cfg << "jam pe=" << o.pe << " budget=" << fmt_g17(o.budget) << " mode=" << o.mode
        << " inflection=" << fmt_g17(p0);
    OutputSink sink(o.out);
    write_strategy_csv(sink.stream(), s, config_header(cfg.str()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbol error rates of the ML detector: estimation, convexity checks, and "
                 "power-sharing optimizers"};
    app.require_subcommand(1);

    SerOptions ser_opts;
    auto* ser_cmd = app.add_subcommand("ser", "SER curve over an snr or noise grid");
    ser_cmd->add_option("--constellation", ser_opts.constellation)->required();
    ser_cmd->add_option("--snr", ser_opts.snr);
    ser_cmd->add_option("--noise", ser_opts.noise);
    ser_cmd->add_option("--samples", ser_opts.samples);
    ser_cmd->add_option("--seed", ser_opts.seed);
    ser_cmd->add_option("--method", ser_opts.method);
    ser_cmd->add_option("--quantity", ser_opts.quantity);
    ser_cmd->add_option("--threads", ser_opts.threads);
    ser_cmd->add_option("--out", ser_opts.out);

    VerifyOptions verify_opts;
    auto* verify_cmd = app.add_subcommand("verify", "bound, regime, and concavity checks");
    verify_cmd->add_option("--constellation", verify_opts.constellation)->required();
    verify_cmd->add_option("--snr", verify_opts.snr);
    verify_cmd->add_option("--noise", verify_opts.noise);
    verify_cmd->add_option("--samples", verify_opts.samples);
    verify_cmd->add_option("--seed", verify_opts.seed);
    verify_cmd->add_option("--threads", verify_opts.threads);
    verify_cmd->add_option("--out", verify_opts.out);
    verify_cmd->add_option("--csv", verify_opts.csv);

    SphereOptions sphere_opts;
    auto* sphere_cmd = app.add_subcommand("sphere", "spherical-region closed forms");
    sphere_cmd->add_option("--n", sphere_opts.n)->required();
    sphere_cmd->add_option("--radius", sphere_opts.radius);
    sphere_cmd->add_option("--radius-rule", sphere_opts.radius_rule);
    sphere_cmd->add_option("--snr", sphere_opts.snr);
    sphere_cmd->add_option("--noise", sphere_opts.noise);
    sphere_cmd->add_option("--quantity", sphere_opts.quantity);
    sphere_cmd->add_option("--out", sphere_opts.out);

    FadeOptions fade_opts;
    auto* fade_cmd = app.add_subcommand("fade", "fading-averaged SER and Jensen gaps");
    fade_cmd->add_option("--pe", fade_opts.pe)->required();
    fade_cmd->add_option("--model", fade_opts.model)->required();
    fade_cmd->add_option("--mean-snr", fade_opts.mean_snr)->required();
    fade_cmd->add_option("--out", fade_opts.out);

    AllocateOptions alloc_opts;
    auto* alloc_cmd = app.add_subcommand("allocate", "V-BLAST power allocation");
    alloc_cmd->add_option("--pe", alloc_opts.pe)->required();
    alloc_cmd->add_option("--streams", alloc_opts.streams)->required();
    alloc_cmd->add_option("--out", alloc_opts.out);

    JamOptions jam_opts;
    auto* jam_cmd = app.add_subcommand("jam", "jammer power/time sharing");
    jam_cmd->add_option("--pe", jam_opts.pe)->required();
    jam_cmd->add_option("--budget", jam_opts.budget)->required();
    jam_cmd->add_option("--mode", jam_opts.mode);
    jam_cmd->add_option("--bracket", jam_opts.bracket);
    jam_cmd->add_option("--out", jam_opts.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ser_cmd) return run_ser(ser_opts);
        if (*verify_cmd) return run_verify(verify_opts);
        if (*sphere_cmd) return run_sphere(sphere_opts);
        if (*fade_cmd) return run_fade(fade_opts);
        if (*alloc_cmd) return run_allocate(alloc_opts);
        if (*jam_cmd) return run_jam(jam_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
