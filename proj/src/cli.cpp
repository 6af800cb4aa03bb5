#include "qmlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmlab/bounds.hpp"
#include "qmlab/corner.hpp"
#include "qmlab/errors.hpp"
#include "qmlab/fn_io.hpp"
#include "qmlab/lp_blowup.hpp"
#include "qmlab/pasting.hpp"
#include "qmlab/power.hpp"
#include "qmlab/pwl.hpp"

namespace qm::cli {

namespace {

using Doc = nlohmann::ordered_json;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string shortest(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, r.ptr};
}

double parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw InputError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<double> parse_list(std::string_view s) {
    std::vector<double> out;
    for (auto part : split(s, ',')) out.push_back(parse_double(part));
    return out;
}

/// Non-finite values become strings so the JSON stays valid.
Doc num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

Doc num_array(std::span<const double> xs) {
    Doc a = Doc::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

Doc function_doc(const pwl::PiecewiseLinearFn& f) {
    Doc d;
    d["breakpoints"] = num_array(f.breakpoints());
    d["values"] = num_array(f.values());
    return d;
}

/// Function tables for text and csv output.
Doc function_rows(const pwl::PiecewiseLinearFn& f) {
    Doc rows = Doc::array();
    for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
        rows.push_back({{"x", f.breakpoints()[i]}, {"y", f.values()[i]}});
    }
    return rows;
}

std::string scalar_text(const Doc& v, bool round_trip) {
    if (v.is_number()) return round_trip ? shortest(v.get<double>()) : fmt10(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    if (v.is_array()) {
        std::string s;
        const char sep = round_trip ? ';' : ',';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += sep;
            s += v[i].is_array() ? "[" + scalar_text(v[i], round_trip) + "]" : scalar_text(v[i], round_trip);
        }
        return s;
    }
    return v.dump();
}

bool is_table(const Doc& d) { return d.is_array() && !d.empty() && d.front().is_object(); }

void flatten(const Doc& v, const std::string& prefix, std::vector<std::pair<std::string, Doc>>& out) {
    if (v.is_object()) {
        for (const auto& [k, sub] : v.items()) flatten(sub, prefix.empty() ? k : prefix + "." + k, out);
    } else if (is_table(v)) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(prefix, v);
    }
}

std::string render_text(const Doc& d) {
    std::string s;
    if (is_table(d)) {
        std::vector<std::pair<std::string, Doc>> cells;
        flatten(d.front(), "", cells);
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? " " : "") + cells[i].first;
        s += '\n';
        for (const auto& row : d) {
            cells.clear();
            flatten(row, "", cells);
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const auto t = scalar_text(cells[i].second, false);
                s += (i ? " " : "") + (t.empty() ? std::string("-") : t);
            }
            s += '\n';
        }
    } else if (d.is_object()) {
        std::vector<std::pair<std::string, Doc>> cells;
        flatten(d, "", cells);
        for (const auto& [k, v] : cells) s += k + "=" + scalar_text(v, false) + "\n";
    } else {
        s = scalar_text(d, false) + "\n";
    }
    return s;
}

std::string render_csv(const Doc& d) {
    std::vector<std::pair<std::string, Doc>> cells;
    std::string s;
    auto line = [&](bool header) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) s += ',';
            s += header ? cells[i].first : scalar_text(cells[i].second, true);
        }
        s += '\n';
    };
    if (is_table(d)) {
        flatten(d.front(), "", cells);
        line(true);
        for (const auto& row : d) {
            cells.clear();
            flatten(row, "", cells);
            line(false);
        }
    } else if (d.is_object()) {
        flatten(d, "", cells);
        line(true);
        line(false);
    } else {
        s = "value\n" + scalar_text(d, true) + "\n";
    }
    return s;
}

std::string render(const Doc& d, Format f) {
    switch (f) {
        case Format::Json: return d.dump(2) + "\n";
        case Format::Csv: return render_csv(d);
        case Format::Text: return render_text(d);
    }
    return {};
}

Doc rows_doc(const std::vector<tables::TableRow>& rows) {
    Doc a = Doc::array();
    for (const auto& r : rows) {
        Doc o;
        o["Q"] = r.Q;
        o["p"] = r.p ? Doc(*r.p) : Doc(nullptr);
        o["value"] = r.value;
        o["kind"] = std::string(tables::kind_name(r.kind));
        a.push_back(std::move(o));
    }
    return a;
}

struct Params {
    double gamma = 0, p = 0, q = 0, q1 = 0, q2 = 0, q3 = 0, alpha = 0;
    std::string q_list, p_list, interval, variant = "standard", mode = "super", export_path;
    std::vector<std::string> inputs;
    bool relaxed = false, symmetrize = false, multipliers = false;
    int table = 0;
};

std::pair<double, double> interval_of(const Params& P, const pwl::PiecewiseLinearFn& f) {
    if (P.interval.empty()) return {f.lo(), f.hi()};
    const auto v = parse_list(P.interval);
    if (v.size() != 2) throw InputError("--interval expects a,b");
    if (!(v[0] < v[1]) || v[0] < f.lo() || v[1] > f.hi()) {
        throw DomainViolation("--interval must satisfy lo <= a < b <= hi of the function");
    }
    return {v[0], v[1]};
}

void maybe_export(const Params& P, const pwl::PiecewiseLinearFn& f) {
    if (!P.export_path.empty()) io::write_function_file(f, P.export_path);
}

}  // namespace

Format format_from_name(std::string_view name) {
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    if (name == "text") return Format::Text;
    throw InputError("unknown format '" + std::string(name) + "'");
}

std::string rows_to_csv(const std::vector<tables::TableRow>& rows) { return render_csv(rows_doc(rows)); }

std::string rows_to_json(const std::vector<tables::TableRow>& rows) { return rows_doc(rows).dump(2) + "\n"; }

std::string rows_to_text(const std::vector<tables::TableRow>& rows) { return render_text(rows_doc(rows)); }

std::vector<tables::TableRow> rows_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "Q,p,value,kind") throw InputError("table CSV: bad header");
    std::vector<tables::TableRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 4) throw InputError("table CSV: expected 4 fields");
        std::optional<double> p;
        if (!f[1].empty()) p = parse_double(f[1]);
        rows.push_back({parse_double(f[0]), p, parse_double(f[2]), tables::kind_from_name(f[3])});
    }
    return rows;
}

std::vector<tables::TableRow> rows_from_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
        std::vector<tables::TableRow> rows;
        for (const auto& o : doc) {
            std::optional<double> p;
            if (!o.at("p").is_null()) p = o.at("p").get<double>();
            rows.push_back({o.at("Q").get<double>(), p, o.at("value").get<double>(),
                            tables::kind_from_name(o.at("kind").get<std::string>())});
        }
        return rows;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("table JSON: ") + e.what());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasiminimizer constants for one-dimensional p-energies", "qmlab"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text";
    std::string out_path;
    numerics::ToleranceConfig tol;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->envname("QMLAB_FORMAT");
    app.add_option("--out", out_path, "Write output to this file");
    app.add_option("--tol-root", tol.root_abs_tol, "Root bracket width");
    app.add_option("--tol-opt", tol.opt_rel_tol, "Relative stopping tolerance of the 2-D maximizer");
    app.add_option("--tol-lp", tol.lp_feas_tol, "Simplex feasibility tolerance");
    app.add_option("--max-iter", tol.max_iter, "Iteration cap per solver");

    Params P;
    std::vector<std::pair<CLI::App*, std::function<Doc(Format)>>> leaves;

    auto group = [&](const std::string& name, const std::string& help) {
        auto* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        g->fallthrough();
        return g;
    };
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                    std::function<Doc(Format)> fn) {
        auto* s = parent->add_subcommand(name, help);
        s->fallthrough();
        leaves.emplace_back(s, std::move(fn));
        return s;
    };
    auto req = [&](CLI::App* s, const std::string& flag, double& target, const std::string& help) {
        s->add_option(flag, target, help)->required();
    };

    // corner
    auto* corner = group("corner", "One-corner constants");
    auto* c_q = leaf(corner, "q", "Q and k for a slope quotient", [&](Format) {
        const auto c = corner::corner_constant(P.gamma, P.p);
        return Doc{{"Q", c.Q}, {"k", c.k}};
    });
    req(c_q, "--gamma", P.gamma, "Slope quotient");
    req(c_q, "--p", P.p, "Exponent");
    auto* c_g = leaf(corner, "gamma", "Slope quotient for a given Q",
                     [&](Format) { return Doc(corner::gamma_from_q(P.q, P.p, tol)); });
    req(c_g, "--q", P.q, "Quasiminimizing constant");
    req(c_g, "--p", P.p, "Exponent");
    auto* c_o = leaf(corner, "optimal", "Optimal unit one-corner function", [&](Format) {
        if (P.gamma == 0.0) P.gamma = corner::gamma_from_q(P.q, P.p, tol);
        const auto w = corner::optimal_unit_corner(P.gamma, P.p);
        maybe_export(P, w.realize());
        const auto c = corner::corner_constant(P.gamma, P.p);
        return Doc{{"gamma", w.gamma},   {"x0", w.x0},         {"one_minus_x0", w.one_minus_x0},
                   {"alpha", w.alpha},   {"slope_right", w.alpha * w.gamma},
                   {"Q", c.Q},           {"k", c.k}};
    });
    auto* og = c_o->add_option("--gamma", P.gamma, "Slope quotient");
    c_o->add_option("--q", P.q, "Quasiminimizing constant")->excludes(og);
    c_o->require_option(2, 3);
    req(c_o, "--p", P.p, "Exponent");
    c_o->add_option("--export", P.export_path, "Write the function as JSON");

    // power
    auto* power = group("power", "Power-type quasiminimizers");
    auto* p_qa = leaf(power, "qalpha", "Constant of x^alpha",
                      [&](Format) { return Doc(power::q_alpha(P.alpha, P.p)); });
    req(p_qa, "--alpha", P.alpha, "Exponent of the power function");
    req(p_qa, "--p", P.p, "Exponent");
    auto* p_br = leaf(power, "branches", "Both exponents with a given constant", [&](Format) {
        const auto b = power::alpha_branches(P.q, P.p, tol);
        return Doc{{"alpha_prime", b.alpha_prime},
                   {"alpha", b.alpha},
                   {"one_minus_alpha_prime", b.one_minus_alpha_prime},
                   {"alpha_prime_excess", b.alpha_prime_excess},
                   {"alpha_minus_one", b.alpha_minus_one}};
    });
    req(p_br, "--q", P.q, "Quasiminimizing constant");
    req(p_br, "--p", P.p, "Exponent");
    auto qtilde_doc = [&](Format) {
        const auto r = power::q_tilde(P.q1, P.q2, P.p, tol);
        Doc d{{"alpha1", r.alpha1}, {"alpha2", r.alpha2}, {"x0", r.x0},       {"x1", r.x1},
              {"x2", r.x2},         {"s0", r.s0},         {"s1", r.s1},       {"s2", r.s2},
              {"q_tilde", r.q_tilde}, {"lb1", r.lb1},     {"lb2", r.lb2}};
        if (P.p == 2.0) {
            const auto qt = power::qt_closed_form_p2(P.q1, P.q2);
            d["qt_bound1"] = qt.bound1;
            d["qt_bound2"] = qt.bound2;
        }
        return d;
    };
    auto* p_qt = leaf(power, "qtilde", "Energy of the minimum of two extremal power functions", qtilde_doc);
    req(p_qt, "--q1", P.q1, "Constant of the high-branch function");
    req(p_qt, "--q2", P.q2, "Constant of the low-branch function");
    req(p_qt, "--p", P.p, "Exponent");

    // bound
    auto* bound = group("bound", "Blowup bounds for minima");
    auto* b_km = leaf(bound, "km", "min{Q1 Q2, Q1 + Q2}", [&](Format) { return Doc(bounds::km_bound(P.q1, P.q2)); });
    auto* b_m2 = leaf(bound, "min2", "Sharp bound for two functions",
                      [&](Format) { return Doc(bounds::min2_bound(P.q1, P.q2)); });
    for (auto* s : {b_km, b_m2}) {
        req(s, "--q1", P.q1, "First constant");
        req(s, "--q2", P.q2, "Second constant");
    }
    auto* b_m3 = leaf(bound, "min3", "Bound for three functions",
                      [&](Format) { return Doc(bounds::min3_bound(P.q1, P.q2, P.q3)); });
    auto* b_sys = leaf(bound, "system", "Multipliers of the three-function system", [&](Format) {
        const auto r = bounds::min3_via_system(P.q1, P.q2, P.q3);
        Doc pair = Doc::array();
        for (const auto& row : r.x_pair) pair.push_back(num_array(row));
        return Doc{{"x", num_array(r.x)},         {"y", num_array(r.y)},       {"x_pair", pair},
                   {"x_hat", num_array(r.x_hat)}, {"Q_A0", r.Q_A0},            {"Q_A1", num_array(r.Q_A1)},
                   {"Q_A2", num_array(r.Q_A2)}};
    });
    for (auto* s : {b_m3, b_sys}) {
        req(s, "--q1", P.q1, "First constant");
        req(s, "--q2", P.q2, "Second constant");
        req(s, "--q3", P.q3, "Third constant");
    }

    // lp
    auto* lp_cmd = leaf(&app, "lp", "Blowup bound from the multiplier linear program", [&](Format) {
        const auto Q = parse_list(P.q_list);
        const auto r = lp::solve_blowup_lp(Q, tol, {P.relaxed, P.symmetrize});
        Doc d{{"N", Q.size()}, {"bound", r.bound}, {"status", r.exploratory ? "exploratory" : "reference"}};
        if (P.multipliers) {
            Doc m = Doc::array();
            for (std::size_t k = 0; k < r.inequalities.size(); ++k) {
                Doc members = Doc::array();
                for (std::size_t s = 0; s < Q.size(); ++s) {
                    if (r.inequalities[k].S >> s & 1u) members.push_back(s + 1);
                }
                m.push_back({{"i", r.inequalities[k].i + 1}, {"S", members}, {"value", r.multipliers[k]}});
            }
            d["multipliers"] = m;
        }
        return d;
    });
    lp_cmd->add_option("--q", P.q_list, "Comma-separated constants")->required();
    lp_cmd->add_flag("--relaxed", P.relaxed, "Allow favourable leftover terms");
    lp_cmd->add_flag("--symmetrize", P.symmetrize, "Tie multipliers to |S| (equal constants only)");
    lp_cmd->add_flag("--multipliers", P.multipliers, "Include the optimal multipliers");

    // blowup
    auto* blow = leaf(&app, "blowup", "Lower and upper blowup estimates for two constants", [&](Format f) {
        Doc d = qtilde_doc(f);
        d["max_q"] = std::max(P.q1, P.q2);
        d["upper_bound"] = bounds::min2_bound(P.q1, P.q2);
        d["km_bound"] = bounds::km_bound(P.q1, P.q2);
        return d;
    });
    req(blow, "--q1", P.q1, "Constant of the high-branch function");
    req(blow, "--q2", P.q2, "Constant of the low-branch function");
    req(blow, "--p", P.p, "Exponent");

    // paste
    auto* paste = group("paste", "Pasting constructions");
    auto example_doc = [&](const pasting::PasteExample& ex) {
        maybe_export(P, ex.u);
        Doc omega = Doc::array();
        for (const auto& [a, b] : ex.omega1) omega.push_back(Doc::array({a, b}));
        return Doc{{"Q1", P.q1},     {"Q2", P.q2}, {"p", P.p},
                   {"x0", ex.x0},    {"A", ex.A},  {"omega1", omega},
                   {"achieved_energy", ex.achieved_energy}, {"claimed_bound", ex.claimed_bound}};
    };
    auto* ps = leaf(paste, "sharp", "Example attaining Q1 Q2", [&](Format) {
        return example_doc(pasting::sharp_example(P.q1, P.q2, P.p, tol));
    });
    auto* pi = leaf(paste, "interval", "Single-interval examples", [&](Format) {
        const auto v = P.variant == "second" ? pasting::Variant::Second : pasting::Variant::Standard;
        Doc d = example_doc(pasting::interval_example(P.q1, P.q2, P.p, v, tol));
        d["variant"] = P.variant;
        return d;
    });
    pi->add_option("--variant", P.variant, "standard or second")->check(CLI::IsMember({"standard", "second"}));
    for (auto* s : {ps, pi}) {
        req(s, "--q1", P.q1, "Constant of the pasted function");
        req(s, "--q2", P.q2, "Constant of the base function");
        req(s, "--p", P.p, "Exponent");
        s->add_option("--export", P.export_path, "Write the pasted function as JSON");
    }
    auto* sw = leaf(paste, "sweep", "Interval example across exponents", [&](Format) {
        const auto ps_list = parse_list(P.p_list);
        Doc rows = Doc::array();
        for (const auto& r : pasting::p_sweep(P.q1, P.q2, ps_list, tol)) {
            rows.push_back({{"p", r.p}, {"A", r.A}, {"achieved_energy", r.achieved_energy}});
        }
        return rows;
    });
    req(sw, "--q1", P.q1, "Constant of the pasted function");
    req(sw, "--q2", P.q2, "Constant of the base function");
    sw->add_option("--p-list", P.p_list, "Comma-separated exponents")->required();

    // fn
    auto* fn = group("fn", "Operations on function files");
    auto input = [&](std::size_t k) { return io::read_function_file(P.inputs.at(k)); };
    auto one_input = [&]() {
        if (P.inputs.size() != 1) throw InputError("expected exactly one --input");
        return input(0);
    };
    auto emit_fn = [](const pwl::PiecewiseLinearFn& f, Format fmt) {
        return fmt == Format::Json ? function_doc(f) : function_rows(f);
    };
    auto* f_e = leaf(fn, "energy", "p-energy on an interval", [&](Format) {
        const auto f = one_input();
        const auto [a, b] = interval_of(P, f);
        return Doc(pwl::energy(f, P.p, a, b));
    });
    auto* f_q = leaf(fn, "qconst", "Best quasiminimizing constant", [&](Format) {
        auto f = one_input();
        const auto [a, b] = interval_of(P, f);
        if (a != f.lo() || b != f.hi()) f = f.restrict(a, b);
        const auto mode = P.mode == "free" ? pwl::QuasiMode::Free : pwl::QuasiMode::Super;
        const auto r = pwl::quasimin_constant_detail(f, P.p, mode, tol);
        return Doc{{"value", num(r.value)}, {"a", r.a}, {"b", r.b}};
    });
    f_q->add_option("--mode", P.mode, "free or super")->check(CLI::IsMember({"free", "super"}));
    for (auto* s : {f_e, f_q}) req(s, "--p", P.p, "Exponent");
    auto* f_m = leaf(fn, "min", "Pointwise minimum of two functions", [&](Format fmt) {
        if (P.inputs.size() != 2) throw InputError("fn min expects --input twice");
        auto m = pwl::pointwise_min(input(0), input(1));
        const auto [a, b] = interval_of(P, m);
        if (a != m.lo() || b != m.hi()) m = m.restrict(a, b);
        return emit_fn(m, fmt);
    });
    auto* f_v = leaf(fn, "envelope", "Least concave majorant", [&](Format fmt) {
        const auto f = one_input();
        const auto [a, b] = interval_of(P, f);
        return emit_fn(pwl::concave_envelope(f, a, b), fmt);
    });
    for (auto* s : {f_e, f_q, f_m, f_v}) {
        s->add_option("--input", P.inputs, "Function JSON file")->required()->allow_extra_args(false);
        s->add_option("--interval", P.interval, "Subinterval a,b");
    }

    // table
    auto* tbl = leaf(&app, "table", "Reproduce the numerical tables", [&](Format) {
        return rows_doc(P.table == 1 ? tables::table1(tol) : tables::table2(tol));
    });
    tbl->add_option("--name", P.table, "1 or 2")->required()->check(CLI::IsMember({1, 2}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    try {
        tol.validate();
        const Format fmt = format_from_name(format);
        for (const auto& [sub, action] : leaves) {
            if (!sub->parsed()) continue;
            const auto text = render(action(fmt), fmt);
            if (out_path.empty()) {
                out << text;
            } else {
                std::ofstream file(out_path, std::ios::binary);
                if (!file) throw InputError("cannot write " + out_path);
                file << text;
            }
            return 0;
        }
        throw InputError("no command given");
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace qm::cli
