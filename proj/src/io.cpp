#include "drlab/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace drlab::io {

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Rational parse_probability(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    // JSON numbers are read through their shortest decimal form, so 0.2 is 1/5.
    if (j.is_number()) return parse_rational(shortest(j.get<double>()));
    throw ConfigError("probability must be a string or a number");
}

SystemSpec spec_from_json(const json& j) {
    try {
        if (!j.is_object()) throw ConfigError("spec must be a JSON object");
        const long m = j.at("m").get<long>();
        const json& init = j.at("initial");
        Mode mode = Mode::Rational;
        if (init.contains("mode")) mode = parse_mode(init.at("mode").get<std::string>());
        if (j.contains("mode")) mode = parse_mode(j.at("mode").get<std::string>());
        std::map<long, Rational> law;
        for (const auto& a : init.at("atoms")) {
            const long x = a.at("x").get<long>();
            if (x < 0) throw ConfigError("atom x must be a nonnegative integer");
            if (law.count(x)) throw ConfigError("duplicate atom at x = " + std::to_string(x));
            law[x] = parse_probability(a.at("p"));
        }
        SystemSpec spec = make_spec(m, std::move(law), mode, j.value("label", std::string{}));
        if (j.contains("eps")) spec.eps = j.at("eps").get<double>();
        if (j.contains("max_support")) spec.max_support = j.at("max_support").get<long>();
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed spec: ") + e.what());
    }
}

json spec_to_json(const SystemSpec& spec) {
    json atoms = json::array();
    for (const auto& [x, p] : spec.initial) atoms.push_back(json{{"x", x}, {"p", p.get_str()}});
    json j;
    j["m"] = spec.m;
    j["initial"] = json{{"atoms", atoms}, {"mode", mode_name(spec.mode)}};
    j["eps"] = spec.eps;
    j["max_support"] = spec.max_support;
    if (!spec.label.empty()) j["label"] = spec.label;
    return j;
}

SystemSpec read_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("spec file '" + path + "' is not valid JSON: " + e.what());
    }
    return spec_from_json(j);
}

json phase_to_json(const PhaseReport& r) {
    json j;
    j["delta0"] = r.delta0;
    j["phase"] = phase_name(r.phase);
    j["mode"] = r.mode;
    j["tolerance"] = r.tolerance;
    return j;
}

namespace {

// Exact reports carry strings; float reports carry numbers.
json number_field(const std::string& text, Mode mode) {
    if (mode != Mode::Float) return text;
    return std::stod(text);
}

} // namespace

json residual_to_json(const ResidualReport& r) {
    json j;
    j["identity"] = r.identity;
    j["n"] = r.n;
    j["mode"] = mode_name(r.mode);
    json per = json::array();
    for (const auto& e : r.per_index)
        per.push_back(json{{"index", e.index},
                           {"lhs", number_field(e.lhs, r.mode)},
                           {"rhs", number_field(e.rhs, r.mode)},
                           {"abs_err", number_field(e.abs_err, r.mode)}});
    j["per_index"] = per;
    j["max_abs_err"] = number_field(r.max_abs_err, r.mode);
    j["certified_bound"] = number_field(r.certified_bound, r.mode);
    j["pass"] = r.pass;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

json openpath_to_json(const OpenPathReport& r) {
    json j;
    j["weighted"] = r.weighted ? residual_to_json(*r.weighted) : json(nullptr);
    j["pointwise"] = residual_to_json(r.pointwise);
    j["notices"] = r.notices;
    j["pass"] = r.pass();
    return j;
}

json inequality_to_json(const InequalityReport& r, bool include_rows) {
    json j;
    j["identity"] = "inequalities";
    j["checked"] = r.checked;
    j["violations"] = r.violations;
    j["pass"] = r.violations == 0;
    if (include_rows) {
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back(json{{"check", row.check}, {"n", row.n},     {"i", row.i},
                                {"k", row.k},         {"ell", row.ell}, {"lhs", row.lhs},
                                {"rhs", row.rhs},     {"eps", row.eps}, {"holds", row.holds}});
        j["rows"] = rows;
    }
    return j;
}

json fit_to_json(const FitResult& r, const std::string& statistic) {
    json pts = json::array();
    for (const auto& [n, v] : r.points) pts.push_back(json{{"n", n}, {"value", v}});
    return json{{"statistic", statistic}, {"window", {r.n_min, r.n_max}}, {"slope", r.slope},
                {"intercept", r.intercept}, {"residual_se", r.residual_se}, {"points", pts}};
}

json scaling_summary_json(const ScalingReport& r) {
    json j;
    j["refused"] = r.refused;
    if (r.refused) {
        j["notice"] = r.notice;
        return j;
    }
    json bands = json::array();
    for (const auto& b : r.bands)
        bands.push_back(json{{"column", b.column}, {"median", b.median}, {"min", b.lo}, {"max", b.hi}, {"pass", b.pass}});
    j["bands"] = bands;
    j["tail_checked"] = r.tail_checked;
    j["tail_max"] = r.tail_max;
    j["tail_pass"] = r.tail_pass;
    json conj;
    for (const auto& [k, v] : r.conjectured) conj[k] = v;
    j["conjectured_not_asserted"] = conj;
    if (!r.rows.empty()) {
        const auto& last = r.rows.back();
        j["last_n"] = last.n;
        j["last_n2_survival"] = last.cols.at("n2_survival");
        j["last_n2_mean"] = last.cols.at("n2_mean");
    }
    j["pass"] = r.pass();
    return j;
}

json tree_to_json(const TreeSample& t) {
    return json{{"m", t.m}, {"n", t.n}, {"seed", t.seed}, {"replicate", t.replicate}, {"levels", t.levels}};
}

json coupling_to_json(const CouplingReport& r) {
    return json{{"B", std::vector<long>(r.B.begin(), r.B.end())},
                {"reps", r.reps},
                {"premise_held", r.premise_held},
                {"root_violations", r.root_violations},
                {"order_violations", r.order_violations}};
}

template <class T>
void write_trace_csv(std::ostream& os, const GenerationTrace<T>& trace) {
    os << "n,survival,mean,g_at_m,g_at_0,ex_m,ex2_m,ex3_m,log_running_product,deficit\n";
    for (const auto& g : trace.gens) {
        os << g.n << ',' << format_number(g.survival) << ',' << format_number(g.mean) << ','
           << format_number(g.g_at_m) << ',' << format_number(g.g_at_0) << ',' << format_number(g.wm[1]) << ','
           << format_number(g.wm[2]) << ',' << format_number(g.wm[3]) << ','
           << format_number(g.log_running_product) << ',' << format_number(g.deficit) << '\n';
    }
}

template void write_trace_csv(std::ostream&, const GenerationTrace<double>&);
template void write_trace_csv(std::ostream&, const GenerationTrace<Rational>&);
template void write_trace_csv(std::ostream&, const GenerationTrace<Residue>&);

void write_scaling_csv(std::ostream& os, const ScalingReport& r) {
    os << 'n';
    for (const auto& c : r.columns) os << ',' << c;
    os << '\n';
    for (const auto& row : r.rows) {
        os << row.n;
        for (const auto& c : r.columns) {
            auto it = row.cols.find(c);
            os << ',' << (it == row.cols.end() ? std::string{} : format_number(it->second));
        }
        os << '\n';
    }
}

void write_mc_csv(std::ostream& os, const std::vector<McEstimate>& est) {
    os << "statistic,estimate,stderr,reps,seed\n";
    for (const auto& e : est)
        os << '"' << e.statistic << "\"," << format_number(e.estimate) << ',' << format_number(e.stderr_) << ','
           << e.reps << ',' << e.seed << '\n';
}

void write_comparison_csv(std::ostream& os, const std::vector<McComparison>& cmp) {
    os << "statistic,estimate,stderr,exact,z,stderr_floored\n";
    for (const auto& c : cmp)
        os << '"' << c.statistic << "\"," << format_number(c.estimate) << ',' << format_number(c.stderr_) << ','
           << format_number(c.exact) << ',' << format_number(c.z) << ',' << (c.stderr_floored ? 1 : 0) << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r' && ch != '"') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

Series read_series_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open series file '" + path + "'");
    Series s;
    std::string line;
    std::size_t col = 1;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto f = split_csv(line);
        if (first) {
            first = false;
            if (!f.empty() && f[0] == "n") {
                col = 0;
                for (std::size_t i = 1; i < f.size(); ++i)
                    if (f[i] == column) col = i;
                if (col == 0) {
                    if (f.size() == 2) col = 1;
                    else throw ConfigError("series file has no column '" + column + "'");
                }
                continue;
            }
        }
        if (f.size() <= col) throw ConfigError("short row in series file: " + line);
        try {
            s.n.push_back(std::stol(f[0]));
            s.value.push_back(std::stod(f[col]));
        } catch (const std::exception&) {
            throw ConfigError("unparseable row in series file: " + line);
        }
    }
    if (s.n.empty()) throw ConfigError("series file '" + path + "' has no rows");
    return s;
}

} // namespace drlab::io
