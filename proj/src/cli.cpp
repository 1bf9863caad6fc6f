#include "drlab/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "drlab/analysis.hpp"
#include "drlab/io.hpp"
#include "drlab/pathcalc.hpp"
#include "drlab/presets.hpp"
#include "drlab/treesim.hpp"

namespace drlab {

using io::json;

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw ResourceError("sha256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

namespace {

struct SpecOpts {
    std::string spec_path;
    std::string preset_name;
    std::string mode;
    std::optional<double> eps;
    std::optional<long> max_support;
};

void add_spec_options(CLI::App* sub, SpecOpts& so) {
    sub->add_option("--spec", so.spec_path, "spec JSON file");
    sub->add_option("--preset", so.preset_name, "built-in spec (example11, delta0, subcrit-sample, "
                                                "supercrit-sample, alpha-family:ALPHA:K)");
    sub->add_option("--mode", so.mode, "rational | float | modular");
    sub->add_option("--eps", so.eps, "float truncation tolerance");
    sub->add_option("--max-support", so.max_support, "support cap");
}

// Presets default to float; spec files keep their own mode.
SystemSpec resolve_spec(const SpecOpts& so) {
    if (so.spec_path.empty() == so.preset_name.empty())
        throw ConfigError("give exactly one of --spec or --preset");
    SystemSpec spec;
    Mode mode;
    if (!so.spec_path.empty()) {
        spec = io::read_spec_file(so.spec_path);
        mode = spec.mode;
    } else {
        spec = preset(so.preset_name);
        mode = Mode::Float;
    }
    if (!so.mode.empty()) mode = parse_mode(so.mode);
    if (mode != spec.mode) {
        const long cap = spec.max_support;
        spec = make_spec(spec.m, spec.initial, mode, spec.label);
        spec.max_support = cap;
    }
    if (so.eps) {
        if (mode != Mode::Float && *so.eps != 0.0) throw ConfigError("--eps applies to float mode only");
        spec.eps = *so.eps;
    }
    if (so.max_support) spec.max_support = *so.max_support;
    spec.validate();
    return spec;
}

/// Collects every output a command produces so the manifest can digest it.
class Session {
public:
    Session(std::ostream& out, bool write_files) : out_(out), write_files_(write_files) {}

    void emit(const std::string& path, const std::string& content) {
        if (path.empty() || path == "-") {
            out_ << content;
            digests_.emplace_back("-", sha256_hex(content));
            return;
        }
        if (write_files_) {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw ConfigError("cannot write '" + path + "'");
            f << content;
        }
        digests_.emplace_back(path, sha256_hex(content));
        if (first_file_.empty()) first_file_ = path;
    }

    const std::vector<std::pair<std::string, std::string>>& digests() const { return digests_; }
    const std::string& first_file() const { return first_file_; }

    std::optional<SystemSpec> spec;
    std::vector<std::uint64_t> seeds;

private:
    std::ostream& out_;
    bool write_files_;
    std::vector<std::pair<std::string, std::string>> digests_;
    std::string first_file_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class F>
decltype(auto) dispatch(Mode mode, F&& f) {
    switch (mode) {
    case Mode::Float: return f(double{});
    case Mode::Rational: return f(Rational{});
    case Mode::Modular: return f(Residue{});
    }
    throw ConfigError("unknown mode");
}

std::vector<long> parse_long_list(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stol(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad integer list '" + s + "'");
        }
    }
    return out;
}

std::pair<long, long> parse_window(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos) throw ConfigError("window must look like LO:HI");
    try {
        return {std::stol(s.substr(0, pos)), std::stol(s.substr(pos + 1))};
    } catch (const std::exception&) {
        throw ConfigError("window must look like LO:HI");
    }
}

// ---------------------------------------------------------------- commands

int cmd_phase(Session& ses, const SpecOpts& so, const std::string& out_path) {
    const auto spec = resolve_spec(so);
    ses.spec = spec;
    ses.emit(out_path, dump(io::phase_to_json(classify_phase(spec))));
    return 0;
}

int cmd_evolve(Session& ses, const SpecOpts& so, long steps, const std::string& out_path, long max_bits) {
    const auto spec = resolve_spec(so);
    ses.spec = spec;
    if (steps < 0) throw DomainError("--steps must be >= 0");
    std::ostringstream os;
    dispatch(spec.mode, [&](auto tag) {
        using T = decltype(tag);
        EvolveOptions opt;
        opt.max_rational_bits = max_bits;
        io::write_trace_csv(os, evolve<T>(spec, steps, opt));
    });
    ses.emit(out_path, os.str());
    return 0;
}

struct VerifyOpts {
    std::string identity;
    long steps = 10;
    long ell_max = 10;
    std::string is;
    std::string ns;
    std::string grid;
    double slack = 1e-10;
    bool every = false;
    bool rows = false;
    std::string out;
};

template <class T>
std::vector<T> mgf_grid(const VerifyOpts& vo, long m) {
    std::vector<Rational> qs;
    if (vo.grid.empty()) {
        qs = {Rational(1), Rational(2), Rational(m)};
    } else {
        std::stringstream ss(vo.grid);
        std::string tok;
        while (std::getline(ss, tok, ',')) qs.push_back(parse_rational(tok));
    }
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    std::vector<T> out;
    for (const auto& q : qs) {
        if (sgn(q) <= 0) throw DomainError("grid points must be positive");
        out.push_back(NumTraits<T>::from_rational(q));
    }
    return out;
}

int cmd_verify(Session& ses, const SpecOpts& so, const VerifyOpts& vo) {
    const auto spec = resolve_spec(so);
    ses.spec = spec;
    if (vo.steps < 0) throw DomainError("--steps must be >= 0");
    if (vo.ell_max < 0) throw DomainError("--ell-max must be >= 0");
    bool pass = true;
    json result;
    if (vo.identity == "pivotal") {
        dispatch(spec.mode, [&](auto tag) {
            using T = decltype(tag);
            const auto ctx = make_context<T>(spec, vo.steps, vo.ell_max + 1);
            if (vo.every) {
                json arr = json::array();
                for (long n = 0; n <= vo.steps; ++n) {
                    const auto r = check_pivotal_identity(ctx, n, vo.ell_max);
                    pass = pass && r.pass;
                    arr.push_back(io::residual_to_json(r));
                }
                result = json{{"identity", "pivotal"}, {"reports", arr}, {"pass", pass}};
            } else {
                const auto r = check_pivotal_identity(ctx, vo.steps, vo.ell_max);
                pass = r.pass;
                result = io::residual_to_json(r);
            }
        });
    } else if (vo.identity == "openpath") {
        std::vector<long> is = parse_long_list(vo.is);
        if (is.empty())
            for (const auto& [x, p] : spec.initial)
                if (x <= vo.ell_max) is.push_back(x);
        dispatch(spec.mode, [&](auto tag) {
            using T = decltype(tag);
            const auto ctx = make_context<T>(spec, vo.steps, vo.ell_max + 1);
            const long lo = vo.every ? 0 : vo.steps;
            json arr = json::array();
            for (long n = lo; n <= vo.steps; ++n) {
                const auto r = check_openpath_identities(ctx, is, n, vo.ell_max);
                pass = pass && r.pass();
                arr.push_back(io::openpath_to_json(r));
            }
            result = vo.every ? json{{"identity", "openpath"}, {"reports", arr}, {"pass", pass}} : arr.front();
        });
    } else if (vo.identity == "mgf" || vo.identity == "leibniz") {
        dispatch(spec.mode, [&](auto tag) {
            using T = decltype(tag);
            EvolveOptions opt;
            opt.keep_pmfs_until = vo.steps;
            opt.lambdas.clear();
            const auto trace = evolve<T>(spec, vo.steps, opt);
            ResidualReport r;
            if (vo.identity == "mgf") {
                r = check_mgf_identities(trace, mgf_grid<T>(vo, spec.m), vo.slack);
            } else {
                if constexpr (!NumTraits<T>::exact) throw DomainError("leibniz check needs an exact mode");
                else r = check_leibniz(trace, 4);
            }
            pass = r.pass;
            result = io::residual_to_json(r);
        });
    } else if (vo.identity == "inequalities") {
        InequalityOptions opt;
        opt.ns = parse_long_list(vo.ns);
        if (opt.ns.empty()) opt.ns = {vo.steps};
        opt.ell_max = vo.ell_max;
        long top = 0;
        for (long n : opt.ns) top = std::max(top, n);
        auto run = [&](auto tag) {
            using T = decltype(tag);
            const auto ctx = make_context<T>(spec, top, opt.ell_max + 4);
            const auto rep = check_counting_inequalities(ctx, opt);
            pass = rep.violations == 0;
            result = io::inequality_to_json(rep, vo.rows);
        };
        if (spec.mode == Mode::Float) run(double{});
        else if (spec.mode == Mode::Rational) run(Rational{});
        else throw ConfigError("inequalities need an ordered mode (rational or float)");
    } else {
        throw ConfigError("unknown identity '" + vo.identity + "' (pivotal|openpath|mgf|leibniz|inequalities)");
    }
    ses.emit(vo.out, dump(result));
    return pass ? 0 : 1;
}

struct SimOpts {
    long n = 6;
    long reps = 10000;
    std::uint64_t seed = 1;
    int threads = 0;
    bool compare = false;
    double z_limit = 4.0;
    std::string stats = "pivotal,openpath,survival,mean";
    long k_max = 3, i_max = 3, ell_max = 8;
    std::string out, compare_out;
};

int cmd_simulate(Session& ses, const SpecOpts& so, const SimOpts& o, std::ostream& err) {
    const auto spec = resolve_spec(so);
    ses.spec = spec;
    ses.seeds = {o.seed};
    if (o.n < 0 || o.reps < 1) throw DomainError("need n >= 0 and reps >= 1");
    McSelector sel;
    sel.pivotal = sel.openpath = sel.survival = sel.mean = false;
    std::stringstream ss(o.stats);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "pivotal") sel.pivotal = true;
        else if (tok == "openpath") sel.openpath = true;
        else if (tok == "survival") sel.survival = true;
        else if (tok == "mean") sel.mean = true;
        else throw ConfigError("unknown statistic '" + tok + "'");
    }
    sel.k_max = o.k_max;
    sel.i_max = o.i_max;
    sel.ell_max = o.ell_max;
    const int threads = o.threads > 0 ? o.threads : default_threads();
    const auto est = monte_carlo(spec, o.n, sel, o.reps, o.seed, threads);
    std::ostringstream os;
    io::write_mc_csv(os, est);
    ses.emit(o.out, os.str());
    if (!o.compare) return 0;
    const auto cmp = compare_with_exact(spec, o.n, sel, est);
    std::ostringstream cs;
    io::write_comparison_csv(cs, cmp);
    std::string cpath = o.compare_out;
    if (cpath.empty() && !o.out.empty() && o.out != "-") cpath = o.out + ".compare.csv";
    ses.emit(cpath, cs.str());
    double zmax = 0.0;
    for (const auto& c : cmp) zmax = std::max(zmax, std::fabs(c.z));
    err << "compared " << cmp.size() << " statistics, max |z| = " << io::shortest(zmax) << "\n";
    return zmax <= o.z_limit ? 0 : 1;
}

int cmd_coupling(Session& ses, const SpecOpts& so, const std::string& B, long n, long reps, std::uint64_t seed,
                 int threads, const std::string& out) {
    const auto spec = resolve_spec(so);
    ses.spec = spec;
    ses.seeds = {seed};
    const auto bl = parse_long_list(B);
    const std::set<long> bs(bl.begin(), bl.end());
    const auto rep = coupling_experiment(spec, bs, n, reps, seed, threads > 0 ? threads : default_threads());
    ses.emit(out, dump(io::coupling_to_json(rep)));
    return rep.root_violations == 0 && rep.order_violations == 0 ? 0 : 1;
}

int cmd_fit(Session& ses, const SpecOpts& so, const std::string& series_path, const std::string& window,
            const std::string& statistic, const std::string& slope_range, const std::string& out) {
    const auto [lo, hi] = parse_window(window);
    const Statistic stat = parse_statistic(statistic);
    Series s;
    if (!series_path.empty()) {
        if (!so.spec_path.empty() || !so.preset_name.empty())
            throw ConfigError("give either --series or a spec, not both");
        s = io::read_series_csv(series_path, statistic_name(stat));
    } else {
        auto spec = resolve_spec(so);
        if (spec.mode != Mode::Float) throw ConfigError("fit evolves in float mode");
        ses.spec = spec;
        EvolveOptions opt;
        opt.lambdas.clear();
        s = series_from_trace(evolve<double>(spec, hi, opt), stat);
    }
    const auto r = fit_exponent(s, lo, hi);
    ses.emit(out, dump(io::fit_to_json(r, statistic_name(stat))));
    if (!slope_range.empty()) {
        const auto pos = slope_range.find(':');
        if (pos == std::string::npos) throw ConfigError("--expect-slope must look like LO:HI");
        const double a = std::stod(slope_range.substr(0, pos)), b = std::stod(slope_range.substr(pos + 1));
        return r.slope >= a && r.slope <= b ? 0 : 1;
    }
    return 0;
}

int cmd_scaling(Session& ses, const SpecOpts& so, long steps, const std::string& csv_out,
                const std::string& summary_out, std::ostream& err) {
    auto spec = resolve_spec(so);
    if (spec.mode != Mode::Float) throw ConfigError("scaling report runs in float mode");
    ses.spec = spec;
    const auto phase = classify_phase(spec).phase;
    if (phase != Phase::Critical) {
        const auto rep = scaling_report(GenerationTrace<double>{}, phase);
        ses.emit(summary_out, dump(io::scaling_summary_json(rep)));
        err << rep.notice << "\n";
        return static_cast<int>(ErrorKind::Domain);
    }
    EvolveOptions opt;
    const auto trace = evolve<double>(spec, steps, opt);
    const auto rep = scaling_report(trace, phase);
    std::ostringstream os;
    io::write_scaling_csv(os, rep);
    ses.emit(csv_out, os.str());
    ses.emit(summary_out, dump(io::scaling_summary_json(rep)));
    return rep.pass() ? 0 : 1;
}

int cmd_fixture(Session& ses, const std::string& name, bool check, const std::string& out) {
    if (name != "figure2") throw ConfigError("unknown fixture '" + name + "' (known: figure2)");
    const auto t = figure_fixture();
    const auto c = count_open_paths(t);
    json j;
    json by = json::object();
    for (long i = 0; i <= 3; ++i) by[std::to_string(i)] = c.by_value.count(i) ? c.by_value.at(i) : 0;
    j["fixture"] = name;
    j["N_by_value"] = by;
    j["N_total"] = c.total;
    j["root"] = t.root();
    j["levels"] = t.levels;
    int code = 0;
    if (check) {
        const bool ok = check_tree(t);
        j["check"] = ok;
        code = ok ? 0 : 1;
    }
    ses.emit(out, dump(j));
    return code;
}

// ---------------------------------------------------------------- manifest

json make_manifest(const std::vector<std::string>& args, const Session& ses, double wall) {
    json m;
    m["command"] = args;
    m["spec"] = ses.spec ? io::spec_to_json(*ses.spec) : json(nullptr);
    m["seeds"] = ses.seeds;
    m["tool_version"] = kToolVersion;
    m["wall_time_s"] = wall;
    json outs = json::array();
    for (const auto& [p, d] : ses.digests()) outs.push_back(json{{"path", p}, {"sha256", d}});
    m["outputs"] = outs;
    return m;
}

int run_inner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Session& ses,
              std::string& manifest_path);

int cmd_replay(const std::string& path, std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    const auto args = m.at("command").get<std::vector<std::string>>();
    if (!args.empty() && args.front() == "replay") throw ConfigError("refusing to replay a replay");
    std::ostringstream sink;
    Session ses(sink, false);
    std::string ignored;
    const int code = run_inner(args, sink, err, ses, ignored);
    const auto& recorded = m.at("outputs");
    bool same = recorded.size() == ses.digests().size();
    json cmp = json::array();
    for (std::size_t i = 0; i < ses.digests().size(); ++i) {
        const auto& [p, d] = ses.digests()[i];
        const std::string want = i < recorded.size() ? recorded[i].at("sha256").get<std::string>() : "";
        const bool eq = want == d;
        same = same && eq;
        cmp.push_back(json{{"path", p}, {"recorded", want}, {"replayed", d}, {"identical", eq}});
    }
    out << dump(json{{"manifest", path}, {"exit_code", code}, {"outputs", cmp}, {"identical", same}});
    return same ? 0 : 1;
}

int run_inner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Session& ses,
              std::string& manifest_path) {
    CLI::App app{"Derrida-Retaux recursive system: exact evolution, identities, simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    SpecOpts so;
    std::string out_path;
    std::string manifest_opt;
    auto common = [&](CLI::App* sub) {
        add_spec_options(sub, so);
        sub->add_option("--out", out_path, "output file (stdout if omitted)");
        sub->add_option("--manifest", manifest_opt, "manifest path (default OUT.manifest.json)");
    };

    auto* phase = app.add_subcommand("phase", "classify the initial law");
    common(phase);

    long steps = 0;
    long max_bits = 1L << 18;
    auto* evolve_cmd = app.add_subcommand("evolve", "evolve the law and write the trace CSV");
    common(evolve_cmd);
    evolve_cmd->add_option("--steps", steps, "generations")->required();
    evolve_cmd->add_option("--max-bits", max_bits, "rational denominator bit limit");

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "check an identity");
    add_spec_options(verify, so);
    verify->add_option("--out", vo.out);
    verify->add_option("--manifest", manifest_opt);
    verify->add_option("--identity", vo.identity, "pivotal|openpath|mgf|leibniz|inequalities")->required();
    verify->add_option("--steps", vo.steps);
    verify->add_option("--ell-max", vo.ell_max);
    verify->add_option("--is", vo.is, "comma list of initial values (openpath)");
    verify->add_option("--ns", vo.ns, "comma list of generations (inequalities)");
    verify->add_option("--grid", vo.grid, "comma list of s values (mgf)");
    verify->add_option("--slack", vo.slack, "float slack added to the certified bound");
    verify->add_flag("--every", vo.every, "check every generation up to --steps");
    verify->add_flag("--rows", vo.rows, "include per-row detail (inequalities)");

    SimOpts sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo on sampled trees");
    add_spec_options(simulate, so);
    simulate->add_option("--out", sim.out);
    simulate->add_option("--manifest", manifest_opt);
    simulate->add_option("--n", sim.n)->required();
    simulate->add_option("--reps", sim.reps);
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--threads", sim.threads, "default DRLAB_THREADS or 1");
    simulate->add_option("--stats", sim.stats);
    simulate->add_option("--k-max", sim.k_max);
    simulate->add_option("--i-max", sim.i_max);
    simulate->add_option("--ell-max", sim.ell_max);
    simulate->add_flag("--compare-exact", sim.compare);
    simulate->add_option("--compare-out", sim.compare_out);
    simulate->add_option("--z-limit", sim.z_limit);

    std::string B = "2";
    long cn = 4, creps = 10000;
    std::uint64_t cseed = 1;
    int cthreads = 0;
    auto* coupling = app.add_subcommand("coupling", "zero the leaves with values in B and compare");
    common(coupling);
    coupling->add_option("--B", B, "comma list of values");
    coupling->add_option("--n", cn);
    coupling->add_option("--reps", creps);
    coupling->add_option("--seed", cseed);
    coupling->add_option("--threads", cthreads);

    std::string series, window = "256:2048", statistic = "survival", expect;
    auto* fit = app.add_subcommand("fit", "log-log slope of a statistic");
    common(fit);
    fit->add_option("--series", series, "CSV with n and the statistic instead of a spec");
    fit->add_option("--window", window, "LO:HI");
    fit->add_option("--statistic", statistic, "survival|mean");
    fit->add_option("--expect-slope", expect, "LO:HI; exit 1 when the slope falls outside");

    long sc_steps = 2048;
    std::string summary;
    auto* scaling = app.add_subcommand("scaling", "scaled moment tables and band checks");
    common(scaling);
    scaling->add_option("--steps", sc_steps);
    scaling->add_option("--summary", summary, "JSON summary path (stdout if omitted)");

    std::string fixture_name;
    bool fixture_check = false;
    auto* fixture = app.add_subcommand("fixture", "built-in tree fixtures");
    fixture->add_option("name", fixture_name)->required();
    fixture->add_flag("--check", fixture_check);
    fixture->add_option("--out", out_path);
    fixture->add_option("--manifest", manifest_opt);

    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output digests");
    replay->add_option("manifest", replay_path)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::Input);
    }
    manifest_path = manifest_opt;

    int code = 0;
    if (*phase) code = cmd_phase(ses, so, out_path);
    else if (*evolve_cmd) code = cmd_evolve(ses, so, steps, out_path, max_bits);
    else if (*verify) {
        code = cmd_verify(ses, so, vo);
        out_path = vo.out;
    } else if (*simulate) {
        code = cmd_simulate(ses, so, sim, err);
        out_path = sim.out;
    } else if (*coupling) code = cmd_coupling(ses, so, B, cn, creps, cseed, cthreads, out_path);
    else if (*fit) code = cmd_fit(ses, so, series, window, statistic, expect, out_path);
    else if (*scaling) code = cmd_scaling(ses, so, sc_steps, out_path, summary, err);
    else if (*fixture) code = cmd_fixture(ses, fixture_name, fixture_check, out_path);
    else if (*replay) {
        manifest_path = "-none-";
        code = cmd_replay(replay_path, out, err);
    }
    if (manifest_path.empty() && !ses.first_file().empty()) manifest_path = ses.first_file() + ".manifest.json";
    return code;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    Session ses(out, true);
    std::string manifest_path;
    try {
        const int code = run_inner(args, out, err, ses, manifest_path);
        if (!manifest_path.empty() && manifest_path != "-none-") {
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::ofstream f(manifest_path);
            if (!f) throw ConfigError("cannot write manifest '" + manifest_path + "'");
            f << dump(make_manifest(args, ses, wall));
        }
        return code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return static_cast<int>(ErrorKind::Resource);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::Input);
    }
}

} // namespace drlab
