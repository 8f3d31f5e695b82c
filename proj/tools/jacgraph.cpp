// Command line driver. Four subcommands tie the library together:
//
//   build     enumerate the group, export graph.edges and group.txt
//   spectrum  measure the Markov spectrum, export csv tables and report.json
//   verify    Sidon / K_{2,3} / independence checks, export report.json
//   scan      arithmetic surveys (primes | ramanujan | family), export csv
//
// File formats are part of the contract: two runs with the same configuration
// produce byte-identical outputs except for the runtime_ms field, and every
// file is written atomically (temp + rename).

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <jacgraph/spectral.hpp>
#include <jacgraph/sumgraph.hpp>
#include <jacgraph/survey.hpp>

namespace fs = std::filesystem;
using namespace jacgraph;

namespace {

// ---------------------------------------------------------------- parsing

// Strict cursor over a spec string; every failure names the position.
struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError(what + " at position " + std::to_string(i) + " in '" + s + "'");
    }
    bool peek(char c) const { return i < s.size() && s[i] == c; }
    void expect(const char* lit) {
        std::size_t n = std::strlen(lit);
        if (s.compare(i, n, lit) != 0) fail(std::string("expected '") + lit + "'");
        i += n;
    }
    u64 parse_u64() {
        u64 v = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
        if (ec != std::errc()) fail("expected an unsigned integer");
        i = (std::size_t)(p - s.data());
        return v;
    }
    i64 parse_i64() {
        i64 v = 0;
        auto [p, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
        if (ec != std::errc()) fail("expected an integer");
        i = (std::size_t)(p - s.data());
        return v;
    }
    void done() {
        if (i != s.size()) fail("trailing characters");
    }
};

// Integral Weierstrass equation, e.g. `y2+y=x3+x-1` or `y2-3xy=x3+2x2-7`.
// Left side: y2 plus optional xy and y terms; right side: monic x3 plus
// optional x2, x and constant terms. No spaces; each monomial at most once.
WeierstrassQ parse_weierstrass_eq(const std::string& s) {
    Cursor c{s};
    WeierstrassQ E{0, 0, 0, 0, 0};
    c.expect("y2");
    bool saw_xy = false, saw_y = false;
    while (!c.peek('=')) {
        i64 sign = 1;
        if (c.peek('+')) {
            ++c.i;
        } else if (c.peek('-')) {
            sign = -1;
            ++c.i;
        } else {
            c.fail("expected '+', '-' or '='");
        }
        i64 coef = 1;
        if (c.i < s.size() && std::isdigit((unsigned char)s[c.i])) coef = c.parse_i64();
        if (s.compare(c.i, 2, "xy") == 0) {
            if (saw_xy) c.fail("duplicate xy term");
            saw_xy = true;
            E.a1 = sign * coef;
            c.i += 2;
        } else if (c.peek('y')) {
            if (saw_y) c.fail("duplicate y term");
            saw_y = true;
            E.a3 = sign * coef;
            ++c.i;
        } else {
            c.fail("expected 'xy' or 'y'");
        }
    }
    c.expect("=");
    c.expect("x3");
    bool saw_x2 = false, saw_x = false, saw_c = false;
    while (c.i < s.size()) {
        i64 sign = 1;
        if (c.peek('+')) {
            ++c.i;
        } else if (c.peek('-')) {
            sign = -1;
            ++c.i;
        } else {
            c.fail("expected '+' or '-'");
        }
        bool had_digits = c.i < s.size() && std::isdigit((unsigned char)s[c.i]);
        i64 coef = had_digits ? c.parse_i64() : 1;
        if (s.compare(c.i, 2, "x2") == 0) {
            if (saw_x2) c.fail("duplicate x2 term");
            saw_x2 = true;
            E.a2 = sign * coef;
            c.i += 2;
        } else if (c.peek('x')) {
            if (saw_x) c.fail("duplicate x term");
            saw_x = true;
            E.a4 = sign * coef;
            ++c.i;
        } else if (had_digits) {
            if (saw_c) c.fail("duplicate constant term");
            saw_c = true;
            E.a6 = sign * coef;
        } else {
            c.fail("expected 'x2', 'x' or a constant");
        }
    }
    return E;
}

std::vector<u64> parse_u64_list(const std::string& s, const char* what) {
    Cursor c{s};
    std::vector<u64> out;
    out.push_back(c.parse_u64());
    while (c.i < s.size()) {
        c.expect(",");
        out.push_back(c.parse_u64());
    }
    if (out.empty()) throw ValidationError(std::string(what) + " list is empty");
    return out;
}

// ------------------------------------------------------------------ output

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        require(f.good(), "cannot open output file " + tmp.string());
        f << content;
        f.flush();
        require(f.good(), "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

// Flat ordered JSON object; doubles carry 17 significant digits.
struct JsonWriter {
    std::ostringstream o;
    bool first = true;

    void sep(const char* k) {
        if (!first) o << ",\n";
        first = false;
        o << "  \"" << k << "\": ";
    }
    void field(const char* k, bool v) {
        sep(k);
        o << (v ? "true" : "false");
    }
    void field(const char* k, u64 v) {
        sep(k);
        o << v;
    }
    void field(const char* k, double v) {
        internal_check(std::isfinite(v), "report numbers must be finite");
        sep(k);
        o << detail::fmt_g17(v);
    }
    void field(const char* k, const std::string& v) {
        sep(k);
        o << '"' << v << '"';  // callers pass identifier-like strings only
    }
    void field_null(const char* k) {
        sep(k);
        o << "null";
    }
    template <typename T>
    void field_vec(const char* k, const std::vector<T>& v) {
        sep(k);
        o << '[';
        for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << (u64)v[i];
        o << ']';
    }
    std::string done() { return "{\n" + o.str() + "\n}\n"; }
};

// ------------------------------------------------------------------ groups

struct JobConfig {
    std::string curve, modulus, raw_group, raw_set;
    unsigned extension = 1;
    std::string outdir = ".";
    std::string method = "char";
    unsigned threads = 1;
    unsigned bins = 40;
    u64 enum_cap = kJacobianEnumCap;
    u64 dense_eigen_cap = kDenseSpectrumCap;
    u64 exact_independence_cap = kExactIndependenceCap;
    bool sidon = true, k23 = true, independence = true;
};

struct BuiltGroup {
    std::shared_ptr<Jacobian> J;  // keeps the addition oracle alive
    EnumeratedGroup G;
    std::vector<std::size_t> S;
    u64 q_n = 0;  // field size for jacobians, ceil(d^2/4) for raw groups
};

// Either a curve + modulus pair or the --raw-group testing harness.
BuiltGroup make_group(const JobConfig& cfg) {
    bool raw = !cfg.raw_group.empty();
    bool jac = !cfg.curve.empty();
    require(raw != jac, "give either --curve with --modulus or --raw-group with --set");
    BuiltGroup out;
    if (raw) {
        require(!cfg.raw_set.empty(), "--raw-group needs --set");
        require(cfg.modulus.empty(), "--modulus does not apply to raw groups");
        out.G = raw_group(parse_u64_list(cfg.raw_group, "raw group"));
        std::vector<std::size_t> S;
        for (u64 v : parse_u64_list(cfg.raw_set, "connection set")) S.push_back((std::size_t)v);
        out.S = detail::checked_set(out.G.n, std::move(S));
        u64 d = out.S.size();
        // stand-in for the field size: makes the family bound c*sqrt(q)/d ~ 1
        out.q_n = (d * d + 3) / 4;
        return out;
    }
    require(!cfg.modulus.empty(), "--curve needs --modulus");
    require(cfg.raw_set.empty(), "--set applies only to raw groups");
    CurveData C = parse_curve_spec(cfg.curve);
    ModulusSpec m = parse_modulus_spec(cfg.modulus);
    Fq K(C.p, cfg.extension);
    out.J = std::make_shared<Jacobian>(C, K, m, cfg.enum_cap);
    out.G = group_of(out.J);
    out.S = out.J->connection_set();
    std::sort(out.S.begin(), out.S.end());
    out.q_n = K.size();
    return out;
}

std::size_t count_loops(const EnumeratedGroup& G, const std::vector<std::size_t>& S) {
    std::vector<char> inS(G.n, 0);
    for (std::size_t s : S) inS[s] = 1;
    std::size_t loops = 0;
    for (std::size_t x = 0; x < G.n; ++x) {
        if (inS[G.add(x, x)]) ++loops;
    }
    return loops;
}

// ------------------------------------------------------------- subcommands

int cmd_build(const JobConfig& cfg) {
    BuiltGroup b = make_group(cfg);
    std::size_t loops = count_loops(b.G, b.S);

    std::ostringstream edges;
    edges << b.G.n << ' ' << b.S.size() << ' ' << loops << '\n';
    std::size_t edge_count = 0;
    stream_edges(b.G, b.S, [&](std::size_t u, std::size_t v) {
        edges << u << ' ' << v << '\n';
        ++edge_count;
    });

    GroupStructure gs = group_structure(b.G);
    std::ostringstream grp;
    grp << "invariant_factors";
    for (u64 d : gs.invariant_factors) grp << ' ' << d;
    grp << "\nS";
    for (std::size_t s : b.S) grp << ' ' << s;
    grp << '\n';

    fs::create_directories(cfg.outdir);
    write_atomic(fs::path(cfg.outdir) / "graph.edges", edges.str());
    write_atomic(fs::path(cfg.outdir) / "group.txt", grp.str());
    std::printf("graph.edges: %zu vertices, degree %zu, %zu loops, %zu edges\n", b.G.n,
                b.S.size(), loops, edge_count);
    return 0;
}

int cmd_spectrum(const JobConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    BuiltGroup b = make_group(cfg);
    std::size_t loops = count_loops(b.G, b.S);

    require(cfg.method == "char" || cfg.method == "dense" || cfg.method == "both",
            "--method must be char, dense or both");
    bool want_char = cfg.method != "dense";
    bool want_dense = cfg.method != "char";

    SpectrumReport rep;
    double discrepancy = 0.0;
    if (want_char) {
        GroupStructure gs = group_structure(b.G);
        rep = spectrum_char(gs, b.S);
    }
    if (want_dense) {
        u64 cap = std::min<u64>(cfg.dense_eigen_cap, kDenseSpectrumCap);
        if (b.G.n > cap) {
            throw CapError("dense eigensolver capped at " + std::to_string(cap) +
                           " vertices; use --method char");
        }
        SpectrumReport dense = spectrum_dense(build_sum_graph(b.G, b.S));
        if (want_char) {
            internal_check(dense.eigenvalues.size() == rep.eigenvalues.size(),
                           "both routes must yield |G| eigenvalues");
            for (std::size_t i = 0; i < dense.eigenvalues.size(); ++i) {
                discrepancy =
                    std::max(discrepancy, std::abs(dense.eigenvalues[i] - rep.eigenvalues[i]));
            }
        } else {
            rep = std::move(dense);
        }
    }
    rep = normalize_and_judge(std::move(rep), b.q_n);

    std::ostringstream spec;
    spec << "index,eigenvalue\n";
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        spec << i << ',' << detail::fmt_g17(rep.eigenvalues[i]) << '\n';
    }

    std::ostringstream cdf, hist;
    cdf << "x,empirical_cdf,semicircle_cdf\n";
    hist << "lo,hi,count,empirical_density,semicircle_density\n";
    if (!rep.normalized_nontrivial.empty()) {
        DistributionTables t = emit_distribution_data(rep.normalized_nontrivial, cfg.bins);
        for (const auto& r : t.cdf) {
            cdf << detail::fmt_g17(r.x) << ',' << detail::fmt_g17(r.f_emp) << ','
                << detail::fmt_g17(r.f_sc) << '\n';
        }
        for (const auto& r : t.hist) {
            hist << detail::fmt_g17(r.lo) << ',' << detail::fmt_g17(r.hi) << ',' << r.count << ','
                 << detail::fmt_g17(r.emp_density) << ',' << detail::fmt_g17(r.sc_density)
                 << '\n';
        }
    }

    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    JsonWriter j;
    j.field("vertices", (u64)b.G.n);
    j.field("degree", (u64)b.S.size());
    j.field("loops", (u64)loops);
    j.field("connected", !rep.disconnected_flag);
    j.field("trivial_multiplicity", (u64)rep.trivial_count);
    j.field("max_nontrivial_abs", rep.max_nontrivial_abs);
    j.field("c2_bound", rep.c2_bound);
    j.field("ramanujan", rep.ramanujan);
    j.field("ramanujan_criterion_dn_ge_qn_plus_1", rep.criterion_dn_ge_qn_plus_1);
    j.field("w1_semicircle", rep.w1_semicircle);
    if (want_char && want_dense) j.field("max_spectrum_discrepancy", discrepancy);
    j.field("method", cfg.method);
    j.field("runtime_ms", ms);

    fs::create_directories(cfg.outdir);
    write_atomic(fs::path(cfg.outdir) / "spectrum.csv", spec.str());
    write_atomic(fs::path(cfg.outdir) / "cdf.csv", cdf.str());
    write_atomic(fs::path(cfg.outdir) / "hist.csv", hist.str());
    write_atomic(fs::path(cfg.outdir) / "report.json", j.done());
    std::printf("spectrum: %zu eigenvalues, max nontrivial %.6f, %s\n", rep.eigenvalues.size(),
                rep.max_nontrivial_abs, rep.ramanujan ? "ramanujan" : "not ramanujan");
    return 0;
}

int cmd_verify(const JobConfig& cfg) {
    BuiltGroup b = make_group(cfg);
    JsonWriter j;

    if (cfg.sidon) {
        SidonReport sr = sidon_check(b.G, b.S);
        j.field("is_sidon", sr.is_sidon);
        j.field("is_symmetric", sr.is_symmetric);
        if (sr.center) {
            GroupStructure gs = group_structure(b.G);
            std::vector<u64> dl(gs.rank());
            for (std::size_t k = 0; k < gs.rank(); ++k) dl[k] = gs.exponent(*sr.center, k);
            j.field_vec("center", dl);
        } else {
            j.field_null("center");
        }
        j.field("center_in_2J", sr.center_in_2g);
        if (sr.witness) {
            std::vector<u64> w(sr.witness->begin(), sr.witness->end());
            j.field_vec("witness", w);
        }
    } else {
        j.field_null("is_sidon");
        j.field_null("is_symmetric");
        j.field_null("center");
        j.field_null("center_in_2J");
    }

    if (cfg.k23 || cfg.independence) {
        SumGraphData g = build_sum_graph(b.G, b.S);
        if (!g.dense) {
            throw CapError("combinatorial checks capped at " + std::to_string(kDenseGraphCap) +
                           " vertices");
        }
        CombinatoricsReport cr = combinatorics_report(g, cfg.exact_independence_cap);
        if (cfg.k23) {
            j.field("k23_free", cr.k23_free);
            j.field("max_common_neighbors", (u64)cr.max_common_neighbors);
        } else {
            j.field_null("k23_free");
            j.field_null("max_common_neighbors");
        }
        if (cfg.independence) {
            j.field("independence_lower", (u64)cr.independence_lower);
            if (cr.independence_upper) {
                j.field("independence_upper", (u64)*cr.independence_upper);
            } else {
                j.field_null("independence_upper");
            }
        } else {
            j.field_null("independence_lower");
            j.field_null("independence_upper");
        }
    } else {
        j.field_null("k23_free");
        j.field_null("max_common_neighbors");
        j.field_null("independence_lower");
        j.field_null("independence_upper");
    }

    fs::create_directories(cfg.outdir);
    write_atomic(fs::path(cfg.outdir) / "report.json", j.done());
    std::printf("verify: report written to %s\n",
                (fs::path(cfg.outdir) / "report.json").string().c_str());
    return 0;
}

int write_scan(const JobConfig& cfg, const ScanReport& r, const char* filename) {
    fs::create_directories(cfg.outdir);
    write_atomic(fs::path(cfg.outdir) / filename, scan_to_csv(r));
    for (const auto& [k, v] : r.summary) std::printf("%s=%s\n", k.c_str(), v.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jacobian sum graph toolkit"};
    app.require_subcommand(1);
    JobConfig cfg;

    auto add_common = [&](CLI::App* c) {
        c->add_option("-o,--out", cfg.outdir, "output directory")->capture_default_str();
        c->add_option("--curve", cfg.curve, "curve spec: g1:p=..,a=..,b=.. | g2:p=..,f=c5,..,c0");
        c->add_option("--modulus", cfg.modulus,
                      "modulus spec: m=split:(x1,y1),(x2,y2) | m=double:(x0,y0) | m=empty");
        c->add_option("-n,--extension", cfg.extension, "field extension degree")
            ->capture_default_str();
        c->add_option("--raw-group", cfg.raw_group, "testing harness: cyclic factors d1,d2,...");
        c->add_option("--set", cfg.raw_set, "connection set indices for --raw-group");
        c->add_option("--enum-cap", cfg.enum_cap, "group enumeration cap")->capture_default_str();
        c->add_option("--threads", cfg.threads, "worker thread count")->capture_default_str();
    };

    CLI::App* b = app.add_subcommand("build", "export graph.edges and group.txt");
    add_common(b);

    CLI::App* sp = app.add_subcommand("spectrum", "spectrum.csv, cdf.csv, hist.csv, report.json");
    add_common(sp);
    sp->add_option("--method", cfg.method, "char | dense | both")->capture_default_str();
    sp->add_option("--bins", cfg.bins, "histogram bin count")->capture_default_str();
    sp->add_option("--dense-eigen-cap", cfg.dense_eigen_cap, "dense eigensolver vertex cap")
        ->capture_default_str();

    CLI::App* ve = app.add_subcommand("verify", "sidon / k23 / independence report.json");
    add_common(ve);
    ve->add_flag("--sidon,!--no-sidon", cfg.sidon, "sidon check")->capture_default_str();
    ve->add_flag("--k23,!--no-k23", cfg.k23, "K_{2,3} scan")->capture_default_str();
    ve->add_flag("--independence,!--no-independence", cfg.independence, "independence bounds")
        ->capture_default_str();
    ve->add_option("--exact-independence-cap", cfg.exact_independence_cap,
                   "exact solver vertex cap")
        ->capture_default_str();

    CLI::App* sc = app.add_subcommand("scan", "arithmetic surveys");
    sc->require_subcommand(1);
    std::string eq_curve;
    u64 xmax = 300000;
    unsigned density_n = 20;
    u64 family_p = 0;
    std::string family_f;
    FamilyAnalyses fan;

    CLI::App* scp = sc->add_subcommand("primes", "trace statistics over good primes");
    scp->add_option("--curve", eq_curve, "integral model, e.g. y2+y=x3+x-1")->required();
    scp->add_option("--xmax", xmax, "upper bound for the prime range")->capture_default_str();
    scp->add_option("--threads", cfg.threads, "worker thread count")->capture_default_str();
    scp->add_option("-o,--out", cfg.outdir, "output directory")->capture_default_str();

    CLI::App* scr = sc->add_subcommand("ramanujan", "criterion density along the tower");
    scr->add_option("--curve", cfg.curve, "curve spec")->required();
    scr->add_option("--modulus", cfg.modulus, "modulus spec")->required();
    scr->add_option("--N", density_n, "tower height")->capture_default_str();
    scr->add_option("-o,--out", cfg.outdir, "output directory")->capture_default_str();

    CLI::App* scf = sc->add_subcommand("family", "quartic family sweep over translates");
    scf->add_option("--p", family_p, "prime field size")->required();
    scf->add_option("--f", family_f, "quartic coefficients c4,c3,c2,c1,c0")->required();
    scf->add_flag("--sidon,!--no-sidon", fan.sidon, "sidon check")->capture_default_str();
    scf->add_flag("--k23,!--no-k23", fan.k23, "K_{2,3} scan")->capture_default_str();
    scf->add_flag("--spectrum,!--no-spectrum", fan.spectrum, "spectral verdicts")
        ->capture_default_str();
    scf->add_flag("--independence,!--no-independence", fan.independence, "independence bounds")
        ->capture_default_str();
    scf->add_option("-o,--out", cfg.outdir, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (b->parsed()) return cmd_build(cfg);
        if (sp->parsed()) return cmd_spectrum(cfg);
        if (ve->parsed()) return cmd_verify(cfg);
        if (scp->parsed()) {
            return write_scan(cfg, prime_scan_trace_stats(parse_weierstrass_eq(eq_curve), xmax,
                                                          cfg.threads),
                              "primes.csv");
        }
        if (scr->parsed()) {
            return write_scan(cfg,
                              ramanujan_density_scan(parse_curve_spec(cfg.curve),
                                                     parse_modulus_spec(cfg.modulus), density_n),
                              "ramanujan.csv");
        }
        if (scf->parsed()) {
            std::vector<i64> f;
            Cursor c{family_f};
            f.push_back(c.parse_i64());
            while (c.i < family_f.size()) {
                c.expect(",");
                f.push_back(c.parse_i64());
            }
            return write_scan(cfg, family_sweep(family_p, f, fan), "family.csv");
        }
        throw ValidationError("no subcommand given");
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CapError& e) {
        std::fprintf(stderr, "cap: %s\n", e.what());
        return 3;
    } catch (const InternalCheckError& e) {
        std::fprintf(stderr, "internal check failed: %s\n", e.what());
        return 4;
    }
}
