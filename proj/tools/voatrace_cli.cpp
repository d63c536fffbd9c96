// Command-line front end.  Everything here goes through the public C
// interface in voatrace.h; the C++ core is not linked directly.
//
// Exit status: 0 on success (and for passing verifications), 1 on bad input
// or a computation error, 2 when a verification ran to completion but failed.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "voatrace.h"

namespace {

struct Str {
    char* p = nullptr;
    ~Str() { vt_string_free(p); }
};
struct Ser {
    vt_series* p = nullptr;
    ~Ser() { vt_series_free(p); }
};
struct Lat {
    vt_lattice* p = nullptr;
    ~Lat() { vt_lattice_free(p); }
};
struct Wrd {
    vt_word* p = nullptr;
    ~Wrd() { vt_word_free(p); }
};

int fail(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return 1;
}

int fail_status() { return fail(vt_last_error()); }

// Loads a Gram-matrix JSON file into a lattice handle; 0 on success.
int load_gram(const std::string& path, Lat& L) {
    std::ifstream in(path);
    if (!in) return fail("cannot read gram file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (vt_lattice_from_json(buf.str().c_str(), &L.p) != VT_OK)
        return fail_status();
    return 0;
}

int print_series(const vt_series* s, bool as_json) {
    Str t;
    vt_status st = as_json ? vt_series_to_json(s, &t.p)
                           : vt_series_to_text(s, &t.p);
    if (st != VT_OK) return fail_status();
    std::printf("%s\n", t.p);
    return 0;
}

std::vector<long> parse_long_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stol(item));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

// ---- per-subcommand option bags and runners --------------------------

struct CommonSeriesOpts {
    int order = 20;
    bool json = false;
};

struct EisensteinOpts : CommonSeriesOpts {
    std::string kind;
    long k = 0;
    long m = 0;
    long n = 0;
};

int run_eisenstein(const EisensteinOpts& o) {
    if ((o.kind == "E" || o.kind == "F") && o.k == 0)
        return fail("--k is required for kind " + o.kind);
    if ((o.kind == "Ehat" || o.kind == "Fhat") && (o.m == 0 || o.n == 0))
        return fail("--m and --n are required for kind " + o.kind);
    Ser s;
    if (vt_eisenstein(o.kind.c_str(), o.k, o.m, o.n, o.order, &s.p) != VT_OK)
        return fail_status();
    return print_series(s.p, o.json);
}

struct CharOpts : CommonSeriesOpts {
    std::string algebra;
    int rank = 1;
    std::string gram;
};

int run_char(const CharOpts& o) {
    Lat L;
    if (!o.gram.empty())
        if (int rc = load_gram(o.gram, L)) return rc;
    Ser s;
    if (vt_character(o.algebra.c_str(), o.rank, L.p, o.order, &s.p) != VT_OK)
        return fail_status();
    return print_series(s.p, o.json);
}

struct ThetaOpts : CommonSeriesOpts {
    std::string gram;
    std::string vector;
    long power = 0;
};

int run_theta(const ThetaOpts& o) {
    Lat L;
    if (int rc = load_gram(o.gram, L)) return rc;
    Ser s;
    if (vt_theta(L.p, o.vector.empty() ? nullptr : o.vector.c_str(), o.power,
                 o.order, &s.p) != VT_OK)
        return fail_status();
    return print_series(s.p, o.json);
}

struct EllipticOpts {
    std::string which;
    long m = 0;
    int z_order = 12;
    int q_order = 20;
    bool json = false;
};

int run_elliptic(const EllipticOpts& o) {
    Str out;
    vt_status st = o.json ? vt_elliptic_series_json(o.which.c_str(), o.m,
                                                    o.z_order, o.q_order, &out.p)
                          : vt_elliptic_series_text(o.which.c_str(), o.m,
                                                    o.z_order, o.q_order, &out.p);
    if (st != VT_OK) return fail_status();
    // the text form already ends each line with a newline
    std::printf(o.json ? "%s\n" : "%s", out.p);
    return 0;
}

struct TraceOpts : CommonSeriesOpts {
    std::string algebra;
    std::string state;
    int rank = 1;
    std::string gram;
    std::string method = "closed";
};

int run_trace(const TraceOpts& o) {
    Lat L;
    if (!o.gram.empty())
        if (int rc = load_gram(o.gram, L)) return rc;
    int rank = o.rank;
    if (L.p && vt_lattice_rank(L.p, &rank) != VT_OK) return fail_status();
    Wrd w;
    if (vt_word_parse(o.state.c_str(), rank, &w.p) != VT_OK)
        return fail_status();
    Ser s;
    if (vt_trace(o.method.c_str(), o.algebra.c_str(), w.p, rank, L.p, o.order,
                 &s.p) != VT_OK)
        return fail_status();
    return print_series(s.p, o.json);
}

struct OracleOpts {
    std::string algebra;
    std::string state;
    int rank = 1;
    std::string gram;
    long max_weight = 6;
    bool json = false;
};

int run_oracle(const OracleOpts& o) {
    Lat L;
    if (!o.gram.empty())
        if (int rc = load_gram(o.gram, L)) return rc;
    int rank = o.rank;
    if (L.p && vt_lattice_rank(L.p, &rank) != VT_OK) return fail_status();
    Wrd w;
    if (vt_word_parse(o.state.c_str(), rank, &w.p) != VT_OK)
        return fail_status();
    Ser s;
    if (vt_oracle_trace(o.algebra.c_str(), w.p, rank, L.p, o.max_weight, &s.p) !=
        VT_OK)
        return fail_status();
    return print_series(s.p, o.json);
}

struct VerifyOpts {
    std::string suite;
    int rank = 1;
    std::string gram;
    int max_weight = 6;
    int order = 20;
    double tol = 1e-8;
    std::string alpha;
    bool json = false;
};

int run_verify(const VerifyOpts& o) {
    Lat L;
    if (!o.gram.empty())
        if (int rc = load_gram(o.gram, L)) return rc;
    std::vector<long> alpha;
    if (!o.alpha.empty()) {
        try {
            alpha = parse_long_list(o.alpha);
        } catch (const std::exception&) {
            return fail("bad --alpha list: " + o.alpha);
        }
    }
    int passed = 0;
    Str report;
    if (vt_verify_suite(o.suite.c_str(), o.rank, L.p, o.max_weight, o.order,
                        alpha.empty() ? nullptr : alpha.data(), alpha.size(),
                        o.tol, o.json ? 1 : 0, &passed, &report.p) != VT_OK)
        return fail_status();
    std::printf("%s\n", report.p);
    return passed ? 0 : 2;
}

struct ModcheckOpts {
    std::string eisenstein;  // "KIND:K", e.g. "E:4" or "F:2"
    std::string series_file;
    std::string gseries;
    std::string gram;
    std::string weight;
    long level = 1;
    int order = 40;
    int samples = 9;
    double tol = 1e-8;
    bool companion_one = false;
    bool json = false;
};

int run_modcheck(const ModcheckOpts& o) {
    int sources = (!o.eisenstein.empty()) + (!o.series_file.empty()) +
                  (!o.gseries.empty());
    if (sources != 1)
        return fail(
            "exactly one of --eisenstein, --series, --gseries must be given");

    Ser f;
    if (!o.eisenstein.empty()) {
        size_t colon = o.eisenstein.find(':');
        if (colon == std::string::npos)
            return fail("--eisenstein expects KIND:K, e.g. E:4");
        std::string kind = o.eisenstein.substr(0, colon);
        long k = 0;
        try {
            k = std::stol(o.eisenstein.substr(colon + 1));
        } catch (const std::exception&) {
            return fail("bad weight in --eisenstein " + o.eisenstein);
        }
        if (vt_eisenstein(kind.c_str(), k, 0, 0, o.order, &f.p) != VT_OK)
            return fail_status();
    } else if (!o.series_file.empty()) {
        std::ifstream in(o.series_file);
        if (!in) return fail("cannot read series file " + o.series_file);
        std::stringstream buf;
        buf << in.rdbuf();
        if (vt_series_from_json(buf.str().c_str(), &f.p) != VT_OK)
            return fail_status();
    } else {
        if (o.gram.empty()) return fail("--gseries requires --gram");
        Lat L;
        if (int rc = load_gram(o.gram, L)) return rc;
        int rank = 0;
        if (vt_lattice_rank(L.p, &rank) != VT_OK) return fail_status();
        Wrd w;
        if (vt_word_parse(o.gseries.c_str(), rank, &w.p) != VT_OK)
            return fail_status();
        if (vt_gseries(w.p, L.p, o.order, &f.p) != VT_OK) return fail_status();
    }

    Ser one;
    if (o.companion_one) {
        long scale = 1, power = 0;  // empty eta product = the constant 1
        if (vt_eta_quotient(&scale, &power, 1, o.order, &one.p) != VT_OK)
            return fail_status();
    }

    int passed = 0;
    Str report;
    if (vt_modularity_check(f.p, o.weight.c_str(), o.level, o.samples, o.tol,
                            one.p, o.json ? 1 : 0, &passed, &report.p) != VT_OK)
        return fail_status();
    std::printf("%s\n", report.p);
    return passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact trace functions of free-boson and lattice vertex algebras"};
    app.require_subcommand(1);
    int rc = 0;

    EisensteinOpts eo;
    CLI::App* eis = app.add_subcommand(
        "eisenstein", "Eisenstein series E_k, level-2 companions F_k and their "
                      "renormalized multiples Ehat/Fhat");
    eis->add_option("--kind", eo.kind, "E, F, Ehat or Fhat")->required();
    eis->add_option("--k", eo.k, "weight for kinds E and F");
    eis->add_option("--m", eo.m, "first index for Ehat/Fhat");
    eis->add_option("--n", eo.n, "second index for Ehat/Fhat");
    eis->add_option("--order", eo.order, "number of q-coefficients");
    eis->add_flag("--json", eo.json, "emit the series as JSON");
    eis->callback([&] { rc = run_eisenstein(eo); });

    CharOpts co;
    CLI::App* ch = app.add_subcommand(
        "char", "graded dimension character of an algebra");
    ch->add_option("--algebra", co.algebra, "M, M+, M-, VL or VL+")->required();
    ch->add_option("--rank", co.rank, "free-boson rank (M family)");
    ch->add_option("--gram", co.gram, "Gram matrix JSON file (VL family)");
    ch->add_option("--order", co.order, "number of q-coefficients");
    ch->add_flag("--json", co.json, "emit the series as JSON");
    ch->callback([&] { rc = run_char(co); });

    ThetaOpts to;
    CLI::App* th = app.add_subcommand(
        "theta", "lattice theta function, plain or with a pairing power");
    th->add_option("--gram", to.gram, "Gram matrix JSON file")->required();
    th->add_option("--vector", to.vector,
                   "rational coordinates c1,...,ck for the pairing");
    th->add_option("--power", to.power, "power of the pairing (with --vector)");
    th->add_option("--order", to.order, "number of q-coefficients");
    th->add_flag("--json", to.json, "emit the series as JSON");
    th->callback([&] { rc = run_theta(to); });

    EllipticOpts elo;
    CLI::App* el = app.add_subcommand(
        "elliptic", "genus-one kernels P1/Q1 and their z-derivatives");
    el->add_option("--which", elo.which, "P1 or Q1")->required();
    el->add_option("--m", elo.m, "z-derivative order");
    el->add_option("--z-order", elo.z_order, "highest retained z-exponent");
    el->add_option("--q-order", elo.q_order, "q-coefficients per z-power");
    el->add_flag("--json", elo.json, "emit the Laurent expansion as JSON");
    el->callback([&] { rc = run_elliptic(elo); });

    TraceOpts tro;
    CLI::App* tr = app.add_subcommand(
        "trace", "graded trace of a creation word's zero mode");
    tr->add_option("--algebra", tro.algebra, "M, M+, M-, VL or VL+")->required();
    tr->add_option("--state", tro.state, "creation word, e.g. \"h1[-1] h1[-3]\"")
        ->required();
    tr->add_option("--rank", tro.rank, "free-boson rank (M family)");
    tr->add_option("--gram", tro.gram, "Gram matrix JSON file (VL family)");
    tr->add_option("--order", tro.order, "number of q-coefficients");
    tr->add_option("--method", tro.method, "closed or recursion")
        ->check(CLI::IsMember({"closed", "recursion"}));
    tr->add_flag("--json", tro.json, "emit the series as JSON");
    tr->callback([&] { rc = run_trace(tro); });

    OracleOpts oo;
    CLI::App* orc = app.add_subcommand(
        "oracle-trace",
        "brute-force trace over an explicit graded basis (ground truth)");
    orc->add_option("--algebra", oo.algebra, "M, M+, M-, VL or VL+")->required();
    orc->add_option("--state", oo.state, "creation word")->required();
    orc->add_option("--rank", oo.rank, "free-boson rank (M family)");
    orc->add_option("--gram", oo.gram, "Gram matrix JSON file (VL family)");
    orc->add_option("--max-weight", oo.max_weight,
                    "highest basis weight to enumerate");
    orc->add_flag("--json", oo.json, "emit the series as JSON");
    orc->callback([&] { rc = run_oracle(oo); });

    VerifyOpts vo;
    CLI::App* ver = app.add_subcommand(
        "verify",
        "run a named verification suite (exit 0 iff every case passes)");
    ver->add_option("--suite", vo.suite,
                    "heisenberg, heisenberg-plus, lattice-full, lattice-plus-M, "
                    "lattice-plus-tail, elliptic, jacobi or modularity")
        ->required();
    ver->add_option("--rank", vo.rank, "free-boson rank");
    ver->add_option("--gram", vo.gram, "Gram matrix JSON file");
    ver->add_option("--max-weight", vo.max_weight, "word weight bound");
    ver->add_option("--order", vo.order, "q-coefficients per comparison");
    ver->add_option("--tol", vo.tol, "numeric tolerance");
    ver->add_option("--alpha", vo.alpha,
                    "integer charge a1,...,ak for the tail suite");
    ver->add_flag("--json", vo.json, "emit the report as JSON");
    ver->callback([&] { rc = run_verify(vo); });

    ModcheckOpts mo;
    CLI::App* mc = app.add_subcommand(
        "modcheck",
        "numeric modularity check of a series (exit 0 iff it passes)");
    mc->add_option("--eisenstein", mo.eisenstein,
                   "check a built-in series, KIND:K (e.g. E:4, F:2)");
    mc->add_option("--series", mo.series_file, "check a series JSON file");
    mc->add_option("--gseries", mo.gseries,
                   "check the quasimodular trace layer of this word");
    mc->add_option("--gram", mo.gram, "Gram matrix JSON file for --gseries");
    mc->add_option("--weight", mo.weight, "modular weight, a fraction like 1/2")
        ->required();
    mc->add_option("--level", mo.level, "congruence level")->required();
    mc->add_option("--order", mo.order, "q-coefficients for built sources");
    mc->add_option("--samples", mo.samples, "sample points per matrix");
    mc->add_option("--tol", mo.tol, "numeric tolerance");
    mc->add_flag("--companion-one", mo.companion_one,
                 "complete a depth-one quasimodular form with the constant 1");
    mc->add_flag("--json", mo.json, "emit the report as JSON");
    mc->callback([&] { rc = run_modcheck(mo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // flag errors are validation errors
    }
    return rc;
}
