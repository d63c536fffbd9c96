#include "voatrace.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "voatrace/elliptic.hpp"
#include "voatrace/fock.hpp"
#include "voatrace/lattice.hpp"
#include "voatrace/modforms.hpp"
#include "voatrace/qseries.hpp"
#include "voatrace/trace.hpp"
#include "voatrace/verify.hpp"
#include "voatrace/words.hpp"

using namespace voatrace;

struct vt_series {
    QSeries s;
};
struct vt_lattice {
    EvenLattice l;
};
struct vt_word {
    BracketWord w;
};

namespace {

thread_local std::string g_last_error = "";

// Raised for malformed input text so the guard can report VT_ERR_PARSE
// instead of the generic invalid-argument status.
struct parse_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <typename F>
vt_status guarded(F&& f) {
    try {
        f();
        return VT_OK;
    } catch (const parse_error& e) {
        g_last_error = e.what();
        return VT_ERR_PARSE;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return VT_ERR_INVALID_ARGUMENT;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return VT_ERR_DOMAIN;
    } catch (const std::out_of_range& e) {
        g_last_error = e.what();
        return VT_ERR_DOMAIN;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return VT_ERR_INTERNAL;
    }
}

void require(const void* p, const char* name) {
    if (!p) throw std::invalid_argument(std::string("null argument: ") + name);
}

// Reruns a parser, converting its complaints into parse_error.
template <typename F>
auto parsing(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw parse_error(e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string format_series(const QSeries& s) {
    if (s.is_zero()) return "0";
    std::ostringstream os;
    if (s.lead_exp() != 0) os << "q^(" << rat_str(s.lead_exp()) << ") * ";
    os << "(";
    bool first = true;
    for (int i = 0; i < s.order(); ++i) {
        const Rational& c = s.coeff(i);
        if (c == 0) continue;
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        bool unit = (a == 1) && i > 0;
        if (!unit) os << rat_str(a);
        if (i > 0) {
            if (!unit) os << " ";
            os << "q";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";  // all retained coefficients happen to vanish
    os << ")";
    return os.str();
}

std::vector<Rational> parse_fraction_list(const std::string& text, int expect) {
    std::vector<Rational> v;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, ',')) {
        // trim surrounding spaces
        size_t b = cur.find_first_not_of(" \t");
        size_t e = cur.find_last_not_of(" \t");
        if (b == std::string::npos) throw parse_error("empty vector entry");
        v.push_back(parsing([&] { return rat_parse(cur.substr(b, e - b + 1)); }));
    }
    if (v.empty()) throw parse_error("empty vector");
    if (expect >= 0 && static_cast<int>(v.size()) != expect)
        throw std::invalid_argument("vector must have " + std::to_string(expect) +
                                    " entries, got " + std::to_string(v.size()));
    return v;
}

bool is_lattice_algebra(Algebra a) { return a == Algebra::VL || a == Algebra::VLPlus; }

// Effective context of a trace request: lattice algebras draw the rank from
// the lattice, free-boson algebras need an explicit positive rank.
std::pair<int, const EvenLattice*> trace_context(Algebra a, int rank,
                                                 const vt_lattice* lattice) {
    if (is_lattice_algebra(a)) {
        if (!lattice)
            throw std::invalid_argument("algebra " + algebra_name(a) +
                                        " requires a lattice");
        return {lattice->l.rank, &lattice->l};
    }
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    return {rank, nullptr};
}

ZLaurentSeries elliptic_series(const std::string& which, long m, int z_order,
                               int q_order) {
    if (which == "P1") return p1_series(m, z_order, q_order);
    if (which == "Q1") return q1_series(m, z_order, q_order);
    throw std::invalid_argument("unknown kernel: " + which +
                                " (expected P1 or Q1)");
}

}  // namespace

extern "C" {

const char* vt_last_error(void) { return g_last_error.c_str(); }

void vt_string_free(char* s) { std::free(s); }

void vt_series_free(vt_series* s) { delete s; }
void vt_lattice_free(vt_lattice* l) { delete l; }
void vt_word_free(vt_word* w) { delete w; }

/* ---- lattices ------------------------------------------------------- */

vt_status vt_lattice_from_json(const char* json_text, vt_lattice** out) {
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        EvenLattice L = parsing([&] { return lattice_from_json(json_text); });
        *out = new vt_lattice{std::move(L)};
    });
}

vt_status vt_lattice_to_json(const vt_lattice* l, char** out_json) {
    return guarded([&] {
        require(l, "l");
        require(out_json, "out_json");
        *out_json = dup_string(lattice_to_json(l->l));
    });
}

vt_status vt_lattice_rank(const vt_lattice* l, int* out_rank) {
    return guarded([&] {
        require(l, "l");
        require(out_rank, "out_rank");
        *out_rank = l->l.rank;
    });
}

vt_status vt_lattice_level(const vt_lattice* l, long* out_level) {
    return guarded([&] {
        require(l, "l");
        require(out_level, "out_level");
        *out_level = lattice_level(l->l);
    });
}

/* ---- creation words -------------------------------------------------- */

vt_status vt_word_parse(const char* expr, int rank, vt_word** out) {
    return guarded([&] {
        require(expr, "expr");
        require(out, "out");
        if (rank < 1) throw std::invalid_argument("rank must be >= 1");
        BracketWord w = parsing([&] { return parse_state(expr, rank); });
        *out = new vt_word{std::move(w)};
    });
}

vt_status vt_word_to_string(const vt_word* w, char** out_text) {
    return guarded([&] {
        require(w, "w");
        require(out_text, "out_text");
        *out_text = dup_string(word_to_string(w->w));
    });
}

vt_status vt_word_weight(const vt_word* w, long* out_weight) {
    return guarded([&] {
        require(w, "w");
        require(out_weight, "out_weight");
        *out_weight = word_weight(w->w);
    });
}

/* ---- series ---------------------------------------------------------- */

vt_status vt_series_from_json(const char* json_text, vt_series** out) {
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        QSeries s = parsing([&] { return qs_from_json(json_text); });
        *out = new vt_series{std::move(s)};
    });
}

vt_status vt_series_to_json(const vt_series* s, char** out_json) {
    return guarded([&] {
        require(s, "s");
        require(out_json, "out_json");
        *out_json = dup_string(qs_to_json(s->s));
    });
}

vt_status vt_series_to_text(const vt_series* s, char** out_text) {
    return guarded([&] {
        require(s, "s");
        require(out_text, "out_text");
        *out_text = dup_string(format_series(s->s));
    });
}

vt_status vt_series_order(const vt_series* s, int* out_order) {
    return guarded([&] {
        require(s, "s");
        require(out_order, "out_order");
        *out_order = s->s.order();
    });
}

vt_status vt_series_lead_exp(const vt_series* s, char** out_fraction) {
    return guarded([&] {
        require(s, "s");
        require(out_fraction, "out_fraction");
        *out_fraction = dup_string(rat_str(s->s.lead_exp()));
    });
}

vt_status vt_series_coeff_at(const vt_series* s, const char* exponent,
                             char** out_fraction) {
    return guarded([&] {
        require(s, "s");
        require(exponent, "exponent");
        require(out_fraction, "out_fraction");
        Rational e = parsing([&] { return rat_parse(exponent); });
        *out_fraction = dup_string(rat_str(s->s.coeff_at(e)));
    });
}

vt_status vt_series_add(const vt_series* a, const vt_series* b, vt_series** out) {
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out, "out");
        *out = new vt_series{qs_add(a->s, b->s)};
    });
}

vt_status vt_series_sub(const vt_series* a, const vt_series* b, vt_series** out) {
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out, "out");
        *out = new vt_series{qs_sub(a->s, b->s)};
    });
}

vt_status vt_series_mul(const vt_series* a, const vt_series* b, vt_series** out) {
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out, "out");
        *out = new vt_series{qs_mul(a->s, b->s)};
    });
}

vt_status vt_series_scale(const vt_series* a, const char* rational,
                          vt_series** out) {
    return guarded([&] {
        require(a, "a");
        require(rational, "rational");
        require(out, "out");
        Rational c = parsing([&] { return rat_parse(rational); });
        *out = new vt_series{qs_scale(a->s, c)};
    });
}

vt_status vt_series_truncate(const vt_series* a, int order, vt_series** out) {
    return guarded([&] {
        require(a, "a");
        require(out, "out");
        *out = new vt_series{qs_truncate(a->s, order)};
    });
}

vt_status vt_series_compare(const vt_series* a, const vt_series* b,
                            int* out_equal, char** out_first_mismatch) {
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(out_equal, "out_equal");
        SeriesComparison cmp = compare_series(a->s, b->s);
        *out_equal = cmp.equal ? 1 : 0;
        if (out_first_mismatch)
            *out_first_mismatch = cmp.first_mismatch
                                      ? dup_string(rat_str(*cmp.first_mismatch))
                                      : nullptr;
    });
}

vt_status vt_series_eval(const vt_series* s, double tau_re, double tau_im,
                         double* out_re, double* out_im, double* out_tail) {
    return guarded([&] {
        require(s, "s");
        require(out_re, "out_re");
        require(out_im, "out_im");
        require(out_tail, "out_tail");
        EvalResult r = qs_eval(s->s, {tau_re, tau_im}, 0.05);
        *out_re = r.value.real();
        *out_im = r.value.imag();
        *out_tail = r.tail_estimate;
    });
}

/* ---- modular ingredient series -------------------------------------- */

vt_status vt_eisenstein(const char* kind, long k, long m, long n, int order,
                        vt_series** out) {
    return guarded([&] {
        require(kind, "kind");
        require(out, "out");
        std::string ks = kind;
        QSeries s;
        if (ks == "E")
            s = eisenstein_e(k, order);
        else if (ks == "F")
            s = eisenstein_f(k, order);
        else if (ks == "Ehat")
            s = eisenstein_hat(EisKind::E, m, n, order);
        else if (ks == "Fhat")
            s = eisenstein_hat(EisKind::F, m, n, order);
        else
            throw std::invalid_argument("unknown kind: " + ks +
                                        " (expected E, F, Ehat or Fhat)");
        *out = new vt_series{std::move(s)};
    });
}

vt_status vt_eta_quotient(const long* scales, const long* powers,
                          size_t nfactors, int order, vt_series** out) {
    return guarded([&] {
        require(scales, "scales");
        require(powers, "powers");
        require(out, "out");
        std::vector<EtaFactor> fs;
        fs.reserve(nfactors);
        for (size_t i = 0; i < nfactors; ++i) fs.push_back({scales[i], powers[i]});
        *out = new vt_series{eta_quotient(fs, order)};
    });
}

vt_status vt_character(const char* algebra, int rank, const vt_lattice* lattice,
                       int order, vt_series** out) {
    return guarded([&] {
        require(algebra, "algebra");
        require(out, "out");
        Algebra a = algebra_parse(algebra);
        auto [r, L] = trace_context(a, rank, lattice);
        *out = new vt_series{character(a, r, L, order)};
    });
}

vt_status vt_theta(const vt_lattice* lattice, const char* vector, long power,
                   int order, vt_series** out) {
    return guarded([&] {
        require(lattice, "lattice");
        require(out, "out");
        if (!vector) {
            if (power != 0)
                throw std::invalid_argument("power requires a vector");
            *out = new vt_series{theta_series(lattice->l, order)};
            return;
        }
        std::vector<Rational> v = parse_fraction_list(vector, lattice->l.rank);
        *out = new vt_series{theta_vm(lattice->l, v, power, order)};
    });
}

/* ---- trace functions ------------------------------------------------- */

vt_status vt_trace(const char* method, const char* algebra, const vt_word* w,
                   int rank, const vt_lattice* lattice, int order,
                   vt_series** out) {
    return guarded([&] {
        require(method, "method");
        require(algebra, "algebra");
        require(w, "w");
        require(out, "out");
        std::string ms = method;
        TraceMethod tm;
        if (ms == "closed")
            tm = TraceMethod::Closed;
        else if (ms == "recursion")
            tm = TraceMethod::Recursion;
        else
            throw std::invalid_argument("unknown method: " + ms +
                                        " (expected closed or recursion)");
        Algebra a = algebra_parse(algebra);
        auto [r, L] = trace_context(a, rank, lattice);
        word_validate(w->w, r);
        *out = new vt_series{trace_dispatch(tm, a, w->w, r, L, order)};
    });
}

vt_status vt_oracle_trace(const char* algebra, const vt_word* w, int rank,
                          const vt_lattice* lattice, long max_weight,
                          vt_series** out) {
    return guarded([&] {
        require(algebra, "algebra");
        require(w, "w");
        require(out, "out");
        if (max_weight < 0)
            throw std::invalid_argument("max_weight must be >= 0");
        Algebra a = algebra_parse(algebra);
        auto [r, L] = trace_context(a, rank, lattice);
        word_validate(w->w, r);
        FockContext ctx{r, L};
        *out = new vt_series{oracle_trace(a, ctx, w->w, max_weight)};
    });
}

vt_status vt_gseries(const vt_word* w, const vt_lattice* lattice, int order,
                     vt_series** out) {
    return guarded([&] {
        require(w, "w");
        require(lattice, "lattice");
        require(out, "out");
        word_validate(w->w, lattice->l.rank);
        *out = new vt_series{g_series(w->w, lattice->l, order)};
    });
}

/* ---- genus-one kernels ----------------------------------------------- */

vt_status vt_elliptic_series_json(const char* which, long m, int z_order,
                                  int q_order, char** out_json) {
    return guarded([&] {
        require(which, "which");
        require(out_json, "out_json");
        ZLaurentSeries zl = elliptic_series(which, m, z_order, q_order);
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [d, coeff] : zl.terms) {
            if (coeff.is_zero()) continue;
            terms.push_back({{"z_exp", d},
                             {"series", nlohmann::json::parse(qs_to_json(coeff))}});
        }
        nlohmann::json j = {{"which", which},
                            {"m", m},
                            {"min_exp", zl.min_exp},
                            {"max_exp", zl.max_exp},
                            {"terms", std::move(terms)}};
        *out_json = dup_string(j.dump());
    });
}

vt_status vt_elliptic_series_text(const char* which, long m, int z_order,
                                  int q_order, char** out_text) {
    return guarded([&] {
        require(which, "which");
        require(out_text, "out_text");
        ZLaurentSeries zl = elliptic_series(which, m, z_order, q_order);
        std::ostringstream os;
        for (const auto& [d, coeff] : zl.terms) {
            if (coeff.is_zero()) continue;
            os << "z^(" << d << "): " << format_series(coeff) << "\n";
        }
        *out_text = dup_string(os.str());
    });
}

vt_status vt_elliptic_eval(const char* which, long m, double z_re, double z_im,
                           double tau_re, double tau_im, long n_max,
                           double* out_re, double* out_im, double* out_tail) {
    return guarded([&] {
        require(which, "which");
        require(out_re, "out_re");
        require(out_im, "out_im");
        require(out_tail, "out_tail");
        std::string ws = which;
        EllipticEval r;
        if (ws == "P1")
            r = p1_lambert_eval({z_re, z_im}, {tau_re, tau_im}, m, n_max);
        else if (ws == "Q1")
            r = q1_lambert_eval({z_re, z_im}, {tau_re, tau_im}, m, n_max);
        else
            throw std::invalid_argument("unknown kernel: " + ws +
                                        " (expected P1 or Q1)");
        *out_re = r.value.real();
        *out_im = r.value.imag();
        *out_tail = r.tail_estimate;
    });
}

/* ---- verification ---------------------------------------------------- */

vt_status vt_verify_suite(const char* suite, int rank,
                          const vt_lattice* lattice, int max_weight, int order,
                          const long* alpha, size_t alpha_len, double tol,
                          int as_json, int* out_passed, char** out_report) {
    return guarded([&] {
        require(suite, "suite");
        require(out_passed, "out_passed");
        require(out_report, "out_report");
        if (alpha_len > 0) require(alpha, "alpha");
        SuiteParams p;
        p.rank = rank;
        p.lattice = lattice ? &lattice->l : nullptr;
        p.max_weight = max_weight;
        p.order = order;
        p.alpha.assign(alpha, alpha + alpha_len);
        p.tol = tol;
        VerificationReport r = run_suite(suite, p);
        *out_passed = r.passed() ? 1 : 0;
        *out_report = dup_string(as_json ? report_to_json(r) : report_to_text(r));
    });
}

vt_status vt_modularity_check(const vt_series* f, const char* weight,
                              long level, int samples, double tol,
                              const vt_series* companion, int as_json,
                              int* out_passed, char** out_report) {
    return guarded([&] {
        require(f, "f");
        require(weight, "weight");
        require(out_passed, "out_passed");
        require(out_report, "out_report");
        Rational K = parsing([&] { return rat_parse(weight); });
        VerificationReport r = numeric_modularity_check(
            f->s, K, level, samples, tol, companion ? &companion->s : nullptr);
        *out_passed = r.passed() ? 1 : 0;
        *out_report = dup_string(as_json ? report_to_json(r) : report_to_text(r));
    });
}

}  // extern "C"
