#include "voatrace/words.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace voatrace {

long word_weight(const BracketWord& w) {
    long s = 0;
    for (const auto& f : w.factors) s += f.n;
    return s;
}

void word_validate(const BracketWord& w, int rank) {
    if (rank < 1) throw std::invalid_argument("rank must be positive");
    for (const auto& f : w.factors) {
        if ((int)f.vec.size() != rank)
            throw std::invalid_argument("factor vector arity does not match rank");
        if (f.n < 1) throw std::invalid_argument("mode index n must be >= 1");
    }
    if (w.tail == TailKind::Vacuum) {
        if (!w.alpha.empty())
            throw std::invalid_argument("vacuum tail carries no charge vector");
        return;
    }
    if ((int)w.alpha.size() != rank)
        throw std::invalid_argument("tail vector arity does not match rank");
    if (w.tail != TailKind::E &&
        std::all_of(w.alpha.begin(), w.alpha.end(), [](long a) { return a == 0; }))
        throw std::invalid_argument("f/g tails require a nonzero charge vector");
}

namespace {

struct Scanner {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        std::ostringstream os;
        os << "syntax error at position " << pos << ": " << what;
        throw std::invalid_argument(os.str());
    }
    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            fail(std::string("expected '") + c + "'");
        ++pos;
    }
    long integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        std::size_t digits = pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        if (pos == digits) {
            pos = start;
            fail("expected an integer");
        }
        return std::stol(s.substr(start, pos - start));
    }
    Rational rational() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        }
        if (pos == start) fail("expected a rational number");
        try {
            return rat_parse(s.substr(start, pos - start));
        } catch (const std::exception& e) {
            pos = start;
            fail(e.what());
        }
    }
};

}  // namespace

BracketWord parse_state(const std::string& expr, int rank) {
    if (rank < 1) throw std::invalid_argument("rank must be positive");
    Scanner sc{expr};
    BracketWord w;
    while (!sc.done() && sc.peek() == 'h') {
        sc.expect('h');
        WordFactor f;
        if (sc.peek() == '(') {
            sc.expect('(');
            f.vec.push_back(sc.rational());
            while (sc.peek() == ',') {
                sc.expect(',');
                f.vec.push_back(sc.rational());
            }
            sc.expect(')');
            if ((int)f.vec.size() != rank)
                sc.fail("vector has " + std::to_string(f.vec.size()) +
                        " entries but rank is " + std::to_string(rank));
        } else {
            long color = sc.integer();
            if (color < 1 || color > rank)
                sc.fail("color " + std::to_string(color) +
                        " out of range 1.." + std::to_string(rank));
            f.vec.assign(rank, rat(0));
            f.vec[color - 1] = rat(1);
        }
        sc.expect('[');
        long n = sc.integer();
        if (n >= 0) sc.fail("mode must be negative (n must be >= 1 in h[-n])");
        f.n = -n;
        sc.expect(']');
        w.factors.push_back(std::move(f));
    }
    if (!sc.done() && sc.peek() == '|') {
        sc.expect('|');
        char kind = sc.peek();
        if (kind == 'f')
            w.tail = TailKind::F;
        else if (kind == 'g')
            w.tail = TailKind::G;
        else if (kind == 'e')
            w.tail = TailKind::E;
        else
            sc.fail("expected tail kind f, g or e");
        ++sc.pos;
        sc.expect('(');
        w.alpha.push_back(sc.integer());
        while (sc.peek() == ',') {
            sc.expect(',');
            w.alpha.push_back(sc.integer());
        }
        sc.expect(')');
    }
    if (!sc.done()) sc.fail("unexpected trailing input");
    word_validate(w, rank);
    return w;
}

namespace {

std::string vec_to_string(const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s + ")";
}

}  // namespace

std::string word_to_string(const BracketWord& w) {
    std::string s;
    for (const auto& f : w.factors) {
        if (!s.empty()) s += " ";
        s += "h" + vec_to_string(f.vec) + "[-" + std::to_string(f.n) + "]";
    }
    if (w.tail != TailKind::Vacuum) {
        if (!s.empty()) s += " ";
        s += "| ";
        s += w.tail == TailKind::F ? 'f' : w.tail == TailKind::G ? 'g' : 'e';
        s += "(";
        for (std::size_t i = 0; i < w.alpha.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(w.alpha[i]);
        }
        s += ")";
    }
    return s;
}

std::string word_canonical_key(const BracketWord& w) {
    std::vector<std::string> parts;
    for (const auto& f : w.factors)
        parts.push_back(std::to_string(f.n) + ":" + vec_to_string(f.vec));
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (const auto& p : parts) s += p + ";";
    s += "tail=";
    s += std::to_string((int)w.tail);
    for (long a : w.alpha) s += "," + std::to_string(a);
    return s;
}

}  // namespace voatrace
