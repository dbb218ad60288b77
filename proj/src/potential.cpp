#include "mmwb/potential.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "mmwb/calculus.hpp"

namespace mmwb {

Potential::Potential(int m, std::vector<PotentialTerm> terms) : m_(m), terms_(std::move(terms)) {
    if (m_ < 1) throw std::invalid_argument("potential needs m >= 1");
    for (const auto& t : terms_) {
        if (t.q.empty()) throw std::invalid_argument("potential terms must be nonconstant");
        if (t.q.max_letter() >= m_) throw ColorError("potential uses color " + std::to_string(t.q.max_letter() + 1) + " but m = " + std::to_string(m_));
    }
}

int Potential::degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.q.degree()));
    return d;
}

double Potential::max_coupling() const {
    double r = 0;
    for (const auto& t : terms_) r = std::max(r, magnitude(t.value));
    return r;
}

std::vector<Complex> Potential::coupling_values() const {
    std::vector<Complex> v;
    for (const auto& t : terms_) v.push_back(t.value.to_complex());
    return v;
}

Polynomial<GaussianRational> Potential::as_polynomial() const {
    Polynomial<GaussianRational> p;
    for (const auto& t : terms_) p.add(t.q, t.value);
    return p;
}

std::string Potential::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += " + ";
        out += t.value.str() + "*" + t.q.str();
    }
    return out;
}

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    std::vector<std::pair<Monomial, GaussianRational>> terms() {
        std::vector<std::pair<Monomial, GaussianRational>> out;
        skip();
        if (at_end()) throw ParseError("empty expression", pos_);
        bool first = true;
        while (!at_end()) {
            bool neg = false;
            if (peek() == '+' || peek() == '-') {
                neg = peek() == '-';
                ++pos_;
                skip();
            } else if (!first) {
                throw ParseError("expected '+' or '-'", pos_);
            }
            first = false;
            auto [mono, coef] = term();
            if (neg) coef = -coef;
            auto it = std::find_if(out.begin(), out.end(), [&](const auto& t) { return t.first == mono; });
            if (it == out.end()) {
                out.emplace_back(std::move(mono), std::move(coef));
            } else {
                it->second += coef;
            }
            skip();
        }
        std::erase_if(out, [](const auto& t) { return t.second.is_zero(); });
        return out;
    }

private:
    std::pair<Monomial, GaussianRational> term() {
        GaussianRational coef(1);
        bool have_coef = false;
        bool need_factor = false;
        skip();
        if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '(' || peek() == 'i')) {
            coef = coefficient();
            have_coef = true;
            skip();
            if (!at_end() && peek() == '*') {
                ++pos_;
                need_factor = true;
                skip();
            }
        }
        Monomial mono;
        bool any = false;
        while (!at_end() && (peek() == 'x' || peek() == 'X')) {
            mono *= factor();
            any = true;
            skip();
            if (!at_end() && peek() == '*') {
                ++pos_;
                skip();
                if (at_end() || (peek() != 'x' && peek() != 'X')) throw ParseError("expected factor after '*'", pos_);
            }
        }
        if (need_factor && !any) throw ParseError("expected factor after '*'", pos_);
        if (!have_coef && !any) throw ParseError("expected term", pos_);
        return {std::move(mono), std::move(coef)};
    }

    Monomial factor() {
        ++pos_;  // 'x'
        skip();
        std::size_t start = pos_;
        std::string digits = read_digits();
        if (digits.empty()) throw ParseError("expected color index after 'x'", start);
        long idx = std::stol(digits);
        if (idx < 1 || idx > kAnyColors) throw ParseError("color index out of range", start);
        long power = 1;
        skip();
        if (!at_end() && peek() == '^') {
            ++pos_;
            skip();
            std::size_t ps = pos_;
            std::string p = read_digits();
            if (p.empty()) throw ParseError("expected exponent after '^'", ps);
            power = std::stol(p);
            if (power < 1 || power > 4096) throw ParseError("exponent out of range", ps);
        }
        return Monomial::power(static_cast<int>(idx - 1), static_cast<int>(power));
    }

    GaussianRational coefficient() {
        if (peek() == '(') {
            std::size_t open = pos_;
            ++pos_;
            skip();
            GaussianRational acc;
            bool first = true;
            while (!at_end() && peek() != ')') {
                bool neg = false;
                if (peek() == '+' || peek() == '-') {
                    neg = peek() == '-';
                    ++pos_;
                    skip();
                } else if (!first) {
                    throw ParseError("expected '+' or '-' inside coefficient", pos_);
                }
                first = false;
                GaussianRational part = simple_coefficient();
                acc += neg ? -part : part;
                skip();
            }
            if (at_end()) throw ParseError("unbalanced '('", open);
            ++pos_;
            if (first) throw ParseError("empty coefficient", open);
            return acc;
        }
        return simple_coefficient();
    }

    // number, number i, i, a/b
    GaussianRational simple_coefficient() {
        std::size_t start = pos_;
        if (!at_end() && peek() == 'i') {
            ++pos_;
            return {Rational(0), Rational(1)};
        }
        std::string num;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) num.push_back(s_[pos_++]);
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t save = pos_;
            std::string ex(1, s_[pos_++]);
            if (!at_end() && (peek() == '+' || peek() == '-')) ex.push_back(s_[pos_++]);
            std::string d = read_digits();
            if (d.empty()) {
                pos_ = save;
            } else {
                num += ex + d;
            }
        }
        if (num.empty()) throw ParseError("expected number", start);
        Rational value;
        skip();
        if (!at_end() && peek() == '/') {
            ++pos_;
            skip();
            std::size_t ds = pos_;
            std::string den = read_digits();
            if (den.empty()) throw ParseError("expected denominator", ds);
            if (num.find_first_of(".eE") != std::string::npos) throw ParseError("fraction numerator must be an integer", start);
            try {
                value = Rational::parse(num + "/" + den);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), start);
            }
        } else {
            try {
                value = Rational::parse(num);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), start);
            }
        }
        skip();
        if (!at_end() && peek() == 'i') {
            ++pos_;
            return {Rational(0), value};
        }
        return {value, Rational(0)};
    }

    std::string read_digits() {
        std::string d;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) d.push_back(s_[pos_++]);
        return d;
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::pair<Monomial, GaussianRational>> parse_terms(std::string_view text) {
    return Parser(text).terms();
}

Polynomial<GaussianRational> parse_polynomial(std::string_view text) {
    Polynomial<GaussianRational> p;
    for (auto& [m, c] : parse_terms(text)) p.add(m, c);
    return p;
}

Polynomial<Rational> parse_real_polynomial(std::string_view text) {
    Polynomial<Rational> p;
    for (auto& [m, c] : parse_terms(text)) {
        if (!c.im.is_zero()) throw ParseError("complex coefficient not allowed here", 0);
        p.add(m, c.re);
    }
    return p;
}

Monomial parse_monomial(std::string_view text) {
    auto t = parse_terms(text);
    if (t.size() != 1 || !(t[0].second == GaussianRational(1))) throw ParseError("expected a single monomial", 0);
    return t[0].first;
}

void check_self_adjoint(const std::vector<std::pair<Monomial, GaussianRational>>& terms) {
    std::map<Monomial, GaussianRational> cls;
    std::map<Monomial, Monomial> witness;
    for (const auto& [q, c] : terms) {
        Monomial k = cyclic_canonical(q);
        cls[k] += c;
        witness.try_emplace(k, q);
    }
    for (const auto& [k, c] : cls) {
        if (c.is_zero()) continue;
        Monomial kstar = cyclic_canonical(k.reversed());
        auto it = cls.find(kstar);
        GaussianRational have = it == cls.end() ? GaussianRational() : it->second;
        if (!(have == conjugate(c))) {
            const Monomial& q = witness.at(k);
            throw SelfAdjointnessError("potential is not self-adjoint: term " + c.str() + "*" + q.str() + " needs conjugate term " +
                                       conjugate(c).str() + "*" + q.reversed().str() +
                                       (it == cls.end() ? " (missing)" : " (found coefficient " + have.str() + ")"));
        }
    }
}

Potential parse_potential(std::string_view text, int m) {
    auto terms = parse_terms(text);
    int maxc = 0;
    for (const auto& [q, c] : terms) {
        if (q.empty()) throw ParseError("constant terms are not allowed in a potential", 0);
        maxc = std::max(maxc, q.max_letter() + 1);
    }
    if (m == 0) m = std::max(1, maxc);
    if (maxc > m) throw ColorError("potential uses color " + std::to_string(maxc) + " but m = " + std::to_string(m));
    check_self_adjoint(terms);
    std::vector<PotentialTerm> out;
    for (auto& [q, c] : terms) out.push_back({c, q});
    return Potential(m, std::move(out));
}

}  // namespace mmwb
