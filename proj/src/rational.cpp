#include "mmwb/rational.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace mmwb {

namespace {

using i128 = __int128;

bool fits64(i128 v) {
    return v >= static_cast<i128>(INT64_MIN) && v <= static_cast<i128>(INT64_MAX);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

mpz_class to_mpz(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(long long n, long long d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    i128 nn = n, dd = d;
    if (dd < 0) {
        nn = -nn;
        dd = -dd;
    }
    i128 g = gcd128(nn, dd);
    if (g > 1) {
        nn /= g;
        dd /= g;
    }
    if (fits64(nn) && fits64(dd)) {
        num_ = static_cast<std::int64_t>(nn);
        den_ = static_cast<std::int64_t>(dd);
    } else {
        set_big(mpq_class(to_mpz(nn), to_mpz(dd)));
    }
}

Rational::Rational(const mpq_class& q) {
    mpq_class c(q);
    c.canonicalize();
    set_big(std::move(c));
}

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
    if (this == &o) return *this;
    num_ = o.num_;
    den_ = o.den_;
    if (o.big_) {
        if (big_) {
            *big_ = *o.big_;
        } else {
            big_ = std::make_unique<mpq_class>(*o.big_);
        }
    } else {
        big_.reset();
    }
    return *this;
}

void Rational::set_big(mpq_class q) {
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        num_ = q.get_num().get_si();
        den_ = q.get_den().get_si();
        big_.reset();
        return;
    }
    num_ = 0;
    den_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(q));
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

bool Rational::is_integer() const {
    if (big_) return big_->get_den() == 1;
    return den_ == 1;
}

int Rational::sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

double Rational::to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpq_class q;
        try {
            q = mpq_class(mpz_class(s.substr(0, slash), 10), mpz_class(s.substr(slash + 1), 10));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("malformed rational '" + s + "'");
        }
        if (q.get_den() == 0) throw std::domain_error("Rational: zero denominator");
        return Rational(q);
    }
    std::string mant = s;
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        std::size_t used = 0;
        try {
            exp10 = std::stol(s.substr(epos + 1), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed exponent in '" + s + "'");
        }
        if (used != s.size() - epos - 1) throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
    std::string digits;
    bool neg = false;
    std::size_t i = 0;
    if (i < mant.size() && (mant[i] == '+' || mant[i] == '-')) {
        neg = mant[i] == '-';
        ++i;
    }
    bool seen_dot = false, seen_digit = false;
    for (; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) --exp10;
        } else {
            throw std::invalid_argument("malformed number '" + s + "'");
        }
    }
    if (!seen_digit) throw std::invalid_argument("malformed number '" + s + "'");
    mpz_class n(digits, 10);
    if (neg) n = -n;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    return exp10 >= 0 ? Rational(mpq_class(n * p)) : Rational(mpq_class(n, p));
}

Rational& Rational::operator+=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (o.num_ == 0) return *this;
        if (num_ == 0) return *this = o;
        if (den_ == 1 && o.den_ == 1) {
            i128 s = static_cast<i128>(num_) + o.num_;
            if (fits64(s)) {
                num_ = static_cast<std::int64_t>(s);
                return *this;
            }
        }
        i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
        i128 d = static_cast<i128>(den_) * o.den_;
        i128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n == 0) d = 1;
        if (fits64(n) && fits64(d)) {
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
            return *this;
        }
        set_big(mpq_class(to_mpz(n), to_mpz(d)));
        return *this;
    }
    set_big(to_mpq() + o.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    if (!big_ && !o.big_) {
        if (num_ == 0 || o.num_ == 0) {
            num_ = 0;
            den_ = 1;
            return *this;
        }
        std::int64_t g1 = std::gcd(num_, o.den_);
        std::int64_t g2 = std::gcd(o.num_, den_);
        i128 n = static_cast<i128>(num_ / g1) * (o.num_ / g2);
        i128 d = static_cast<i128>(den_ / g2) * (o.den_ / g1);
        if (fits64(n) && fits64(d)) {
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
            return *this;
        }
        set_big(mpq_class(to_mpz(n), to_mpz(d)));
        return *this;
    }
    set_big(to_mpq() * o.to_mpq());
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    if (!big_ && !o.big_) {
        if (o.num_ != INT64_MIN) {
            Rational inv;
            inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
            inv.den_ = o.num_ < 0 ? -o.num_ : o.num_;
            return *this *= inv;
        }
    }
    set_big(to_mpq() / o.to_mpq());
    return *this;
}

Rational Rational::operator-() const {
    if (!big_ && num_ != INT64_MIN) {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    return Rational(mpq_class(-to_mpq()));
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // normalized: a big value never fits the small form
}

bool operator<(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
    }
    return a.to_mpq() < b.to_mpq();
}

std::string GaussianRational::str() const {
    if (im.is_zero()) return re.str();
    std::string i_part = im.str() + "i";
    if (im == Rational(1)) i_part = "i";
    if (im == Rational(-1)) i_part = "-i";
    if (re.is_zero()) return i_part;
    if (im.sign() > 0) return "(" + re.str() + "+" + i_part + ")";
    return "(" + re.str() + i_part + ")";
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    if (im.is_zero() && o.im.is_zero()) {
        re *= o.re;
        return *this;
    }
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    Rational n2 = o.re * o.re + o.im * o.im;
    if (n2.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    *this *= GaussianRational(o.re, -o.im);
    re /= n2;
    im /= n2;
    return *this;
}

std::string to_string(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_string(const Complex& x) {
    if (x.imag() == 0.0) return to_string(x.real());
    return "(" + to_string(x.real()) + (x.imag() < 0 ? "" : "+") + to_string(x.imag()) + "i)";
}

}  // namespace mmwb
