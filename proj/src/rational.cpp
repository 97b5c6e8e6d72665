#include "dvs/rational.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace dvs {

namespace {

[[noreturn]] void bad_number(std::string_view text) {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class pow10(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

// [sign] digits [. digits] [e|E [sign] digits]
Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp = s.substr(e + 1);
        s = s.substr(0, e);
        bool exp_negative = false;
        if (!exp.empty() && (exp.front() == '-' || exp.front() == '+')) {
            exp_negative = exp.front() == '-';
            exp.remove_prefix(1);
        }
        if (!all_digits(exp) || exp.size() > 6) bad_number(text);
        exponent = std::stol(std::string(exp));
        if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = s.substr(0, dot);
        const std::string_view frac = s.substr(dot + 1);
        if (whole.empty() && frac.empty()) bad_number(text);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
            bad_number(text);
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(s)) bad_number(text);
        digits = std::string(s);
    }
    mpq_class q{mpz_class(digits, 10)};
    if (exponent > 0) q *= pow10(static_cast<unsigned long>(exponent));
    if (exponent < 0) q /= pow10(static_cast<unsigned long>(-exponent));
    if (negative) q = -q;
    return Rational(q);
}

}  // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.sign() == 0) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) bad_number(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = trim(s.substr(0, slash));
        const std::string_view den = trim(s.substr(slash + 1));
        bool negative = false;
        if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
            negative = num.front() == '-';
            num.remove_prefix(1);
        }
        if (!all_digits(num) || !all_digits(den)) bad_number(text);
        const mpz_class d(std::string(den), 10);
        if (d == 0) bad_number(text);
        mpq_class q(mpz_class(std::string(num), 10), d);
        q.canonicalize();
        if (negative) q = -q;
        return Rational(q);
    }
    return parse_decimal(s);
}

Rational Rational::from_double(double value) {
    char buf[64];
    // %.17g round-trips; try shorter forms first so 0.714 stays 714/1000.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return parse_decimal(buf);
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

mpz_class floor(const Rational& r) {
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), r.value().get_num_mpz_t(), r.value().get_den_mpz_t());
    return out;
}

mpz_class ceil(const Rational& r) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), r.value().get_num_mpz_t(), r.value().get_den_mpz_t());
    return out;
}

Rational lcm(const Rational& a, const Rational& b) {
    if (a.sign() <= 0 || b.sign() <= 0) throw std::domain_error("lcm of non-positive rational");
    // lcm(p/q, r/s) = lcm(p, r) / gcd(q, s) for reduced fractions.
    mpz_class num, den;
    mpz_lcm(num.get_mpz_t(), a.value().get_num_mpz_t(), b.value().get_num_mpz_t());
    mpz_gcd(den.get_mpz_t(), a.value().get_den_mpz_t(), b.value().get_den_mpz_t());
    return Rational(mpq_class(num, den));
}

}  // namespace dvs
