#include "rys/rational.hpp"

#include <stdexcept>

namespace rys {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto e = s.find_first_of("eE");
    if (e != std::string::npos && s.find('/') == std::string::npos) {
        Rational m = parse_rational(s.substr(0, e));
        long ex = std::stol(s.substr(e + 1));
        return m * rpow(Rational(10), ex);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // exact decimal: 0.25 -> 25/100
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        mpz_class num;
        if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad decimal: " + s);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational rpow(const Rational& base, long exponent) {
    if (exponent == 0) return Rational(1);
    Rational b = base;
    if (exponent < 0) {
        if (b == 0) throw std::domain_error("rpow: zero to a negative power");
        b = 1 / b;
        exponent = -exponent;
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace rys
