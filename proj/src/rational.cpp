#include "ctx/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace ctx {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_integer_token(text)) {
            throw std::invalid_argument("not a rational: '" + text + "'");
        }
        return Rational(BigInt(text));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
    BigInt denominator(den);
    if (denominator == 0) {
        throw std::invalid_argument("zero denominator: '" + text + "'");
    }
    return Rational(BigInt(num), denominator);
}

std::string format_rational(const Rational& value) {
    const BigInt num = numerator(value);
    const BigInt den = denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("non-finite value");
    }
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);
    // 53 mantissa bits make ldexp(mant, 53) an exact integer.
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    Rational result(scaled);
    const int shift = exp - 53;
    if (shift > 0) {
        result *= Rational(BigInt(1) << shift);
    } else if (shift < 0) {
        result /= Rational(BigInt(1) << (-shift));
    }
    return result;
}

Rational nearest_rational(double x, const BigInt& max_denominator) {
    if (max_denominator < 1) {
        throw std::invalid_argument("denominator cap must be positive");
    }
    const Rational exact = rational_from_double(x);
    if (denominator(exact) <= max_denominator) return exact;
    if (exact < 0) return -nearest_rational(-x, max_denominator);

    // Continued-fraction convergents p/q until the cap, then the best
    // semiconvergent against the last full convergent.
    BigInt n = numerator(exact), d = denominator(exact);
    BigInt p_prev = 0, q_prev = 1, p = 1, q = 0;
    while (d != 0) {
        const BigInt a = n / d;
        const BigInt p_next = a * p + p_prev;
        const BigInt q_next = a * q + q_prev;
        if (q_next > max_denominator) {
            const BigInt t = (max_denominator - q_prev) / q;
            const Rational full(p, q);
            if (t == 0) return full;
            const Rational semi(t * p + p_prev, t * q + q_prev);
            const Rational err_full = abs(exact - full);
            const Rational err_semi = abs(exact - semi);
            if (err_semi < err_full) return semi;
            return full;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        const BigInt r = n - a * d;
        n = d;
        d = r;
    }
    return Rational(p, q);
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

} // namespace ctx
