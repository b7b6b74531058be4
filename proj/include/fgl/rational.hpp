#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fgl {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

inline Rat make_rat(long long num, long long den = 1) {
    return Rat(Int(num), Int(den));
}

inline Int rat_floor(const Rat& r) {
    Int q = r.numerator() / r.denominator();
    if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
    return q;
}

inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

inline double rat_to_double(const Rat& r) {
    return boost::multiprecision::cpp_rational(r.numerator(), r.denominator())
        .convert_to<double>();
}

inline std::string rat_to_string(const Rat& r) {
    return r.numerator().str() + "/" + r.denominator().str();
}

// Accepts "p", "p/q", and a leading minus sign.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s), Int(1));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

// Closed interval with exact rational endpoints enclosing a real value.
struct RatInterval {
    Rat lo;
    Rat hi;

    Rat width() const { return hi - lo; }
    bool certainly_less(const Rat& r) const { return hi < r; }
    bool certainly_greater(const Rat& r) const { return lo > r; }
};

// Enclosure of log(q) for an integer q >= 2 via 2*atanh((q-1)/(q+1)).
// The series has positive terms, so the partial sum is a lower bound;
// the geometric tail bound gives the upper end.
inline RatInterval log_interval(long long q, int terms = 40) {
    if (q < 2) throw std::invalid_argument("log_interval needs q >= 2");
    Rat x(Int(q - 1), Int(q + 1));
    Rat x2 = x * x;
    Rat pw = x;
    Rat sum(0);
    for (int i = 0; i < terms; ++i) {
        sum += pw / Rat(Int(2 * i + 1), Int(1));
        pw *= x2;
    }
    // remaining terms: sum_{i>=terms} x^{2i+1}/(2i+1) <= x^{2*terms+1}/((2*terms+1)(1-x^2))
    Rat tail = pw / (Rat(Int(2 * terms + 1), Int(1)) * (Rat(1) - x2));
    return RatInterval{Rat(2) * sum, Rat(2) * (sum + tail)};
}

// Enclosure of exp(x) for rational x >= 0 by Taylor partial sum plus a
// geometric tail bound (valid as long as x < terms + 1).
inline RatInterval exp_interval(const Rat& x, int terms = 40) {
    if (x < Rat(0)) throw std::invalid_argument("exp_interval needs x >= 0");
    if (x >= Rat(Int(terms + 1), Int(1)))
        throw std::invalid_argument("exp_interval: raise terms for this x");
    Rat term(1);
    Rat sum(1);
    for (int i = 1; i <= terms; ++i) {
        term *= x / Rat(Int(i), Int(1));
        sum += term;
    }
    Rat next = term * x / Rat(Int(terms + 1), Int(1));
    Rat tail = next / (Rat(1) - x / Rat(Int(terms + 2), Int(1)));
    return RatInterval{sum, sum + tail};
}

}  // namespace fgl
