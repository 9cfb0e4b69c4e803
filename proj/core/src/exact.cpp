#include "fel/exact.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace fel {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rational: empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("rational: bad integer '" + s + "'");
    cpp_int v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw std::invalid_argument("rational: bad integer '" + s + "'");
        }
        v = v * 10 + (s[i] - '0');
    }
    return neg ? cpp_int(-v) : v;
}

cpp_int pow10(long e) {
    cpp_int p = 1;
    for (long k = 0; k < e; ++k) p *= 10;
    return p;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("rational: empty string");
    if (auto slash = s.find('/'); slash != std::string::npos) {
        cpp_int den = parse_int(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        return Rational(parse_int(s.substr(0, slash)), den);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        exp10 = std::stol(s.substr(e + 1));
        s = s.substr(0, e);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    std::string digits = s;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long>(s.size() - dot - 1);
    }
    if (digits.empty()) throw std::invalid_argument("rational: bad number '" + raw + "'");
    cpp_int num = parse_int(digits);
    if (neg) num = -num;
    if (exp10 >= 0) return Rational(num * pow10(exp10));
    return Rational(num, pow10(-exp10));
}

std::string to_string(const Rational& q) {
    std::string s = boost::multiprecision::numerator(q).str();
    if (boost::multiprecision::denominator(q) != 1) s += "/" + boost::multiprecision::denominator(q).str();
    return s;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

ExactSimilitude ExactSimilitude::identity(int d) {
    ExactSimilitude g;
    g.d = d;
    g.r = 1;
    g.U.assign(static_cast<std::size_t>(d * d), Rational(0));
    for (int i = 0; i < d; ++i) g.U[static_cast<std::size_t>(i * d + i)] = 1;
    g.a.assign(static_cast<std::size_t>(d), Rational(0));
    return g;
}

Similitude ExactSimilitude::to_double() const {
    Mat Ud(d, d);
    Vec ad(d);
    for (int i = 0; i < d; ++i) {
        ad(i) = fel::to_double(a[static_cast<std::size_t>(i)]);
        for (int j = 0; j < d; ++j) Ud(i, j) = fel::to_double(U[static_cast<std::size_t>(i * d + j)]);
    }
    const double t = std::log2(fel::to_double(boost::multiprecision::denominator(r))) -
                     std::log2(fel::to_double(boost::multiprecision::numerator(r)));
    return {t, std::move(Ud), std::move(ad)};
}

std::string ExactSimilitude::key() const {
    std::string k = std::to_string(d) + "|" + to_string(r) + "|";
    for (const auto& u : U) k += to_string(u) + ",";
    k += "|";
    for (const auto& x : a) k += to_string(x) + ",";
    return k;
}

bool ExactSimilitude::is_orthogonal() const {
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Rational s = 0;
            for (int k = 0; k < d; ++k)
                s += U[static_cast<std::size_t>(k * d + i)] * U[static_cast<std::size_t>(k * d + j)];
            if (s != (i == j ? 1 : 0)) return false;
        }
    return true;
}

ExactSimilitude compose(const ExactSimilitude& g, const ExactSimilitude& h) {
    if (g.d != h.d) throw std::invalid_argument("compose: dimension mismatch");
    const int d = g.d;
    ExactSimilitude out;
    out.d = d;
    out.r = g.r * h.r;
    out.U.assign(static_cast<std::size_t>(d * d), Rational(0));
    out.a = g.a;
    for (int i = 0; i < d; ++i) {
        Rational acc = 0;
        for (int k = 0; k < d; ++k) {
            const auto& gik = g.U[static_cast<std::size_t>(i * d + k)];
            acc += gik * h.a[static_cast<std::size_t>(k)];
            for (int j = 0; j < d; ++j)
                out.U[static_cast<std::size_t>(i * d + j)] += gik * h.U[static_cast<std::size_t>(k * d + j)];
        }
        out.a[static_cast<std::size_t>(i)] += g.r * acc;
    }
    return out;
}

std::vector<Rational> apply(const ExactSimilitude& g, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != g.d) throw std::invalid_argument("apply: dimension mismatch");
    std::vector<Rational> y = g.a;
    for (int i = 0; i < g.d; ++i) {
        Rational acc = 0;
        for (int k = 0; k < g.d; ++k) acc += g.U[static_cast<std::size_t>(i * g.d + k)] * x[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] += g.r * acc;
    }
    return y;
}

}  // namespace fel
