#include "cubefix/rational.hpp"
#include "cubefix/error.hpp"

#include <cctype>

namespace cubefix {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotConnected: return "NotConnected";
        case ErrorKind::NotMedian: return "NotMedian";
        case ErrorKind::NotSimple: return "NotSimple";
        case ErrorKind::UnknownEdge: return "UnknownEdge";
        case ErrorKind::UnknownVertex: return "UnknownVertex";
        case ErrorKind::OutOfWindow: return "OutOfWindow";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::NoCaseApplies: return "NoCaseApplies";
        case ErrorKind::Stalled: return "Stalled";
        case ErrorKind::MissingTree: return "MissingTree";
        case ErrorKind::DuplicateRootLabel: return "DuplicateRootLabel";
        case ErrorKind::LabelNotReduced: return "LabelNotReduced";
        case ErrorKind::NoMovingGenerator: return "NoMovingGenerator";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::NotReduced: return "NotReduced";
        case ErrorKind::PoolTooSmall: return "PoolTooSmall";
        case ErrorKind::LengthTooShort: return "LengthTooShort";
        case ErrorKind::Format: return "Format";
    }
    return "Error";
}

namespace {

BigInt parse_digits(const std::string& s, const std::string& whole) {
    if (s.empty()) fail(ErrorKind::Format, "bad number '" + whole + "'");
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail(ErrorKind::Format, "bad number '" + whole + "'");
    return BigInt(s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string t = text;
    if (t.empty()) fail(ErrorKind::Format, "empty number");
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        Rational a = parse_rational(t.substr(0, slash));
        Rational b = parse_rational(t.substr(slash + 1));
        if (b == 0) fail(ErrorKind::Format, "zero denominator in '" + text + "'");
        return a / b;
    }
    bool neg = false;
    size_t i = 0;
    if (t[0] == '-' || t[0] == '+') {
        neg = t[0] == '-';
        i = 1;
    }
    std::string mant = t.substr(i);
    long long exp10 = 0;
    auto epos = mant.find_first_of("eE");
    if (epos != std::string::npos) {
        std::string es = mant.substr(epos + 1);
        mant = mant.substr(0, epos);
        bool eneg = false;
        if (!es.empty() && (es[0] == '-' || es[0] == '+')) {
            eneg = es[0] == '-';
            es = es.substr(1);
        }
        exp10 = static_cast<long long>(parse_digits(es, text));
        if (eneg) exp10 = -exp10;
    }
    auto dot = mant.find('.');
    std::string ip = mant, fp;
    if (dot != std::string::npos) {
        ip = mant.substr(0, dot);
        fp = mant.substr(dot + 1);
    }
    if (ip.empty() && fp.empty()) fail(ErrorKind::Format, "bad number '" + text + "'");
    BigInt num = parse_digits(ip.empty() ? "0" : ip, text);
    for (char c : fp) {
        if (!std::isdigit(static_cast<unsigned char>(c))) fail(ErrorKind::Format, "bad number '" + text + "'");
        num = num * 10 + (c - '0');
    }
    exp10 -= static_cast<long long>(fp.size());
    Rational q(num);
    BigInt p10 = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 < 0)
        q /= Rational(p10);
    else
        q *= Rational(p10);
    return neg ? -q : q;
}

std::string to_string(const Rational& q) {
    BigInt n = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational pow(const Rational& q, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= q;
    return r;
}

bool at_least_fraction(long long count, const Rational& q, long long total) {
    return Rational(count) >= q * Rational(total);
}

}  // namespace cubefix
