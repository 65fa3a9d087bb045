// Test-only oracles. Nothing here calls into the code under test.
#ifndef BWTRACE_TESTS_ORACLE_HPP
#define BWTRACE_TESTS_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact value of a finite double.
inline Rational exact(double v) {
    if (v == 0.0)
        return Rational(0);
    int exp = 0;
    const double mant = std::frexp(v, &exp);  // v = mant * 2^exp, 0.5 <= |mant| < 1
    const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r{BigInt(m)};
    if (exp >= 0)
        r *= Rational(BigInt(1) << exp);
    else
        r /= Rational(BigInt(1) << -exp);
    return r;
}

/// 1000 * n / d exactly.
inline Rational exact_rate(std::uint64_t n_bytes, std::int64_t duration_ms) {
    const BigInt num = BigInt(1000) * BigInt(n_bytes);
    return duration_ms < 0 ? Rational(-num, BigInt(-duration_ms)) : Rational(num, BigInt(duration_ms));
}

/// |approx - truth| / |truth|, or |approx| when truth is zero.
inline double relative_error(double approx, const Rational& truth) {
    const Rational diff = abs(exact(approx) - truth);
    if (truth == 0)
        return static_cast<double>(diff);
    return static_cast<double>(diff / abs(truth));
}

/// Ground-truth sidecar as written by the generator, read with plain
/// string handling.
struct Sidecar {
    std::uint64_t expected_valid = 0;
    std::uint64_t expected_omitted = 0;
    std::vector<std::pair<std::string, Rational>> rates;
};

inline Sidecar read_sidecar(std::istream& in) {
    Sidecar s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("expected_valid=", 0) == 0) {
            s.expected_valid = std::stoull(line.substr(15));
        } else if (line.rfind("expected_omitted=", 0) == 0) {
            s.expected_omitted = std::stoull(line.substr(17));
        } else if (!line.empty()) {
            const auto sp = line.find(' ');
            const auto slash = line.find('/', sp);
            if (sp == std::string::npos || slash == std::string::npos)
                throw std::runtime_error("bad sidecar line: " + line);
            const BigInt num(line.substr(sp + 1, slash - sp - 1));
            const BigInt den(line.substr(slash + 1));
            s.rates.emplace_back(line.substr(0, sp), Rational(num, den));
        }
    }
    return s;
}

inline Sidecar read_sidecar_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_sidecar(in);
}

/// Parses "key=value" lines into a map.
inline std::map<std::string, std::string> read_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos)
            kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

}  // namespace oracle

#endif  // BWTRACE_TESTS_ORACLE_HPP
