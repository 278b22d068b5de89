#pragma once

#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "phyn/errors.hpp"
#include "phyn/rates/curve.hpp"

namespace phyn {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i)
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

} // namespace detail

/// Reads a two-column curve CSV. The header decides the second column:
/// `maturity_years,discount_factor` or `maturity_years,zero_yield`. Errors name the data row (1-based).
inline DiscountCurve read_curve_csv(std::istream& in, DiscountCurve::Options opt = {}) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false, yields = false;
    std::vector<double> ts, vs;
    std::size_t row = 0;
    auto fail = [&](const std::string& what) {
        std::ostringstream os;
        os << "curve CSV row " << row << " (line " << line_no << "): " << what;
        throw parameter_error(os.str());
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cols = detail::split_csv(t);
        if (!have_header) {
            if (cols.size() != 2 || cols[0] != "maturity_years" || (cols[1] != "discount_factor" && cols[1] != "zero_yield"))
                throw parameter_error("curve CSV line " + std::to_string(line_no) +
                                      ": header must be maturity_years,discount_factor or maturity_years,zero_yield");
            yields = cols[1] == "zero_yield";
            have_header = true;
            continue;
        }
        ++row;
        if (cols.size() != 2) fail("expected 2 columns, found " + std::to_string(cols.size()));
        double T = 0, v = 0;
        if (!detail::parse_double(cols[0], T)) fail("maturity '" + std::string(cols[0]) + "' is not a number");
        if (!detail::parse_double(cols[1], v)) fail("value '" + std::string(cols[1]) + "' is not a number");
        if (!(T > 0.0)) fail("maturity must be positive");
        if (!ts.empty() && !(T > ts.back())) fail("maturities must be strictly increasing");
        if (!yields && !(v > 0.0)) fail("discount factor must be positive");
        if (!yields && opt.nonnegative_forwards && v > (vs.empty() ? 1.0 : vs.back()))
            fail("discount factor increases (negative forward rate)");
        ts.push_back(T);
        vs.push_back(yields ? std::exp(-v * T) : v);
    }
    if (!have_header) throw parameter_error("curve CSV: missing header");
    if (ts.empty()) throw parameter_error("curve CSV: no data rows");
    return DiscountCurve(ts, vs, opt);
}

} // namespace phyn
