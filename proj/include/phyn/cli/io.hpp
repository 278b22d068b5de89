#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

#include <CLI11.hpp>
#include <json.hpp>

#include "phyn/errors.hpp"
#include "phyn/mathcore/stats.hpp"
#include "phyn/rates/curve_csv.hpp"

namespace phyn::cli {

using json = nlohmann::ordered_json;

inline json tagged(double v, const char* units) { return json{{"value", v}, {"units", units}}; }

inline json tagged(const Estimate& e, const char* units) {
    return json{{"value", e.mean}, {"std_error", e.std_error}, {"n_paths", e.n}, {"units", units}};
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parameter_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json read_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw parameter_error("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline DiscountCurve load_curve(const std::string& path, CurveOptions opt = {}) {
    std::ifstream in(path);
    if (!in) throw parameter_error("cannot open curve file '" + path + "'");
    return read_curve_csv(in, opt);
}

/// Writes `text` to `path`, or to `os` when the path is empty.
inline void emit(const std::string& text, const std::string& path, std::ostream& os) {
    if (path.empty()) {
        os << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw parameter_error("cannot write '" + path + "'");
    f << text;
}

inline std::string to_text(const json& j) { return j.dump(2) + "\n"; }

template <class T> struct is_optional : std::false_type {};
template <class U> struct is_optional<std::optional<U>> : std::true_type {
    using value_type = U;
};

/// Command-line options that can also be filled from a JSON scenario. A flag given on
/// the command line wins over the same key in the scenario.
class Binder {
public:
    Binder(CLI::App& app, std::string command) : app_(app), command_(std::move(command)) {}

    template <class T>
    CLI::Option* add(const std::string& key, T& ref, const std::string& desc) {
        std::string flag = "--" + key;
        for (auto& c : flag)
            if (c == '_') c = '-';
        CLI::Option* o = app_.add_option(flag, ref, desc);
        if constexpr (!is_optional<T>::value) o->capture_default_str();
        setters_[key] = [&ref, o, key](const json& j) {
            if (o->count() > 0) return;
            try {
                if constexpr (is_optional<T>::value) {
                    if (j.is_null()) ref.reset();
                    else ref = j.get<typename is_optional<T>::value_type>();
                } else {
                    ref = j.get<T>();
                }
            } catch (const json::exception&) {
                throw parameter_error("scenario key '" + key + "' has the wrong type");
            }
        };
        return o;
    }

    void apply(const json& spec) const {
        if (!spec.is_object()) throw parameter_error("scenario must be a JSON object");
        for (const auto& [k, v] : spec.items()) {
            std::string key = k;
            for (auto& c : key)
                if (c == '-') c = '_';
            auto it = setters_.find(key);
            if (it == setters_.end())
                throw parameter_error("scenario key '" + k + "' is not an option of '" + command_ + "'");
            it->second(v);
        }
    }

private:
    CLI::App& app_;
    std::string command_;
    std::map<std::string, std::function<void(const json&)>> setters_;
};

} // namespace phyn::cli
