#include "qtsp/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>

#include "qtsp/errors.hpp"

namespace qtsp {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    if (!j.is_object()) throw ParseError(std::string(ctx) + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return it.key() == k; }) == allowed.end())
            throw ParseError(std::string(ctx) + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

// Runs a parse body, converting JSON access errors and record validation
// failures into data errors (exit code 2 at the CLI).
template <class F>
auto parsing(const char* ctx, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const json::exception& e) {
        throw ParseError(std::string(ctx) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string(ctx) + ": " + e.what());
    }
}

}  // namespace

nlohmann::json to_json(const EnParams& p) {
    return {{"alpha", p.alpha},
            {"beta", p.beta},
            {"m_ratio", p.m_ratio},
            {"k0", p.k0},
            {"k_decay", p.k_decay},
            {"k_period", p.k_period},
            {"k_min", p.k_min},
            {"max_iters", p.max_iters},
            {"squared_exponent", p.squared_exponent}};
}

EnParams en_params_from_json(const nlohmann::json& j) {
    return parsing("en params", [&] {
        check_keys(j,
                   {"alpha", "beta", "m_ratio", "k0", "k_decay", "k_period", "k_min", "max_iters",
                    "squared_exponent"},
                   "en params");
        EnParams p;
        get_if(j, "alpha", p.alpha);
        get_if(j, "beta", p.beta);
        get_if(j, "m_ratio", p.m_ratio);
        get_if(j, "k0", p.k0);
        get_if(j, "k_decay", p.k_decay);
        get_if(j, "k_period", p.k_period);
        get_if(j, "k_min", p.k_min);
        get_if(j, "max_iters", p.max_iters);
        get_if(j, "squared_exponent", p.squared_exponent);
        p.validate();
        return p;
    });
}

nlohmann::json to_json(const Schedule& s) {
    switch (s.kind) {
        case Schedule::Kind::geometric:
            return {{"kind", "geometric"}, {"t0", s.t0}, {"ratio", s.ratio}};
        case Schedule::Kind::logarithmic:
            return {{"kind", "logarithmic"}, {"d", s.d}, {"offset", s.offset}};
        case Schedule::Kind::constant:
        default:
            return {{"kind", "constant"}, {"t", s.t_const}};
    }
}

Schedule schedule_from_json(const nlohmann::json& j) {
    return parsing("schedule", [&] {
        if (!j.is_object() || !j.contains("kind"))
            throw ParseError("schedule: missing 'kind'");
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "geometric") {
            check_keys(j, {"kind", "t0", "ratio"}, "schedule");
            return Schedule::geometric(j.at("t0").get<double>(), j.at("ratio").get<double>());
        }
        if (kind == "logarithmic") {
            check_keys(j, {"kind", "d", "offset"}, "schedule");
            int offset = 1;
            get_if(j, "offset", offset);
            return Schedule::logarithmic(j.at("d").get<double>(), offset);
        }
        if (kind == "constant") {
            check_keys(j, {"kind", "t"}, "schedule");
            return Schedule::constant(j.at("t").get<double>());
        }
        throw ParseError("schedule: unknown kind '" + kind + "'");
    });
}

nlohmann::json to_json(const TunnelParams& p) {
    json j{{"delta", p.delta}, {"omega", p.omega}, {"sigma", p.sigma},
           {"eta", p.eta},     {"d", p.d},         {"hbar", p.hbar}};
    j["beta"] = std::isinf(p.beta) ? json(nullptr) : json(p.beta);
    return j;
}

TunnelParams tunnel_params_from_json(const nlohmann::json& j) {
    return parsing("tunnel params", [&] {
        check_keys(j, {"delta", "omega", "sigma", "eta", "d", "hbar", "beta"}, "tunnel params");
        TunnelParams p;
        get_if(j, "delta", p.delta);
        get_if(j, "omega", p.omega);
        get_if(j, "sigma", p.sigma);
        get_if(j, "eta", p.eta);
        get_if(j, "d", p.d);
        get_if(j, "hbar", p.hbar);
        if (auto it = j.find("beta"); it != j.end())
            p.beta = it->is_null() ? std::numeric_limits<double>::infinity() : it->get<double>();
        p.validate();
        return p;
    });
}

nlohmann::json to_json(const RefinerConfig& c) {
    return {{"max_width", c.max_width},
            {"samples_per_width", c.samples_per_width},
            {"enum_budget", c.enum_budget},
            {"rate_params", to_json(c.rate_params)},
            {"seed", c.seed},
            {"max_hops", c.max_hops}};
}

RefinerConfig refiner_config_from_json(const nlohmann::json& j) {
    return parsing("refiner config", [&] {
        check_keys(j, {"max_width", "samples_per_width", "enum_budget", "rate_params", "seed",
                       "max_hops"},
                   "refiner config");
        RefinerConfig c;
        get_if(j, "max_width", c.max_width);
        get_if(j, "samples_per_width", c.samples_per_width);
        get_if(j, "enum_budget", c.enum_budget);
        if (j.contains("rate_params")) c.rate_params = tunnel_params_from_json(j.at("rate_params"));
        get_if(j, "seed", c.seed);
        get_if(j, "max_hops", c.max_hops);
        c.validate();
        return c;
    });
}

void BenchConfig::validate() const {
    if (instances < 1) throw std::invalid_argument("BenchConfig: instances must be >= 1");
    if (n < 3) throw std::invalid_argument("BenchConfig: n must be >= 3");
    if (budget < 4 + n) throw std::invalid_argument("BenchConfig: budget too small for one step");
    if (methods.empty()) throw std::invalid_argument("BenchConfig: methods must be non-empty");
    for (const std::string& m : methods) {
        if (m != "en" && m != "sa" && m != "en+refine" && m != "sa+refine")
            throw std::invalid_argument("BenchConfig: unknown method '" + m + "'");
    }
    if (!(sa_t0 > sa_t_end) || !(sa_t_end > 0.0))
        throw std::invalid_argument("BenchConfig: need sa_t0 > sa_t_end > 0");
    if (trace_stride < 1) throw std::invalid_argument("BenchConfig: trace_stride must be >= 1");
    en.validate();
    refiner.validate();
}

nlohmann::json to_json(const BenchConfig& c) {
    return {{"instances", c.instances},
            {"n", c.n},
            {"seed", c.seed},
            {"methods", c.methods},
            {"budget", c.budget},
            {"en", to_json(c.en)},
            {"sa_t0", c.sa_t0},
            {"sa_t_end", c.sa_t_end},
            {"refiner", to_json(c.refiner)},
            {"trace_stride", c.trace_stride}};
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
    return parsing("bench config", [&] {
        check_keys(j,
                   {"instances", "n", "seed", "methods", "budget", "en", "sa_t0", "sa_t_end",
                    "refiner", "trace_stride"},
                   "bench config");
        BenchConfig c;
        get_if(j, "instances", c.instances);
        get_if(j, "n", c.n);
        get_if(j, "seed", c.seed);
        get_if(j, "methods", c.methods);
        get_if(j, "budget", c.budget);
        if (j.contains("en")) c.en = en_params_from_json(j.at("en"));
        get_if(j, "sa_t0", c.sa_t0);
        get_if(j, "sa_t_end", c.sa_t_end);
        if (j.contains("refiner")) c.refiner = refiner_config_from_json(j.at("refiner"));
        get_if(j, "trace_stride", c.trace_stride);
        c.validate();
        return c;
    });
}

nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

}  // namespace qtsp
