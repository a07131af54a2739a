#include "clusterperf/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace clusterperf {

namespace {

using json = nlohmann::json;

enum class KeyKind { Integer, Unsigned, Number, Text, Boolean, NumberList };

struct KeySpec {
    const char* name;
    KeyKind kind;
};

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs{
        {"S", KeyKind::Integer},
        {"L", KeyKind::Integer},
        {"lambda", KeyKind::Number},
        {"mu", KeyKind::Number},
        {"mu_h", KeyKind::Number},
        {"xi", KeyKind::Number},
        {"xi_h", KeyKind::Number},
        {"eta", KeyKind::Number},
        {"eta_h", KeyKind::Number},
        {"semantics", KeyKind::Text},
        {"delta", KeyKind::Number},
        {"max_iterations", KeyKind::Integer},
        {"residual_target", KeyKind::Number},
        {"seed", KeyKind::Unsigned},
        {"replications", KeyKind::Integer},
        {"confidence", KeyKind::Number},
        {"horizon", KeyKind::Number},
        {"warmup", KeyKind::Number},
        {"oracle_max_states", KeyKind::Integer},
        {"methods", KeyKind::Text},
        {"axis", KeyKind::Text},
        {"values", KeyKind::NumberList},
        {"threshold", KeyKind::Number},
        {"preset", KeyKind::Text},
        {"with_des", KeyKind::Boolean},
        {"out", KeyKind::Text},
        {"format", KeyKind::Text},
    };
    return specs;
}

const KeySpec& find_key(const std::string& key) {
    const auto& specs = key_specs();
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& s) { return key == s.name; });
    if (it == specs.end()) {
        throw ParameterError(key, "unknown config key '" + key + "'");
    }
    return *it;
}

[[noreturn]] void type_error(const std::string& key, const char* expected) {
    throw ParameterError(key, "config key '" + key + "' must be " + expected);
}

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        type_error(key, "a number");
    }
    if (used != text.size()) {
        type_error(key, "a number");
    }
    return v;
}

// Converts a textual override into the JSON type the key expects.
json text_to_json(const std::string& key, const std::string& text) {
    switch (find_key(key).kind) {
        case KeyKind::Integer: {
            long long v = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                type_error(key, "an integer");
            }
            return v;
        }
        case KeyKind::Unsigned: {
            unsigned long long v = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                type_error(key, "a non-negative integer");
            }
            return v;
        }
        case KeyKind::Number:
            return parse_double(key, text);
        case KeyKind::Text:
            return text;
        case KeyKind::Boolean:
            if (text == "true" || text == "1" || text.empty()) {
                return true;
            }
            if (text == "false" || text == "0") {
                return false;
            }
            type_error(key, "true or false");
        case KeyKind::NumberList: {
            json arr = json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) {
                    arr.push_back(parse_double(key, item));
                }
            }
            return arr;
        }
    }
    return nullptr;
}

long long as_integer(const std::string& key, const json& v) {
    if (v.is_number_integer()) {
        return v.get<long long>();
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) {
            return static_cast<long long>(d);
        }
    }
    type_error(key, "an integer");
}

double as_number(const std::string& key, const json& v) {
    if (!v.is_number()) {
        type_error(key, "a number");
    }
    return v.get<double>();
}

std::string as_text(const std::string& key, const json& v) {
    if (!v.is_string()) {
        type_error(key, "a string");
    }
    return v.get<std::string>();
}

int as_int(const std::string& key, const json& v) {
    const long long x = as_integer(key, v);
    if (x < -2147483647LL || x > 2147483647LL) {
        throw ParameterError(key, key + " is out of range");
    }
    return static_cast<int>(x);
}

void apply(RunConfig& cfg, const std::string& key, const json& v, bool& mu_h_given) {
    find_key(key);
    SystemParams& p = cfg.params;
    if (key == "S") {
        p.servers = as_int(key, v);
    } else if (key == "L") {
        p.capacity = as_int(key, v);
    } else if (key == "lambda") {
        p.lambda = as_number(key, v);
    } else if (key == "mu") {
        p.mu = as_number(key, v);
    } else if (key == "mu_h") {
        p.mu_h = as_number(key, v);
        mu_h_given = true;
    } else if (key == "xi") {
        p.xi = as_number(key, v);
    } else if (key == "xi_h") {
        p.xi_h = as_number(key, v);
    } else if (key == "eta") {
        p.eta = as_number(key, v);
    } else if (key == "eta_h") {
        p.eta_h = as_number(key, v);
    } else if (key == "semantics") {
        p.semantics = parse_semantics(as_text(key, v));
    } else if (key == "delta") {
        cfg.configs.solver.delta = as_number(key, v);
    } else if (key == "max_iterations") {
        cfg.configs.solver.max_iterations = as_integer(key, v);
    } else if (key == "residual_target") {
        cfg.configs.solver.residual_target = as_number(key, v);
    } else if (key == "seed") {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            type_error(key, "a non-negative integer");
        }
        cfg.configs.sim.seed = v.get<std::uint64_t>();
    } else if (key == "replications") {
        cfg.configs.sim.replications = as_int(key, v);
    } else if (key == "confidence") {
        cfg.configs.sim.confidence = as_number(key, v);
    } else if (key == "horizon") {
        cfg.configs.sim.horizon = as_number(key, v);
    } else if (key == "warmup") {
        cfg.configs.sim.warmup = as_number(key, v);
    } else if (key == "oracle_max_states") {
        const long long x = as_integer(key, v);
        if (x < 1) {
            throw ParameterError(key, "oracle_max_states must be >= 1");
        }
        cfg.configs.oracle.max_states = static_cast<std::size_t>(x);
    } else if (key == "methods") {
        if (v.is_array()) {
            std::string joined;
            for (const auto& m : v) {
                joined += as_text(key, m) + ",";
            }
            cfg.methods = parse_methods(joined);
        } else {
            cfg.methods = parse_methods(as_text(key, v));
        }
    } else if (key == "axis") {
        cfg.axis = parse_axis(as_text(key, v));
    } else if (key == "values") {
        if (!v.is_array()) {
            type_error(key, "an array of numbers");
        }
        cfg.values.clear();
        for (const auto& x : v) {
            cfg.values.push_back(as_number(key, x));
        }
    } else if (key == "threshold") {
        cfg.threshold = as_number(key, v);
    } else if (key == "preset") {
        cfg.preset = as_text(key, v);
    } else if (key == "with_des") {
        if (!v.is_boolean()) {
            type_error(key, "true or false");
        }
        cfg.with_des = v.get<bool>();
    } else if (key == "out") {
        cfg.out = as_text(key, v);
    } else if (key == "format") {
        cfg.format = parse_format(as_text(key, v));
    }
    if (std::find(cfg.keys_set.begin(), cfg.keys_set.end(), key) == cfg.keys_set.end()) {
        cfg.keys_set.push_back(key);
    }
}

void validate(RunConfig& cfg) {
    validate_params(cfg.params);
    const SolverConfig& s = cfg.configs.solver;
    if (!(s.delta > 0.0)) {
        throw ParameterError("delta", "delta must be > 0");
    }
    if (s.max_iterations < 1) {
        throw ParameterError("max_iterations", "max_iterations must be >= 1");
    }
    if (!(s.residual_target >= 0.0)) {
        throw ParameterError("residual_target", "residual_target must be >= 0");
    }
    validate_sim_config(cfg.configs.sim);
    if (!(cfg.threshold >= 0.0)) {
        throw ParameterError("threshold", "threshold must be >= 0");
    }
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& s : key_specs()) {
            out.emplace_back(s.name);
        }
        return out;
    }();
    return keys;
}

RunConfig default_run_config() {
    RunConfig cfg;
    SystemParams& p = cfg.params;
    p.servers = 500;
    p.capacity = 1000;
    p.lambda = 10.0;
    p.mu = 0.25;
    p.mu_h = 0.25;
    p.xi = 0.001;
    p.xi_h = 0.001;
    p.eta = 0.5;
    p.eta_h = 0.5;
    p.semantics = FailureSemantics::PaperLiteral;
    return cfg;
}

RunConfig parse_config(const std::string& file_text, const std::map<std::string, std::string>& overrides) {
    RunConfig cfg = default_run_config();
    bool mu_h_given = false;
    const bool blank = std::all_of(file_text.begin(), file_text.end(), [](unsigned char c) { return std::isspace(c); });
    if (!blank) {
        json doc;
        try {
            doc = json::parse(file_text);
        } catch (const json::parse_error& e) {
            throw ParameterError("config", std::string("config file is not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) {
            throw ParameterError("config", "config file must hold a JSON object");
        }
        for (const auto& [key, value] : doc.items()) {
            apply(cfg, key, value, mu_h_given);
        }
    }
    for (const auto& [key, text] : overrides) {
        apply(cfg, key, text_to_json(key, text), mu_h_given);
    }
    if (!mu_h_given) {
        cfg.params.mu_h = cfg.params.mu;
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("config", "cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

}  // namespace clusterperf
