#include "clusterperf/params.hpp"

#include <cmath>

namespace clusterperf {

std::string_view to_string(FailureSemantics s) {
    switch (s) {
        case FailureSemantics::PaperLiteral:
            return "paper-literal";
        case FailureSemantics::PerComputingNode:
            return "per-computing-node";
    }
    return "unknown";
}

FailureSemantics parse_semantics(std::string_view text) {
    if (text == "paper-literal" || text == "PaperLiteral" || text == "paper") {
        return FailureSemantics::PaperLiteral;
    }
    if (text == "per-computing-node" || text == "PerComputingNode" || text == "per-node") {
        return FailureSemantics::PerComputingNode;
    }
    throw ParameterError("semantics", "unknown failure semantics '" + std::string(text) +
                                          "' (expected paper-literal or per-computing-node)");
}

namespace {

void require_rate(const char* key, double value, bool strictly_positive) {
    if (!std::isfinite(value)) {
        throw ParameterError(key, std::string(key) + " must be finite");
    }
    if (strictly_positive ? !(value > 0.0) : value < 0.0) {
        throw ParameterError(key, std::string(key) + (strictly_positive ? " must be > 0" : " must be >= 0"));
    }
}

}  // namespace

SystemParams validate_params(const SystemParams& raw) {
    if (raw.servers < 1) {
        throw ParameterError("S", "S >= 1 violated");
    }
    if (raw.capacity < raw.servers) {
        throw ParameterError("L", "L >= S violated");
    }
    require_rate("lambda", raw.lambda, true);
    require_rate("mu", raw.mu, true);
    require_rate("mu_h", raw.mu_h, true);
    require_rate("xi", raw.xi, false);
    require_rate("xi_h", raw.xi_h, true);
    require_rate("eta", raw.eta, true);
    require_rate("eta_h", raw.eta_h, true);
    // The model pools head and computing service into one rate.
    if (std::abs(raw.mu_h - raw.mu) > 1e-12 * std::abs(raw.mu)) {
        throw ParameterError("mu_h", "mu_h must equal mu");
    }
    return raw;
}

}  // namespace clusterperf
