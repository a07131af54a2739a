#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace clusterperf {

/// Convention for the rate at which plane-1 state i loses a computing node.
///
/// PaperLiteral uses i*xi, counting the head among the failing nodes.
/// PerComputingNode uses (i-1)*xi, one clock per operative computing node.
enum class FailureSemantics { PaperLiteral, PerComputingNode };

std::string_view to_string(FailureSemantics s);
FailureSemantics parse_semantics(std::string_view text);

/// Rates and sizes of a head-node / computing-node cluster.
///
/// All rates share one (arbitrary) time unit.
struct SystemParams {
    int servers = 1;    // S: head plus S-1 computing nodes
    int capacity = 1;   // L: tasks in queue plus in service
    double lambda = 1.0;
    double mu = 1.0;
    double mu_h = 1.0;
    double xi = 0.0;
    double xi_h = 1.0;
    double eta = 1.0;
    double eta_h = 1.0;
    FailureSemantics semantics = FailureSemantics::PaperLiteral;
};

/// Raised when a parameter set violates a model constraint.
/// `key()` names the offending field using the config-file spelling.
class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string key, const std::string& message)
        : std::invalid_argument(message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Returns `raw` unchanged if it satisfies every model invariant, otherwise
/// throws ParameterError describing the first violation.
SystemParams validate_params(const SystemParams& raw);

}  // namespace clusterperf
