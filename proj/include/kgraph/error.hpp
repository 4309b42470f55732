#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgraph {

enum class errc {
    duplicate_square,
    missing_square,
    mismatched_endpoints,
    associativity_failure,
    not_composable,
    degree_out_of_range,
    unknown_vertex,
    unknown_edge,
    graph_mismatch,
    not_a_graph_trace,
    not_finitely_summable,
    missing_vertex_value,
    not_locally_convex,
    range_mismatch,
    sufficient_condition_unmet,
    unsaturated_lattice,
    divergence_detected,
    projector_mismatch,
    not_quantized,
    unstable_kernel,
    parse_error,
    invalid_argument,
};

inline std::string_view errc_name(errc c)
{
    switch (c) {
    case errc::duplicate_square: return "DuplicateSquare";
    case errc::missing_square: return "MissingSquare";
    case errc::mismatched_endpoints: return "MismatchedEndpoints";
    case errc::associativity_failure: return "AssociativityFailure";
    case errc::not_composable: return "NotComposable";
    case errc::degree_out_of_range: return "DegreeOutOfRange";
    case errc::unknown_vertex: return "UnknownVertex";
    case errc::unknown_edge: return "UnknownEdge";
    case errc::graph_mismatch: return "GraphMismatch";
    case errc::not_a_graph_trace: return "NotAGraphTrace";
    case errc::not_finitely_summable: return "NotFinitelySummable";
    case errc::missing_vertex_value: return "MissingVertexValue";
    case errc::not_locally_convex: return "NotLocallyConvex";
    case errc::range_mismatch: return "RangeMismatch";
    case errc::sufficient_condition_unmet: return "SufficientConditionUnmet";
    case errc::unsaturated_lattice: return "UnsaturatedLattice";
    case errc::divergence_detected: return "DivergenceDetected";
    case errc::projector_mismatch: return "ProjectorMismatch";
    case errc::not_quantized: return "NotQuantized";
    case errc::unstable_kernel: return "UnstableKernel";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace kgraph
