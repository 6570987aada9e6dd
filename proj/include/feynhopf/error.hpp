#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace feynhopf {

/// Failure categories reported by the library. The CLI maps them to exit codes.
enum class errc {
    involution,
    type_mismatch,
    dangling_halfedge,
    parse,
    size_limit,
    not_a_subgraph,
    unknown_edge_type,
    unknown_vertex_type,
    unknown_theory,
    not_specified_subgraph,
    full_component_spec_mismatch,
    truncation_underflow,
    singular_block,
    not_positive_definite,
    unsupported_propagator,
    not_convergent,
    quadrature_failure,
    continuation_not_implemented,
    not_unital,
    scheme_unavailable,
    incompatible_blocks,
    invalid_argument,
};

constexpr std::string_view to_string(errc code) noexcept {
    switch (code) {
        case errc::involution: return "InvolutionError";
        case errc::type_mismatch: return "TypeMismatch";
        case errc::dangling_halfedge: return "DanglingHalfEdge";
        case errc::parse: return "ParseError";
        case errc::size_limit: return "SizeLimit";
        case errc::not_a_subgraph: return "NotASubgraph";
        case errc::unknown_edge_type: return "UnknownEdgeType";
        case errc::unknown_vertex_type: return "UnknownVertexType";
        case errc::unknown_theory: return "UnknownTheory";
        case errc::not_specified_subgraph: return "NotSpecifiedSubgraph";
        case errc::full_component_spec_mismatch: return "FullComponentSpecMismatch";
        case errc::truncation_underflow: return "TruncationUnderflow";
        case errc::singular_block: return "SingularBlock";
        case errc::not_positive_definite: return "NotPositiveDefinite";
        case errc::unsupported_propagator: return "UnsupportedPropagator";
        case errc::not_convergent: return "NotConvergent";
        case errc::quadrature_failure: return "QuadratureFailure";
        case errc::continuation_not_implemented: return "ContinuationNotImplemented";
        case errc::not_unital: return "NotUnital";
        case errc::scheme_unavailable: return "SchemeUnavailable";
        case errc::incompatible_blocks: return "IncompatibleBlocks";
        case errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

    errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    errc code_;
    std::string detail_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail) { throw error(code, detail); }

}  // namespace feynhopf
