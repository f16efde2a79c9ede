#ifndef FUZZREC_ERROR_HPP
#define FUZZREC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fuzzrec {

enum class Errc {
    parse,                 // non-numeric cell, malformed JSON
    structure,             // ragged rows, wrong shapes in files
    empty_input,
    degenerate_feature,    // constant column
    degenerate_data,       // too few distinct rows
    dimension,             // shape mismatch between operands
    parameter,             // invalid configuration value
    dead_cluster,          // cluster with zero total membership
    isolated_datum,        // datum with zero total membership
    numeric,               // non-finite intermediate, non-convergence
    optimizer_degenerate,  // every particle infeasible
    io,
};

/// Coarse grouping used by the command-line frontend to pick an exit code.
enum class ErrorCategory { usage, data, numeric };

inline ErrorCategory category(Errc code) {
    switch (code) {
    case Errc::parameter:
        return ErrorCategory::usage;
    case Errc::dead_cluster:
    case Errc::isolated_datum:
    case Errc::numeric:
    case Errc::optimizer_degenerate:
        return ErrorCategory::numeric;
    default:
        return ErrorCategory::data;
    }
}

inline const char* to_string(Errc code) {
    switch (code) {
    case Errc::parse: return "parse error";
    case Errc::structure: return "structure error";
    case Errc::empty_input: return "empty input";
    case Errc::degenerate_feature: return "degenerate feature";
    case Errc::degenerate_data: return "degenerate data";
    case Errc::dimension: return "dimension mismatch";
    case Errc::parameter: return "invalid parameter";
    case Errc::dead_cluster: return "dead cluster";
    case Errc::isolated_datum: return "isolated datum";
    case Errc::numeric: return "numeric failure";
    case Errc::optimizer_degenerate: return "optimizer degenerate";
    case Errc::io: return "i/o error";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

namespace detail {

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) {
        throw Error(code, what);
    }
}

} // namespace detail

} // namespace fuzzrec

#endif
