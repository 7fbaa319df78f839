#pragma once

#include <stdexcept>
#include <string>

namespace legendre {

enum class errc {
    path_hits_branch_point,
    tolerance_not_met,
    no_convergence,
    invalid_lambda,
    not_upper_half_plane,
    series_out_of_range,
    pole_at_lattice_point,
    on_slit_without_side,
    search_failed,
    ambiguous_loop,
    overflow_guard,
    tracing_budget_exceeded,
    invalid_argument
};

const char *errc_name(errc c) noexcept;

// Numerical-engine failures map to CLI exit code 3, argument problems to 2.
bool is_numerical(errc c) noexcept;

class error : public std::runtime_error {
public:
    error(errc c, const std::string &what) : std::runtime_error(what), code_(c) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace legendre
