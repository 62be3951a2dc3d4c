#ifndef BDPP_BOUNDS_HPP
#define BDPP_BOUNDS_HPP

#include <optional>
#include <string>

namespace bdpp {

struct BoundsInput {
    double F = 0.0;     // constraint-norm bound
    double G = 0.0;     // objective-spread bound
    double R = 0.0;     // largest box diameter
    double eps = 0.0;   // strict-feasibility margin
    int n_agents = 0;   // N
    int window = 1;     // B
    double a = 0.0;     // smallest positive mixing entry
    int p = 1;          // number of coupled rows
    double buffer_c = 0.0;  // C
    std::optional<double> sigma_override;  // defaults to delta
};

/// Derived constants of the convergence guarantees. All pure arithmetic.
struct BoundsReport {
    BoundsInput input;

    double r = 0.0;      // (1 - a/(2N^2))^{-2}, > 1
    double beta = 0.0;   // (1 - a/(2N^2))^{1/B}, in (0,1)
    double delta = 0.0;  // F + sqrt(p) * eps / (2N)
    double sigma = 0.0;  // defaults to delta
    double c1 = 0.0;
    double c2 = 0.0;
    double cf = 0.0;     // objective-error constant: error <= cf / sqrt(t)
    double cg = 0.0;     // violation constant: violation <= cg / sqrt(t)
    double c0 = 0.0;     // buffer threshold for finite-time feasibility
    double t1 = 0.0;     // iterations until feasibility when buffer_c > c0 (inf otherwise)

    bool degenerate_log = false;  // log term of c1 was nonpositive and clamped
    bool t1_finite = false;
    bool vacuous = false;  // t1 exceeds 1e8: meaningless at desk scale

    std::string pretty() const;
};

/// Evaluates the bound constants from the problem/network constants.
/// Requires positive inputs, a in (0,1), eps > 0.
BoundsReport compute_bounds(const BoundsInput& in);

}  // namespace bdpp

#endif
