#include "bdpp/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bdpp/error.hpp"

namespace bdpp {

BoundsReport compute_bounds(const BoundsInput& in) {
    if (!(in.F > 0.0) || !(in.G > 0.0) || !(in.R > 0.0))
        throw Error(ErrorCode::InvalidInput, "compute_bounds: F, G, R must be > 0");
    if (!(in.eps > 0.0))
        throw Error(ErrorCode::InvalidInput, "compute_bounds: eps must be > 0");
    if (in.n_agents < 1 || in.window < 1 || in.p < 1)
        throw Error(ErrorCode::InvalidInput, "compute_bounds: N, B, p must be >= 1");
    if (!(in.a > 0.0) || in.a >= 1.0)
        throw Error(ErrorCode::InvalidInput, "compute_bounds: a must be in (0,1)");
    if (in.buffer_c < 0.0)
        throw Error(ErrorCode::InvalidInput, "compute_bounds: buffer c must be >= 0");

    const double N = in.n_agents;
    const double B = in.window;
    const double F = in.F, G = in.G, R = in.R, eps = in.eps, C = in.buffer_c;
    const double p = in.p;
    const double sp = std::sqrt(p);

    BoundsReport out;
    out.input = in;

    const double contraction = 1.0 - in.a / (2.0 * N * N);
    out.r = 1.0 / (contraction * contraction);
    out.beta = std::pow(contraction, 1.0 / B);
    const double one_minus_beta = 1.0 - out.beta;

    out.delta = F + sp * eps / (2.0 * N);
    out.sigma = in.sigma_override.value_or(out.delta);
    const double d = out.delta, sigma = out.sigma, r = out.r;

    // c1: the log term is clamped at zero when its argument drops to 1 or
    // below (tiny delta relative to eps), flagged as a degenerate regime.
    double log_term = (8.0 * d * d / eps) * std::log(8.0 * d * d / (eps * eps));
    if (!(log_term > 0.0)) {
        log_term = 0.0;
        out.degenerate_log = true;
    }
    out.c1 = log_term + (4.0 * N * F * r * sp + 2.0 * r * p * eps) / one_minus_beta +
             (8.0 * N * G * R + 16.0 * N * R * R) / eps;

    const double q = 2.0 * N * C / eps;  // shows up squared and to the 4th
    out.c2 = sp * C * q * q + (6.0 + q * q * q * q) * d + 24.0 * N * F * F / eps +
             (8.0 * N * N * F * F * r + 4.0 * N * F * r * sp) / (eps * one_minus_beta) +
             (24.0 * N * F * p + 8.0 * p * eps) / N;

    out.cf = 12.0 * N * F * F + 16.0 * N * p * C * C + 16.0 * N * F * p * C +
             4.0 * N * N * r * (F + sp * C) * (F + sp * C) / one_minus_beta +
             2.0 * p * C * (out.c1 + out.c2 + 4.0 * sigma) + 2.0 * R * R + 2.0;

    out.cg = N * (4.0 * sigma + out.c1 + out.c2 - C);
    out.c0 = 4.0 * sigma + out.c1 + 1.0;

    const double denom = C - 4.0 * sigma - out.c1;
    if (denom > 0.0) {
        out.t1 = std::ceil((out.c2 / denom) * (out.c2 / denom));
        out.t1_finite = std::isfinite(out.t1);
    } else {
        out.t1 = std::numeric_limits<double>::infinity();
        out.t1_finite = false;
    }
    out.vacuous = !out.t1_finite || out.t1 > 1e8;
    return out;
}

std::string BoundsReport::pretty() const {
    std::ostringstream os;
    os.precision(6);
    os << "inputs:  F=" << input.F << "  G=" << input.G << "  R=" << input.R
       << "  eps=" << input.eps << "\n"
       << "         N=" << input.n_agents << "  B=" << input.window << "  a=" << input.a
       << "  p=" << input.p << "  C=" << input.buffer_c << "\n"
       << "derived: r=" << r << "  beta=" << beta << "  delta=" << delta
       << "  sigma=" << sigma << "\n"
       << "         C1=" << c1 << "  C2=" << c2 << "\n"
       << "rates:   Cf=" << cf << "  Cg=" << cg << "\n"
       << "buffer:  C0=" << c0 << "  t1=" << t1 << (t1_finite ? "" : " (not finite)")
       << (vacuous ? "  [vacuous at desk scale]" : "") << "\n";
    if (degenerate_log) os << "note:    log term of C1 was nonpositive; clamped to 0\n";
    return os.str();
}

}  // namespace bdpp
