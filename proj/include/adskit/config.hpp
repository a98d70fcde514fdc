#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace adskit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Numerical tolerances. Every CLI output embeds the instance it was run with.
struct Tolerances {
    double eps_q = 1e-9;        // sign of Q on unit representatives
    double eps_causal = 1e-9;   // lightlike band in conformal coordinates
    double eps_hull = 1e-9;     // hull membership in patch coordinates
    double eps_tr = 1e-8;       // parabolic trace band
    double eps_boundary = 1e-9; // s2 below this counts as a boundary point
    double dedup = 1e-4;        // limit-set dedup, radians per RP1 factor
    double identity_collision = 1e-6;
    double horizon_band = 1e-6;
    int integrator_steps = 200;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

enum class ErrorCode {
    ZeroVector,
    PointOutsidePatch,
    BoundaryPoint,
    NotOnQuadric,
    NotOnEin2,
    NotAchronal,
    TooFewPoints,
    InconsistentLift,
    DegenerateGap,
    ElementaryInput,
    OutsideDomain,
    NotSpacelike,
    NotConvex,
    ConstraintViolation,
    DecompositionFailed,
    EllipticNoFixedPoint,
    NoProximalElement,
    NotPositive,
    InvalidInput,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::PointOutsidePatch: return "PointOutsidePatch";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::NotOnQuadric: return "NotOnQuadric";
    case ErrorCode::NotOnEin2: return "NotOnEin2";
    case ErrorCode::NotAchronal: return "NotAchronal";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InconsistentLift: return "InconsistentLift";
    case ErrorCode::DegenerateGap: return "DegenerateGap";
    case ErrorCode::ElementaryInput: return "ElementaryInput";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::DecompositionFailed: return "DecompositionFailed";
    case ErrorCode::EllipticNoFixedPoint: return "EllipticNoFixedPoint";
    case ErrorCode::NoProximalElement: return "NoProximalElement";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Angle helpers.
inline double wrap_pi(double a) {
    // into (-pi, pi]
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

inline double wrap_2pi(double a) {
    // into [0, 2pi)
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

inline double wrap_half(double a) {
    // into [0, pi)
    double r = std::fmod(a, kPi);
    if (r < 0) r += kPi;
    if (r >= kPi) r -= kPi;
    return r;
}

// distance between two angles taken mod pi
inline double rp1_distance(double a, double b) {
    double d = wrap_half(a - b);
    return std::min(d, kPi - d);
}

// distance on the circle of length 2pi
inline double circle_distance(double a, double b) {
    double d = wrap_2pi(a - b);
    return std::min(d, kTwoPi - d);
}

inline unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ADSKIT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return std::min<unsigned>(hw, static_cast<unsigned>(n));
    }
    return hw;
}

// Static chunking: results never depend on the number of threads as long as
// body(i) only writes slot i.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned t = std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, n / 64));
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned k = 0; k < t; ++k) {
        pool.emplace_back([&, k] {
            std::size_t lo = n * k / t, hi = n * (k + 1) / t;
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace adskit
