#pragma once

#include <cmath>
#include <cstdint>

#include "upqc/errors.hpp"

namespace upqc {

// Predicted density of {k : sin(alpha k) - sin(alpha(k+p)) >= eps} from the
// equidistribution of (alpha k) mod 2pi. The difference equals
// -2 sin(alpha p/2) cos(alpha(k + p/2)), so the condition confines the cosine
// to an arc of length 2*arccos(r) with r = eps / s_p.
struct ArcPrediction {
    std::int64_t p = 1;
    double alpha = 1.0;
    double epsilon = 0.0;
    double s_p = 0.0;               // 2|sin(alpha p/2)|
    double r = 0.0;                 // eps/s_p clamped to [0,1]
    double predicted_density = 0.0; // arccos(r)/pi, in [0, 1/2]
};

inline ArcPrediction arc_density_prediction(std::int64_t p, double alpha, double epsilon) {
    if (p < 1) throw BadParams("step p must be >= 1");
    if (!(epsilon > 0.0)) throw BadParams("epsilon must be > 0");
    ArcPrediction a;
    a.p = p;
    a.alpha = alpha;
    a.epsilon = epsilon;
    const double s = std::sin(alpha * static_cast<double>(p) / 2.0);
    a.s_p = 2.0 * std::fabs(s);
    if (a.s_p < 1e-12)
        throw DegenerateFrequency("sin(alpha*p/2) vanishes; the difference sequence is trivial");
    a.r = std::min(epsilon / a.s_p, 1.0);
    a.predicted_density = std::acos(a.r) / M_PI;
    return a;
}

// |{k <= N-p : sin(alpha k) - sin(alpha(k+p)) >= eps}| / N.
inline double sine_upward_density(std::int64_t p, double alpha, double epsilon, std::int64_t n) {
    if (p < 1) throw BadParams("step p must be >= 1");
    if (!(epsilon > 0.0)) throw BadParams("epsilon must be > 0");
    if (n <= p) throw BadParams("prefix must exceed the step");
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= n - p; ++k) {
        const double d = std::sin(alpha * static_cast<double>(k)) -
                         std::sin(alpha * static_cast<double>(k + p));
        if (d >= epsilon) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(n);
}

// Downward counterpart |{k <= N-p : sin(alpha k) - sin(alpha(k+p)) <= -eps}| / N;
// the arc prediction is the same by cosine symmetry.
inline double sine_downward_density(std::int64_t p, double alpha, double epsilon, std::int64_t n) {
    if (p < 1) throw BadParams("step p must be >= 1");
    if (!(epsilon > 0.0)) throw BadParams("epsilon must be > 0");
    if (n <= p) throw BadParams("prefix must exceed the step");
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= n - p; ++k) {
        const double d = std::sin(alpha * static_cast<double>(k)) -
                         std::sin(alpha * static_cast<double>(k + p));
        if (d <= -epsilon) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace upqc
