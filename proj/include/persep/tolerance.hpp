#pragma once

#include <stdexcept>

namespace persep {

// One set of comparison thresholds threaded through every approximate
// predicate, so a whole run is reproducible from a single knob.
//   eps_feas  — constraint slack accepted as satisfied
//   eps_zero  — vector norms at or below this count as zero
//   eps_angle — angular comparisons in the 2D routines, radians
template <typename Scalar>
struct ToleranceT {
    Scalar eps_feas = Scalar(1e-9);
    Scalar eps_zero = Scalar(1e-12);
    Scalar eps_angle = Scalar(1e-10);

    ToleranceT() = default;

    ToleranceT(Scalar feas, Scalar zero, Scalar angle)
        : eps_feas(feas), eps_zero(zero), eps_angle(angle) {
        validate();
    }

    void validate() const {
        if (!(eps_feas >= Scalar(0)) || !(eps_zero >= Scalar(0)) || !(eps_angle >= Scalar(0))) {
            throw std::invalid_argument("tolerance: epsilons must be nonnegative");
        }
        if (eps_zero > eps_feas) {
            throw std::invalid_argument("tolerance: eps_zero must not exceed eps_feas");
        }
    }
};

using Tolerance = ToleranceT<double>;

/// a <= b up to the feasibility slack. Callers guarantee finite inputs.
template <typename Scalar>
bool approx_leq(Scalar a, Scalar b, const ToleranceT<Scalar>& tol) {
    return a <= b + tol.eps_feas;
}

}  // namespace persep
