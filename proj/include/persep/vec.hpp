#pragma once

#include <Eigen/Core>

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace persep {

using Index = Eigen::Index;

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VecX<double>;

/// Braced-list vector literal, e.g. vec({1.0, 2.0}).
inline Vec vec(std::initializer_list<double> coords) {
    Vec v(static_cast<Index>(coords.size()));
    Index i = 0;
    for (double c : coords) v[i++] = c;
    return v;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& v, const char* what) {
    if (!v.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
}

inline void require_dim(Index got, Index want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                    std::to_string(got) + ", expected " + std::to_string(want) +
                                    ")");
    }
}

}  // namespace persep
