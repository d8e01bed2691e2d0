#pragma once

#include <Eigen/Dense>
#include <utility>

#include "modunwrap/unimod.hpp"

namespace modunwrap {

// Exact enumeration is exponential in the dimension; keep it at desk scale.
inline constexpr int kMaxEnumerationDim = 12;

struct LLLResult {
    Eigen::MatrixXd reduced;   // = generator * transform.matrix()
    UnimodMatrix transform;
};

/// LLL reduction of the columns of a full-rank generator matrix.
/// lll_delta in (1/4, 1); 0.99 gives strong reduction at these sizes.
LLLResult lll_reduce(const Eigen::MatrixXd& generator, double lll_delta = 0.99);

struct ShortestVector {
    IntVector coeffs;  // nonzero b with norm = ||G b||
    double norm;
};

/// Exact shortest nonzero lattice vector via enumeration seeded by LLL.
ShortestVector shortest_vector(const Eigen::MatrixXd& generator);

/// Exact closest lattice point: integer z minimizing ||G z - target||.
IntVector closest_vector(const Eigen::MatrixXd& generator, const Eigen::VectorXd& target);

/// Full-rank generator with its packing and effective radii cached.
class LatticeBasis {
public:
    explicit LatticeBasis(Eigen::MatrixXd generator);

    const Eigen::MatrixXd& generator() const { return generator_; }
    double packing_radius_cached() const { return packing_radius_; }
    double effective_radius_cached() const { return effective_radius_; }

private:
    Eigen::MatrixXd generator_;
    double packing_radius_;
    double effective_radius_;
};

double packing_radius(const LatticeBasis& basis);
double effective_radius(const LatticeBasis& basis);

/// Volume of the K-dimensional unit ball.
double unit_ball_volume(int k);

/// Rows of the returned matrix are integer vectors a_k approximately
/// minimizing max_k a_k^T S a_k over unimodular matrices, obtained by
/// LLL-reducing a Cholesky factor of S. Deterministic for fixed input.
UnimodMatrix shortest_basis_surrogate(const Eigen::MatrixXd& spd, double lll_delta = 0.99);

}  // namespace modunwrap
