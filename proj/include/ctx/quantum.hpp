#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctx/scenario.hpp"

namespace ctx {

/// One numeric contract across modules.
namespace tol {
inline constexpr double norm = 1e-12;
inline constexpr double proj = 1e-10;
inline constexpr double comm = 1e-10;
inline constexpr double eig = 1e-8;
inline constexpr double reconstruct = 1e-8;
inline constexpr double orth = 1e-9;
} // namespace tol

/// Denominator cap when bridging Born probabilities into exact rationals.
inline const BigInt rationalization_denominator_cap = 1000000;

using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

double max_abs(const Matrix& m);

/// Unit vector; normalized on construction.
/// Throws std::invalid_argument on zero or non-finite input.
struct StateVector {
    CVector amplitudes;

    explicit StateVector(CVector v);
    Eigen::Index dimension() const { return amplitudes.size(); }
};

/// Validated projection: ||P^2 - P||_max and ||P - P*||_max within tol::proj.
struct ProjectionOp {
    Matrix matrix;

    explicit ProjectionOp(Matrix m);
    Eigen::Index dimension() const { return matrix.rows(); }
};

/// ||PQ - QP||_max <= tol::comm. Throws std::invalid_argument on dimension mismatch.
bool commutes(const ProjectionOp& p, const ProjectionOp& q);

/// Re <psi, P psi>, clamped into [0,1] when within tol::proj outside.
/// Throws std::invalid_argument on dimension mismatch or an imaginary part
/// above tolerance.
double born_probability(const StateVector& psi, const ProjectionOp& p);

/// Born probability of the product of a pairwise-commuting family.
/// Throws CommensurabilityError naming the first non-commuting pair.
double joint_probability(const StateVector& psi, const std::vector<ProjectionOp>& ps);

struct PVMDecomposition {
    Matrix observable;
    std::vector<double> eigenvalues;
    std::vector<ProjectionOp> projectors;
};

/// Spectral projectors of a Hermitian matrix, one per eigenvalue cluster
/// (absolute gap tol::eig), orthonormalized per cluster.
PVMDecomposition pvm_from_observable(const Matrix& observable);

/// Re <psi, T psi> for Hermitian T.
double expectation(const StateVector& psi, const Matrix& observable);

struct Party {
    Eigen::Index dimension = 0;
    /// measurement id -> one projector per outcome, summing to the identity.
    std::map<std::string, std::vector<Matrix>> measurements;
};

struct QuantumRealization {
    std::vector<Party> parties;
    StateVector state;
    MeasurementScenario scenario;
};

std::vector<Violation> validate_realization(const QuantumRealization& realization);

/// Born probability of every context cell, converted to the nearest rational
/// with denominator <= rationalization_denominator_cap, then each row
/// renormalized exactly. Throws std::invalid_argument on an invalid
/// realization.
EmpiricalModel realization_to_model(const QuantumRealization& realization);

Matrix kron(const Matrix& a, const Matrix& b);

/// Rank-1 projector onto the (normalized) span of v.
Matrix projector_onto(const CVector& v);

} // namespace ctx
