#include "ctx/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ctx/errors.hpp"

namespace ctx {

namespace {

bool all_finite(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const auto& z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    }
    return true;
}

void require_square_finite(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(what) + " must be a non-empty square matrix");
    }
    if (!all_finite(m)) {
        throw std::invalid_argument(std::string(what) + " has non-finite entries");
    }
}

void require_hermitian(const Matrix& m, const char* what) {
    require_square_finite(m, what);
    if (max_abs(m - m.adjoint()) > tol::proj) {
        throw std::invalid_argument(std::string(what) + " is not Hermitian within tolerance");
    }
}

double clamp_probability(double value, double slack) {
    if (value < -slack || value > 1.0 + slack) {
        throw std::invalid_argument("probability " + std::to_string(value) +
                                    " is outside [0,1] beyond tolerance");
    }
    return std::min(1.0, std::max(0.0, value));
}

} // namespace

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            best = std::max(best, std::abs(m(i, j)));
        }
    }
    return best;
}

StateVector::StateVector(CVector v) : amplitudes(std::move(v)) {
    if (amplitudes.size() == 0) {
        throw std::invalid_argument("state vector is empty");
    }
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
        const auto& z = amplitudes(i);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("state vector has non-finite entries");
        }
    }
    const double norm = amplitudes.norm();
    if (norm < tol::norm) {
        throw std::invalid_argument("state vector has (near) zero norm");
    }
    // Only rescale when needed, so parsing an already normalized vector is
    // bit-stable.
    if (std::abs(norm * norm - 1.0) > tol::norm) amplitudes /= norm;
}

ProjectionOp::ProjectionOp(Matrix m) : matrix(std::move(m)) {
    require_square_finite(matrix, "projection");
    if (max_abs(matrix - matrix.adjoint()) > tol::proj) {
        throw std::invalid_argument("projection is not self-adjoint within tolerance");
    }
    if (max_abs(matrix * matrix - matrix) > tol::proj) {
        throw std::invalid_argument("matrix is not idempotent within tolerance");
    }
}

bool commutes(const ProjectionOp& p, const ProjectionOp& q) {
    if (p.dimension() != q.dimension()) {
        throw std::invalid_argument("projection dimensions differ");
    }
    return max_abs(p.matrix * q.matrix - q.matrix * p.matrix) <= tol::comm;
}

double born_probability(const StateVector& psi, const ProjectionOp& p) {
    if (psi.dimension() != p.dimension()) {
        throw std::invalid_argument("state and projection dimensions differ");
    }
    const std::complex<double> value = psi.amplitudes.dot(p.matrix * psi.amplitudes);
    if (std::abs(value.imag()) > tol::proj) {
        throw std::invalid_argument("Born probability has imaginary part " +
                                    std::to_string(value.imag()));
    }
    return clamp_probability(value.real(), tol::proj);
}

double joint_probability(const StateVector& psi, const std::vector<ProjectionOp>& ps) {
    if (ps.empty()) return 1.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (!commutes(ps[i], ps[j])) {
                throw CommensurabilityError("projections " + std::to_string(i) + " and " +
                                            std::to_string(j) + " do not commute");
            }
        }
    }
    if (psi.dimension() != ps.front().dimension()) {
        throw std::invalid_argument("state and projection dimensions differ");
    }
    Matrix product = ps.front().matrix;
    for (std::size_t i = 1; i < ps.size(); ++i) product = product * ps[i].matrix;
    const std::complex<double> value = psi.amplitudes.dot(product * psi.amplitudes);
    if (std::abs(value.imag()) > 1e-8) {
        throw std::invalid_argument("joint probability has imaginary part " +
                                    std::to_string(value.imag()));
    }
    return clamp_probability(value.real(), 1e-8);
}

PVMDecomposition pvm_from_observable(const Matrix& observable) {
    require_hermitian(observable, "observable");
    const Eigen::Index dim = observable.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(observable);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();

    PVMDecomposition pvm;
    pvm.observable = observable;
    Eigen::Index start = 0;
    while (start < dim) {
        Eigen::Index end = start + 1;
        while (end < dim && values(end) - values(end - 1) <= tol::eig) ++end;

        // Modified Gram-Schmidt inside the cluster; degenerate eigenvectors
        // are only orthonormal up to solver accuracy.
        std::vector<CVector> basis;
        for (Eigen::Index k = start; k < end; ++k) {
            CVector u = vectors.col(k);
            for (const auto& prev : basis) u -= prev.dot(u) * prev;
            const double norm = u.norm();
            if (norm > 1e-12) basis.push_back(u / norm);
        }
        Matrix projector = Matrix::Zero(dim, dim);
        for (const auto& u : basis) projector += u * u.adjoint();

        double eigenvalue = 0.0;
        for (Eigen::Index k = start; k < end; ++k) eigenvalue += values(k);
        eigenvalue /= static_cast<double>(end - start);

        pvm.eigenvalues.push_back(eigenvalue);
        pvm.projectors.emplace_back(std::move(projector));
        start = end;
    }

    Matrix sum = Matrix::Zero(dim, dim);
    Matrix reconstruction = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < pvm.projectors.size(); ++k) {
        sum += pvm.projectors[k].matrix;
        reconstruction += pvm.eigenvalues[k] * pvm.projectors[k].matrix;
        for (std::size_t l = k + 1; l < pvm.projectors.size(); ++l) {
            if (max_abs(pvm.projectors[k].matrix * pvm.projectors[l].matrix) > tol::proj) {
                throw std::runtime_error("spectral projectors are not orthogonal");
            }
        }
    }
    if (max_abs(sum - Matrix::Identity(dim, dim)) > tol::proj) {
        throw std::runtime_error("spectral projectors do not sum to the identity");
    }
    if (max_abs(reconstruction - observable) > tol::reconstruct) {
        throw std::runtime_error("spectral reconstruction exceeds tolerance");
    }
    return pvm;
}

double expectation(const StateVector& psi, const Matrix& observable) {
    require_hermitian(observable, "observable");
    if (psi.dimension() != observable.rows()) {
        throw std::invalid_argument("state and observable dimensions differ");
    }
    return psi.amplitudes.dot(observable * psi.amplitudes).real();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix projector_onto(const CVector& v) {
    const double norm = v.norm();
    if (norm < tol::norm) {
        throw std::invalid_argument("cannot project onto a (near) zero vector");
    }
    const CVector u = v / norm;
    return u * u.adjoint();
}

std::vector<Violation> validate_realization(const QuantumRealization& realization) {
    std::vector<Violation> out;

    Eigen::Index product = 1;
    for (std::size_t p = 0; p < realization.parties.size(); ++p) {
        const auto& party = realization.parties[p];
        const std::string where = "party " + std::to_string(p);
        if (party.dimension <= 0) {
            out.push_back({where, "dimension must be positive"});
            continue;
        }
        product *= party.dimension;
        for (const auto& [id, projectors] : party.measurements) {
            const std::string mwhere = where + ", measurement '" + id + "'";
            Matrix sum = Matrix::Zero(party.dimension, party.dimension);
            bool shape_ok = true;
            for (std::size_t k = 0; k < projectors.size(); ++k) {
                const auto& pk = projectors[k];
                if (pk.rows() != party.dimension || pk.cols() != party.dimension) {
                    out.push_back({mwhere, "projector " + std::to_string(k) +
                                               " does not match the party dimension"});
                    shape_ok = false;
                    continue;
                }
                if (!all_finite(pk)) {
                    out.push_back({mwhere, "projector " + std::to_string(k) +
                                               " has non-finite entries"});
                    shape_ok = false;
                    continue;
                }
                if (max_abs(pk - pk.adjoint()) > tol::proj ||
                    max_abs(pk * pk - pk) > tol::proj) {
                    out.push_back({mwhere, "entry " + std::to_string(k) +
                                               " is not a projection within tolerance"});
                }
                sum += pk;
                for (std::size_t l = k + 1; l < projectors.size(); ++l) {
                    const auto& pl = projectors[l];
                    if (pl.rows() == pk.rows() && pl.cols() == pk.cols() &&
                        max_abs(pk * pl) > tol::proj) {
                        out.push_back({mwhere, "projectors " + std::to_string(k) + " and " +
                                                   std::to_string(l) + " are not orthogonal"});
                    }
                }
            }
            if (shape_ok &&
                max_abs(sum - Matrix::Identity(party.dimension, party.dimension)) > tol::proj) {
                out.push_back({mwhere, "projectors do not sum to the identity"});
            }
        }
    }

    if (realization.state.dimension() != product) {
        out.push_back({"state", "dimension " + std::to_string(realization.state.dimension()) +
                                    " does not match the tensor product dimension " +
                                    std::to_string(product)});
    }

    // Each measurement must belong to exactly one party; each context picks
    // one measurement per party.
    std::map<std::string, std::size_t> owner;
    for (std::size_t p = 0; p < realization.parties.size(); ++p) {
        for (const auto& [id, _] : realization.parties[p].measurements) {
            if (owner.count(id)) {
                out.push_back({"measurement '" + id + "'", "declared by more than one party"});
            }
            owner[id] = p;
        }
    }
    for (const auto& m : realization.scenario.measurements) {
        const auto it = owner.find(m);
        if (it == owner.end()) {
            out.push_back({"measurement '" + m + "'", "not declared by any party"});
            continue;
        }
        const auto& projectors =
            realization.parties[it->second].measurements.at(m);
        const auto oit = realization.scenario.outcomes.find(m);
        if (oit != realization.scenario.outcomes.end() &&
            oit->second.size() != projectors.size()) {
            out.push_back({"measurement '" + m + "'",
                           "outcome count " + std::to_string(oit->second.size()) +
                               " does not match projector count " +
                               std::to_string(projectors.size())});
        }
    }
    for (const auto& context : realization.scenario.contexts) {
        std::vector<int> seen(realization.parties.size(), 0);
        bool known = true;
        for (const auto& m : context) {
            const auto it = owner.find(m);
            if (it == owner.end()) {
                known = false;
                break;
            }
            seen[it->second] += 1;
        }
        if (!known) continue;
        for (std::size_t p = 0; p < seen.size(); ++p) {
            if (seen[p] != 1) {
                out.push_back({"context '" + join_key(context) + "'",
                               "must pick exactly one measurement of party " +
                                   std::to_string(p)});
            }
        }
    }
    return out;
}

EmpiricalModel realization_to_model(const QuantumRealization& realization) {
    const auto violations = validate_realization(realization);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid realization: " + to_string(violations.front()));
    }

    std::map<std::string, std::size_t> owner;
    for (std::size_t p = 0; p < realization.parties.size(); ++p) {
        for (const auto& [id, _] : realization.parties[p].measurements) owner[id] = p;
    }

    EmpiricalModel model;
    model.scenario = realization.scenario;
    model.tables.resize(model.scenario.contexts.size());

    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        const auto& context = model.scenario.contexts[c];
        const auto results = enumerate_results(model.scenario, context);

        // Context measurement per party, in party order.
        std::vector<std::size_t> context_slot(realization.parties.size(), 0);
        for (std::size_t k = 0; k < context.size(); ++k) {
            context_slot[owner.at(context[k])] = k;
        }

        std::vector<Rational> row;
        row.reserve(results.size());
        Rational row_sum = 0;
        for (const auto& result : results) {
            Matrix joint = Matrix::Identity(1, 1);
            for (std::size_t p = 0; p < realization.parties.size(); ++p) {
                const std::size_t k = context_slot[p];
                const auto& measurement = context[k];
                const auto& outcome_list = model.scenario.outcomes_of(measurement);
                const auto oit =
                    std::find(outcome_list.begin(), outcome_list.end(), result[k]);
                const auto& projectors =
                    realization.parties[p].measurements.at(measurement);
                joint = kron(joint, projectors[static_cast<std::size_t>(
                                        oit - outcome_list.begin())]);
            }
            const std::complex<double> value =
                realization.state.amplitudes.dot(joint * realization.state.amplitudes);
            const double probability = clamp_probability(value.real(), tol::proj);
            Rational cell = nearest_rational(probability, rationalization_denominator_cap);
            if (cell < 0) cell = 0;
            row_sum += cell;
            row.push_back(std::move(cell));
        }
        if (row_sum == 0) {
            throw std::invalid_argument("context '" + join_key(context) +
                                        "' has vanishing total probability");
        }
        for (std::size_t r = 0; r < results.size(); ++r) {
            model.tables[c][results[r]] = row[r] / row_sum;
        }
    }
    return model;
}

} // namespace ctx
