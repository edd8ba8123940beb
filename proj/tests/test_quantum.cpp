#include "doctest.h"

#include <random>

#include "ctx/errors.hpp"
#include "ctx/quantum.hpp"
#include "support/builders.hpp"

using namespace ctx;

namespace {

std::mt19937_64 quantum_rng(4242);

Matrix random_complex_matrix(Eigen::Index dim) {
    std::normal_distribution<double> gauss;
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            m(i, j) = std::complex<double>(gauss(quantum_rng), gauss(quantum_rng));
        }
    }
    return m;
}

Matrix random_hermitian(Eigen::Index dim) {
    const Matrix m = random_complex_matrix(dim);
    return (m + m.adjoint()) / 2.0;
}

Matrix random_unitary(Eigen::Index dim) {
    const Matrix m = random_complex_matrix(dim);
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ();
}

ProjectionOp random_projection(Eigen::Index dim, Eigen::Index rank) {
    const Matrix u = random_unitary(dim);
    Matrix p = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < rank; ++k) p += u.col(k) * u.col(k).adjoint();
    return ProjectionOp(p);
}

StateVector random_state(Eigen::Index dim) {
    std::normal_distribution<double> gauss;
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        v(i) = std::complex<double>(gauss(quantum_rng), gauss(quantum_rng));
    }
    return StateVector(v);
}

/// Rank-1 projector onto (cos t, sin t) in the real plane.
Matrix plane_projector(double degrees) {
    const double t = degrees * std::acos(-1.0) / 180.0;
    CVector v(2);
    v << std::cos(t), std::sin(t);
    return projector_onto(v);
}

QuantumRealization bell_realization(double a0, double a1, double b0, double b1) {
    CVector state(4);
    const double s = 1.0 / std::sqrt(2.0);
    state << s, 0.0, 0.0, s;
    Party alice{2, {{"A0", {plane_projector(a0), plane_projector(a0 + 90)}},
                    {"A1", {plane_projector(a1), plane_projector(a1 + 90)}}}};
    Party bob{2, {{"B0", {plane_projector(b0), plane_projector(b0 + 90)}},
                  {"B1", {plane_projector(b1), plane_projector(b1 + 90)}}}};
    return QuantumRealization{{alice, bob}, StateVector(state), fixtures::bipartite_scenario()};
}

} // namespace

TEST_CASE("projection construction validates") {
    CHECK_NOTHROW(ProjectionOp(Matrix::Identity(3, 3)));
    CHECK_NOTHROW(ProjectionOp(Matrix::Zero(2, 2)));
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(ProjectionOp(bad), std::invalid_argument);
}

TEST_CASE("commutation checks") {
    const ProjectionOp p(plane_projector(0));
    CHECK(commutes(p, p));

    Matrix d0 = Matrix::Zero(2, 2);
    d0(0, 0) = 1;
    Matrix d1 = Matrix::Zero(2, 2);
    d1(1, 1) = 1;
    CHECK(commutes(ProjectionOp(d0), ProjectionOp(d1)));

    const ProjectionOp q(plane_projector(45));
    CHECK_FALSE(commutes(p, q));

    CHECK_THROWS_AS(commutes(p, ProjectionOp(Matrix::Identity(3, 3))), std::invalid_argument);
}

TEST_CASE("born probability basics") {
    const auto psi = random_state(4);
    CHECK(born_probability(psi, ProjectionOp(Matrix::Identity(4, 4))) == doctest::Approx(1.0));
    CHECK(born_probability(psi, ProjectionOp(Matrix::Zero(4, 4))) == doctest::Approx(0.0));

    CVector e0(2);
    e0 << 1.0, 0.0;
    CHECK(born_probability(StateVector(e0), ProjectionOp(plane_projector(45))) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("joint probability") {
    CVector e0(2);
    e0 << 1.0, 0.0;
    const StateVector psi(e0);
    const ProjectionOp p(plane_projector(0));

    CHECK(joint_probability(psi, {p}) == doctest::Approx(born_probability(psi, p)));
    CHECK(joint_probability(psi, {ProjectionOp(Matrix::Identity(2, 2)), p}) ==
          doctest::Approx(born_probability(psi, p)));

    Matrix d0 = Matrix::Zero(2, 2);
    d0(0, 0) = 1;
    Matrix d1 = Matrix::Zero(2, 2);
    d1(1, 1) = 1;
    CHECK(joint_probability(psi, {ProjectionOp(d0), ProjectionOp(d1)}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(joint_probability(psi, {p, ProjectionOp(plane_projector(45))}),
                    CommensurabilityError);
}

TEST_CASE("joint probability is order independent on commuting families") {
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index dim = 4;
        const auto pvm = pvm_from_observable(random_hermitian(dim));
        if (pvm.projectors.size() < 3) continue;
        const auto psi = random_state(dim);
        std::vector<ProjectionOp> family{pvm.projectors[0], pvm.projectors[1],
                                         pvm.projectors[2]};
        const double reference = joint_probability(psi, family);
        std::vector<int> order{0, 1, 2};
        do {
            std::vector<ProjectionOp> permuted;
            for (const int i : order) permuted.push_back(family[static_cast<std::size_t>(i)]);
            CHECK(std::abs(joint_probability(psi, permuted) - reference) <= 1e-8);
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("pvm of a diagonal observable") {
    Matrix t = Matrix::Zero(3, 3);
    t(0, 0) = 3;
    t(1, 1) = 3;
    t(2, 2) = 5;
    const auto pvm = pvm_from_observable(t);
    REQUIRE(pvm.eigenvalues.size() == 2);
    CHECK(pvm.eigenvalues[0] == doctest::Approx(3.0));
    CHECK(pvm.eigenvalues[1] == doctest::Approx(5.0));
    Matrix p3 = Matrix::Zero(3, 3);
    p3(0, 0) = 1;
    p3(1, 1) = 1;
    CHECK(max_abs(pvm.projectors[0].matrix - p3) <= 1e-10);

    const auto identity = pvm_from_observable(Matrix::Identity(4, 4));
    REQUIRE(identity.eigenvalues.size() == 1);
    CHECK(identity.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(max_abs(identity.projectors[0].matrix - Matrix::Identity(4, 4)) <= 1e-10);
}

TEST_CASE("pvm of the symmetric flip") {
    Matrix t(2, 2);
    t << 0.0, 1.0, 1.0, 0.0;
    const auto pvm = pvm_from_observable(t);
    REQUIRE(pvm.eigenvalues.size() == 2);
    CHECK(pvm.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(pvm.eigenvalues[1] == doctest::Approx(1.0));
    Matrix minus(2, 2);
    minus << 0.5, -0.5, -0.5, 0.5;
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs(pvm.projectors[0].matrix - minus) <= 1e-10);
    CHECK(max_abs(pvm.projectors[1].matrix - plus) <= 1e-10);
}

TEST_CASE("pvm reconstruction on random observables") {
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index dim = 2 + (trial % 5);
        const Matrix t = random_hermitian(dim);
        const auto pvm = pvm_from_observable(t);
        Matrix sum = Matrix::Zero(dim, dim);
        Matrix reconstruction = Matrix::Zero(dim, dim);
        for (std::size_t k = 0; k < pvm.projectors.size(); ++k) {
            sum += pvm.projectors[k].matrix;
            reconstruction += pvm.eigenvalues[k] * pvm.projectors[k].matrix;
            for (std::size_t l = k + 1; l < pvm.projectors.size(); ++l) {
                CHECK(max_abs(pvm.projectors[k].matrix * pvm.projectors[l].matrix) <= tol::proj);
            }
        }
        CHECK(max_abs(sum - Matrix::Identity(dim, dim)) <= tol::proj);
        CHECK(max_abs(reconstruction - t) <= tol::reconstruct);
    }
    CHECK_THROWS_AS(pvm_from_observable(random_complex_matrix(3)), std::invalid_argument);
}

TEST_CASE("expectation values") {
    const auto psi = random_state(3);
    CHECK(expectation(psi, Matrix::Identity(3, 3)) == doctest::Approx(1.0));

    CVector e0(2);
    e0 << 1.0, 0.0;
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 2;
    diag(1, 1) = 7;
    CHECK(expectation(StateVector(e0), diag) == doctest::Approx(2.0));

    CVector plus(2);
    plus << 1.0, 1.0;
    Matrix flip(2, 2);
    flip << 0.0, 1.0, 1.0, 0.0;
    CHECK(expectation(StateVector(plus), flip) == doctest::Approx(1.0));

    // agreement with the born probability on projections
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index dim = 2 + (trial % 4);
        const auto p = random_projection(dim, 1 + (trial % dim));
        const auto state = random_state(dim);
        CHECK(std::abs(expectation(state, p.matrix) - born_probability(state, p)) <= 1e-12);
    }
}

TEST_CASE("complement law") {
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index dim = 2 + (trial % 5);
        const auto p = random_projection(dim, static_cast<Eigen::Index>(quantum_rng() % (dim + 1)));
        const ProjectionOp complement(Matrix::Identity(dim, dim) - p.matrix);
        const auto psi = random_state(dim);
        CHECK(std::abs(born_probability(psi, p) + born_probability(psi, complement) - 1.0) <=
              1e-12);
    }
}

TEST_CASE("bell realization compiles to the tilted table exactly") {
    const auto realization = bell_realization(0, 30, 0, -30);
    CHECK(validate_realization(realization).empty());
    const auto model = realization_to_model(realization);
    CHECK(validate_model(model).empty());

    const auto expected = fixtures::chsh_model();
    for (std::size_t c = 0; c < model.tables.size(); ++c) {
        CHECK(model.tables[c] == expected.tables[c]);
    }
    CHECK(check_no_signalling(model).no_signalling);
}

TEST_CASE("computational-basis realizations") {
    const auto bell = realization_to_model(bell_realization(0, 0, 0, 0));
    for (const auto& table : bell.tables) {
        CHECK(table.at({"0", "0"}) == Rational(1, 2));
        CHECK(table.at({"1", "1"}) == Rational(1, 2));
        CHECK(table.at({"0", "1"}) == 0);
    }
    CHECK(check_no_signalling(bell).no_signalling);

    // product state: point mass
    CVector product(4);
    product << 1.0, 0.0, 0.0, 0.0;
    auto realization = bell_realization(0, 0, 0, 0);
    realization.state = StateVector(product);
    const auto model = realization_to_model(realization);
    for (const auto& table : model.tables) {
        CHECK(table.at({"0", "0"}) == 1);
    }
    CHECK(check_no_signalling(model).no_signalling);
}

TEST_CASE("invalid realizations are rejected") {
    auto realization = bell_realization(0, 30, 0, -30);
    // break a PVM: duplicate projector does not sum to identity
    realization.parties[0].measurements["A0"][1] = realization.parties[0].measurements["A0"][0];
    CHECK_FALSE(validate_realization(realization).empty());
    CHECK_THROWS_AS(realization_to_model(realization), std::invalid_argument);
}

TEST_CASE("state construction rejects bad input") {
    CVector zero = CVector::Zero(3);
    CHECK_THROWS_AS(StateVector(zero), std::invalid_argument);
    CVector nan(2);
    nan << std::numeric_limits<double>::quiet_NaN(), 1.0;
    CHECK_THROWS_AS(StateVector(nan), std::invalid_argument);
}
