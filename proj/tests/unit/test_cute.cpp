#include "polariton/cute.hpp"
#include "polariton/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace polariton;

namespace {

VibronicStructure model(int n_max = 2, double s = 0.8) { return build_vibronic({0.1, {{0.01, s, n_max}}}); }

CavityParams cavity(long n, double g_sqrt_n = 0.03) {
    CavityParams c;
    c.omega_c = 0.105;
    c.g_sqrt_n = g_sqrt_n;
    c.n = n > 0 ? MoleculeCount::finite(n) : MoleculeCount::infinite();
    return c;
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_SUITE("cute") {

TEST_CASE("molecule count sentinel") {
    CHECK(MoleculeCount::infinite().is_infinite());
    CHECK(MoleculeCount::finite(7).value() == 7);
    CHECK_THROWS_AS(MoleculeCount::infinite().value(), std::domain_error);
    CHECK_THROWS_AS(MoleculeCount::finite(0), std::invalid_argument);
    CHECK(cavity(0).single_coupling() == 0.0);
    CHECK(cavity(9).single_coupling() == doctest::Approx(0.01));
}

TEST_CASE("H0 is the Franck-Condon weighted arrowhead") {
    const auto vs = model();
    const auto h = build_H0(vs, cavity(10));
    CHECK(h(0, 0) == cplx(0.105));
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(h(i + 1, 0).real() == doctest::Approx(0.03 * vs.fc(i, 0)));
        CHECK(h(i + 1, i + 1).real() == doctest::Approx(vs.omega_e[i]));
    }
    CHECK(max_diff(h, h.adjoint()) == 0.0);
}

TEST_CASE("H1k at infinite N is H0 shifted by the ground vibronic energy") {
    const auto vs = model();
    const auto cav = cavity(0);
    for (std::size_t k = 1; k < vs.size(); ++k) {
        const Eigen::MatrixXcd shifted = build_H0(vs, cav) + vs.omega_g[k] * Eigen::MatrixXcd::Identity(4, 4);
        CHECK(max_diff(build_H1k(vs, cav, k), shifted) < 1e-15);
    }
    CHECK_THROWS_AS(build_v0k(vs, cav, 1), std::domain_error);
    CHECK_THROWS_AS(build_H1k(vs, cav, 0), std::out_of_range);
}

TEST_CASE("finite-N H1k carries g sqrt(N-1)") {
    const auto vs = model();
    const auto h = build_H1k(vs, cavity(4), 2);
    CHECK(h(1, 0).real() == doctest::Approx(0.015 * std::sqrt(3.0) * vs.fc(0, 0)));
}

TEST_CASE("truncated assembly reproduces the analytic blocks") {
    const auto vs = model();
    const auto cav = cavity(6);
    const auto bh = assemble_truncated(vs, cav, 1);
    REQUIRE(bh.blocks.size() == 2);
    CHECK(max_diff(bh.blocks[0], build_H0(vs, cav)) < 1e-15);
    // block 1 is block-diagonal over k with blocks H1k, each ordered |g_k 1>, |g_k e_i>
    const auto& b1 = bh.blocks[1];
    REQUIRE(b1.rows() == 2 * 4);
    for (std::size_t k = 1; k < vs.size(); ++k) {
        std::vector<Eigen::Index> idx;
        for (std::size_t l = 0; l < bh.labels[1].size(); ++l)
            if (bh.basis.state(bh.labels[1][l]).n_g[k] == 1) idx.push_back(static_cast<Eigen::Index>(l));
        REQUIRE(idx.size() == 4);
        Eigen::MatrixXcd sub(4, 4);
        Eigen::MatrixXcd cpl(4, 4);
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) sub(a, b) = b1(idx[a], idx[b]);
            for (int b = 0; b < 4; ++b) cpl(b, a) = bh.couplings[0](b, idx[a]);
        }
        CHECK(max_diff(sub, build_H1k(vs, cav, k)) < 1e-15);
        CHECK(max_diff(cpl, build_v0k(vs, cav, k)) < 1e-15);
    }
}

TEST_CASE("assembled operator is Hermitian, conserving and block tridiagonal") {
    const auto vs = model(3, 1.2);
    for (long n : {3L, 5L, 12L}) {
        const auto bh = assemble_truncated(vs, cavity(n), 3);
        CHECK((bh.matrix - bh.matrix.adjoint()).max_abs() < 1e-15);
        const auto report = conserved_check(bh.basis, bh.matrix);
        CHECK(report.ok());
        CHECK(report.inter_block_elements > 0);
        CHECK(bh.couplings.size() + 1 == bh.blocks.size());
    }
}

TEST_CASE("infinite N truncation decouples the blocks") {
    const auto bh = assemble_truncated(model(), cavity(0), 2);
    CHECK(bh.infinite);
    for (const auto& c : bh.couplings) CHECK(c.cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_diff(bh.blocks[0], build_H0(model(), cavity(0))) < 1e-15);
}

TEST_CASE("q_max is clamped to N") {
    const auto bh = assemble_truncated(model(), cavity(2), 5);
    CHECK(bh.basis.q_max() == 2);
}

TEST_CASE("high-excitation single manifold equals H0") {
    const auto vs = model();
    for (long n : {0L, 7L}) {
        const auto bh = assemble_high_excitation(vs, cavity(n), 1);
        CHECK(max_diff(bh.dense(), build_H0(vs, cavity(n))) < 1e-15);
    }
}

TEST_CASE("assembly guards") {
    CHECK_THROWS_AS(assemble_truncated(model(), cavity(200), 100, 1000), GuardError);
    CHECK_THROWS_AS(assemble_truncated(model(), cavity(5), -1), std::invalid_argument);
    CHECK_THROWS_AS(assemble_high_excitation(model(), cavity(5), 0), std::invalid_argument);
}

}
