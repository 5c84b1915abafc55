#include "tplcnn/capacitance.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tplcnn;
using Catch::Approx;

namespace {

PumpParams quiet_pump()
{
    PumpParams p;
    p.v_ac = 0.0;
    p.pump_period = 1.0;
    return p;
}

} // namespace

TEST_CASE("single cell is the identity operator")
{
    auto cfg = make_uniform_network(1, 1, 0.0, 0.0, quiet_pump());
    auto op = build_capacitance_operator(cfg);
    Eigen::VectorXd q(1);
    q << 0.37;
    CHECK(op.solve(q)[0] == Approx(0.37).margin(1e-14));
}

TEST_CASE("1x2 lattice hand inversion")
{
    auto cfg = make_uniform_network(1, 2, 0.0, 0.2, quiet_pump());
    auto op = build_capacitance_operator(cfg);
    // matrix [[1.2, -0.2], [-0.2, 1.2]]
    Eigen::MatrixXd dense(op.matrix());
    CHECK(dense(0, 0) == Approx(1.2));
    CHECK(dense(0, 1) == Approx(-0.2));
    CHECK(dense(1, 0) == Approx(-0.2));
    CHECK(dense(1, 1) == Approx(1.2));

    Eigen::VectorXd q(2);
    q << 1.0, 0.0;
    Eigen::VectorXd v = op.solve(q);
    CHECK(v[0] == Approx(6.0 / 7.0).margin(1e-12));
    CHECK(v[1] == Approx(1.0 / 7.0).margin(1e-12));
}

TEST_CASE("zero coupling decouples every cell")
{
    auto cfg = make_uniform_network(3, 4, 0.0, 0.0, quiet_pump());
    auto op = build_capacitance_operator(cfg);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd q(12);
    for (int i = 0; i < 12; ++i) q[i] = uni(rng);
    Eigen::VectorXd v = op.solve(q);
    for (int i = 0; i < 12; ++i) CHECK(v[i] == Approx(q[i]).margin(1e-14));
}

TEST_CASE("factorization residual on random lattices")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> cdist(0.0, 0.5);
    std::uniform_real_distribution<double> qdist(-2.0, 2.0);
    for (Boundary b : {Boundary::open, Boundary::periodic}) {
        auto cfg = make_uniform_network(7, 5, 0.0, 0.0, quiet_pump(), b);
        for (double& c : cfg.coupling_h) c = cdist(rng);
        for (double& c : cfg.coupling_v) c = cdist(rng);
        auto op = build_capacitance_operator(cfg);
        Eigen::VectorXd q(cfg.cells());
        for (int i = 0; i < cfg.cells(); ++i) q[i] = qdist(rng);
        Eigen::VectorXd v = op.solve(q);
        const double residual = (op.matrix() * v - q).lpNorm<Eigen::Infinity>();
        CHECK(residual <= 1e-10 * q.lpNorm<Eigen::Infinity>());
    }
}

TEST_CASE("electrostatic reciprocity")
{
    // Voltage perturbation at b from a unit charge at a equals the
    // perturbation at a from a unit charge at b.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> cdist(0.0, 0.4);
    auto cfg = make_uniform_network(6, 6, 0.0, 0.0, quiet_pump());
    for (double& c : cfg.coupling_h) c = cdist(rng);
    for (double& c : cfg.coupling_v) c = cdist(rng);
    auto op = build_capacitance_operator(cfg);

    std::uniform_int_distribution<int> pick(0, cfg.cells() - 1);
    for (int trial = 0; trial < 10; ++trial) {
        const int a = pick(rng);
        const int b = pick(rng);
        Eigen::VectorXd qa = Eigen::VectorXd::Zero(cfg.cells());
        Eigen::VectorXd qb = Eigen::VectorXd::Zero(cfg.cells());
        qa[a] = 1.0;
        qb[b] = 1.0;
        CHECK(op.solve(qa)[b] == Approx(op.solve(qb)[a]).margin(1e-12));
    }
}

TEST_CASE("periodic uniform lattice passes charge through")
{
    // Every row of the capacitance matrix sums to 1, so a uniform charge
    // grid maps to the same uniform voltage.
    auto cfg = make_uniform_network(4, 4, 0.0, 0.3, quiet_pump(), Boundary::periodic);
    auto op = build_capacitance_operator(cfg);
    Eigen::VectorXd q = Eigen::VectorXd::Constant(16, 0.42);
    Eigen::VectorXd v = op.solve(q);
    for (int i = 0; i < 16; ++i) CHECK(v[i] == Approx(0.42).margin(1e-12));
}

TEST_CASE("fixed boundary voltages move to the right-hand side")
{
    auto cfg = make_uniform_network(1, 1, 0.0, 0.3, quiet_pump(), Boundary::fixed_voltage);
    const double vb = 0.8;
    cfg.fixed.top = {vb};
    cfg.fixed.bottom = {vb};
    cfg.fixed.left = {vb};
    cfg.fixed.right = {vb};
    auto op = build_capacitance_operator(cfg);
    // (1 + 4*0.3) v = q + 4*0.3*vb
    Eigen::VectorXd q(1);
    q << 0.1;
    CHECK(op.solve(q)[0] == Approx((0.1 + 1.2 * vb) / 2.2).margin(1e-12));
}

TEST_CASE("dimension mismatches are rejected")
{
    auto cfg = make_uniform_network(3, 3, 0.0, 0.1, quiet_pump());
    cfg.coupling_h = RealGrid(3, 3, 0.1); // open boundary wants 3x2
    CHECK_THROWS_AS(build_capacitance_operator(cfg), ConfigError);

    cfg = make_uniform_network(3, 3, 0.0, -0.1, quiet_pump());
    CHECK_THROWS_AS(build_capacitance_operator(cfg), ConfigError);
}
