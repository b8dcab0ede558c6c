#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dcmwalk/lqg.hpp"
#include "dcmwalk/plant.hpp"

using namespace dcmwalk;

namespace {
const double kOmega = std::sqrt(9.81);
const double kDt = 0.002;
}  // namespace

TEST_CASE("continuous state space structure") {
    const AxisStateSpace ss = build_state_space(1.0);
    CHECK(ss.A(0, 0) == -1.0);
    CHECK(ss.A(0, 1) == 1.0);
    CHECK(ss.A(1, 0) == 0.0);  // the DCM row is autonomous from the COM
    CHECK(ss.A(1, 1) == 1.0);
    CHECK(ss.B(0) == 0.0);
    CHECK(ss.B(1) == -1.0);

    const AxisStateSpace w = build_state_space(kOmega);
    const Eigen::Vector2cd eig = w.A.eigenvalues();
    CHECK(std::abs(eig(0).real() + kOmega) < 1e-12);
    CHECK(std::abs(eig(1).real() - kOmega) < 1e-12);

    CHECK_THROWS_AS(build_state_space(0.0), std::domain_error);
}

TEST_CASE("zero-order-hold discretization") {
    const AxisStateSpace ss = build_state_space(kOmega);

    // Tiny step: A_d ~ I, B_d ~ 0.
    const DiscreteStateSpace tiny = discretize(ss, 1e-9);
    CHECK((tiny.A - Eigen::Matrix2d::Identity()).norm() < 1e-6);
    CHECK(tiny.B.norm() < 1e-6);

    // The unstable diagonal entry is the exact exponential.
    const DiscreteStateSpace d = discretize(ss, kDt);
    CHECK(std::abs(d.A(1, 1) - std::exp(kOmega * kDt)) < 1e-12);
    CHECK(std::abs(d.A(0, 0) - std::exp(-kOmega * kDt)) < 1e-12);
    CHECK(d.A(1, 0) == 0.0);

    // Semigroup: two half steps compose to one full step.
    const DiscreteStateSpace h = discretize(ss, 0.5 * kDt);
    const Eigen::Matrix2d a2 = h.A * h.A;
    const Eigen::Vector2d b2 = h.A * h.B + h.B;
    CHECK((a2 - d.A).norm() < 1e-12);
    CHECK((b2 - d.B).norm() < 1e-12);
}

TEST_CASE("scalar dare has the analytic golden-ratio solution") {
    Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    const Eigen::MatrixXd P = dare_solve(one, one, one, one);
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    CHECK(std::abs(P(0, 0) - golden) < 1e-12);

    Eigen::MatrixXd Pout;
    const Eigen::MatrixXd K = lqr_gain(one, one, one, one, &Pout);
    CHECK(std::abs(K(0, 0) - golden / (1.0 + golden)) < 1e-12);
}

TEST_CASE("lqr synthesis meets the residual and stability requirements") {
    const GainSet g = synthesize_gains(kOmega, kDt, ControllerWeights{});

    const Eigen::Matrix3d Q = Eigen::Vector3d(10.0, 100.0, 1.0).asDiagonal();
    const Eigen::MatrixXd R = Eigen::MatrixXd::Ones(1, 1);
    CHECK(dare_residual(g.A_aug, g.B_aug, Q, R, g.P_lqr) < 1e-10);

    const Eigen::Matrix3d closed = g.A_aug - g.B_aug * g.K;
    CHECK(spectral_radius(closed) < 1.0);
}

TEST_CASE("kalman design meets the residual requirement and its limits") {
    const GainSet g = synthesize_gains(kOmega, kDt, ControllerWeights{});
    const Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();
    CHECK(dare_residual(g.plant.A.transpose(), I2, I2 * 1e-6, I2 * 6.25e-4, g.P_kf) < 1e-10);

    // Worthless measurements: the gain vanishes.
    ControllerWeights noisy;
    noisy.meas_cov = 1e9;
    const GainSet gn = synthesize_gains(kOmega, kDt, noisy);
    CHECK(gn.L.cwiseAbs().maxCoeff() < 1e-6);

    // Perfect measurements: full correction.
    ControllerWeights exact;
    exact.meas_cov = 1e-12;
    const GainSet ge = synthesize_gains(kOmega, kDt, exact);
    CHECK((ge.L - I2).norm() < 1e-4);
}

TEST_CASE("kalman steady-state covariance matches a monte carlo run") {
    const GainSet g = synthesize_gains(kOmega, kDt, ControllerWeights{});
    const double q_sd = std::sqrt(g.weights.process_cov);
    const double r_sd = std::sqrt(g.weights.meas_cov);

    std::mt19937_64 rng(123);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    Eigen::Vector2d xh = Eigen::Vector2d::Zero();
    Eigen::Matrix2d sum_outer = Eigen::Matrix2d::Zero();
    const int n = 100000;
    const int burn_in = 2000;
    for (int k = 0; k < n + burn_in; ++k) {
        // Keep the unstable plant bounded with a mild state feedback; the
        // filter error dynamics are independent of the control input.
        const double u = 4.0 * x(1);
        x = g.plant.A * x + g.plant.B * u + Eigen::Vector2d(q_sd * gauss(rng), q_sd * gauss(rng));
        const Eigen::Vector2d y = x + Eigen::Vector2d(r_sd * gauss(rng), r_sd * gauss(rng));
        xh = g.plant.A * xh + g.plant.B * u;
        xh += g.L * (y - xh);
        if (k >= burn_in) {
            const Eigen::Vector2d e = xh - x;
            sum_outer += e * e.transpose();
        }
    }
    const Eigen::Matrix2d empirical = sum_outer / n;
    const Eigen::Matrix2d posterior = (Eigen::Matrix2d::Identity() - g.L) * g.P_kf;
    CHECK(std::abs(empirical(0, 0) - posterior(0, 0)) < 0.05 * posterior(0, 0));
    CHECK(std::abs(empirical(1, 1) - posterior(1, 1)) < 0.05 * posterior(1, 1));
}

TEST_CASE("feedback regulates an initial error to zero exponentially") {
    const PendulumParams pend = make_pendulum(1.0, 9.81);
    const GainSet gains = synthesize_gains(pend.omega, kDt, ControllerWeights{});
    LipmPlant plant({{0.04, -0.03}, {0.0, 0.02}}, pend, RobotPhysicalParams{}, NoiseModel{});
    ControllerState cs;
    ReferenceFrame ref;  // regulate to the origin over a foot at the origin

    double err_mid = 0.0, err_end = 0.0;
    for (int k = 0; k < 1500; ++k) {
        const Measurement m = plant.measure();
        const PlanarVec u = control_step(m, ref, cs, gains, kDt);
        plant.step(u, std::nullopt, kDt);  // no saturation: pure linear loop
        const double e = plant.state().com.norm() + plant.state().com_velocity.norm();
        if (k == 750) err_mid = e;
        if (k == 1499) err_end = e;
    }
    CHECK(err_mid < 0.02);
    CHECK(err_end < 1e-4);
    CHECK(err_end < err_mid);
}

TEST_CASE("separation: the filtered loop matches full-state feedback without noise") {
    const PendulumParams pend = make_pendulum(1.0, 9.81);
    const GainSet gains = synthesize_gains(pend.omega, kDt, ControllerWeights{});
    const LipmState init{{0.03, 0.01}, {-0.05, 0.0}};
    ReferenceFrame ref;

    LipmPlant p_kf(init, pend, RobotPhysicalParams{}, NoiseModel{});
    ControllerState cs;

    LipmPlant p_fs(init, pend, RobotPhysicalParams{}, NoiseModel{});
    PlanarVec integral{0.0, 0.0};

    double max_dev = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const PlanarVec u_kf = control_step(p_kf.measure(), ref, cs, gains, kDt);
        p_kf.step(u_kf, std::nullopt, kDt);

        // Full-state feedback uses the true plant state directly.
        const LipmState& s = p_fs.state();
        const PlanarVec dcm = dcm_of_state(s, pend.omega);
        integral += dcm * kDt;
        integral = {clamp(integral.x, -0.5, 0.5), clamp(integral.y, -0.5, 0.5)};
        const PlanarVec u_fs{
            -(gains.K(0) * s.com.x + gains.K(1) * dcm.x + gains.K(2) * integral.x),
            -(gains.K(0) * s.com.y + gains.K(1) * dcm.y + gains.K(2) * integral.y)};
        p_fs.step(u_fs, std::nullopt, kDt);

        if (k > 250) {
            max_dev = std::max(max_dev, std::abs(u_kf.x - u_fs.x));
            max_dev = std::max(max_dev, (p_kf.state().com - p_fs.state().com).norm());
        }
    }
    CHECK(max_dev < 1e-6);
}

TEST_CASE("zero error passes the reference zmp through") {
    const GainSet gains = synthesize_gains(kOmega, kDt, ControllerWeights{});
    ControllerState cs;
    ReferenceFrame ref;
    ref.com_ref = {0.05, -0.05};
    ref.dcm_ref = {0.05, -0.05};
    ref.zmp_ref = {0.05, -0.05};

    Measurement m;
    m.com = ref.com_ref;
    m.dcm = ref.dcm_ref;
    for (int k = 0; k < 10; ++k) {
        const PlanarVec u = control_step(m, ref, cs, gains, kDt);
        CHECK(std::abs(u.x - 0.05) < 1e-12);
        CHECK(std::abs(u.y + 0.05) < 1e-12);
    }
}

TEST_CASE("the integrator cancels a constant dcm offset") {
    // A plant with a constant input disturbance leaves a steady-state error
    // for pure proportional feedback; the integral channel removes it.
    const PendulumParams pend = make_pendulum(1.0, 9.81);
    const GainSet gains = synthesize_gains(pend.omega, kDt, ControllerWeights{});
    LipmPlant plant({{0.0, 0.0}, {0.0, 0.0}}, pend, RobotPhysicalParams{}, NoiseModel{});
    ControllerState cs;
    ReferenceFrame ref;

    const PlanarVec disturbance{0.01, 0.0};  // acts like a zmp bias
    double late_err = 0.0;
    for (int k = 0; k < 4000; ++k) {
        const Measurement m = plant.measure();
        const PlanarVec u = control_step(m, ref, cs, gains, kDt);
        plant.step(u + disturbance, std::nullopt, kDt);
        note_applied_input(cs, u);  // the controller does not see the bias
        if (k >= 3900) {
            late_err = std::max(late_err,
                                std::abs(dcm_of_state(plant.state(), pend.omega).x));
        }
    }
    CHECK(late_err < 5e-4);
    CHECK(std::abs(cs.integral.x) > 1e-4);  // the integrator is doing the work
}
